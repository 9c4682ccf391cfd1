#include "lyap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lyap {

double digamma(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("digamma: d must be > 0");
  double shift = 0.0;
  while (d < 10.0) {
    shift -= 1.0 / d;
    d += 1.0;
  }
  // Asymptotic series; terms through d^-12 leave < 1e-15 at d >= 10.
  const double inv = 1.0 / d;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
  return shift + std::log(d) - 0.5 * inv - series;
}

std::vector<double> newman_exponents(int n) {
  if (n < 1) throw std::invalid_argument("newman_exponents: n must be >= 1");
  std::vector<double> mu(static_cast<std::size_t>(n));
  const double base = std::numbers::ln2 - std::log(static_cast<double>(n));
  for (int i = 1; i <= n; ++i)
    mu[static_cast<std::size_t>(i - 1)] = 0.5 * (base + digamma(0.5 * (n - i + 1)));
  return mu;
}

double ssb_exponent(int n, int d, double lambda, double E) {
  if (!(std::abs(E) < 2.0) || E == 0.0)
    throw std::invalid_argument("ssb_exponent: need 0 < |E| < 2");
  if (n < 1 || d < 1 || d > n) throw std::invalid_argument("ssb_exponent: need 1 <= d <= n");
  const double kappa = std::acos(E / 2.0);
  const double s = std::sin(kappa);
  return lambda * lambda * (1.0 + 2.0 * (n - d)) / (8.0 * s * s);
}

std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::Top:
      return "top";
    case EstimatorKind::SecondSum:
      return "second_sum";
    case EstimatorKind::Least:
      return "least";
  }
  return "unknown";
}

std::optional<EstimatorKind> estimator_from_string(std::string_view s) {
  for (auto k : {EstimatorKind::Top, EstimatorKind::SecondSum, EstimatorKind::Least})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

TailCurve tail_curve_from_outcomes(const std::vector<TrialOutcome>& outcomes,
                                   std::vector<double> t_grid, double center) {
  if (outcomes.empty()) throw std::invalid_argument("tail_curve: no trials");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("tail_curve: t_grid must be sorted ascending");
  TailCurve tc;
  tc.trials = static_cast<std::int64_t>(outcomes.size());
  tc.center = center;
  std::vector<double> dev;
  dev.reserve(outcomes.size());
  std::int64_t died = 0;
  for (const auto& o : outcomes) {
    if (o.died) ++died;
    dev.push_back(o.died ? std::numeric_limits<double>::infinity() : std::abs(o.statistic - center));
  }
  std::sort(dev.begin(), dev.end());
  const double trials = static_cast<double>(tc.trials);
  for (double t : t_grid) {
    // Closed event |dev| >= t.
    const auto first = std::lower_bound(dev.begin(), dev.end(), t);
    const double p = static_cast<double>(dev.end() - first) / trials;
    tc.probs.push_back(p);
    tc.std_errors.push_back(std::sqrt(p * (1.0 - p) / trials));
  }
  tc.t_grid = std::move(t_grid);
  tc.died_fraction = static_cast<double>(died) / trials;
  return tc;
}

TailCurve tail_curve(const ChainConfig& config, EstimatorKind kind, std::vector<double> t_grid,
                     std::int64_t trials, int workers, double center) {
  if (trials < 100) throw std::invalid_argument("tail_curve: trials must be >= 100");
  const auto outcomes = kernels::trial_statistics(config, kind, trials, workers);
  TailCurve tc = tail_curve_from_outcomes(outcomes, std::move(t_grid), center);
  tc.N = config.N;
  tc.n = config.ensemble.matrix_dim();
  tc.kind = kind;
  return tc;
}

RateFit deviation_rate_fit(const TailCurve& at_N, const TailCurve& at_2N, double t) {
  auto prob_at = [t](const TailCurve& c) {
    for (std::size_t i = 0; i < c.t_grid.size(); ++i)
      if (std::abs(c.t_grid[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return c.probs[i];
    throw std::invalid_argument("deviation_rate_fit: t is not on the curve's grid");
  };
  const double p1 = prob_at(at_N);
  const double p2 = prob_at(at_2N);
  RateFit fit;
  fit.valid = p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0;
  fit.ratio = fit.valid ? std::log(p1) / std::log(p2) : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

IncrementSummary increment_diagnostics(const ExponentEstimate& est, double c) {
  if (est.increments.empty())
    throw std::invalid_argument("increment_diagnostics: increments were not recorded");
  IncrementSummary s;
  const auto& y = est.increments;
  const double count = static_cast<double>(y.size());
  double sum = 0.0;
  for (double v : y) sum += v;
  s.mean = sum / count;
  double ss = 0.0;
  for (double v : y) {
    ss += (v - s.mean) * (v - s.mean);
    s.max_abs = std::max(s.max_abs, std::abs(v));
  }
  s.variance = y.size() > 1 ? ss / (count - 1.0) : 0.0;
  s.threshold = 2.0 * std::pow(static_cast<double>(est.n), c);  // 2 log D, D = exp(n^c)
  s.clipped_count = std::count_if(y.begin(), y.end(),
                                  [&](double v) { return std::abs(v) > s.threshold; });
  return s;
}

SpectrumReport compare_spectrum(std::vector<ExponentEstimate> estimates,
                                std::vector<double> reference, double sigmas, double abs_floor) {
  if (estimates.size() != reference.size())
    throw std::invalid_argument("compare_spectrum: length mismatch");
  SpectrumReport r;
  r.within_tolerance = true;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double dev = std::abs(estimates[i].value - reference[i]);
    r.max_abs_dev = std::max(r.max_abs_dev, dev);
    if (!(dev <= std::max(sigmas * estimates[i].std_error, abs_floor))) r.within_tolerance = false;
  }
  r.estimates = std::move(estimates);
  r.reference = std::move(reference);
  return r;
}

}  // namespace lyap
