#pragma once

#include <cstdint>
#include <string_view>
#include <optional>
#include <vector>

#include "lyap/chain.hpp"
#include "lyap/kernels.hpp"

namespace lyap {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Psi(d) = Gamma'(d)/Gamma(d) for d > 0, absolute error below 1e-10.
double digamma(double d);

/// Gaussian-ensemble exponents mu_i = (log 2 + Psi((n-i+1)/2) - log n) / 2, i = 1..n.
std::vector<double> newman_exponents(int n);

/// Leading-order weak-disorder exponent lambda^2 (1 + 2(n-d)) / (8 sin^2 kappa),
/// E = 2 cos kappa; the O(lambda^3) remainder is not included.
double ssb_exponent(int n, int d, double lambda, double E);

std::string_view to_string(EstimatorKind k);
std::optional<EstimatorKind> estimator_from_string(std::string_view s);

/// Empirical P(|statistic - center| >= t) over independent chains.
struct TailCurve {
  std::vector<double> t_grid;
  std::vector<double> probs;
  std::vector<double> std_errors;
  std::int64_t trials = 0;
  std::int64_t N = 0;
  int n = 0;
  EstimatorKind kind = EstimatorKind::Top;
  double center = 0.0;
  double died_fraction = 0.0;
};

/// Exceedance curve from per-trial statistics; died trials always exceed.
TailCurve tail_curve_from_outcomes(const std::vector<TrialOutcome>& outcomes,
                                   std::vector<double> t_grid, double center = 0.0);

TailCurve tail_curve(const ChainConfig& config, EstimatorKind kind, std::vector<double> t_grid,
                     std::int64_t trials, int workers, double center = 0.0);

struct RateFit {
  double ratio = 0.0;
  /// False when either probability at t is 0 or 1 (ratio is then non-finite or meaningless).
  bool valid = false;
};

/// log P_N(t) / log P_2N(t); near 0.5 when the tail decays like exp(-a N).
RateFit deviation_rate_fit(const TailCurve& at_N, const TailCurve& at_2N, double t);

struct IncrementSummary {
  double mean = 0.0;
  double variance = 0.0;
  double max_abs = 0.0;
  std::int64_t clipped_count = 0;
  double threshold = 0.0;
};

/// Summary of recorded increments; clipped_count counts |y_i| > 2 log D with
/// D = exp(n^c).
IncrementSummary increment_diagnostics(const ExponentEstimate& est, double c = 0.05);

struct SpectrumReport {
  std::vector<ExponentEstimate> estimates;
  std::vector<double> reference;
  double max_abs_dev = 0.0;
  bool within_tolerance = false;
};

/// Each estimate must lie within max(sigmas * stderr, abs_floor) of its reference.
SpectrumReport compare_spectrum(std::vector<ExponentEstimate> estimates,
                                std::vector<double> reference, double sigmas = 3.0,
                                double abs_floor = 5e-3);

}  // namespace lyap
