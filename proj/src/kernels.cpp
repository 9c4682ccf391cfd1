#include "lyap/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace lyap::kernels {

namespace {

TrialOutcome run_trial(const ChainConfig& config, EstimatorKind kind, std::int64_t trial) {
  ChainConfig cfg = config;
  cfg.rng = config.rng.with_stream(static_cast<std::uint64_t>(trial));
  cfg.record_increments = false;
  ExponentEstimate est;
  switch (kind) {
    case EstimatorKind::Top:
      est = top_exponent(cfg);
      break;
    case EstimatorKind::SecondSum: {
      const int dim = cfg.ensemble.matrix_dim();
      est = second_exponent_pair(cfg, Vector::Unit(dim, 0), Vector::Unit(dim, 1));
      break;
    }
    case EstimatorKind::Least:
      est = least_exponent_distance(cfg);
      break;
  }
  if (est.died) return {-std::numeric_limits<double>::infinity(), true};
  return {est.value, false};
}

void draw_and_count(const Vector& x, double eps, const EnsembleSpec& spec,
                    std::span<const double> centres, const RngStream& stream,
                    std::int64_t* counts) {
  Engine engine = make_engine(stream);
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += sample_atom(spec, engine) * x(i);
  for (std::size_t c = 0; c < centres.size(); ++c)
    if (std::abs(s - centres[c]) <= eps) ++counts[c];
}

void check_trials(std::int64_t trials, int workers) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

void check_atoms(const EnsembleSpec& spec) {
  if (!is_iid(spec.family))
    throw std::invalid_argument("small-ball estimation needs an iid atom family");
}

}  // namespace

std::vector<TrialOutcome> trial_statistics(const ChainConfig& config, EstimatorKind kind,
                                           std::int64_t trials, int workers) {
  check_trials(trials, workers);
  config.validate();
  std::vector<TrialOutcome> out(static_cast<std::size_t>(trials));
  // Exceptions may not cross the OpenMP region; the first one is rethrown.
  std::exception_ptr error;
#pragma omp parallel for num_threads(workers) schedule(dynamic, 8)
  for (std::int64_t t = 0; t < trials; ++t) {
    try {
      out[static_cast<std::size_t>(t)] = run_trial(config, kind, t);
    } catch (...) {
#pragma omp critical(lyap_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<TrialOutcome> trial_statistics_serial(const ChainConfig& config, EstimatorKind kind,
                                                  std::int64_t trials) {
  check_trials(trials, 1);
  config.validate();
  std::vector<TrialOutcome> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) out.push_back(run_trial(config, kind, t));
  return out;
}

std::vector<std::int64_t> small_ball_counts(const Vector& x, double eps, const EnsembleSpec& spec,
                                            std::span<const double> centres, std::int64_t trials,
                                            const RngStream& rng, int workers) {
  check_trials(trials, workers);
  check_atoms(spec);
  const std::size_t nc = centres.size();
  std::vector<std::int64_t> total(nc, 0);
#pragma omp parallel num_threads(workers)
  {
    std::vector<std::int64_t> local(nc, 0);
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < trials; ++t)
      draw_and_count(x, eps, spec, centres, rng.with_stream(static_cast<std::uint64_t>(t)),
                     local.data());
#pragma omp critical(lyap_small_ball_merge)
    for (std::size_t c = 0; c < nc; ++c) total[c] += local[c];
  }
  return total;
}

std::vector<std::int64_t> small_ball_counts_serial(const Vector& x, double eps,
                                                   const EnsembleSpec& spec,
                                                   std::span<const double> centres,
                                                   std::int64_t trials, const RngStream& rng) {
  check_trials(trials, 1);
  check_atoms(spec);
  std::vector<std::int64_t> total(centres.size(), 0);
  for (std::int64_t t = 0; t < trials; ++t)
    draw_and_count(x, eps, spec, centres, rng.with_stream(static_cast<std::uint64_t>(t)),
                   total.data());
  return total;
}

}  // namespace lyap::kernels
