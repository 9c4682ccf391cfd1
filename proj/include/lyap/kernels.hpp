#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lyap/chain.hpp"

namespace lyap {

enum class EstimatorKind { Top, SecondSum, Least };

/// Per-trial outcome of one chain run. Died trials carry statistic = -inf.
struct TrialOutcome {
  double statistic = 0.0;
  bool died = false;
};

/// Trial-parallel kernels. Each has an OpenMP version and a serial reference
/// that must agree bit for bit; trial t always uses stream (seed, t).
namespace kernels {

/// Runs `trials` independent chains of `config` (stream ids 0..trials-1)
/// started from e_1 (and e_2 for the pair estimator).
std::vector<TrialOutcome> trial_statistics(const ChainConfig& config, EstimatorKind kind,
                                           std::int64_t trials, int workers);
std::vector<TrialOutcome> trial_statistics_serial(const ChainConfig& config, EstimatorKind kind,
                                                  std::int64_t trials);

/// counts[c] = #{t : |sum_i xi_i^(t) x_i - centres[c]| <= eps}.
std::vector<std::int64_t> small_ball_counts(const Vector& x, double eps, const EnsembleSpec& spec,
                                            std::span<const double> centres, std::int64_t trials,
                                            const RngStream& rng, int workers);
std::vector<std::int64_t> small_ball_counts_serial(const Vector& x, double eps,
                                                   const EnsembleSpec& spec,
                                                   std::span<const double> centres,
                                                   std::int64_t trials, const RngStream& rng);

}  // namespace kernels
}  // namespace lyap
