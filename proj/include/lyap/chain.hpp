#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lyap/ensembles.hpp"
#include "lyap/linalg.hpp"
#include "lyap/rng.hpp"

namespace lyap {

/// One product-chain experiment B_N = A_N ... A_1.
struct ChainConfig {
  EnsembleSpec ensemble;
  std::int64_t N = 1;
  RngStream rng;
  /// Factors multiplied between two renormalizations.
  int renorm_every = 1;
  bool record_increments = false;

  void validate() const;
};

struct ExponentEstimate {
  /// Exponent index k >= 1, or 0 for a sum such as gamma_1 + gamma_2.
  int order = 1;
  /// Accumulated log increment divided by N.
  double value = 0.0;
  /// Log growth per renormalization block (per step when renorm_every == 1).
  std::vector<double> increments;
  /// Sample standard deviation of the increments scaled to the mean of N steps.
  double std_error = 0.0;
  std::int64_t N = 0;
  int n = 0;
  /// The chain hit a numerically zero vector, volume or pivot. Accumulation
  /// stops at `died_step` and `value` holds the partial sum over N.
  bool died = false;
  std::optional<std::int64_t> died_step;
};

/// gamma_1 via x_{i+1} = A_{i+1} x_i / |A_{i+1} x_i|; x0 defaults to e_1.
ExponentEstimate top_exponent(const ChainConfig& config, const std::optional<Vector>& x0 = {});

/// gamma_1 + gamma_2 from the growth of |x_i ^ y_i|.
ExponentEstimate second_exponent_pair(const ChainConfig& config, const Vector& x0,
                                      const Vector& y0);

/// Benettin/QR estimate of gamma_1 >= ... >= gamma_k from an n x k frame
/// started at the first k coordinate vectors.
std::vector<ExponentEstimate> spectrum_qr(const ChainConfig& config, int k);

/// N^-1 log dist(B_N e_n, span(B_N e_1, ..., B_N e_{n-1})) as a sum of
/// log(1 / |A_i^{-T} v_i|) with v_i the unit normal of the evolved frame.
ExponentEstimate least_exponent_distance(const ChainConfig& config);

}  // namespace lyap
