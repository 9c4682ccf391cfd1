#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lyap/ensembles.hpp"
#include "lyap/linalg.hpp"
#include "lyap/rng.hpp"

namespace lyap {

/// Parameters of LCD_{kappa,gamma}(x) = inf{theta > 0 : dist(theta x, Z^n) < min(gamma |theta x|, kappa)}.
struct LcdQuery {
  double gamma = 0.5;
  double kappa = 1.0;
  /// Search bound on theta; reaching it means LCD >= theta_max.
  double theta_max = 1e3;
  /// Grid resolution measured along |theta x|.
  double grid_step = 0.01;

  void validate() const;
};

struct LcdResult {
  /// Largest non-admissible theta found below the first admissible one, or
  /// theta_max when the search found nothing.
  double value = 0.0;
  bool at_search_limit = false;
  std::optional<double> witness_theta;
  std::optional<std::vector<long long>> witness_lattice_point;
  /// joint_lcd only: angle phi of the minimizing combination cos(phi) x + sin(phi) y.
  std::optional<double> witness_angle;
};

/// dist(theta x, Z^n) with the lattice point obtained by coordinate-wise rounding.
double lattice_distance(const Vector& x, double theta, std::vector<long long>* nearest = nullptr);

LcdResult lcd(const Vector& x, const LcdQuery& q);

/// Minimum of lcd over cos(phi) x + sin(phi) y, phi = k pi / angle_grid.
LcdResult joint_lcd(const Vector& x, const Vector& y, const LcdQuery& q, int angle_grid);

struct LcdNet {
  std::vector<Vector> points;
  /// Covering radius 2 kappa / D0 for unit vectors with LCD in [D0, 2 D0].
  double radius = 0.0;
};

/// {p / |p| : p in Z^n, 0 < |p| <= 3 D0}, one entry per direction.
LcdNet lcd_net(double D0, int n, double kappa);

/// Grid of 21 centres spanning [-3, 3] used for the small-ball supremum.
std::vector<double> small_ball_centres();

/// sup over the centre grid of the empirical P(|sum_i xi_i x_i - c| <= eps)
/// with unscaled atoms of `spec`. Trial t draws from stream (rng.seed, t).
double small_ball_estimate(const Vector& x, double eps, const EnsembleSpec& spec,
                           std::int64_t trials, const RngStream& rng, int workers = 1);

struct MembershipQuery {
  double c = 0.05;
  double grid_step = 0.01;
};

/// LCD_{1/2, n^c}(x) >= min(exp(n^c), 1e6) evaluated with the truncated grid search.
bool membership_S(const Vector& x, const MembershipQuery& q = {});

}  // namespace lyap
