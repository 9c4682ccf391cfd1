#include "lyap/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lyap/kernels.hpp"

namespace lyap {

namespace {

constexpr double kBoundaryTol = 1e-12;

double admissibility_margin(const Vector& x, double theta, const LcdQuery& q,
                            std::vector<long long>* nearest = nullptr) {
  const double d = lattice_distance(x, theta, nearest);
  return std::min(q.gamma * theta * x.norm(), q.kappa) - d;
}

}  // namespace

void LcdQuery::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("lcd: gamma must lie in (0,1)");
  if (!(kappa > 0.0)) throw std::invalid_argument("lcd: kappa must be > 0");
  if (!(theta_max > 0.0)) throw std::invalid_argument("lcd: theta_max must be > 0");
  if (!(grid_step > 0.0 && grid_step <= std::min(gamma, 1.0) / 10.0 + 1e-15))
    throw std::invalid_argument("lcd: grid_step must lie in (0, min(gamma,1)/10]");
}

double lattice_distance(const Vector& x, double theta, std::vector<long long>* nearest) {
  if (nearest) nearest->resize(static_cast<std::size_t>(x.size()));
  double sq = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = theta * x(i);
    const double r = std::nearbyint(v);
    sq += (v - r) * (v - r);
    if (nearest) (*nearest)[static_cast<std::size_t>(i)] = static_cast<long long>(r);
  }
  return std::sqrt(sq);
}

LcdResult lcd(const Vector& x, const LcdQuery& q) {
  q.validate();
  const double nx = x.norm();
  if (!(nx > 0.0)) throw std::invalid_argument("lcd: x must be nonzero");

  const double step = q.grid_step / nx;
  const double tol = step * 1e-3;
  LcdResult res;
  for (std::int64_t k = 1;; ++k) {
    const double theta = static_cast<double>(k) * step;
    if (theta > q.theta_max) break;
    if (admissibility_margin(x, theta, q) + kBoundaryTol <= 0.0) continue;

    double lo = static_cast<double>(k - 1) * step;
    double hi = theta;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (admissibility_margin(x, mid, q) + kBoundaryTol > 0.0)
        hi = mid;
      else
        lo = mid;
    }
    res.value = lo;
    // The witness must satisfy the strict inequality as evaluated.
    std::vector<long long> p;
    for (int nudge = 0; nudge < 1000; ++nudge, hi += tol) {
      if (admissibility_margin(x, hi, q, &p) > 0.0) {
        res.witness_theta = hi;
        res.witness_lattice_point = p;
        break;
      }
    }
    return res;
  }
  res.value = q.theta_max;
  res.at_search_limit = true;
  return res;
}

LcdResult joint_lcd(const Vector& x, const Vector& y, const LcdQuery& q, int angle_grid) {
  if (x.size() != y.size()) throw std::invalid_argument("joint_lcd: dimension mismatch");
  if (angle_grid < 1) throw std::invalid_argument("joint_lcd: angle_grid must be >= 1");
  const double size = x.norm() + y.norm();
  if (!(size > 0.0)) throw std::invalid_argument("joint_lcd: x and y are both zero");

  std::optional<LcdResult> best;
  for (int k = 0; k < angle_grid; ++k) {
    const double phi = std::numbers::pi * k / angle_grid;
    const Vector z = std::cos(phi) * x + std::sin(phi) * y;
    if (!(z.norm() > 1e-12 * size)) continue;
    LcdResult r = lcd(z, q);
    if (!best || r.value < best->value) {
      r.witness_angle = phi;
      best = std::move(r);
    }
  }
  if (!best) throw std::invalid_argument("joint_lcd: every combination vanished");
  return *best;
}

LcdNet lcd_net(double D0, int n, double kappa) {
  if (n < 1 || n > 4) throw std::invalid_argument("lcd_net: enumeration needs 1 <= n <= 4");
  if (!(D0 > 0.0 && D0 <= 50.0)) throw std::invalid_argument("lcd_net: D0 must lie in (0, 50]");
  if (!(kappa > 0.0)) throw std::invalid_argument("lcd_net: kappa must be > 0");
  const double radius = 3.0 * D0;
  const long long m = static_cast<long long>(std::floor(radius));
  const double candidates = std::pow(2.0 * static_cast<double>(m) + 1.0, n);
  if (candidates > 2e7) throw std::invalid_argument("lcd_net: enumeration too large");

  LcdNet net;
  net.radius = 2.0 * kappa / D0;
  std::vector<long long> p(static_cast<std::size_t>(n), -m);
  while (true) {
    long long g = 0;
    double sq = 0.0;
    for (long long c : p) {
      g = std::gcd(g, c);
      sq += static_cast<double>(c) * static_cast<double>(c);
    }
    // gcd == 1 keeps one primitive representative per direction.
    if (g == 1 && sq <= radius * radius * (1.0 + 1e-12)) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v(i) = static_cast<double>(p[static_cast<std::size_t>(i)]);
      net.points.push_back(v / std::sqrt(sq));
    }
    int i = n - 1;
    while (i >= 0 && p[static_cast<std::size_t>(i)] == m) p[static_cast<std::size_t>(i--)] = -m;
    if (i < 0) break;
    ++p[static_cast<std::size_t>(i)];
  }
  return net;
}

std::vector<double> small_ball_centres() {
  std::vector<double> c(21);
  for (int k = 0; k < 21; ++k) c[static_cast<std::size_t>(k)] = -3.0 + 0.3 * k;
  return c;
}

double small_ball_estimate(const Vector& x, double eps, const EnsembleSpec& spec,
                           std::int64_t trials, const RngStream& rng, int workers) {
  if (!(eps >= 0.0)) throw std::invalid_argument("small_ball_estimate: eps must be >= 0");
  const auto centres = small_ball_centres();
  const auto counts = kernels::small_ball_counts(x, eps, spec, centres, trials, rng, workers);
  const auto best = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(best) / static_cast<double>(trials);
}

bool membership_S(const Vector& x, const MembershipQuery& q) {
  const double n = static_cast<double>(x.size());
  const double nc = std::pow(n, q.c);
  LcdQuery lq;
  lq.gamma = 0.5;
  lq.kappa = nc;
  lq.theta_max = std::min(std::exp(nc), 1e6);
  lq.grid_step = q.grid_step;
  return lcd(x, lq).at_search_limit;
}

}  // namespace lyap
