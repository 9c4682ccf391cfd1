#include "lyap/validate.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "lyap/chain.hpp"
#include "lyap/stats.hpp"

namespace lyap {

namespace {

Matrix explicit_product(const ChainConfig& cfg) {
  MatrixSampler sampler(cfg.ensemble, cfg.rng);
  Matrix b = Matrix::Identity(sampler.dim(), sampler.dim());
  Matrix a;
  for (std::int64_t i = 0; i < cfg.N; ++i) {
    sampler.next(a);
    b = a * b;
  }
  return b;
}

double rel_dev(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void add_value_check(std::vector<CheckResult>& out, std::string name, double got, double want,
                     double tol) {
  const double dev = std::abs(got - want);
  out.push_back({std::move(name), dev <= tol, fmt("got %.15g want %.15g", got, want)});
}

void add_product_checks(std::vector<CheckResult>& out, const EnsembleSpec& base,
                        std::string_view label) {
  double worst_top = 0, worst_pair = 0, worst_least = 0, worst_det = 0;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (int n = 2; n <= 5; ++n) {
      for (std::int64_t N = 1; N <= 6; ++N) {
        ChainConfig cfg;
        cfg.ensemble = base;
        cfg.ensemble.n = n;
        cfg.N = N;
        cfg.rng = {seed, 0};
        const Matrix b = explicit_product(cfg);
        const double dN = static_cast<double>(N);

        const auto top = top_exponent(cfg);
        const auto pair = second_exponent_pair(cfg, Vector::Unit(n, 0), Vector::Unit(n, 1));
        const auto least = least_exponent_distance(cfg);
        const auto spec = spectrum_qr(cfg, n);
        if (top.died || pair.died || least.died || spec.front().died) continue;
        ++runs;

        worst_top = std::max(worst_top, rel_dev(top.value, std::log(b.col(0).norm()) / dN));
        worst_pair = std::max(
            worst_pair, rel_dev(pair.value, std::log(wedge_volume_2(b.col(0), b.col(1))) / dN));
        Eigen::HouseholderQR<Matrix> qr(b.leftCols(n - 1));
        const Matrix q = qr.householderQ() * Matrix::Identity(n, n - 1);
        const Vector resid = b.col(n - 1) - q * (q.transpose() * b.col(n - 1));
        worst_least = std::max(worst_least, rel_dev(least.value, std::log(resid.norm()) / dN));
        double sum = 0.0;
        for (const auto& e : spec) sum += e.value;
        worst_det = std::max(worst_det,
                             rel_dev(sum * dN, std::log(std::abs(b.fullPivLu().determinant()))));
      }
    }
  }
  const std::string l(label);
  out.push_back({"explicit_top_" + l, worst_top <= 1e-8, fmt("max rel dev %.3g over %g runs", worst_top, runs)});
  out.push_back({"explicit_pair_" + l, worst_pair <= 1e-8, fmt("max rel dev %.3g over %g runs", worst_pair, runs)});
  out.push_back({"explicit_least_" + l, worst_least <= 1e-6, fmt("max rel dev %.3g over %g runs", worst_least, runs)});
  out.push_back({"qr_determinant_" + l, worst_det <= 1e-8, fmt("max rel dev %.3g over %g runs", worst_det, runs)});
}

}  // namespace

std::vector<CheckResult> run_validation_suite() {
  std::vector<CheckResult> out;
  add_value_check(out, "digamma_1", digamma(1.0), -kEulerGamma, 1e-10);
  add_value_check(out, "digamma_half", digamma(0.5), -kEulerGamma - 2.0 * std::numbers::ln2, 1e-10);
  add_value_check(out, "digamma_2", digamma(2.0), 1.0 - kEulerGamma, 1e-10);
  add_value_check(out, "digamma_recurrence_3.7", digamma(4.7) - digamma(3.7), 1.0 / 3.7, 1e-12);
  add_value_check(out, "newman_n1", newman_exponents(1)[0],
                  0.5 * (std::numbers::ln2 - kEulerGamma - 2.0 * std::numbers::ln2), 1e-10);
  add_value_check(out, "newman_n2_mu1", newman_exponents(2)[0], -kEulerGamma / 2.0, 1e-10);
  add_value_check(out, "ssb_n2_d1", ssb_exponent(2, 1, 0.1, 1.0), 0.005, 1e-15);

  ChainConfig two;
  two.ensemble = EnsembleSpec::fixed(2.0 * Matrix::Identity(3, 3));
  two.N = 10;
  add_value_check(out, "fixed_2I_top", top_exponent(two).value, std::numbers::ln2, 1e-14);
  add_value_check(out, "fixed_2I_pair",
                  second_exponent_pair(two, Vector::Unit(3, 0), Vector::Unit(3, 1)).value,
                  2.0 * std::numbers::ln2, 1e-14);

  add_product_checks(out, EnsembleSpec::gaussian(2), "gaussian");
  add_product_checks(out, EnsembleSpec::rademacher(2), "rademacher");
  return out;
}

}  // namespace lyap
