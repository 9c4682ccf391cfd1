#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lyap/chain.hpp"
#include "lyap/linalg.hpp"
#include "oracles.hpp"

using namespace lyap;

namespace {

ChainConfig fixed_chain(const Matrix& m, std::int64_t N) {
  ChainConfig c;
  c.ensemble = EnsembleSpec::fixed(m);
  c.N = N;
  return c;
}

ChainConfig random_chain(EnsembleSpec spec, std::int64_t N, std::uint64_t seed) {
  ChainConfig c;
  c.ensemble = std::move(spec);
  c.N = N;
  c.rng = {seed, 0};
  return c;
}

Vector unit(int n, int i) { return Vector::Unit(n, i); }

}  // namespace

TEST_CASE("wedge volume examples") {
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(wedge_volume_2(a, b) == doctest::Approx(1.0));
  b << 1, 0;
  CHECK(wedge_volume_2(a, b) == 0.0);
  a << 2, 0;
  b << 1, 3;
  CHECK(wedge_volume_2(a, b) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(wedge_volume_2(b, a) == doctest::Approx(6.0).epsilon(1e-15));

  Engine eng = make_engine({77, 0});
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    Vector u(5), v(5);
    for (int i = 0; i < 5; ++i) {
      u(i) = g(eng);
      v(i) = g(eng);
    }
    const double want = static_cast<double>(oracle::wedge(oracle::to_vec(u), oracle::to_vec(v)));
    CHECK(std::abs(wedge_volume_2(u, v) - want) <= 1e-12 * want);
  }
}

TEST_CASE("orthocomplement vector") {
  Matrix f(3, 2);
  f << 1, 0, 0, 1, 0, 0;
  CHECK(orthocomplement_vector(f).isApprox(unit(3, 2)));
  f << 1, 0, 0, 0, 0, 1;
  CHECK(orthocomplement_vector(f).isApprox(unit(3, 1)));

  Matrix g(2, 1);
  g << 1, 1;
  Vector want(2);
  want << 1, -1;
  want /= std::sqrt(2.0);
  CHECK(orthocomplement_vector(g).isApprox(want));

  Matrix dep(3, 2);
  dep << 1, 2, 1, 2, 0, 0;
  CHECK_THROWS_AS(orthocomplement_vector(dep), std::invalid_argument);
}

TEST_CASE("fixed diagonal chains give exact exponents") {
  SUBCASE("2I") {
    auto c = fixed_chain(2.0 * Matrix::Identity(3, 3), 40);
    CHECK(top_exponent(c).value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(second_exponent_pair(c, unit(3, 0), unit(3, 1)).value ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("diag(2, 1) from e1 + e2") {
    Matrix m(2, 2);
    m << 2, 0, 0, 1;
    auto c = fixed_chain(m, 200);
    Vector x(2);
    x << 1, 1;
    x.normalize();
    // N^-1 log |(2^N, 1)| / |(1,1)| -> log 2 with O(1/N) error.
    const double exact = (0.5 * std::log(std::pow(4.0, 200) + 1.0) - 0.5 * std::log(2.0)) / 200;
    CHECK(top_exponent(c, x).value == doctest::Approx(exact).epsilon(1e-12));
    CHECK(std::abs(top_exponent(c, x).value - std::log(2.0)) < 2e-3);
  }
  SUBCASE("diag(3, 2, 1) spectrum") {
    Matrix m = Vector::LinSpaced(3, 3, 1).asDiagonal();
    auto est = spectrum_qr(fixed_chain(m, 10), 3);
    REQUIRE(est.size() == 3);
    CHECK(est[0].value == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(est[1].value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::abs(est[2].value) < 1e-14);
  }
  SUBCASE("least exponent of diag(2, ..., 2, 1/2)") {
    Vector d = Vector::Constant(4, 2.0);
    d(3) = 0.5;
    Matrix m = d.asDiagonal();
    auto est = least_exponent_distance(fixed_chain(m, 25));
    CHECK_FALSE(est.died);
    CHECK(est.value == doctest::Approx(-std::log(2.0)).epsilon(1e-13));
  }
}

TEST_CASE("recursions match explicit long-double products") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed)
    for (int n = 2; n <= 5; ++n)
      for (std::int64_t N : {1, 3, 8}) {
        for (auto spec : {EnsembleSpec::gaussian(n), EnsembleSpec::rademacher(n)}) {
          CAPTURE(seed);
          CAPTURE(n);
          CAPTURE(N);
          auto c = random_chain(spec, N, seed);
          const Vector x = unit(n, 0), y = unit(n, 1);
          const auto top = top_exponent(c, x);
          if (top.died) continue;
          CHECK(oracle::rel_err(top.value * N, oracle::log_top(c, x)) <= 1e-8);
          const auto pair = second_exponent_pair(c, x, y);
          if (!pair.died)
            CHECK(oracle::rel_err(pair.value * N, oracle::log_pair(c, x, y)) <= 1e-8);
          const auto least = least_exponent_distance(c);
          if (!least.died)
            CHECK(oracle::rel_err(least.value * N, oracle::log_least(c)) <= 1e-6);
          const auto qr = spectrum_qr(c, n);
          bool died = false;
          double sum = 0.0;
          for (const auto& e : qr) {
            died |= e.died;
            sum += e.value;
          }
          if (!died) CHECK(oracle::rel_err(sum * N, oracle::log_det(c)) <= 1e-8);
        }
      }
}

TEST_CASE("renormalization cadence does not change the estimate") {
  auto c = random_chain(EnsembleSpec::gaussian(6), 60, 5);
  const auto base = top_exponent(c);
  const auto pbase = second_exponent_pair(c, unit(6, 0), unit(6, 1));
  const auto lbase = least_exponent_distance(c);
  const auto sbase = spectrum_qr(c, 3);
  for (int r : {2, 5, 7}) {
    CAPTURE(r);
    c.renorm_every = r;
    CHECK(top_exponent(c).value == doctest::Approx(base.value).epsilon(1e-11));
    CHECK(second_exponent_pair(c, unit(6, 0), unit(6, 1)).value ==
          doctest::Approx(pbase.value).epsilon(1e-11));
    CHECK(least_exponent_distance(c).value == doctest::Approx(lbase.value).epsilon(1e-9));
    const auto s = spectrum_qr(c, 3);
    for (int i = 0; i < 3; ++i) CHECK(s[i].value == doctest::Approx(sbase[i].value).epsilon(1e-11));
  }
}

TEST_CASE("gaussian n = 1 top exponent is E log|g|") {
  // E log|N(0,1)| = -(gamma_Euler + log 2) / 2.
  const double want = -0.5 * (0.57721566490153286 + std::log(2.0));
  CHECK(want == doctest::Approx(-0.63518142273).epsilon(1e-10));
  auto c = random_chain(EnsembleSpec::gaussian(1), 200000, 3);
  const auto est = top_exponent(c);
  CHECK(std::abs(est.value - want) <= 3.0 * est.std_error);
  // Var log|g| = pi^2 / 8.
  CHECK(est.std_error == doctest::Approx(std::sqrt(std::numbers::pi * std::numbers::pi / 8.0 /
                                                   200000.0))
                             .epsilon(0.02));
}

TEST_CASE("spectrum is ordered and consistent with the other recursions") {
  auto c = random_chain(EnsembleSpec::gaussian(5), 20000, 8);
  const auto s = spectrum_qr(c, 5);
  for (int i = 0; i + 1 < 5; ++i) CHECK(s[i].value > s[i + 1].value);
  // Same stream: the first QR column follows the same vector as the top recursion.
  CHECK(s[0].value == doctest::Approx(top_exponent(c).value).epsilon(1e-10));
  CHECK(s[0].value + s[1].value ==
        doctest::Approx(second_exponent_pair(c, unit(5, 0), unit(5, 1)).value).epsilon(1e-9));
}

TEST_CASE("scaling the ensemble shifts every exponent by log s") {
  auto c1 = random_chain(EnsembleSpec::gaussian(4, 1.0), 500, 21);
  auto c2 = random_chain(EnsembleSpec::gaussian(4, 3.0), 500, 21);
  const auto a = spectrum_qr(c1, 4), b = spectrum_qr(c2, 4);
  for (int i = 0; i < 4; ++i) CHECK(b[i].value - a[i].value == doctest::Approx(std::log(3.0)));
  CHECK(least_exponent_distance(c2).value - least_exponent_distance(c1).value ==
        doctest::Approx(std::log(3.0)));
}

TEST_CASE("increments are recorded and sum to value times N") {
  auto c = random_chain(EnsembleSpec::rademacher(3), 300, 4);
  c.record_increments = true;
  for (const auto& est : {top_exponent(c), least_exponent_distance(c),
                          second_exponent_pair(c, unit(3, 0), unit(3, 1))}) {
    if (est.died) continue;
    REQUIRE(est.increments.size() == 300u);
    double s = 0.0;
    for (double y : est.increments) s += y;
    CHECK(s == doctest::Approx(est.value * 300).epsilon(1e-12));
  }
  c.renorm_every = 7;
  const auto blocked = top_exponent(c);
  CHECK(blocked.increments.size() == 43u);  // ceil(300 / 7)
  c.record_increments = false;
  CHECK(top_exponent(c).increments.empty());
}

TEST_CASE("singular factors kill the chain") {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 1) = 1.0;  // nilpotent: z * e1 = 0
  const auto est = top_exponent(fixed_chain(z, 10));
  CHECK(est.died);
  REQUIRE(est.died_step);
  CHECK(*est.died_step == 1);

  const auto least = least_exponent_distance(fixed_chain(z, 10));
  CHECK(least.died);

  // Rademacher n = 2 hits a singular factor quickly.
  int died = 0;
  for (std::uint64_t s = 0; s < 50; ++s)
    died += least_exponent_distance(random_chain(EnsembleSpec::rademacher(2), 20, s)).died;
  CHECK(died >= 45);
}

TEST_CASE("invalid chain configurations are rejected") {
  auto c = random_chain(EnsembleSpec::gaussian(3), 0, 1);
  CHECK_THROWS_AS(top_exponent(c), std::invalid_argument);
  c.N = 5;
  c.renorm_every = 0;
  CHECK_THROWS_AS(top_exponent(c), std::invalid_argument);
  c.renorm_every = 1;
  CHECK_THROWS_AS(spectrum_qr(c, 4), std::invalid_argument);
  CHECK_THROWS_AS(top_exponent(c, Vector::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(second_exponent_pair(c, unit(3, 0), unit(3, 0)), std::invalid_argument);
  CHECK_THROWS_AS(top_exponent(c, Vector::Ones(2)), std::invalid_argument);
}
