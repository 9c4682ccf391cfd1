#include "lyap/ensembles.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace lyap {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames{{
    {Family::Gaussian, "gaussian"},
    {Family::Rademacher, "rademacher"},
    {Family::UniformSym, "uniform_sym"},
    {Family::TwoPoint, "two_point"},
    {Family::ShiftCocycle, "shift_cocycle"},
    {Family::SymplecticWigner, "symplectic_wigner"},
    {Family::Fixed, "fixed"},
}};

double standard_normal(Engine& engine) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine);
}

}  // namespace

std::string_view to_string(Family f) {
  for (const auto& [fam, name] : kFamilyNames)
    if (fam == f) return name;
  return "unknown";
}

std::optional<Family> family_from_string(std::string_view s) {
  for (const auto& [fam, name] : kFamilyNames)
    if (name == s) return fam;
  return std::nullopt;
}

bool is_iid(Family f) {
  switch (f) {
    case Family::Gaussian:
    case Family::Rademacher:
    case Family::UniformSym:
    case Family::TwoPoint:
      return true;
    default:
      return false;
  }
}

TwoPointAtom::TwoPointAtom(double p, double a, double b) : p_(p), raw_a_(a), raw_b_(b) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two_point: p must lie in (0,1)");
  if (!(a != b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("two_point: atoms a and b must be distinct and finite");
  const double mean = p * a + (1.0 - p) * b;
  const double sd = std::abs(a - b) * std::sqrt(p * (1.0 - p));
  a_ = (a - mean) / sd;
  b_ = (b - mean) / sd;
}

double TrigPolynomial::operator()(double x) const {
  const double two_pi = 2.0 * std::numbers::pi;
  double v = cos.empty() ? 0.0 : cos[0];
  for (std::size_t k = 1; k < cos.size(); ++k) v += cos[k] * std::cos(two_pi * double(k) * x);
  for (std::size_t k = 0; k < sin.size(); ++k) v += sin[k] * std::sin(two_pi * double(k + 1) * x);
  return v;
}

EnsembleSpec EnsembleSpec::gaussian(int n, std::optional<double> scale) {
  return {Family::Gaussian, n, scale, 1.0, {}};
}

EnsembleSpec EnsembleSpec::rademacher(int n, std::optional<double> scale) {
  return {Family::Rademacher, n, scale, 1.0, {}};
}

EnsembleSpec EnsembleSpec::uniform_sym(int n, std::optional<double> scale) {
  return {Family::UniformSym, n, scale, 1.0, {}};
}

EnsembleSpec EnsembleSpec::two_point(int n, TwoPointAtom atom, std::optional<double> scale) {
  return {Family::TwoPoint, n, scale, 1.0, atom};
}

EnsembleSpec EnsembleSpec::shift_cocycle(ShiftParams p) {
  return {Family::ShiftCocycle, 2, std::nullopt, 1.0, std::move(p)};
}

EnsembleSpec EnsembleSpec::symplectic(int n, SymplecticParams p) {
  return {Family::SymplecticWigner, n, std::nullopt, 1.0, p};
}

EnsembleSpec EnsembleSpec::fixed(Matrix m) {
  const int n = static_cast<int>(m.rows());
  return {Family::Fixed, n, std::nullopt, 1.0, FixedParams{std::move(m)}};
}

double EnsembleSpec::entry_scale() const {
  return scale.value_or(1.0 / std::sqrt(static_cast<double>(n)));
}

int EnsembleSpec::matrix_dim() const {
  switch (family) {
    case Family::ShiftCocycle:
      return 2;
    case Family::SymplecticWigner:
      return 2 * n;
    default:
      return n;
  }
}

void EnsembleSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ensemble.n must be a positive integer");
  if (scale && !std::isfinite(*scale))
    throw std::invalid_argument("ensemble.scale must be finite");
  if (!(subgaussian_K > 0.0)) throw std::invalid_argument("ensemble.subgaussian_K must be > 0");
  switch (family) {
    case Family::TwoPoint:
      if (!std::holds_alternative<TwoPointAtom>(params))
        throw std::invalid_argument("two_point ensemble needs p, a, b");
      break;
    case Family::ShiftCocycle: {
      const auto* sp = std::get_if<ShiftParams>(&params);
      if (!sp) throw std::invalid_argument("shift_cocycle ensemble needs model parameters");
      if (!(sp->omega >= 0.0 && sp->omega < 1.0) || !(sp->x0 >= 0.0 && sp->x0 < 1.0))
        throw std::invalid_argument("shift_cocycle: omega and x0 must lie in [0,1)");
      break;
    }
    case Family::SymplecticWigner: {
      const auto* sp = std::get_if<SymplecticParams>(&params);
      if (!sp) throw std::invalid_argument("symplectic_wigner ensemble needs model parameters");
      if (sp->wigner_variance && !(*sp->wigner_variance >= 0.0))
        throw std::invalid_argument("symplectic_wigner: wigner_variance must be >= 0");
      break;
    }
    case Family::Fixed: {
      const auto* fp = std::get_if<FixedParams>(&params);
      if (!fp || fp->matrix.rows() != n || fp->matrix.cols() != n)
        throw std::invalid_argument("fixed ensemble needs an n x n matrix");
      break;
    }
    default:
      break;
  }
}

double sample_atom(const EnsembleSpec& spec, Engine& engine) {
  switch (spec.family) {
    case Family::Gaussian:
      return standard_normal(engine);
    case Family::Rademacher:
      return (engine() >> 63) ? 1.0 : -1.0;
    case Family::UniformSym: {
      const double r = std::sqrt(3.0);
      boost::random::uniform_real_distribution<double> dist(-r, r);
      return dist(engine);
    }
    case Family::TwoPoint: {
      const auto& atom = std::get<TwoPointAtom>(spec.params);
      boost::random::uniform_01<double> u;
      return u(engine) < atom.p() ? atom.a() : atom.b();
    }
    default:
      throw std::invalid_argument("sample_atom: family " + std::string(to_string(spec.family)) +
                                  " has no iid atom");
  }
}

void sample_matrix(const EnsembleSpec& spec, Engine& engine, Matrix& out) {
  if (!is_iid(spec.family))
    throw std::invalid_argument("sample_matrix: family " + std::string(to_string(spec.family)) +
                                " is not iid; use its dedicated generator");
  const int n = spec.n;
  const double s = spec.entry_scale();
  out.resize(n, n);
  if (spec.family == Family::Rademacher) {
    // One engine word supplies 64 signs.
    std::uint64_t bits = 0;
    int left = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (left == 0) {
          bits = engine();
          left = 64;
        }
        out(i, j) = (bits & 1ULL) ? s : -s;
        bits >>= 1;
        --left;
      }
    }
    return;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = s * sample_atom(spec, engine);
}

Matrix sample_matrix(const EnsembleSpec& spec, Engine& engine) {
  Matrix m;
  sample_matrix(spec, engine, m);
  return m;
}

Matrix shift_cocycle_matrix(const ShiftParams& params, std::int64_t j) {
  double x = std::fmod(params.x0 + static_cast<double>(j) * params.omega, 1.0);
  if (x < 0.0) x += 1.0;
  Matrix m(2, 2);
  m << params.f(x) - params.E, -1.0, 1.0, 0.0;
  return m;
}

void symplectic_matrix(int n, const SymplecticParams& params, Engine& engine, Matrix& out) {
  const double var = params.wigner_variance.value_or(1.0 / n);
  const double sd = std::sqrt(var);
  out.setZero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double w = params.lambda * sd * standard_normal(engine);
      out(i, j) = w;
      out(j, i) = w;
    }
    out(i, i) -= params.E;
    out(i, n + i) = -1.0;
    out(n + i, i) = 1.0;
  }
}

Matrix symplectic_matrix(int n, const SymplecticParams& params, Engine& engine) {
  Matrix m;
  symplectic_matrix(n, params, engine, m);
  return m;
}

MatrixSampler::MatrixSampler(const EnsembleSpec& spec, const RngStream& stream)
    : spec_(spec), engine_(make_engine(stream)), dim_(spec.matrix_dim()) {
  spec_.validate();
}

void MatrixSampler::next(Matrix& out) {
  ++step_;
  switch (spec_.family) {
    case Family::ShiftCocycle:
      out = shift_cocycle_matrix(std::get<ShiftParams>(spec_.params), step_);
      return;
    case Family::SymplecticWigner:
      symplectic_matrix(spec_.n, std::get<SymplecticParams>(spec_.params), engine_, out);
      return;
    case Family::Fixed:
      out = std::get<FixedParams>(spec_.params).matrix;
      return;
    default:
      sample_matrix(spec_, engine_, out);
  }
}

}  // namespace lyap
