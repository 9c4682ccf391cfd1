#include "lyap/chain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lyap {

namespace {

// Running sum of block increments with Welford variance.
class IncrementAccumulator {
 public:
  IncrementAccumulator(bool record, std::int64_t N) : record_(record) {
    if (record_) values_.reserve(static_cast<std::size_t>(N));
  }

  void add(double y) {
    sum_ += y;
    ++count_;
    const double delta = y - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (y - mean_);
    if (record_) values_.push_back(y);
  }

  ExponentEstimate finish(int order, std::int64_t N, int n) {
    ExponentEstimate est;
    est.order = order;
    est.N = N;
    est.n = n;
    est.value = sum_ / static_cast<double>(N);
    if (count_ > 1) {
      const double var = m2_ / static_cast<double>(count_ - 1);
      est.std_error = std::sqrt(var * static_cast<double>(count_)) / static_cast<double>(N);
    }
    est.increments = std::move(values_);
    return est;
  }

 private:
  bool record_;
  double sum_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  std::int64_t count_ = 0;
  std::vector<double> values_;
};

void mark_died(ExponentEstimate& est, std::int64_t step) {
  est.died = true;
  est.died_step = step;
}

void check_representable(double v) {
  if (!std::isfinite(v) || v < std::numeric_limits<double>::min() * 1e10 ||
      v > std::numeric_limits<double>::max() * 1e-10)
    throw std::overflow_error("chain norms left the representable range; lower renorm_every");
}

// The block's norm product is the collapse reference, so it must itself be
// representable. An exactly zero product means a zero factor and is left to
// the collapse test.
void check_block_scale(double scale) {
  if (scale != 0.0) check_representable(scale);
}

bool block_end(std::int64_t step, const ChainConfig& cfg) {
  return step % cfg.renorm_every == 0 || step == cfg.N;
}

void require_unit(const Vector& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > 1e-10)
    throw std::invalid_argument(std::string(name) + " must be a unit vector");
}

}  // namespace

void ChainConfig::validate() const {
  ensemble.validate();
  if (N < 1) throw std::invalid_argument("chain.N must be >= 1");
  if (renorm_every < 1 || renorm_every > N)
    throw std::invalid_argument("chain.renorm_every must lie in [1, N]");
}

ExponentEstimate top_exponent(const ChainConfig& config, const std::optional<Vector>& x0) {
  config.validate();
  MatrixSampler sampler(config.ensemble, config.rng);
  const int dim = sampler.dim();
  Vector x = x0.value_or(Vector::Unit(dim, 0));
  if (x.size() != dim) throw std::invalid_argument("top_exponent: x0 dimension mismatch");
  require_unit(x, "x0");

  IncrementAccumulator acc(config.record_increments, config.N);
  Matrix a;
  Vector tmp(dim);
  double scale = 1.0;  // product of |A|_F over the current block
  std::optional<std::int64_t> death;
  for (std::int64_t step = 1; step <= config.N; ++step) {
    sampler.next(a);
    tmp.noalias() = a * x;
    x.swap(tmp);
    scale *= a.norm();
    if (!block_end(step, config)) continue;
    check_block_scale(scale);
    const double nr = x.norm();
    if (!(nr > kCollapseTol * scale)) {
      death = step;
      break;
    }
    check_representable(nr);
    acc.add(std::log(nr));
    x /= nr;
    scale = 1.0;
  }
  ExponentEstimate est = acc.finish(1, config.N, dim);
  if (death) mark_died(est, *death);
  return est;
}

ExponentEstimate second_exponent_pair(const ChainConfig& config, const Vector& x0,
                                      const Vector& y0) {
  config.validate();
  MatrixSampler sampler(config.ensemble, config.rng);
  const int dim = sampler.dim();
  if (x0.size() != dim || y0.size() != dim)
    throw std::invalid_argument("second_exponent_pair: dimension mismatch");
  double vol = wedge_volume_2(x0, y0);
  if (!(vol > kCollapseTol * x0.norm() * y0.norm()))
    throw std::invalid_argument("second_exponent_pair: x0 and y0 are parallel");

  IncrementAccumulator acc(config.record_increments, config.N);
  Vector x = x0, y = y0, tx(dim), ty(dim);
  Matrix a;
  double scale = 1.0;
  std::optional<std::int64_t> death;
  for (std::int64_t step = 1; step <= config.N; ++step) {
    sampler.next(a);
    tx.noalias() = a * x;
    ty.noalias() = a * y;
    x.swap(tx);
    y.swap(ty);
    scale *= a.norm();
    if (!block_end(step, config)) continue;
    const double nx = x.norm();
    const double ny = y.norm();
    check_block_scale(scale);
    if (!(nx > kCollapseTol * scale) || !(ny > kCollapseTol * scale)) {
      death = step;
      break;
    }
    const double w = wedge_volume_2(x, y);
    if (!(w > kCollapseTol * nx * ny)) {
      death = step;
      break;
    }
    check_representable(w);
    acc.add(std::log(w) - std::log(vol));
    // Replace (x, y) by an orthonormal basis of the same plane.
    x /= nx;
    y -= x.dot(y) * x;
    y /= y.norm();
    vol = wedge_volume_2(x, y);
    scale = 1.0;
  }
  ExponentEstimate est = acc.finish(0, config.N, dim);
  if (death) mark_died(est, *death);
  return est;
}

std::vector<ExponentEstimate> spectrum_qr(const ChainConfig& config, int k) {
  config.validate();
  MatrixSampler sampler(config.ensemble, config.rng);
  const int dim = sampler.dim();
  if (k < 1 || k > dim) throw std::invalid_argument("spectrum_qr: k must lie in [1, n]");

  std::vector<IncrementAccumulator> accs(static_cast<std::size_t>(k),
                                         IncrementAccumulator(config.record_increments, config.N));
  Matrix q = Matrix::Identity(dim, k);
  Matrix y(dim, k);
  Matrix a;
  double scale = 1.0;
  std::optional<std::int64_t> death;
  for (std::int64_t step = 1; step <= config.N; ++step) {
    sampler.next(a);
    y.noalias() = a * q;
    q.swap(y);
    scale *= a.norm();
    if (!block_end(step, config)) continue;
    const Vector diag = qr_positive(q, y);
    q.swap(y);
    bool collapsed = false;
    check_block_scale(scale);
    for (int j = 0; j < k; ++j) collapsed |= !(diag(j) > kCollapseTol * scale);
    if (collapsed) {
      death = step;
      break;
    }
    for (int j = 0; j < k; ++j) {
      check_representable(diag(j));
      accs[static_cast<std::size_t>(j)].add(std::log(diag(j)));
    }
    scale = 1.0;
  }
  std::vector<ExponentEstimate> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    out.push_back(accs[static_cast<std::size_t>(j)].finish(j + 1, config.N, dim));
    if (death) mark_died(out.back(), *death);
  }
  return out;
}

ExponentEstimate least_exponent_distance(const ChainConfig& config) {
  config.validate();
  MatrixSampler sampler(config.ensemble, config.rng);
  const int dim = sampler.dim();
  if (dim < 2) throw std::invalid_argument("least_exponent_distance: needs n >= 2");

  IncrementAccumulator acc(config.record_increments, config.N);
  Matrix frame = Matrix::Identity(dim, dim - 1);
  Matrix tmp(dim, dim - 1);
  Matrix a;
  Eigen::PartialPivLU<Matrix> lu(dim);
  double block_sum = 0.0;
  std::optional<std::int64_t> death;
  for (std::int64_t step = 1; step <= config.N; ++step) {
    sampler.next(a);
    Vector v;
    try {
      v = orthocomplement_vector(frame);
    } catch (const std::invalid_argument&) {
      death = step;
      break;
    }
    lu.compute(a);
    const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot > kCollapseTol * dim * a.cwiseAbs().maxCoeff())) {
      death = step;
      break;
    }
    // dist(A v, span(A U)) = 1 / |A^{-T} v|: A^{-T} v is normal to A U.
    const Vector w = lu.transpose().solve(v);
    block_sum -= std::log(w.norm());
    tmp.noalias() = a * frame;
    frame.swap(tmp);
    if (!block_end(step, config)) continue;
    acc.add(block_sum);
    block_sum = 0.0;
    const Vector diag = qr_positive(frame, tmp);
    frame.swap(tmp);
    if (!(diag.minCoeff() > 1e-10 * diag.maxCoeff())) {
      death = step;
      break;
    }
  }
  ExponentEstimate est = acc.finish(dim, config.N, dim);
  if (death) mark_died(est, *death);
  return est;
}

}  // namespace lyap
