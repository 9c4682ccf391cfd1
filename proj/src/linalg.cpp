#include "lyap/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace lyap {

double wedge_volume_2(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("wedge_volume_2: dimension mismatch");
  const double a = u.norm();
  const double b = v.norm();
  if (a == 0.0 || b == 0.0) return 0.0;
  const Vector uh = u / a;
  const Vector vh = v / b;
  // For unit vectors |uh ^ vh| = |uh - vh| |uh + vh| / 2.
  return a * b * 0.5 * (uh - vh).norm() * (uh + vh).norm();
}

Vector orthocomplement_vector(const Matrix& frame) {
  const auto n = frame.rows();
  if (frame.cols() != n - 1)
    throw std::invalid_argument("orthocomplement_vector: need n-1 vectors in dimension n");
  if (n == 1) return Vector::Ones(1);

  Eigen::HouseholderQR<Matrix> qr(frame);
  const Matrix r = qr.matrixQR().topRows(n - 1).triangularView<Eigen::Upper>();
  const double scale = frame.colwise().norm().maxCoeff();
  for (Eigen::Index j = 0; j < n - 1; ++j)
    if (!(std::abs(r(j, j)) > 1e-10 * scale))
      throw std::invalid_argument("orthocomplement_vector: frame is rank deficient");

  Vector v = qr.householderQ() * Vector::Unit(n, n - 1);
  Eigen::Index imax = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
  if (v(imax) < 0.0) v = -v;
  return v / v.norm();
}

Vector qr_positive(const Matrix& m, Matrix& q) {
  const auto rows = m.rows();
  const auto cols = m.cols();
  Eigen::HouseholderQR<Matrix> qr(m);
  q = qr.householderQ() * Matrix::Identity(rows, cols);
  Vector diag = qr.matrixQR().diagonal().head(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (diag(j) < 0.0) {
      diag(j) = -diag(j);
      q.col(j) = -q.col(j);
    }
  }
  return diag;
}

}  // namespace lyap
