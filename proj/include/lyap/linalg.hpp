#pragma once

#include <Eigen/Dense>

namespace lyap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Area of the parallelogram spanned by u and v, i.e.
/// sqrt(|u|^2 |v|^2 - <u,v>^2), evaluated without cancellation.
double wedge_volume_2(const Vector& u, const Vector& v);

/// Unit normal of the hyperplane spanned by the n-1 columns of `frame`.
/// Sign: the largest-magnitude coordinate is positive (lowest index on ties).
/// Throws std::invalid_argument if the columns are numerically rank deficient.
Vector orthocomplement_vector(const Matrix& frame);

/// Thin QR of `m` (rows >= cols) with R's diagonal made nonnegative.
/// `q` receives the orthonormal factor; returns diag(R).
Vector qr_positive(const Matrix& m, Matrix& q);

/// Machine-epsilon multiple used to call a norm, volume or pivot zero.
inline constexpr double kCollapseTol = 64.0 * 2.220446049250313e-16;

}  // namespace lyap
