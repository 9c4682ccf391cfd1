#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lyap/rng.hpp"

namespace lyap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Family {
  Gaussian,
  Rademacher,
  UniformSym,
  TwoPoint,
  ShiftCocycle,
  SymplecticWigner,
  Fixed,  // deterministic matrix, used as a test hook
};

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view s);

/// True for the families whose entries are iid scaled atoms.
bool is_iid(Family f);

/// Two-valued atom: `a` with probability p, `b` otherwise. The constructor
/// affinely normalizes the pair to mean 0 and variance 1.
class TwoPointAtom {
 public:
  TwoPointAtom(double p, double a, double b);

  double p() const { return p_; }
  double raw_a() const { return raw_a_; }
  double raw_b() const { return raw_b_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double p_, raw_a_, raw_b_, a_, b_;
};

/// f(x) = cos[0] + sum_k cos[k] cos(2 pi k x) + sin[k-1] sin(2 pi k x).
struct TrigPolynomial {
  std::vector<double> cos;
  std::vector<double> sin;  // sin[0] multiplies sin(2 pi x)

  double operator()(double x) const;
};

struct ShiftParams {
  double E = 0.0;
  double omega = 0.0;
  double x0 = 0.0;
  TrigPolynomial f;
};

struct SymplecticParams {
  double lambda = 0.0;
  double E = 0.0;
  /// Variance of every upper-triangle (and diagonal) Wigner entry; 1/n when unset.
  std::optional<double> wigner_variance;
};

struct FixedParams {
  Matrix matrix;
};

using ModelParams =
    std::variant<std::monostate, TwoPointAtom, ShiftParams, SymplecticParams, FixedParams>;

/// Law of one factor A_i of the product chain.
struct EnsembleSpec {
  Family family = Family::Gaussian;
  int n = 1;
  /// Entry scale for iid families; 1/sqrt(n) when unset.
  std::optional<double> scale;
  double subgaussian_K = 1.0;
  ModelParams params;

  static EnsembleSpec gaussian(int n, std::optional<double> scale = {});
  static EnsembleSpec rademacher(int n, std::optional<double> scale = {});
  static EnsembleSpec uniform_sym(int n, std::optional<double> scale = {});
  static EnsembleSpec two_point(int n, TwoPointAtom atom, std::optional<double> scale = {});
  static EnsembleSpec shift_cocycle(ShiftParams p);
  static EnsembleSpec symplectic(int n, SymplecticParams p);
  static EnsembleSpec fixed(Matrix m);

  double entry_scale() const;
  /// Size of the square matrices this ensemble produces.
  int matrix_dim() const;
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// One unscaled atom xi (mean 0, variance 1) of an iid family.
double sample_atom(const EnsembleSpec& spec, Engine& engine);

/// Fills `out` with iid entries scale * xi, row by row.
void sample_matrix(const EnsembleSpec& spec, Engine& engine, Matrix& out);
Matrix sample_matrix(const EnsembleSpec& spec, Engine& engine);

/// [[f(x0 + j omega mod 1) - E, -1], [1, 0]]
Matrix shift_cocycle_matrix(const ShiftParams& params, std::int64_t j);

/// [[lambda W - E I, -I], [I, 0]] with W symmetric Gaussian.
void symplectic_matrix(int n, const SymplecticParams& params, Engine& engine, Matrix& out);
Matrix symplectic_matrix(int n, const SymplecticParams& params, Engine& engine);

/// Produces the sequence A_1, A_2, ... of a chain for any family.
class MatrixSampler {
 public:
  MatrixSampler(const EnsembleSpec& spec, const RngStream& stream);

  int dim() const { return dim_; }
  /// Writes the next factor into `out`, resizing it if needed.
  void next(Matrix& out);

 private:
  EnsembleSpec spec_;
  Engine engine_;
  int dim_;
  std::int64_t step_ = 0;
};

}  // namespace lyap
