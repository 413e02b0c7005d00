#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace oplax {

/// A vector of V = R^d in the standard basis e_1, ..., e_d.
using Vector = std::vector<double>;

/// Dense coefficient tensor of a multilinear map V^{(x)n} -> V.
///
/// Entry c[i][j_1]...[j_n] is the coefficient of e_i in op(e_{j_1}, ..., e_{j_n}).
/// Storage is row-major with the output index i outermost, so for a binary
/// operation on R^2 the structure constant mu^1_{11} lives at coeffs()[0] and
/// mu^2_{21} at coeffs()[4*1 + 2*1 + 0] (internal indices are 0-based).
///
/// Degree 0 (constants) is not representable.
class Operation {
 public:
  /// Throws std::invalid_argument on zero dim/degree, a length other than
  /// dim^(degree+1), or a non-finite coefficient.
  Operation(std::size_t dim, std::size_t degree, std::vector<double> coeffs);

  static Operation zero(std::size_t dim, std::size_t degree);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t degree() const noexcept { return degree_; }
  /// |f| = degree - 1; every sign in the operad calculus is a parity of this.
  int reduced_degree() const noexcept { return static_cast<int>(degree_) - 1; }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient of e_out in op(e_{in[0]}, ..., e_{in[n-1]}).
  double at(std::size_t out, std::span<const std::size_t> in) const;
  double operator[](std::size_t flat) const { return coeffs_[flat]; }

 private:
  std::size_t dim_;
  std::size_t degree_;
  std::vector<double> coeffs_;
};

Operation make_operation(std::size_t dim, std::size_t degree, std::vector<double> coeffs);

/// Unit of the endomorphism operad: the d x d identity as a degree-1 operation.
Operation identity_op(std::size_t dim);

/// Evaluates op on its arguments; multilinear in every slot.
Vector eval(const Operation& op, std::span<const Vector> args);

/// a*f + b*g, coefficientwise.
Operation linear_comb(double a, const Operation& f, double b, const Operation& g);

double frobenius_norm(const Operation& f);

/// Largest absolute coefficient difference; shapes must agree.
double max_abs_diff(const Operation& f, const Operation& g);

/// Coefficients drawn uniformly from [-1, 1].
Operation random_operation(std::mt19937_64& rng, std::size_t dim, std::size_t degree);

/// d^n without floating point.
std::size_t ipow(std::size_t base, std::size_t exp) noexcept;

}  // namespace oplax
