#include "oplax/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oplax {

std::size_t ipow(std::size_t base, std::size_t exp) noexcept {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

Operation::Operation(std::size_t dim, std::size_t degree, std::vector<double> coeffs)
    : dim_(dim), degree_(degree), coeffs_(std::move(coeffs)) {
  if (dim_ == 0) throw std::invalid_argument("operation: dim must be positive");
  if (degree_ == 0) throw std::invalid_argument("operation: degree 0 is not supported");
  const std::size_t expected = ipow(dim_, degree_ + 1);
  if (coeffs_.size() != expected) {
    throw std::invalid_argument("operation: expected " + std::to_string(expected) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (!std::isfinite(coeffs_[k])) {
      throw std::invalid_argument("operation: non-finite coefficient at index " +
                                  std::to_string(k));
    }
  }
}

Operation Operation::zero(std::size_t dim, std::size_t degree) {
  if (dim == 0 || degree == 0) throw std::invalid_argument("operation: dim and degree must be positive");
  return Operation(dim, degree, std::vector<double>(ipow(dim, degree + 1), 0.0));
}

double Operation::at(std::size_t out, std::span<const std::size_t> in) const {
  if (in.size() != degree_) throw std::invalid_argument("operation: index arity mismatch");
  std::size_t flat = out;
  for (std::size_t j : in) flat = flat * dim_ + j;
  return coeffs_.at(flat);
}

Operation make_operation(std::size_t dim, std::size_t degree, std::vector<double> coeffs) {
  return Operation(dim, degree, std::move(coeffs));
}

Operation identity_op(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("identity_op: dim must be positive");
  std::vector<double> c(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) c[i * dim + i] = 1.0;
  return Operation(dim, 1, std::move(c));
}

Vector eval(const Operation& op, std::span<const Vector> args) {
  const std::size_t d = op.dim();
  const std::size_t n = op.degree();
  if (args.size() != n) {
    throw std::invalid_argument("eval: expected " + std::to_string(n) + " arguments, got " +
                                std::to_string(args.size()));
  }
  for (const auto& a : args) {
    if (a.size() != d) throw std::invalid_argument("eval: argument dimension mismatch");
  }

  // Sweep the input multi-index with an odometer; the weight of each basis
  // tuple is the product of the matching argument coordinates.
  const std::size_t block = ipow(d, n);
  Vector out(d, 0.0);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t flat = 0; flat < block; ++flat) {
    double w = 1.0;
    for (std::size_t s = 0; s < n && w != 0.0; ++s) w *= args[s][idx[s]];
    if (w != 0.0) {
      for (std::size_t i = 0; i < d; ++i) out[i] += op[i * block + flat] * w;
    }
    for (std::size_t s = n; s-- > 0;) {
      if (++idx[s] < d) break;
      idx[s] = 0;
    }
  }
  return out;
}

Operation linear_comb(double a, const Operation& f, double b, const Operation& g) {
  if (f.dim() != g.dim() || f.degree() != g.degree()) {
    throw std::invalid_argument("linear_comb: shape mismatch");
  }
  std::vector<double> c(f.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a * f[k] + b * g[k];
  return Operation(f.dim(), f.degree(), std::move(c));
}

double frobenius_norm(const Operation& f) {
  double s = 0.0;
  for (double x : f.coeffs()) s += x * x;
  return std::sqrt(s);
}

double max_abs_diff(const Operation& f, const Operation& g) {
  if (f.dim() != g.dim() || f.degree() != g.degree()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k] - g[k]));
  return m;
}

Operation random_operation(std::mt19937_64& rng, std::size_t dim, std::size_t degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(ipow(dim, degree + 1));
  for (auto& x : c) x = u(rng);
  return Operation(dim, degree, std::move(c));
}

}  // namespace oplax
