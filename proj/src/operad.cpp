#include "oplax/operad.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace oplax {

Operation partial_compose(const Operation& f, const Operation& g, std::size_t i) {
  if (f.dim() != g.dim()) throw std::invalid_argument("partial_compose: dimension mismatch");
  const std::size_t m = f.degree();
  const std::size_t n = g.degree();
  if (i >= m) {
    throw std::out_of_range("partial_compose: slot " + std::to_string(i) +
                            " outside [0, " + std::to_string(m - 1) + "]");
  }

  const std::size_t d = f.dim();
  const double sign = parity_sign(static_cast<long long>(i) * g.reduced_degree());
  const std::size_t pre = ipow(d, i);
  const std::size_t mid = ipow(d, n);
  const std::size_t post = ipow(d, m - 1 - i);

  // result[a][P][Q][S] = sign * sum_s f[a][P][s][S] * g[s][Q]
  std::vector<double> c(d * pre * mid * post, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t p = 0; p < pre; ++p) {
      const std::size_t f_row = (a * pre + p) * d;
      const std::size_t r_row = (a * pre + p) * mid;
      for (std::size_t s = 0; s < d; ++s) {
        const std::size_t f_base = (f_row + s) * post;
        for (std::size_t q = 0; q < mid; ++q) {
          const double gv = g[s * mid + q];
          if (gv == 0.0) continue;
          const std::size_t r_base = (r_row + q) * post;
          for (std::size_t t = 0; t < post; ++t) c[r_base + t] += f[f_base + t] * gv;
        }
      }
    }
  }
  if (sign < 0) {
    for (auto& x : c) x = -x;
  }
  return Operation(d, m + n - 1, std::move(c));
}

Operation total_compose(const Operation& f, const Operation& g) {
  Operation acc = partial_compose(f, g, 0);
  for (std::size_t i = 1; i < f.degree(); ++i) {
    acc = linear_comb(1.0, acc, 1.0, partial_compose(f, g, i));
  }
  return acc;
}

Operation bracket(const Operation& f, const Operation& g) {
  const double s = parity_sign(static_cast<long long>(f.reduced_degree()) * g.reduced_degree());
  return linear_comb(1.0, total_compose(f, g), -s, total_compose(g, f));
}

CompositionCase composition_case(const Operation& h, const Operation& f, std::size_t i,
                                 std::size_t j) {
  const std::size_t rh = h.degree() - 1;
  const std::size_t rf = f.degree() - 1;
  if (i > rh || j > rh + rf) {
    throw std::out_of_range("composition relation: need i <= " + std::to_string(rh) +
                            " and j <= " + std::to_string(rh + rf) + ", got i=" +
                            std::to_string(i) + " j=" + std::to_string(j));
  }
  if (j + 1 <= i) return CompositionCase::kBefore;
  if (j <= i + rf) return CompositionCase::kInside;
  return CompositionCase::kAfter;
}

double composition_relation_residual(const Operation& h, const Operation& f, const Operation& g,
                                     std::size_t i, std::size_t j) {
  const CompositionCase which = composition_case(h, f, i, j);
  const Operation lhs = partial_compose(partial_compose(h, f, i), g, j);
  const std::size_t rf = f.degree() - 1;
  const std::size_t rg = g.degree() - 1;
  const double s = parity_sign(static_cast<long long>(rf * rg));

  switch (which) {
    case CompositionCase::kBefore:
      return frobenius_norm(
          linear_comb(1.0, lhs, -s, partial_compose(partial_compose(h, g, j), f, i + rg)));
    case CompositionCase::kInside:
      return frobenius_norm(
          linear_comb(1.0, lhs, -1.0, partial_compose(h, partial_compose(f, g, j - i), i)));
    case CompositionCase::kAfter:
      return frobenius_norm(
          linear_comb(1.0, lhs, -s, partial_compose(partial_compose(h, g, j - rf), f, i)));
  }
  return 0.0;
}

double unit_residual(const Operation& f) {
  const Operation unit = identity_op(f.dim());
  double worst = frobenius_norm(linear_comb(1.0, partial_compose(unit, f, 0), -1.0, f));
  for (std::size_t i = 0; i < f.degree(); ++i) {
    worst = std::max(worst,
                     frobenius_norm(linear_comb(1.0, partial_compose(f, unit, i), -1.0, f)));
  }
  return worst;
}

double antisymmetry_residual(const Operation& f, const Operation& g) {
  const double s = parity_sign(static_cast<long long>(f.reduced_degree()) * g.reduced_degree());
  return frobenius_norm(linear_comb(1.0, bracket(f, g), s, bracket(g, f)));
}

double jacobi_residual(const Operation& f, const Operation& g, const Operation& h) {
  const long long rf = f.reduced_degree();
  const long long rg = g.reduced_degree();
  const long long rh = h.reduced_degree();
  const Operation t1 = bracket(bracket(f, g), h);
  const Operation t2 = bracket(bracket(g, h), f);
  const Operation t3 = bracket(bracket(h, f), g);
  const Operation sum =
      linear_comb(1.0, linear_comb(parity_sign(rf * rh), t1, parity_sign(rg * rf), t2),
                  parity_sign(rh * rg), t3);
  return frobenius_norm(sum);
}

double normalized_residual(double residual, double norm_product) noexcept {
  return residual / (1.0 + norm_product);
}

}  // namespace oplax
