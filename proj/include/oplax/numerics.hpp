#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace oplax {

/// Raised when a fixed-step integration produces a non-finite value.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

template <std::size_t N>
using StateVec = std::array<double, N>;

/// One classical Runge-Kutta step for an autonomous system y' = rhs(y).
template <std::size_t N, typename Rhs>
StateVec<N> rk4_step(const StateVec<N>& y, double h, Rhs&& rhs) {
  auto axpy = [](const StateVec<N>& base, double a, const StateVec<N>& k) {
    StateVec<N> r;
    for (std::size_t n = 0; n < N; ++n) r[n] = base[n] + a * k[n];
    return r;
  };
  const StateVec<N> k1 = rhs(y);
  const StateVec<N> k2 = rhs(axpy(y, 0.5 * h, k1));
  const StateVec<N> k3 = rhs(axpy(y, 0.5 * h, k2));
  const StateVec<N> k4 = rhs(axpy(y, h, k3));
  StateVec<N> out;
  for (std::size_t n = 0; n < N; ++n) {
    out[n] = y[n] + (h / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
  }
  return out;
}

/// Fixed-step RK4 from t = 0 to t_end; visit(k, t_k, y_k) is called for every
/// sample including k = 0.
template <std::size_t N, typename Rhs, typename Visit>
void rk4_sweep(const StateVec<N>& y0, double t_end, std::size_t steps, Rhs&& rhs, Visit&& visit) {
  if (steps == 0) throw std::invalid_argument("rk4: steps must be positive");
  if (!std::isfinite(t_end)) throw std::invalid_argument("rk4: t_end must be finite");
  const double h = t_end / static_cast<double>(steps);
  StateVec<N> y = y0;
  visit(std::size_t{0}, 0.0, y);
  for (std::size_t k = 1; k <= steps; ++k) {
    y = rk4_step<N>(y, h, rhs);
    for (double v : y) {
      if (!std::isfinite(v)) throw IntegrationError("rk4: non-finite state", k);
    }
    visit(k, static_cast<double>(k) * h, y);
  }
}

/// (f(x + h) - f(x - h)) / (2h).
template <typename F>
auto central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Least-squares slope of log(residual) against log(h): the observed order of
/// a truncation error. Zero residuals are not allowed.
inline double observed_order(std::span<const double> h, std::span<const double> residual) {
  if (h.size() != residual.size() || h.size() < 2) {
    throw std::invalid_argument("observed_order: need at least two matching samples");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!(h[k] > 0) || !(residual[k] > 0)) {
      throw std::invalid_argument("observed_order: samples must be positive");
    }
    const double x = std::log(h[k]);
    const double y = std::log(residual[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oplax
