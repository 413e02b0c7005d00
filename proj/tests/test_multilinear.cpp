#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oplax/multilinear.hpp"

using namespace oplax;

TEST_CASE("make_operation stores coefficients as given") {
  const Operation m = make_operation(2, 1, {0, -1, 1, 0});
  CHECK(m.dim() == 2);
  CHECK(m.degree() == 1);
  CHECK(m.reduced_degree() == 0);
  const std::size_t i10[] = {0};
  CHECK(m.at(1, i10) == 1.0);
  const std::size_t i01[] = {1};
  CHECK(m.at(0, i01) == -1.0);

  const Operation z = make_operation(2, 2, std::vector<double>(8, 0.0));
  CHECK(z.reduced_degree() == 1);
  CHECK(frobenius_norm(z) == 0.0);
}

TEST_CASE("make_operation rejects bad input") {
  try {
    make_operation(2, 2, std::vector<double>(7, 0.0));
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("expected 8") != std::string::npos);
  }
  std::vector<double> c(8, 0.0);
  c[5] = std::numeric_limits<double>::quiet_NaN();
  try {
    make_operation(2, 2, c);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("index 5") != std::string::npos);
  }
  CHECK_THROWS_AS(make_operation(2, 0, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_operation(0, 1, {}), std::invalid_argument);
}

TEST_CASE("coefficient read-back is bit-identical") {
  std::mt19937_64 rng(11);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const Operation f = random_operation(rng, d, n);
      const std::vector<double> copy(f.coeffs().begin(), f.coeffs().end());
      const Operation g = make_operation(d, n, copy);
      for (std::size_t k = 0; k < copy.size(); ++k) CHECK(g[k] == copy[k]);
    }
  }
}

TEST_CASE("identity_op") {
  CHECK(identity_op(1)[0] == 1.0);
  const Operation i2 = identity_op(2);
  CHECK(std::vector<double>(i2.coeffs().begin(), i2.coeffs().end()) ==
        std::vector<double>{1, 0, 0, 1});
  const Operation i3 = identity_op(3);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(i3[r * 3 + c] == (r == c ? 1.0 : 0.0));
  }
  CHECK_THROWS_AS(identity_op(0), std::invalid_argument);
}

TEST_CASE("eval examples") {
  const Vector x{3, 4};
  CHECK(eval(identity_op(2), std::vector<Vector>{x}) == Vector{3, 4});

  std::vector<double> c(8, 0.0);
  c[0] = 1.0;  // mu^1_11
  const Operation mu = make_operation(2, 2, c);
  CHECK(eval(mu, std::vector<Vector>{{1, 0}, {1, 0}}) == Vector{1, 0});
  // bilinearity: (2 e1)(3 e1) = 6 mu(e1, e1)
  CHECK(eval(mu, std::vector<Vector>{{2, 0}, {3, 0}}) == Vector{6, 0});

  CHECK_THROWS_AS(eval(mu, std::vector<Vector>{{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(eval(mu, std::vector<Vector>{{1, 0}, {1, 0, 0}}), std::invalid_argument);
}

TEST_CASE("eval is linear in every slot") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        const Operation f = random_operation(rng, d, n);
        std::vector<Vector> args(n, Vector(d));
        for (auto& a : args) {
          for (auto& v : a) v = u(rng);
        }
        Vector y(d);
        for (auto& v : y) v = u(rng);
        const double a = u(rng), b = u(rng);
        for (std::size_t slot = 0; slot < n; ++slot) {
          auto mixed = args;
          for (std::size_t k = 0; k < d; ++k) mixed[slot][k] = a * args[slot][k] + b * y[k];
          auto with_y = args;
          with_y[slot] = y;
          const Vector lhs = eval(f, mixed);
          const Vector fx = eval(f, args);
          const Vector fy = eval(f, with_y);
          for (std::size_t k = 0; k < d; ++k) {
            CHECK(lhs[k] == doctest::Approx(a * fx[k] + b * fy[k]).epsilon(1e-14).scale(1.0));
          }
        }
      }
    }
  }
}

TEST_CASE("linear_comb") {
  std::mt19937_64 rng(5);
  const Operation f = random_operation(rng, 2, 2);
  CHECK(frobenius_norm(linear_comb(1, f, -1, f)) == 0.0);

  const Operation two = linear_comb(2, identity_op(2), 0, identity_op(2));
  CHECK(std::vector<double>(two.coeffs().begin(), two.coeffs().end()) ==
        std::vector<double>{2, 0, 0, 2});

  std::vector<double> ca(8, 0.0), cb(8, 0.0);
  ca[0] = 1.5;
  cb[7] = -2.0;
  const Operation sum = linear_comb(1, make_operation(2, 2, ca), 1, make_operation(2, 2, cb));
  CHECK(sum[0] == 1.5);
  CHECK(sum[7] == -2.0);

  CHECK_THROWS_AS(linear_comb(1, f, 1, identity_op(2)), std::invalid_argument);
  CHECK_THROWS_AS(linear_comb(1, f, 1, random_operation(rng, 3, 2)), std::invalid_argument);
}

TEST_CASE("frobenius_norm") {
  CHECK(frobenius_norm(Operation::zero(3, 2)) == 0.0);
  CHECK(frobenius_norm(identity_op(2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-16));
  std::vector<double> c(8, 0.0);
  c[1] = 1.0;
  c[6] = -1.0;
  CHECK(frobenius_norm(make_operation(2, 2, c)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-16));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const Operation f = random_operation(rng, 3, 2);
    const double a = u(rng);
    const double lhs = frobenius_norm(linear_comb(a, f, 0, f));
    const double rhs = std::abs(a) * frobenius_norm(f);
    CHECK(std::abs(lhs - rhs) <= 1e-15 * rhs);
  }
}
