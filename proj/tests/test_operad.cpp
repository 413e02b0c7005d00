#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oplax/operad.hpp"
#include "test_support.hpp"

using namespace oplax;
using oplax::testing::compose_by_evaluation;

namespace {

// d = 2, mu with only mu^1_11 = 1, and M with M e1 = e2, M e2 = -e1.
Operation sample_mu() {
  std::vector<double> c(8, 0.0);
  c[0] = 1.0;
  return make_operation(2, 2, c);
}
Operation rotation() { return make_operation(2, 1, {0, -1, 1, 0}); }

/// Expected binary operation from 1-based (i, j, k) -> value entries.
Operation binary(std::initializer_list<std::pair<std::array<int, 3>, double>> entries) {
  std::vector<double> c(8, 0.0);
  for (const auto& [ijk, v] : entries) c[4 * (ijk[0] - 1) + 2 * (ijk[1] - 1) + (ijk[2] - 1)] = v;
  return make_operation(2, 2, c);
}

}  // namespace

TEST_CASE("partial composition of matrices is the matrix product") {
  std::mt19937_64 rng(1);
  const Operation f = random_operation(rng, 3, 1);
  const Operation g = random_operation(rng, 3, 1);
  const Operation fg = partial_compose(f, g, 0);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      double acc = 0;
      for (std::size_t s = 0; s < 3; ++s) acc += f[r * 3 + s] * g[s * 3 + c];
      CHECK(fg[r * 3 + c] == doctest::Approx(acc).epsilon(1e-15));
    }
  }
}

TEST_CASE("partial composition matches evaluation oracle") {
  std::mt19937_64 rng(2);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t m = 1; m <= 3; ++m) {
      for (std::size_t n = 1; n <= 3; ++n) {
        const Operation f = random_operation(rng, d, m);
        const Operation g = random_operation(rng, d, n);
        for (std::size_t i = 0; i < m; ++i) {
          CHECK(max_abs_diff(partial_compose(f, g, i), compose_by_evaluation(f, g, i)) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("partial composition with the unit") {
  std::mt19937_64 rng(4);
  const Operation f = random_operation(rng, 2, 3);
  const Operation unit = identity_op(2);
  CHECK(max_abs_diff(partial_compose(unit, f, 0), f) == 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(max_abs_diff(partial_compose(f, unit, i), f) == 0.0);
}

TEST_CASE("partial composition of mu and the rotation") {
  CHECK(max_abs_diff(partial_compose(sample_mu(), rotation(), 0), binary({{{1, 2, 1}, -1.0}})) == 0);
  CHECK(max_abs_diff(partial_compose(sample_mu(), rotation(), 1), binary({{{1, 1, 2}, -1.0}})) == 0);
}

TEST_CASE("partial composition errors") {
  CHECK_THROWS_AS(partial_compose(sample_mu(), rotation(), 2), std::out_of_range);
  CHECK_THROWS_AS(partial_compose(sample_mu(), identity_op(3), 0), std::invalid_argument);
}

TEST_CASE("partial composition sign follows i|g|") {
  // Inserting a binary g (|g| = 1) into slot 1 of a binary f flips the sign.
  std::mt19937_64 rng(6);
  const Operation f = random_operation(rng, 2, 2);
  const Operation g = random_operation(rng, 2, 2);
  const Operation unsigned_slot1 = oplax::testing::tabulate(2, 3, [&](const std::vector<Vector>& x) {
    return eval(f, std::vector<Vector>{x[0], eval(g, std::vector<Vector>{x[1], x[2]})});
  });
  CHECK(max_abs_diff(partial_compose(f, g, 1), linear_comb(-1.0, unsigned_slot1, 0.0, unsigned_slot1)) <= 1e-15);
}

TEST_CASE("total composition") {
  std::mt19937_64 rng(8);
  const Operation f = random_operation(rng, 2, 1);
  const Operation g = random_operation(rng, 2, 1);
  CHECK(max_abs_diff(total_compose(f, g), partial_compose(f, g, 0)) == 0.0);

  CHECK(max_abs_diff(total_compose(sample_mu(), rotation()),
                     binary({{{1, 2, 1}, -1.0}, {{1, 1, 2}, -1.0}})) == 0.0);
  CHECK(max_abs_diff(total_compose(rotation(), sample_mu()), binary({{{2, 1, 1}, 1.0}})) == 0.0);
  CHECK(total_compose(random_operation(rng, 2, 3), random_operation(rng, 2, 2)).degree() == 4);
}

TEST_CASE("bracket") {
  std::mt19937_64 rng(10);
  const Operation f = random_operation(rng, 3, 1);
  const Operation g = random_operation(rng, 3, 1);
  const Operation br = bracket(f, g);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      double fg = 0, gf = 0;
      for (std::size_t s = 0; s < 3; ++s) {
        fg += f[r * 3 + s] * g[s * 3 + c];
        gf += g[r * 3 + s] * f[s * 3 + c];
      }
      CHECK(std::abs(br[r * 3 + c] - (fg - gf)) <= 1e-15);
    }
  }
  CHECK(frobenius_norm(bracket(f, f)) == 0.0);

  CHECK(max_abs_diff(bracket(rotation(), sample_mu()),
                     binary({{{2, 1, 1}, 1.0}, {{1, 2, 1}, 1.0}, {{1, 1, 2}, 1.0}})) == 0.0);
}

TEST_CASE("bracket degree bookkeeping and exact graded antisymmetry") {
  std::mt19937_64 rng(12);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t m = 1; m <= 3; ++m) {
      for (std::size_t n = 1; n <= 3; ++n) {
        const Operation f = random_operation(rng, d, m);
        const Operation g = random_operation(rng, d, n);
        CHECK(bracket(f, g).degree() == m + n - 1);
        CHECK(antisymmetry_residual(f, g) == 0.0);
      }
    }
  }
}

TEST_CASE("composition relation cases and ranges") {
  std::mt19937_64 rng(14);
  const Operation h = random_operation(rng, 2, 2);
  const Operation f = random_operation(rng, 2, 2);
  // |h| = 1, |f| = 1: j ranges over 0..2
  CHECK(composition_case(h, f, 1, 0) == CompositionCase::kBefore);
  CHECK(composition_case(h, f, 0, 0) == CompositionCase::kInside);
  CHECK(composition_case(h, f, 0, 1) == CompositionCase::kInside);
  CHECK(composition_case(h, f, 0, 2) == CompositionCase::kAfter);
  CHECK(composition_case(h, f, 1, 1) == CompositionCase::kInside);
  CHECK(composition_case(h, f, 1, 2) == CompositionCase::kInside);
  CHECK_THROWS_AS(composition_case(h, f, 2, 0), std::out_of_range);
  CHECK_THROWS_AS(composition_case(h, f, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(composition_relation_residual(h, f, f, 0, 3), std::out_of_range);
}

TEST_CASE("composition relation residual examples") {
  std::mt19937_64 rng(16);
  const Operation a = random_operation(rng, 3, 1);
  const Operation b = random_operation(rng, 3, 1);
  const Operation c = random_operation(rng, 3, 1);
  CHECK(composition_relation_residual(a, b, c, 0, 0) <= 1e-15);

  const Operation h = random_operation(rng, 2, 2);
  const Operation f = random_operation(rng, 2, 2);
  const Operation g = random_operation(rng, 2, 1);
  CHECK(composition_relation_residual(h, f, g, 0, 1) <= 1e-12);

  const Operation f1 = random_operation(rng, 2, 1);
  CHECK(composition_relation_residual(h, f1, g, 1, 0) <= 1e-12);
}

TEST_CASE("composition relations hold for every branch and every valid (i, j)") {
  std::mt19937_64 rng(18);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t nh = 1; nh <= 3; ++nh) {
      for (std::size_t nf = 1; nf <= 3; ++nf) {
        for (std::size_t ng = 1; ng <= 3; ++ng) {
          const Operation h = random_operation(rng, d, nh);
          const Operation f = random_operation(rng, d, nf);
          const Operation g = random_operation(rng, d, ng);
          const double scale = frobenius_norm(h) * frobenius_norm(f) * frobenius_norm(g);
          for (std::size_t i = 0; i < nh; ++i) {
            for (std::size_t j = 0; j < nh + nf - 1; ++j) {
              CHECK(normalized_residual(composition_relation_residual(h, f, g, i, j), scale) <=
                    1e-12);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("unit residual") {
  std::mt19937_64 rng(20);
  CHECK(unit_residual(identity_op(2)) == 0.0);
  CHECK(unit_residual(random_operation(rng, 2, 2)) == 0.0);
  CHECK(unit_residual(random_operation(rng, 3, 3)) == 0.0);
}

TEST_CASE("jacobi residual") {
  std::mt19937_64 rng(22);
  const Operation a = random_operation(rng, 3, 1);
  const Operation b = random_operation(rng, 3, 1);
  const Operation c = random_operation(rng, 3, 1);
  CHECK(jacobi_residual(a, b, c) <= 1e-14);

  const Operation mu = random_operation(rng, 2, 2);
  CHECK(normalized_residual(jacobi_residual(mu, mu, mu), std::pow(frobenius_norm(mu), 3)) <= 1e-12);

  for (int trial = 0; trial < 100; ++trial) {
    const Operation f = random_operation(rng, 2, 1);
    const Operation g = random_operation(rng, 2, 2);
    const Operation h = random_operation(rng, 2, 2);
    const double scale = frobenius_norm(f) * frobenius_norm(g) * frobenius_norm(h);
    CHECK(normalized_residual(jacobi_residual(f, g, h), scale) <= 1e-12);
  }
}

TEST_CASE("wrong sign in the jacobi identity is detected") {
  // Guard against a residual that is trivially zero: dropping the grading
  // signs must break the identity for odd-degree inputs.
  std::mt19937_64 rng(24);
  const Operation f = random_operation(rng, 2, 2);
  const Operation g = random_operation(rng, 2, 2);
  const Operation h = random_operation(rng, 2, 3);
  const Operation plain = linear_comb(
      1.0, linear_comb(1.0, bracket(bracket(f, g), h), 1.0, bracket(bracket(g, h), f)), 1.0,
      bracket(bracket(h, f), g));
  CHECK(frobenius_norm(plain) > 1e-3);
}
