#pragma once

#include <cstddef>

#include "oplax/multilinear.hpp"

// Compositions and Gerstenhaber brackets in the endomorphism operad of R^d,
// together with residual functions for each operad axiom. Residuals are
// absolute Frobenius norms; use normalized_residual() to compare against a
// scale-free tolerance.

namespace oplax {

/// (-1)^k computed from parity.
constexpr double parity_sign(long long k) noexcept { return (k % 2 == 0) ? 1.0 : -1.0; }

/// f o_i g = (-1)^{i|g|} f o (1^{(x)i} (x) g (x) 1^{(x)(|f|-i)}), 0 <= i <= |f|.
///
/// Throws std::out_of_range for i > |f| and std::invalid_argument on a
/// dimension mismatch.
Operation partial_compose(const Operation& f, const Operation& g, std::size_t i);

/// f . g = sum_{i=0}^{|f|} f o_i g.
Operation total_compose(const Operation& f, const Operation& g);

/// Gerstenhaber bracket [f,g] = f.g - (-1)^{|f||g|} g.f.
Operation bracket(const Operation& f, const Operation& g);

/// Which branch of the composition relation (h o_i f) o_j g applies.
enum class CompositionCase { kBefore, kInside, kAfter };

/// Throws std::out_of_range when (i, j) lies outside every branch.
CompositionCase composition_case(const Operation& h, const Operation& f, std::size_t i,
                                 std::size_t j);

/// ||(h o_i f) o_j g - rhs|| for the branch selected by composition_case.
/// Boundary values j = i and j = i + |f| belong to the middle branch.
double composition_relation_residual(const Operation& h, const Operation& f, const Operation& g,
                                     std::size_t i, std::size_t j);

/// max of ||1 o_0 f - f|| and ||f o_i 1 - f|| over 0 <= i <= |f|.
double unit_residual(const Operation& f);

/// ||[f,g] + (-1)^{|f||g|} [g,f]||.
double antisymmetry_residual(const Operation& f, const Operation& g);

/// Norm of the signed cyclic sum
///   (-1)^{|f||h|}[[f,g],h] + (-1)^{|g||f|}[[g,h],f] + (-1)^{|h||g|}[[h,f],g].
double jacobi_residual(const Operation& f, const Operation& g, const Operation& h);

/// residual / (1 + product of operand norms).
double normalized_residual(double residual, double norm_product) noexcept;

}  // namespace oplax
