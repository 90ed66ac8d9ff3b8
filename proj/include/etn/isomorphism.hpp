#ifndef ETN_ISOMORPHISM_HPP
#define ETN_ISOMORPHISM_HPP

#include "etn/tensor.hpp"

namespace etn {

/// Folding of an even-order operator into a matrix: row index of a left
/// multi-index (i_1,...,i_N) is i_1 + sum_{k>=2} (i_k - 1) prod_{l<k} I_l
/// (1-based). With column-major storage this is a pure reinterpretation of
/// the buffer.
struct FlattenPlan {
    std::vector<std::size_t> left_modes;
    std::vector<std::size_t> right_modes;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

FlattenPlan flatten_plan(const EinsteinOperator& t);

/// f: maps an even-order operator to its rows x cols matrix. Zero-copy
/// reshape of the buffer.
DenseTensor flatten(const EinsteinOperator& t);

/// f^{-1}: rebuilds the operator with the given mode lists from a matrix.
EinsteinOperator unflatten(const DenseTensor& m,
                           const std::vector<std::size_t>& left_modes,
                           const std::vector<std::size_t>& right_modes);

/// Group inverse under *_N. Requires a square operator with nonsingular
/// flattening; LU with partial pivoting, SingularTensor when the reciprocal
/// condition estimate drops below 1e-14.
EinsteinOperator inverse(const EinsteinOperator& t);

/// Solves a *_N x = b by dense LU on the flattened system.
DenseTensor direct_solve(const EinsteinOperator& a, const DenseTensor& b);

} // namespace etn

#endif
