#ifndef ETN_DECOMP_HPP
#define ETN_DECOMP_HPP

#include <optional>

#include "etn/tensor.hpp"

namespace etn {

/// a = u *_N d *_N v^T with orthogonal u, v and diagonal d holding the
/// singular values (descending in flattened column order).
struct SvdResult {
    EinsteinOperator u;
    EinsteinOperator d;
    EinsteinOperator v;
    std::size_t rank = 0;
};

/// a = p *_N d *_N p^T for symmetric a; eigenvalues ascending in flattened
/// column order.
struct EvdResult {
    EinsteinOperator p;
    EinsteinOperator d;
};

/// One term of the order-4 outer-product expansion: weight sigma and the
/// (3,4)-slices of the left/right factor tensors.
struct OuterTerm {
    double sigma = 0.0;
    DenseTensor left;   // I x J matrix
    DenseTensor right;  // I x J matrix
};

/// Rank-R CP form sum_r w_r a_r o b_r o c_r o d_r; factor matrices hold the
/// vectors as columns.
struct CpForm {
    std::vector<double> weights;
    DenseTensor a;  // I x R
    DenseTensor b;  // J x R
    DenseTensor c;  // I x R
    DenseTensor d;  // J x R
    /// Whether 2R + 3 <= rank(A)+rank(B)+rank(C)+rank(D) holds.
    bool sidiropoulos_bro_holds = false;
    int sidiropoulos_bro_margin = 0;
};

/// Orthogonal-factor form core x_1 A x_2 B x_3 C x_4 D with a sparse core
/// (IJ nonzeros out of I^2 J^2).
struct MsvdForm {
    DenseTensor core;  // I x J x I x J
    DenseTensor a;     // I x I
    DenseTensor b;     // J x J
    DenseTensor c;     // I x I
    DenseTensor d;     // J x J
};

struct DecompOptions {
    double rank_tol = 1e-12;      // relative singular-value cutoff for rank
    double sym_tol = 1e-10;       // symmetry tolerance for the EVD
};

SvdResult tensor_svd(const EinsteinOperator& a, const DecompOptions& opts = {});
EvdResult tensor_evd(const EinsteinOperator& a, const DecompOptions& opts = {});

/// Eigenvalues of an EVD result in flattened column order (ascending).
std::vector<double> diagonal_values(const EinsteinOperator& d);

std::vector<OuterTerm> as_outer_sum(const SvdResult& r);
std::vector<OuterTerm> as_outer_sum(const EvdResult& r);

/// CP extraction per the rank-one slice condition; throws RankOneViolation
/// listing the offending slices when a factor slice is not rank-one.
CpForm extract_cp(const SvdResult& r, double tol = 1e-8);

/// Multilinear-SVD extraction; requires u and v to be Kronecker-separable
/// (rank-one rearrangement test), else throws SeparabilityViolation.
MsvdForm extract_multilinear_svd(const SvdResult& r, double tol = 1e-8);

/// Reconstructs sum_r w_r a_r o b_r o c_r o d_r as an I x J x I x J tensor.
DenseTensor cp_reconstruct(const CpForm& form);

/// Evaluates core x_1 A x_2 B x_3 C x_4 D.
DenseTensor msvd_reconstruct(const MsvdForm& form);

} // namespace etn

#endif
