#ifndef ETN_SOLVERS_HPP
#define ETN_SOLVERS_HPP

#include "etn/tensor.hpp"

namespace etn {

struct SolverConfig {
    double tol = 1e-8;        // relative residual target on the original system
    std::size_t max_iter = 10000;
    bool record_history = true;
};

enum class SolveStatus { Converged, MaxIter, Breakdown, Diverged };

struct SolveReport {
    DenseTensor x;
    std::vector<double> residuals;  // ||a*x_k - b||_F / ||b||_F per iteration
    std::size_t iterations = 0;
    SolveStatus status = SolveStatus::MaxIter;
};

const char* solve_status_name(SolveStatus s) noexcept;

/// Conjugate gradients on the normal equations a^T * a * x = a^T * b,
/// minimizing the quadratic objective along conjugate directions. Convergence
/// is measured on the original residual.
SolveReport bicg_solve(const EinsteinOperator& a, const DenseTensor& b,
                       const SolverConfig& cfg = {});

/// Jacobi splitting on the paired-index diagonal a_{i..j..} with i-block ==
/// j-block; every diagonal entry must be nonzero.
SolveReport jacobi_solve(const EinsteinOperator& a, const DenseTensor& b,
                         const SolverConfig& cfg = {});

/// Writes the residual history as CSV "iter,residual" with 17 significant
/// digits.
std::string residual_history_csv(const SolveReport& report);

} // namespace etn

#endif
