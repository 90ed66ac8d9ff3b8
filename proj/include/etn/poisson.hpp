#ifndef ETN_POISSON_HPP
#define ETN_POISSON_HPP

#include <functional>

#include "etn/solvers.hpp"
#include "etn/tensor.hpp"

namespace etn {

/// Scaling of the discrete Laplacian stencil. Paper scaling divides the 3D
/// seven-point stencil by (dx)^3; standard scaling uses (dx)^2 in every
/// dimension. The two coincide in 2D.
enum class PoissonScaling { Paper, Standard };

enum class PoissonSource { Manufactured, Constant, File };

/// Unit square/cube with homogeneous Dirichlet boundary; n interior grid
/// points per side, dx = 1/(n+1).
struct PoissonProblem {
    int dim = 2;                     // 2 or 3
    std::size_t n = 0;
    PoissonScaling scaling = PoissonScaling::Paper;
    DenseTensor rhs;                 // f sampled at interior nodes

    double dx() const { return 1.0 / static_cast<double>(n + 1); }
};

enum class PoissonMethod { Bicg, Jacobi, Direct };

/// Five-point (2D, order 4) or seven-point (3D, order 6) operator with
/// Dirichlet rows truncated at the boundary.
EinsteinOperator build_poisson_operator(int dim, std::size_t n,
                                        PoissonScaling scaling = PoissonScaling::Paper);

/// Samples f at the interior nodes (i*dx, j*dx[, k*dx]), 1-based grid index.
DenseTensor assemble_rhs(int dim, std::size_t n,
                         const std::function<double(double, double, double)>& source);

/// Built-in manufactured pair: f = d * pi^2 * prod sin(pi x_i),
/// v = prod sin(pi x_i).
double manufactured_source(int dim, double x, double y, double z);
double manufactured_solution(int dim, double x, double y, double z);

PoissonProblem make_problem(int dim, std::size_t n, PoissonSource source,
                            PoissonScaling scaling = PoissonScaling::Paper,
                            const DenseTensor* file_rhs = nullptr);

SolveReport solve_poisson(const PoissonProblem& problem, PoissonMethod method,
                          const SolverConfig& cfg = {});

struct ErrorReport {
    double max_err = 0.0;
    double l2_err = 0.0;
};

/// Compares a computed solution with the manufactured analytic solution.
/// Under 3D paper scaling the discrete solution carries an extra factor dx,
/// which is divided out before comparing.
ErrorReport error_report(const PoissonProblem& problem, const DenseTensor& x);

} // namespace etn

#endif
