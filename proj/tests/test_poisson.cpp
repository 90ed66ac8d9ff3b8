#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "etn/isomorphism.hpp"
#include "etn/poisson.hpp"
#include "etn/tensor.hpp"
#include "test_util.hpp"

using etn::DenseTensor;
using etn::EinsteinOperator;
using etn::Error;
using etn::PoissonMethod;
using etn::PoissonProblem;
using etn::PoissonScaling;
using etn::PoissonSource;
using etn::Shape;
using etn::SolverConfig;
using etn::SolveStatus;

namespace {

/// Scale factor with the same floating-point evaluation as the operator
/// builder: 1 / (dx * ... * dx).
double stencil_scale(std::size_t n, int power) {
    const double dx = 1.0 / static_cast<double>(n + 1);
    double denom = 1.0;
    for (int p = 0; p < power; ++p) denom *= dx;
    return 1.0 / denom;
}

/// Dense 1D Dirichlet second-difference matrix tridiag(-1, 2, -1) as doubles.
Eigen::MatrixXd second_difference(std::size_t n) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 2.0;
        if (i > 0) t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = -1.0;
        if (i + 1 < n)
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = -1.0;
    }
    return t;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXd laplacian_matrix(int dim, std::size_t n, PoissonScaling scaling) {
    const Eigen::MatrixXd t = second_difference(n);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                         static_cast<Eigen::Index>(n));
    Eigen::MatrixXd sum;
    if (dim == 2) {
        sum = kron(id, t) + kron(t, id);
    } else {
        sum = kron(id, kron(id, t)) + kron(id, kron(t, id)) + kron(t, kron(id, id));
    }
    const int power = (dim == 3 && scaling == PoissonScaling::Paper) ? 3 : 2;
    return stencil_scale(n, power) * sum;
}

} // namespace

TEST_CASE("2D operator flattening equals the Dirichlet block matrix exactly") {
    const std::size_t n = 30;
    EinsteinOperator a = etn::build_poisson_operator(2, n, PoissonScaling::Paper);
    DenseTensor fa = etn::flatten(a);
    REQUIRE(fa.shape() == Shape({n * n, n * n}));

    // block tridiagonal: B = tridiag(-1, 4, -1) blocks on the diagonal,
    // -I blocks beside them, all times 1/dx^2
    const double scale = stencil_scale(n, 2);
    const double center = static_cast<double>(4) * scale;
    const double neighbor = -scale;
    const std::size_t nn = n * n;
    std::vector<double> block(nn * nn, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t row = k + l * n;
            block[row + row * nn] = center;
            if (k > 0) block[row + (row - 1) * nn] = neighbor;
            if (k + 1 < n) block[row + (row + 1) * nn] = neighbor;
            if (l > 0) block[row + (row - n) * nn] = neighbor;
            if (l + 1 < n) block[row + (row + n) * nn] = neighbor;
        }
    }
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < nn * nn; ++i) {
        if (fa[i] != block[i]) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("2D operator matches the Kronecker-sum Laplacian") {
    const std::size_t n = 12;
    EinsteinOperator a = etn::build_poisson_operator(2, n, PoissonScaling::Paper);
    DenseTensor fa = etn::flatten(a);
    Eigen::MatrixXd k = laplacian_matrix(2, n, PoissonScaling::Paper);
    double worst = 0.0;
    for (std::size_t j = 0; j < n * n; ++j)
        for (std::size_t i = 0; i < n * n; ++i)
            worst = std::max(worst,
                             std::abs(fa[i + j * n * n] -
                                      k(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(j))));
    CHECK(worst <= 1e-12 * std::abs(k(0, 0)));
}

TEST_CASE("3D operator matches the triple Kronecker sum") {
    const std::size_t n = 5;
    for (PoissonScaling scaling : {PoissonScaling::Paper, PoissonScaling::Standard}) {
        EinsteinOperator a = etn::build_poisson_operator(3, n, scaling);
        DenseTensor fa = etn::flatten(a);
        Eigen::MatrixXd k = laplacian_matrix(3, n, scaling);
        const std::size_t m = n * n * n;
        double worst = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i)
                worst = std::max(worst,
                                 std::abs(fa[i + j * m] -
                                          k(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j))));
        CHECK(worst <= 1e-12 * std::abs(k(0, 0)));
    }
}

TEST_CASE("3D direct solve matches the Kronecker matrix solve in both scalings") {
    const std::size_t n = 8;
    for (PoissonScaling scaling : {PoissonScaling::Paper, PoissonScaling::Standard}) {
        PoissonProblem problem =
            etn::make_problem(3, n, PoissonSource::Manufactured, scaling);
        etn::SolveReport rep = etn::solve_poisson(problem, PoissonMethod::Direct);
        REQUIRE(rep.status == SolveStatus::Converged);

        Eigen::MatrixXd k = laplacian_matrix(3, n, scaling);
        Eigen::Map<const Eigen::VectorXd> f(problem.rhs.data().data(),
                                            static_cast<Eigen::Index>(n * n * n));
        Eigen::VectorXd x = k.partialPivLu().solve(f);
        double worst = 0.0;
        for (std::size_t i = 0; i < n * n * n; ++i) {
            worst = std::max(worst,
                             std::abs(rep.x[i] - x(static_cast<Eigen::Index>(i))));
        }
        const double xnorm = x.norm() / std::sqrt(static_cast<double>(x.size()));
        CHECK(worst <= 1e-10 * std::max(1.0, xnorm));
    }
}

TEST_CASE("manufactured 2D solution converges with measured order at least one") {
    std::vector<double> errs;
    for (std::size_t n : {10, 20, 40}) {
        PoissonProblem problem =
            etn::make_problem(2, n, PoissonSource::Manufactured, PoissonScaling::Paper);
        etn::SolveReport rep = etn::solve_poisson(problem, PoissonMethod::Direct);
        etn::ErrorReport err = etn::error_report(problem, rep.x);
        errs.push_back(err.max_err);
    }
    REQUIRE(errs.size() == 3);
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    const double order1 = std::log2(errs[0] / errs[1]);
    const double order2 = std::log2(errs[1] / errs[2]);
    CHECK(order1 >= 1.0);
    CHECK(order2 >= 1.0);
}

TEST_CASE("3D paper and standard scalings describe the same physical solution") {
    const std::size_t n = 6;
    PoissonProblem paper =
        etn::make_problem(3, n, PoissonSource::Manufactured, PoissonScaling::Paper);
    PoissonProblem standard =
        etn::make_problem(3, n, PoissonSource::Manufactured, PoissonScaling::Standard);
    etn::SolveReport rp = etn::solve_poisson(paper, PoissonMethod::Direct);
    etn::SolveReport rs = etn::solve_poisson(standard, PoissonMethod::Direct);

    // paper scaling carries the extra factor dx
    const double dx = paper.dx();
    double worst = 0.0;
    for (std::size_t i = 0; i < rp.x.size(); ++i) {
        worst = std::max(worst, std::abs(rp.x[i] / dx - rs.x[i]));
    }
    CHECK(worst < 1e-10);

    // and error_report divides it back out
    etn::ErrorReport ep = etn::error_report(paper, rp.x);
    etn::ErrorReport es = etn::error_report(standard, rs.x);
    CHECK(ep.max_err == doctest::Approx(es.max_err).epsilon(1e-8));
}

TEST_CASE("BiCG needs fewer iterations than Jacobi on the n=30 benchmark") {
    PoissonProblem problem =
        etn::make_problem(2, 30, PoissonSource::Manufactured, PoissonScaling::Paper);
    SolverConfig cfg;
    cfg.tol = 1e-8;
    cfg.max_iter = 20000;
    etn::SolveReport bicg = etn::solve_poisson(problem, PoissonMethod::Bicg, cfg);
    etn::SolveReport jacobi = etn::solve_poisson(problem, PoissonMethod::Jacobi, cfg);
    REQUIRE(bicg.status == SolveStatus::Converged);
    REQUIRE(jacobi.status == SolveStatus::Converged);
    CHECK(bicg.iterations < jacobi.iterations);
    CHECK(bicg.residuals.back() <= cfg.tol);
    CHECK(jacobi.residuals.back() <= cfg.tol);
}

TEST_CASE("constant and file sources assemble the right-hand side") {
    PoissonProblem constant =
        etn::make_problem(2, 4, PoissonSource::Constant, PoissonScaling::Paper);
    for (std::size_t i = 0; i < constant.rhs.size(); ++i) {
        CHECK(constant.rhs[i] == 1.0);
    }

    DenseTensor rhs{Shape({4, 4})};
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = static_cast<double>(i);
    PoissonProblem file =
        etn::make_problem(2, 4, PoissonSource::File, PoissonScaling::Paper, &rhs);
    CHECK(etn_test::bit_equal(file.rhs, rhs));

    DenseTensor bad{Shape({3, 4})};
    CHECK_THROWS_AS(
        etn::make_problem(2, 4, PoissonSource::File, PoissonScaling::Paper, &bad), Error);
    CHECK_THROWS_AS(etn::make_problem(2, 4, PoissonSource::File, PoissonScaling::Paper),
                    Error);
}

TEST_CASE("operator construction validates dimension and size") {
    CHECK_THROWS_AS(etn::build_poisson_operator(4, 10), Error);
    CHECK_THROWS_AS(etn::build_poisson_operator(2, 1), Error);
}

TEST_CASE("the discrete Laplacian is symmetric") {
    EinsteinOperator a2 = etn::build_poisson_operator(2, 7);
    CHECK(etn::is_symmetric(a2));
    EinsteinOperator a3 = etn::build_poisson_operator(3, 4);
    CHECK(etn::is_symmetric(a3));
}
