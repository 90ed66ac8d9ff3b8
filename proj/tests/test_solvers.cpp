#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "etn/isomorphism.hpp"
#include "etn/solvers.hpp"
#include "etn/tensor.hpp"
#include "test_util.hpp"

using etn::DenseTensor;
using etn::EinsteinOperator;
using etn::Error;
using etn::Shape;
using etn::SolverConfig;
using etn::SolveReport;
using etn::SolveStatus;
using etn_test::Uniform;

namespace {

/// SPD flattening m^T m + 2I rebuilt as a (2,3,2,3) operator.
EinsteinOperator spd_instance(Uniform& rng) {
    const std::size_t n = 6;
    DenseTensor m = rng.tensor({n, n});
    DenseTensor g{Shape({n, n})};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += m[k + i * n] * m[k + j * n];
            g[i + j * n] = s + (i == j ? 2.0 : 0.0);
        }
    return etn::unflatten(g, {2, 3}, {2, 3});
}

struct MatrixRun {
    std::vector<std::vector<double>> iterates;  // x after every step
    std::vector<double> residuals;
};

/// Plain-vector CGNR with the same update sequence as the tensor solver.
MatrixRun cgnr_matrix(const std::vector<double>& g, const std::vector<double>& b,
                      double tol, std::size_t max_iter) {
    const std::size_t n = b.size();
    auto apply = [&](const std::vector<double>& v, bool trans) {
        std::vector<double> out(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                out[j] += (trans ? g[k + j * n] : g[j + k * n]) * v[k];
        return out;
    };
    auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
        return s;
    };

    MatrixRun run;
    std::vector<double> x(n, 0.0), r = b;
    const double bnorm = std::sqrt(dot(b, b));
    std::vector<double> z = apply(r, true), p = z;
    double zz = dot(z, z);
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<double> w = apply(p, false);
        const double curvature = dot(w, w);
        if (!(curvature > 0.0)) break;
        const double alpha = zz / curvature;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * w[i];
        }
        run.iterates.push_back(x);
        run.residuals.push_back(std::sqrt(dot(r, r)) / bnorm);
        if (run.residuals.back() <= tol) break;
        z = apply(r, true);
        const double zz_next = dot(z, z);
        const double beta = zz_next / zz;
        zz = zz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    return run;
}

MatrixRun jacobi_matrix(const std::vector<double>& g, const std::vector<double>& b,
                        std::size_t steps) {
    const std::size_t n = b.size();
    MatrixRun run;
    std::vector<double> x(n, 0.0);
    for (std::size_t step = 0; step < steps; ++step) {
        std::vector<double> ax(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) ax[j] += g[j + k * n] * x[k];
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = (b[i] - (ax[i] - g[i + i * n] * x[i])) / g[i + i * n];
        }
        x = next;
        run.iterates.push_back(x);
    }
    return run;
}

} // namespace

TEST_CASE("higher-order BiCG iterates track the matrix method step by step") {
    Uniform rng(401);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        EinsteinOperator a = spd_instance(rng);
        DenseTensor b = rng.tensor({2, 3});
        const std::vector<double>& g = a.tensor().data();

        SolverConfig cfg;
        cfg.tol = 1e-12;
        cfg.max_iter = 40;

        // re-run the tensor solver one extra iteration at a time so every
        // intermediate iterate is observable
        MatrixRun oracle = cgnr_matrix(g, b.data(), cfg.tol, cfg.max_iter);
        for (std::size_t steps = 1; steps <= oracle.iterates.size(); ++steps) {
            SolverConfig partial = cfg;
            partial.max_iter = steps;
            SolveReport rep = etn::bicg_solve(a, b, partial);
            REQUIRE(rep.iterations == steps);
            for (std::size_t i = 0; i < 6; ++i) {
                worst = std::max(worst,
                                 std::abs(rep.x[i] - oracle.iterates[steps - 1][i]));
            }
            worst = std::max(worst, std::abs(rep.residuals.back() -
                                             oracle.residuals[steps - 1]));
        }
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("higher-order Jacobi iterates track the matrix method step by step") {
    Uniform rng(402);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        EinsteinOperator a = spd_instance(rng);
        DenseTensor b = rng.tensor({2, 3});
        MatrixRun oracle = jacobi_matrix(a.tensor().data(), b.data(), 8);
        for (std::size_t steps = 1; steps <= 8; ++steps) {
            SolverConfig cfg;
            cfg.tol = 1e-30;
            cfg.max_iter = steps;
            SolveReport rep = etn::jacobi_solve(a, b, cfg);
            for (std::size_t i = 0; i < 6; ++i) {
                worst = std::max(worst,
                                 std::abs(rep.x[i] - oracle.iterates[steps - 1][i]));
            }
        }
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("BiCG converges to the direct solution") {
    Uniform rng(403);
    EinsteinOperator a = spd_instance(rng);
    DenseTensor b = rng.tensor({2, 3});
    SolverConfig cfg;
    cfg.tol = 1e-12;
    SolveReport rep = etn::bicg_solve(a, b, cfg);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(etn_test::rel_diff(rep.x, etn::direct_solve(a, b)) < 1e-10);
    // terminal residual below target
    CHECK(rep.residuals.back() <= cfg.tol);
}

TEST_CASE("Jacobi converges on diagonally dominant systems") {
    Uniform rng(404);
    EinsteinOperator a = rng.op({2, 3, 2, 3});
    for (std::size_t i = 0; i < 6; ++i) a.tensor()[i + i * 6] += 10.0;
    DenseTensor b = rng.tensor({2, 3});
    SolverConfig cfg;
    cfg.tol = 1e-10;
    SolveReport rep = etn::jacobi_solve(a, b, cfg);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(etn_test::rel_diff(rep.x, etn::direct_solve(a, b)) < 1e-8);
}

TEST_CASE("Jacobi flags divergence instead of iterating forever") {
    // off-diagonal heavy: iteration matrix has spectral radius > 1
    DenseTensor t{Shape({2, 2})};
    t[0 + 0 * 2] = 0.1;
    t[1 + 1 * 2] = 0.1;
    t[1 + 0 * 2] = 1.0;
    t[0 + 1 * 2] = 1.0;
    EinsteinOperator a{std::move(t)};
    DenseTensor b{Shape({2}), {1.0, -1.0}};
    SolverConfig cfg;
    cfg.tol = 1e-12;
    cfg.max_iter = 100000;
    SolveReport rep = etn::jacobi_solve(a, b, cfg);
    CHECK(rep.status == SolveStatus::Diverged);
}

TEST_CASE("Jacobi requires a nonzero paired-index diagonal") {
    DenseTensor t{Shape({2, 2}), {0.0, 1.0, 1.0, 0.0}};
    EinsteinOperator a{std::move(t)};
    DenseTensor b{Shape({2}), {1.0, 1.0}};
    try {
        etn::jacobi_solve(a, b);
        FAIL("expected ZeroDiagonal");
    } catch (const Error& e) {
        CHECK(e.code() == etn::ErrorCode::ZeroDiagonal);
    }
}

TEST_CASE("solvers validate operator and right-hand side") {
    Uniform rng(405);
    EinsteinOperator rect = rng.op({2, 3, 3, 2});
    CHECK_THROWS_AS(etn::bicg_solve(rect, rng.tensor({3, 2})), Error);

    EinsteinOperator a = spd_instance(rng);
    CHECK_THROWS_AS(etn::bicg_solve(a, rng.tensor({3, 2})), Error);
    CHECK_THROWS_AS(etn::jacobi_solve(a, rng.tensor({2, 3, 2})), Error);

    SolverConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(etn::bicg_solve(a, rng.tensor({2, 3}), bad), Error);
}

TEST_CASE("zero right-hand side converges immediately to zero") {
    Uniform rng(406);
    EinsteinOperator a = spd_instance(rng);
    SolveReport rep = etn::bicg_solve(a, DenseTensor{Shape({2, 3})});
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.iterations == 0);
    CHECK(etn::frobenius_norm(rep.x) == 0.0);
}

TEST_CASE("residual history serializes as CSV with full precision") {
    SolveReport rep;
    rep.residuals = {0.5, 0.125, 1e-9};
    const std::string csv = etn::residual_history_csv(rep);
    CHECK(csv.find("iter,residual\n") == 0);
    CHECK(csv.find("1,0.5") != std::string::npos);
    CHECK(csv.find("3,") != std::string::npos);
    CHECK(csv.find("1e-09") != std::string::npos);
}

TEST_CASE("max-iteration exhaustion is reported, not thrown") {
    Uniform rng(407);
    EinsteinOperator a = spd_instance(rng);
    DenseTensor b = rng.tensor({2, 3});
    SolverConfig cfg;
    cfg.tol = 1e-15;
    cfg.max_iter = 1;
    SolveReport rep = etn::bicg_solve(a, b, cfg);
    CHECK(rep.status == SolveStatus::MaxIter);
    CHECK(rep.iterations == 1);
}
