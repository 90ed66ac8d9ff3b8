#include "etn/poisson.hpp"

#include <cmath>

#include "etn/isomorphism.hpp"

namespace etn {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

EinsteinOperator build_poisson_operator(int dim, std::size_t n, PoissonScaling scaling) {
    if (dim != 2 && dim != 3) {
        throw Error(ErrorCode::InvalidSize, "dim must be 2 or 3");
    }
    if (n < 2) {
        throw Error(ErrorCode::InvalidSize, "n must be at least 2");
    }
    const double dx = 1.0 / static_cast<double>(n + 1);
    const int power = (dim == 3 && scaling == PoissonScaling::Paper) ? 3 : 2;
    double denom = 1.0;
    for (int p = 0; p < power; ++p) denom *= dx;
    const double scale = 1.0 / denom;
    const double center = static_cast<double>(2 * dim) * scale;
    const double neighbor = -scale;

    if (dim == 2) {
        DenseTensor t{Shape({n, n, n, n})};
        const std::size_t s1 = n, s2 = n * n, s3 = n * n * n;
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t base = k * s2 + l * s3;
                t[k + l * s1 + base] = center;
                if (k > 0) t[(k - 1) + l * s1 + base] = neighbor;
                if (k + 1 < n) t[(k + 1) + l * s1 + base] = neighbor;
                if (l > 0) t[k + (l - 1) * s1 + base] = neighbor;
                if (l + 1 < n) t[k + (l + 1) * s1 + base] = neighbor;
            }
        }
        return EinsteinOperator(std::move(t));
    }

    DenseTensor t{Shape({n, n, n, n, n, n})};
    const std::size_t s1 = n, s2 = n * n;
    const std::size_t s3 = n * n * n;
    auto lin = [&](std::size_t i, std::size_t j, std::size_t k) {
        return i + j * s1 + k * s2;
    };
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t a = 0; a < n; ++a) {
                const std::size_t base = lin(a, b, c) * s3;
                t[lin(a, b, c) + base] = center;
                if (a > 0) t[lin(a - 1, b, c) + base] = neighbor;
                if (a + 1 < n) t[lin(a + 1, b, c) + base] = neighbor;
                if (b > 0) t[lin(a, b - 1, c) + base] = neighbor;
                if (b + 1 < n) t[lin(a, b + 1, c) + base] = neighbor;
                if (c > 0) t[lin(a, b, c - 1) + base] = neighbor;
                if (c + 1 < n) t[lin(a, b, c + 1) + base] = neighbor;
            }
        }
    }
    return EinsteinOperator(std::move(t));
}

double manufactured_source(int dim, double x, double y, double z) {
    if (dim == 2) {
        return 2.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
    }
    return 3.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y) * std::sin(kPi * z);
}

double manufactured_solution(int dim, double x, double y, double z) {
    if (dim == 2) {
        return std::sin(kPi * x) * std::sin(kPi * y);
    }
    return std::sin(kPi * x) * std::sin(kPi * y) * std::sin(kPi * z);
}

DenseTensor assemble_rhs(int dim, std::size_t n,
                         const std::function<double(double, double, double)>& source) {
    if (dim != 2 && dim != 3) {
        throw Error(ErrorCode::InvalidSize, "dim must be 2 or 3");
    }
    const double dx = 1.0 / static_cast<double>(n + 1);
    if (dim == 2) {
        DenseTensor f{Shape({n, n})};
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                f.set({i, j}, source(static_cast<double>(i + 1) * dx,
                                     static_cast<double>(j + 1) * dx, 0.0));
            }
        }
        return f;
    }
    DenseTensor f{Shape({n, n, n})};
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                f.set({i, j, k}, source(static_cast<double>(i + 1) * dx,
                                        static_cast<double>(j + 1) * dx,
                                        static_cast<double>(k + 1) * dx));
            }
        }
    }
    return f;
}

PoissonProblem make_problem(int dim, std::size_t n, PoissonSource source,
                            PoissonScaling scaling, const DenseTensor* file_rhs) {
    PoissonProblem p;
    p.dim = dim;
    p.n = n;
    p.scaling = scaling;
    switch (source) {
        case PoissonSource::Manufactured:
            p.rhs = assemble_rhs(dim, n, [dim](double x, double y, double z) {
                return manufactured_source(dim, x, y, z);
            });
            break;
        case PoissonSource::Constant:
            p.rhs = assemble_rhs(dim, n, [](double, double, double) { return 1.0; });
            break;
        case PoissonSource::File: {
            if (!file_rhs) {
                throw Error(ErrorCode::InvalidArgument, "file source requires a tensor");
            }
            std::vector<std::size_t> want(static_cast<std::size_t>(dim), n);
            if (file_rhs->shape().dims() != want) {
                throw Error(ErrorCode::ShapeMismatch, "rhs tensor extents must all equal n");
            }
            p.rhs = *file_rhs;
            break;
        }
    }
    return p;
}

SolveReport solve_poisson(const PoissonProblem& problem, PoissonMethod method,
                          const SolverConfig& cfg) {
    EinsteinOperator op = build_poisson_operator(problem.dim, problem.n, problem.scaling);
    switch (method) {
        case PoissonMethod::Bicg:
            return bicg_solve(op, problem.rhs, cfg);
        case PoissonMethod::Jacobi:
            return jacobi_solve(op, problem.rhs, cfg);
        case PoissonMethod::Direct: {
            SolveReport report;
            report.x = direct_solve(op, problem.rhs);
            DenseTensor ax = einstein_product(op, report.x);
            double r2 = 0.0;
            for (std::size_t i = 0; i < ax.size(); ++i) {
                const double d = ax[i] - problem.rhs[i];
                r2 += d * d;
            }
            const double bn = frobenius_norm(problem.rhs);
            report.residuals.push_back(bn > 0.0 ? std::sqrt(r2) / bn : 0.0);
            report.iterations = 1;
            report.status = SolveStatus::Converged;
            return report;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method");
}

ErrorReport error_report(const PoissonProblem& problem, const DenseTensor& x) {
    const double dx = problem.dx();
    // paper scaling in 3D solves (stencil/dx^3) v = f, so v = dx * v_standard
    const double unscale =
        (problem.dim == 3 && problem.scaling == PoissonScaling::Paper) ? 1.0 / dx : 1.0;

    ErrorReport rep;
    double sum2 = 0.0;
    const std::size_t n = problem.n;
    std::vector<std::size_t> idx(static_cast<std::size_t>(problem.dim), 0);
    const std::size_t total = x.size();
    for (std::size_t lin = 0; lin < total; ++lin) {
        std::size_t rem = lin;
        double coords[3] = {0.0, 0.0, 0.0};
        for (std::size_t m = 0; m < idx.size(); ++m) {
            idx[m] = rem % n;
            rem /= n;
            coords[m] = static_cast<double>(idx[m] + 1) * dx;
        }
        const double exact =
            manufactured_solution(problem.dim, coords[0], coords[1], coords[2]);
        const double err = x[lin] * unscale - exact;
        rep.max_err = std::max(rep.max_err, std::abs(err));
        sum2 += err * err;
    }
    rep.l2_err = std::sqrt(sum2 / static_cast<double>(total));
    return rep;
}

} // namespace etn
