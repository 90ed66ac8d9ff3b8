#include "etn/solvers.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace etn {

namespace {

constexpr double kDivergenceFactor = 1e6;

void check_system(const EinsteinOperator& a, const DenseTensor& b) {
    if (!a.is_square()) {
        throw Error(ErrorCode::NonSquare, "iterative solvers require a square operator");
    }
    const auto right = a.right_modes();
    const auto& bd = b.shape().dims();
    if (bd.size() != right.size()) {
        throw Error(ErrorCode::ShapeMismatch, "rhs order must match operator right modes");
    }
    for (std::size_t k = 0; k < right.size(); ++k) {
        if (bd[k] != right[k]) {
            throw Error(ErrorCode::ShapeMismatch, "rhs modes must match operator right modes");
        }
    }
}

DenseTensor axpy(const DenseTensor& x, double alpha, const DenseTensor& y) {
    DenseTensor out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * y[i];
    return out;
}

} // namespace

const char* solve_status_name(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIter: return "MaxIter";
        case SolveStatus::Breakdown: return "Breakdown";
        case SolveStatus::Diverged: return "Diverged";
    }
    return "Unknown";
}

SolveReport bicg_solve(const EinsteinOperator& a, const DenseTensor& b,
                       const SolverConfig& cfg) {
    check_system(a, b);
    if (cfg.tol <= 0.0 || cfg.max_iter < 1) {
        throw Error(ErrorCode::InvalidArgument, "tol must be positive and max_iter >= 1");
    }
    const EinsteinOperator at = transpose(a);
    const double bnorm = frobenius_norm(b);

    SolveReport report;
    report.x = DenseTensor(b.shape());  // x0 = 0
    if (bnorm == 0.0) {
        report.status = SolveStatus::Converged;
        return report;
    }

    DenseTensor r = b;                         // b - a*x0
    DenseTensor z = einstein_product(at, r);   // normal-equation residual
    DenseTensor p = z;
    double zz = inner_product(z, z);

    for (std::size_t k = 0; k < cfg.max_iter; ++k) {
        DenseTensor w = einstein_product(a, p);
        const double curvature = inner_product(w, w);  // <p, (a^T a) p>
        if (!(curvature > 0.0)) {
            report.status = SolveStatus::Breakdown;
            return report;
        }
        const double alpha = zz / curvature;
        report.x = axpy(report.x, alpha, p);
        r = axpy(r, -alpha, w);
        ++report.iterations;

        const double rel = frobenius_norm(r) / bnorm;
        if (cfg.record_history) report.residuals.push_back(rel);
        if (rel <= cfg.tol) {
            report.status = SolveStatus::Converged;
            return report;
        }
        z = einstein_product(at, r);
        const double zz_next = inner_product(z, z);
        const double beta = zz_next / zz;
        zz = zz_next;
        p = axpy(z, beta, p);
    }
    report.status = SolveStatus::MaxIter;
    return report;
}

SolveReport jacobi_solve(const EinsteinOperator& a, const DenseTensor& b,
                         const SolverConfig& cfg) {
    check_system(a, b);
    if (cfg.tol <= 0.0 || cfg.max_iter < 1) {
        throw Error(ErrorCode::InvalidArgument, "tol must be positive and max_iter >= 1");
    }
    const std::size_t n = a.rows();
    const double* am = a.tensor().data().data();
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = am[i + i * n];
        if (diag[i] == 0.0) {
            throw Error(ErrorCode::ZeroDiagonal, "Jacobi splitting requires nonzero diagonal entries");
        }
    }
    const double bnorm = frobenius_norm(b);

    SolveReport report;
    report.x = DenseTensor(b.shape());
    if (bnorm == 0.0) {
        report.status = SolveStatus::Converged;
        return report;
    }

    double initial_rel = 1.0;  // residual of x0 = 0 is ||b||
    for (std::size_t k = 0; k < cfg.max_iter; ++k) {
        // x_{k+1} = D^{-1} (b - (A - D) x_k), summed in ascending index order
        DenseTensor ax = einstein_product(a, report.x);
        DenseTensor next{b.shape()};
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = (b[i] - (ax[i] - diag[i] * report.x[i])) / diag[i];
        }
        report.x = std::move(next);
        ++report.iterations;

        DenseTensor r = axpy(b, -1.0, einstein_product(a, report.x));
        const double rel = frobenius_norm(r) / bnorm;
        if (cfg.record_history) report.residuals.push_back(rel);
        if (rel <= cfg.tol) {
            report.status = SolveStatus::Converged;
            return report;
        }
        if (rel > kDivergenceFactor * initial_rel || !std::isfinite(rel)) {
            report.status = SolveStatus::Diverged;
            return report;
        }
    }
    report.status = SolveStatus::MaxIter;
    return report;
}

std::string residual_history_csv(const SolveReport& report) {
    std::ostringstream os;
    os << "iter,residual\n";
    char buf[64];
    for (std::size_t k = 0; k < report.residuals.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k + 1, report.residuals[k]);
        os << buf;
    }
    return os.str();
}

} // namespace etn
