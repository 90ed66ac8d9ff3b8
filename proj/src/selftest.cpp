#include "etn/selftest.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <ostream>
#include <random>
#include <sstream>

#include "etn/decomp.hpp"
#include "etn/isomorphism.hpp"
#include "etn/lstsq.hpp"
#include "etn/solvers.hpp"
#include "etn/tensor.hpp"

namespace etn {

namespace {

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return 2.0 * u - 1.0;
    }

    DenseTensor tensor(const std::vector<std::size_t>& dims) {
        DenseTensor t{Shape(dims)};
        for (auto& v : t.data()) v = (*this)();
        return t;
    }

private:
    std::mt19937_64 rng_;
};

/// Reference matrix product with ascending-k accumulation per entry; the
/// bit-exact oracle for the flattened Einstein product.
DenseTensor matmul_oracle(const DenseTensor& a, const DenseTensor& b) {
    const std::size_t rows = a.shape().extent(0);
    const std::size_t inner = a.shape().extent(1);
    const std::size_t cols = b.shape().extent(1);
    DenseTensor c{Shape({rows, cols})};
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < inner; ++k) {
                s += a[i + k * rows] * b[k + j * inner];
            }
            c[i + j * rows] = s;
        }
    }
    return c;
}

double rel_diff(const DenseTensor& a, const DenseTensor& b) {
    double d2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
        n2 += b[i] * b[i];
    }
    return std::sqrt(d2) / (n2 > 0.0 ? std::sqrt(n2) : 1.0);
}

EinsteinOperator well_conditioned(Uniform& rng, const std::vector<std::size_t>& left) {
    std::vector<std::size_t> dims = left;
    dims.insert(dims.end(), left.begin(), left.end());
    DenseTensor t = rng.tensor(dims);
    EinsteinOperator op{std::move(t)};
    const std::size_t n = op.rows();
    for (std::size_t i = 0; i < n; ++i) {
        op.tensor()[i + i * n] += 3.0;  // diagonal shift keeps f(t) well away from singular
    }
    return op;
}

SelftestResult check(const std::string& name, bool ok, const std::string& detail) {
    return SelftestResult{name, ok, detail};
}

SelftestResult suite_homomorphism() {
    Uniform rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        EinsteinOperator a{rng.tensor({2, 3, 2, 3})};
        EinsteinOperator b{rng.tensor({2, 3, 2, 3})};
        DenseTensor lhs = flatten(einstein_product(a, b));
        DenseTensor oracle = matmul_oracle(flatten(a), flatten(b));
        if (std::memcmp(lhs.data().data(), oracle.data().data(),
                        lhs.size() * sizeof(double)) != 0) {
            return check("homomorphism", false, "flatten(a*b) != flatten(a)*flatten(b)");
        }
    }
    return check("homomorphism", true, "200 random pairs, bit-exact");
}

SelftestResult suite_group_axioms() {
    Uniform rng(12);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        EinsteinOperator a{rng.tensor({2, 3, 2, 3})};
        EinsteinOperator b{rng.tensor({2, 3, 2, 3})};
        EinsteinOperator c{rng.tensor({2, 3, 2, 3})};
        DenseTensor lhs = einstein_product(einstein_product(a, b), c).tensor();
        DenseTensor rhs = einstein_product(a, einstein_product(b, c)).tensor();
        worst = std::max(worst, rel_diff(lhs, rhs));
    }
    if (worst > 1e-12) {
        return check("group-axioms", false, "associativity violated");
    }
    EinsteinOperator e = identity_tensor({2, 3});
    Uniform rng2(13);
    EinsteinOperator a = well_conditioned(rng2, {2, 3});
    if (rel_diff(einstein_product(e, a).tensor(), a.tensor()) != 0.0 ||
        rel_diff(einstein_product(a, e).tensor(), a.tensor()) != 0.0) {
        return check("group-axioms", false, "identity element not neutral");
    }
    EinsteinOperator inv = inverse(a);
    const double left = rel_diff(einstein_product(inv, a).tensor(), e.tensor());
    const double right = rel_diff(einstein_product(a, inv).tensor(), e.tensor());
    if (left > 1e-12 || right > 1e-12) {
        return check("group-axioms", false, "two-sided inverse residual too large");
    }
    std::ostringstream d;
    d << "assoc worst " << worst;
    return check("group-axioms", true, d.str());
}

SelftestResult suite_inversion() {
    Uniform rng(14);
    for (const auto& modes :
         std::vector<std::vector<std::size_t>>{{2, 3}, {2, 2, 3}}) {
        EinsteinOperator a = well_conditioned(rng, modes);
        EinsteinOperator e = identity_tensor(modes);
        const double res = rel_diff(einstein_product(inverse(a), a).tensor(), e.tensor());
        if (res > 1e-10) {
            return check("inversion", false, "inverse residual exceeds 1e-10");
        }
    }
    bool raised = false;
    try {
        EinsteinOperator odd{DenseTensor(Shape({2, 2, 2}))};
        (void)odd;
    } catch (const Error& e) {
        raised = e.code() == ErrorCode::OddOrder;
    }
    if (!raised) {
        return check("inversion", false, "odd order accepted");
    }
    return check("inversion", true, "order-4 and order-6, odd order rejected");
}

SelftestResult suite_decompositions() {
    Uniform rng(15);
    EinsteinOperator a{rng.tensor({3, 2, 3, 2})};
    SvdResult svd = tensor_svd(a);
    DenseTensor recon =
        einstein_product(einstein_product(svd.u, svd.d), transpose(svd.v)).tensor();
    if (rel_diff(recon, a.tensor()) > 1e-10) {
        return check("svd-evd", false, "SVD reconstruction failed");
    }
    if (!is_orthogonal(svd.u, 1e-10 * std::sqrt(6.0)) ||
        !is_orthogonal(svd.v, 1e-10 * std::sqrt(6.0))) {
        return check("svd-evd", false, "SVD factors not orthogonal");
    }

    // symmetrize and run the eigen relation on every eigenmatrix slice
    EinsteinOperator sym = a;
    {
        EinsteinOperator at = transpose(a);
        for (std::size_t i = 0; i < sym.tensor().size(); ++i) {
            sym.tensor()[i] = 0.5 * (a.tensor()[i] + at.tensor()[i]);
        }
    }
    EvdResult evd = tensor_evd(sym);
    const auto eigenvalues = diagonal_values(evd.d);
    const double anorm = frobenius_norm(sym.tensor());
    const auto terms = as_outer_sum(evd);
    for (std::size_t c = 0; c < terms.size(); ++c) {
        DenseTensor ap = einstein_product(sym.tensor(), terms[c].left, 2);
        double r2 = 0.0;
        for (std::size_t i = 0; i < ap.size(); ++i) {
            const double d = ap[i] - eigenvalues[c] * terms[c].left[i];
            r2 += d * d;
        }
        if (std::sqrt(r2) > 1e-8 * anorm) {
            return check("svd-evd", false, "eigenmatrix relation violated");
        }
    }
    return check("svd-evd", true, "reconstruction, orthogonality, eigen relation");
}

SelftestResult suite_cp_msvd() {
    Uniform rng(16);
    const std::size_t ni = 3, nj = 2;
    // separable orthogonal factors guarantee rank-one slices
    auto orthogonal = [&](std::size_t n) -> Eigen::MatrixXd {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng();
        Eigen::MatrixXd q =
            Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
        return q;
    };
    Eigen::MatrixXd fa = orthogonal(ni), fb = orthogonal(nj);
    Eigen::MatrixXd fc = orthogonal(ni), fd = orthogonal(nj);
    const std::size_t n = ni * nj;

    DenseTensor ut{Shape({ni, nj, ni, nj})};
    DenseTensor vt{Shape({ni, nj, ni, nj})};
    for (std::size_t l = 0; l < nj; ++l)
        for (std::size_t k = 0; k < ni; ++k)
            for (std::size_t j = 0; j < nj; ++j)
                for (std::size_t i = 0; i < ni; ++i) {
                    ut.set({i, j, k, l}, fa(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(k)) *
                                             fb(static_cast<Eigen::Index>(j),
                                                static_cast<Eigen::Index>(l)));
                    vt.set({i, j, k, l}, fc(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(k)) *
                                             fd(static_cast<Eigen::Index>(j),
                                                static_cast<Eigen::Index>(l)));
                }
    DenseTensor dt{Shape({ni, nj, ni, nj})};
    for (std::size_t c = 0; c < n; ++c) {
        dt.data()[c + c * n] = static_cast<double>(n - c);  // distinct, descending
    }
    EinsteinOperator u{std::move(ut)}, v{std::move(vt)}, d{std::move(dt)};
    EinsteinOperator t = einstein_product(einstein_product(u, d), transpose(v));

    SvdResult svd = tensor_svd(t);
    CpForm cp = extract_cp(svd);
    if (rel_diff(cp_reconstruct(cp), t.tensor()) > 1e-10) {
        return check("cp-msvd", false, "CP reconstruction failed");
    }
    MsvdForm msvd = extract_multilinear_svd(svd);
    if (rel_diff(msvd_reconstruct(msvd), t.tensor()) > 1e-10) {
        return check("cp-msvd", false, "multilinear-SVD reconstruction failed");
    }

    bool cp_rejected = false, msvd_rejected = false;
    SvdResult generic = tensor_svd(EinsteinOperator{rng.tensor({3, 2, 3, 2})});
    try {
        extract_cp(generic);
    } catch (const Error& e) {
        cp_rejected = e.code() == ErrorCode::RankOneViolation;
    }
    try {
        extract_multilinear_svd(generic);
    } catch (const Error& e) {
        msvd_rejected = e.code() == ErrorCode::SeparabilityViolation;
    }
    if (!cp_rejected || !msvd_rejected) {
        return check("cp-msvd", false, "generic input not rejected");
    }
    return check("cp-msvd", true, "construct/recover and generic rejection");
}

SelftestResult suite_solver_oracle() {
    Uniform rng(17);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 6;
        // SPD-flattened operator: m^T m + 2 I on the 6x6 flattening
        DenseTensor m = rng.tensor({n, n});
        DenseTensor g = matmul_oracle(DenseTensor(Shape({n, n}), [&] {
                                          std::vector<double> tr(n * n);
                                          for (std::size_t j = 0; j < n; ++j)
                                              for (std::size_t i = 0; i < n; ++i)
                                                  tr[j + i * n] = m[i + j * n];
                                          return tr;
                                      }()),
                                      m);
        for (std::size_t i = 0; i < n; ++i) g[i + i * n] += 2.0;
        EinsteinOperator a = unflatten(g, {2, 3}, {2, 3});
        DenseTensor b = rng.tensor({2, 3});

        SolverConfig cfg;
        cfg.tol = 1e-12;
        cfg.max_iter = 30;
        SolveReport tensor_run = bicg_solve(a, b, cfg);

        // matrix CGNR with the same update sequence
        std::vector<double> x(n, 0.0), r(b.data().begin(), b.data().end());
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
        double bnorm = std::sqrt(dot(r, r));
        std::vector<double> z = apply(r, true), p = z;
        double zz = dot(z, z);
        std::size_t it = 0;
        std::vector<double> history;
        while (it < cfg.max_iter) {
            std::vector<double> w = apply(p, false);
            const double curvature = dot(w, w);
            if (!(curvature > 0.0)) break;
            const double alpha = zz / curvature;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * w[i];
            }
            ++it;
            history.push_back(std::sqrt(dot(r, r)) / bnorm);
            if (history.back() <= cfg.tol) break;
            z = apply(r, true);
            const double zz_next = dot(z, z);
            const double beta = zz_next / zz;
            zz = zz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        DenseTensor xm(Shape({2, 3}), x);
        worst = std::max(worst, rel_diff(tensor_run.x, xm));
        for (std::size_t k = 0; k < std::min(history.size(), tensor_run.residuals.size());
             ++k) {
            worst = std::max(worst, std::abs(history[k] - tensor_run.residuals[k]));
        }

        // Jacobi vs matrix Jacobi, five steps
        SolverConfig jcfg;
        jcfg.tol = 1e-30;
        jcfg.max_iter = 5;
        SolveReport jt = jacobi_solve(a, b, jcfg);
        std::vector<double> xj(n, 0.0);
        for (int step = 0; step < 5; ++step) {
            std::vector<double> ax(n, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) ax[j] += g[j + k * n] * xj[k];
            std::vector<double> next(n);
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = (b[i] - (ax[i] - g[i + i * n] * xj[i])) / g[i + i * n];
            }
            xj = next;
        }
        worst = std::max(worst, rel_diff(jt.x, DenseTensor(Shape({2, 3}), xj)));
    }
    std::ostringstream d;
    d << "worst deviation " << worst;
    return check("solver-oracle", worst <= 1e-13, d.str());
}

SelftestResult suite_lstsq() {
    Uniform rng(18);
    DenseTensor a = rng.tensor({2, 3, 4});
    if (rel_diff(transpose3(transpose3(transpose3(a))), a) != 0.0) {
        return check("lstsq", false, "triple transpose is not the identity");
    }

    const std::size_t ni = 3, nj = 4, nk = 2;
    const std::vector<std::vector<std::size_t>> adims = {
        {ni, nj, nk}, {nj, nk, ni}, {nk, ni, nj},
        {ni, nk, nj}, {nk, nj, ni}, {nj, ni, nk}};
    for (int row = 1; row <= 6; ++row) {
        const auto& dims = adims[static_cast<std::size_t>(row - 1)];
        DenseTensor at = rng.tensor(dims);
        const std::size_t p = dims[0], q = dims[1];
        const bool swapped = row == 4;
        DenseTensor b = rng.tensor({swapped ? q : p, swapped ? p : q});
        DenseTensor x = ls_solve_layout(static_cast<LstsqLayout>(row), at, b);

        // QR oracle on the (pq) x k unfolding
        const std::size_t k = dims[2];
        Eigen::MatrixXd mm(static_cast<Eigen::Index>(p * q), static_cast<Eigen::Index>(k));
        Eigen::VectorXd bv(static_cast<Eigen::Index>(p * q));
        for (std::size_t kk = 0; kk < k; ++kk)
            for (std::size_t qq = 0; qq < q; ++qq)
                for (std::size_t pp = 0; pp < p; ++pp)
                    mm(static_cast<Eigen::Index>(pp + qq * p),
                       static_cast<Eigen::Index>(kk)) = at.at({pp, qq, kk});
        for (std::size_t qq = 0; qq < q; ++qq)
            for (std::size_t pp = 0; pp < p; ++pp)
                bv(static_cast<Eigen::Index>(pp + qq * p)) =
                    swapped ? b.at({qq, pp}) : b.at({pp, qq});
        Eigen::VectorXd xo = mm.householderQr().solve(bv);
        DenseTensor xot(Shape({k}), std::vector<double>(xo.data(), xo.data() + k));
        if (rel_diff(x, xot) > 1e-10) {
            return check("lstsq", false, "layout row mismatch vs QR oracle");
        }
    }

    // finite-difference gradient of phi_1 against the normal-equation formula
    DenseTensor a1 = rng.tensor({ni, nj, nk});
    DenseTensor b1 = rng.tensor({ni, nj});
    DenseTensor x0 = rng.tensor({nk});
    NormalSystem sys = normal_system_for(LstsqLayout::Row1, a1, b1);
    auto phi = [&](const DenseTensor& x) {
        DenseTensor ax = einstein_product(a1, x, 1);
        double s = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            const double d = ax[i] - b1[i];
            s += d * d;
        }
        return s;
    };
    DenseTensor gx = einstein_product(sys.gram.tensor(), x0, 1);
    for (std::size_t i = 0; i < nk; ++i) {
        const double analytic = 2.0 * gx[i] - 2.0 * sys.rhs[i];
        const double h = 1e-6;
        DenseTensor plus = x0, minus = x0;
        plus[i] += h;
        minus[i] -= h;
        const double fd = (phi(plus) - phi(minus)) / (2.0 * h);
        if (std::abs(fd - analytic) > 1e-5 * std::max(1.0, std::abs(analytic))) {
            return check("lstsq", false, "finite-difference gradient mismatch");
        }
    }
    return check("lstsq", true, "six layouts, transpose identity, gradient check");
}

} // namespace

std::vector<SelftestResult> run_selftest() {
    return {suite_homomorphism(), suite_group_axioms(),  suite_inversion(),
            suite_decompositions(), suite_cp_msvd(),     suite_solver_oracle(),
            suite_lstsq()};
}

bool print_selftest(std::ostream& os, const std::vector<SelftestResult>& results) {
    bool all = true;
    for (const auto& r : results) {
        os << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) os << "  (" << r.detail << ")";
        os << "\n";
        all = all && r.passed;
    }
    return all;
}

} // namespace etn
