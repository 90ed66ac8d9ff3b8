#include "etn/decomp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "etn/isomorphism.hpp"

namespace etn {

namespace {

using MatrixMap = Eigen::Map<const Eigen::MatrixXd>;

MatrixMap as_matrix(const EinsteinOperator& t) {
    return MatrixMap(t.tensor().data().data(), static_cast<Eigen::Index>(t.rows()),
                     static_cast<Eigen::Index>(t.cols()));
}

/// First nonzero entry of each column made positive; applied jointly so the
/// product of the factor pair is unchanged.
void fix_signs(Eigen::MatrixXd& u, Eigen::MatrixXd* v) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        double lead = 0.0;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            if (u(r, c) != 0.0) {
                lead = u(r, c);
                break;
            }
        }
        if (lead < 0.0) {
            u.col(c) = -u.col(c);
            if (v) v->col(c) = -v->col(c);
        }
    }
}

EinsteinOperator square_operator_from(const Eigen::MatrixXd& m,
                                      const std::vector<std::size_t>& modes) {
    std::vector<double> data(m.data(), m.data() + m.size());
    return unflatten(DenseTensor(Shape({static_cast<std::size_t>(m.rows()),
                                        static_cast<std::size_t>(m.cols())}),
                                 std::move(data)),
                     modes, modes);
}

void require_order4(const EinsteinOperator& t, const char* what) {
    if (t.half_order() != 2) {
        throw Error(ErrorCode::UnsupportedOrder, std::string(what) + " is only defined for order-4 results");
    }
}

/// Splits a matrix into sigma * x y^T; returns false (and the ratio) when the
/// second singular value exceeds tol relative to the first.
bool rank_one_split(const Eigen::MatrixXd& m, double tol, Eigen::VectorXd& x,
                    Eigen::VectorXd& y) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s.size() > 1 && s(0) > 0.0 && s(1) > tol * s(0)) return false;
    const double scale = std::sqrt(s(0));
    x = scale * svd.matrixU().col(0);
    y = scale * svd.matrixV().col(0);
    // sign convention: first nonzero of x positive
    for (Eigen::Index r = 0; r < x.size(); ++r) {
        if (x(r) != 0.0) {
            if (x(r) < 0.0) {
                x = -x;
                y = -y;
            }
            break;
        }
    }
    return true;
}

std::size_t numerical_rank(const Eigen::MatrixXd& m, double tol = 1e-10) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol * s(0)) ++r;
    }
    return r;
}

} // namespace

SvdResult tensor_svd(const EinsteinOperator& a, const DecompOptions& opts) {
    if (!a.is_square()) {
        throw Error(ErrorCode::NonSquare, "tensor SVD requires a square operator");
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(as_matrix(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd u = svd.matrixU();
    Eigen::MatrixXd v = svd.matrixV();
    fix_signs(u, &v);

    const auto& s = svd.singularValues();
    const std::size_t n = a.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    std::size_t rank = 0;
    const double smax = s.size() > 0 ? s(0) : 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        d(i, i) = s(i);
        if (smax > 0.0 && s(i) > opts.rank_tol * smax) ++rank;
    }

    const auto modes = a.left_modes();
    SvdResult out;
    out.u = square_operator_from(u, modes);
    out.d = square_operator_from(d, modes);
    out.v = square_operator_from(v, modes);
    out.rank = rank;
    return out;
}

EvdResult tensor_evd(const EinsteinOperator& a, const DecompOptions& opts) {
    if (a.tensor().order() % 2 != 0) {
        throw Error(ErrorCode::OddOrder, "tensor EVD requires an even-order operator");
    }
    if (!is_symmetric(a, opts.sym_tol)) {
        throw Error(ErrorCode::NotSymmetric, "tensor EVD requires a symmetric operator");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(as_matrix(a));
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidArgument, "eigensolver failed to converge");
    }
    Eigen::MatrixXd p = eig.eigenvectors();
    fix_signs(p, nullptr);

    const std::size_t n = a.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    d.diagonal() = eig.eigenvalues();

    const auto modes = a.left_modes();
    EvdResult out;
    out.p = square_operator_from(p, modes);
    out.d = square_operator_from(d, modes);
    return out;
}

std::vector<double> diagonal_values(const EinsteinOperator& d) {
    const std::size_t n = d.rows();
    std::vector<double> out(n);
    const auto& data = d.tensor().data();
    for (std::size_t i = 0; i < n; ++i) out[i] = data[i + i * n];
    return out;
}

namespace {

std::vector<OuterTerm> outer_sum(const EinsteinOperator& left, const EinsteinOperator& diag,
                                 const EinsteinOperator& right) {
    require_order4(left, "outer-product expansion");
    const std::size_t ni = left.tensor().shape().extent(0);
    const std::size_t nj = left.tensor().shape().extent(1);
    const std::size_t n = ni * nj;
    const auto& lw = left.tensor().data();
    const auto& rw = right.tensor().data();
    const auto& dw = diag.tensor().data();

    std::vector<OuterTerm> terms;
    terms.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
        OuterTerm term;
        term.sigma = dw[c + c * n];
        term.left = DenseTensor(Shape({ni, nj}),
                                {lw.begin() + static_cast<std::ptrdiff_t>(c * n),
                                 lw.begin() + static_cast<std::ptrdiff_t>((c + 1) * n)});
        term.right = DenseTensor(Shape({ni, nj}),
                                 {rw.begin() + static_cast<std::ptrdiff_t>(c * n),
                                  rw.begin() + static_cast<std::ptrdiff_t>((c + 1) * n)});
        terms.push_back(std::move(term));
    }
    return terms;
}

} // namespace

std::vector<OuterTerm> as_outer_sum(const SvdResult& r) {
    return outer_sum(r.u, r.d, r.v);
}

std::vector<OuterTerm> as_outer_sum(const EvdResult& r) {
    return outer_sum(r.p, r.d, r.p);
}

CpForm extract_cp(const SvdResult& r, double tol) {
    require_order4(r.u, "CP extraction");
    const std::size_t ni = r.u.tensor().shape().extent(0);
    const std::size_t nj = r.u.tensor().shape().extent(1);
    const std::size_t n = ni * nj;

    MatrixMap u = as_matrix(r.u);
    MatrixMap v = as_matrix(r.v);

    Eigen::MatrixXd fa(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd fb(static_cast<Eigen::Index>(nj), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd fc(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd fd(static_cast<Eigen::Index>(nj), static_cast<Eigen::Index>(n));

    std::ostringstream bad;
    bool any_bad = false;
    for (std::size_t c = 0; c < n; ++c) {
        Eigen::MatrixXd su = Eigen::Map<const Eigen::MatrixXd>(
            u.col(static_cast<Eigen::Index>(c)).data(), static_cast<Eigen::Index>(ni),
            static_cast<Eigen::Index>(nj));
        Eigen::MatrixXd sv = Eigen::Map<const Eigen::MatrixXd>(
            v.col(static_cast<Eigen::Index>(c)).data(), static_cast<Eigen::Index>(ni),
            static_cast<Eigen::Index>(nj));
        Eigen::VectorXd x, y;
        const std::size_t k = c % ni;
        const std::size_t l = c / ni;
        if (!rank_one_split(su, tol, x, y)) {
            if (any_bad) bad << ", ";
            bad << "U(" << k + 1 << "," << l + 1 << ")";
            any_bad = true;
            continue;
        }
        fa.col(static_cast<Eigen::Index>(c)) = x;
        fb.col(static_cast<Eigen::Index>(c)) = y;
        if (!rank_one_split(sv, tol, x, y)) {
            if (any_bad) bad << ", ";
            bad << "V(" << k + 1 << "," << l + 1 << ")";
            any_bad = true;
            continue;
        }
        fc.col(static_cast<Eigen::Index>(c)) = x;
        fd.col(static_cast<Eigen::Index>(c)) = y;
    }
    if (any_bad) {
        throw Error(ErrorCode::RankOneViolation,
                    "factor slices are not rank-one: " + bad.str());
    }

    CpForm out;
    out.weights = diagonal_values(r.d);
    auto to_tensor = [](const Eigen::MatrixXd& m) {
        std::vector<double> data(m.data(), m.data() + m.size());
        return DenseTensor(Shape({static_cast<std::size_t>(m.rows()),
                                  static_cast<std::size_t>(m.cols())}),
                           std::move(data));
    };
    out.a = to_tensor(fa);
    out.b = to_tensor(fb);
    out.c = to_tensor(fc);
    out.d = to_tensor(fd);

    const std::size_t big_r = r.rank;
    const std::size_t rank_sum =
        numerical_rank(fa) + numerical_rank(fb) + numerical_rank(fc) + numerical_rank(fd);
    out.sidiropoulos_bro_margin =
        static_cast<int>(rank_sum) - static_cast<int>(2 * big_r + 3);
    out.sidiropoulos_bro_holds = out.sidiropoulos_bro_margin >= 0;
    return out;
}

MsvdForm extract_multilinear_svd(const SvdResult& r, double tol) {
    require_order4(r.u, "multilinear-SVD extraction");
    const std::size_t ni = r.u.tensor().shape().extent(0);
    const std::size_t nj = r.u.tensor().shape().extent(1);

    // Kronecker-separability test: rearrange u_{ijkl} into the (I*I) x (J*J)
    // matrix M[(i,k),(j,l)]; u is separable iff M is rank-one.
    auto separate = [&](const EinsteinOperator& t, const char* name, Eigen::MatrixXd& first,
                        Eigen::MatrixXd& second) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(ni * ni),
                          static_cast<Eigen::Index>(nj * nj));
        const auto& w = t.tensor().data();
        for (std::size_t l = 0; l < nj; ++l)
            for (std::size_t k = 0; k < ni; ++k)
                for (std::size_t j = 0; j < nj; ++j)
                    for (std::size_t i = 0; i < ni; ++i) {
                        const std::size_t lin = i + ni * (j + nj * (k + ni * l));
                        m(static_cast<Eigen::Index>(i + k * ni),
                          static_cast<Eigen::Index>(j + l * nj)) = w[lin];
                    }
        Eigen::VectorXd x, y;
        if (!rank_one_split(m, tol, x, y)) {
            throw Error(ErrorCode::SeparabilityViolation,
                        std::string(name) + " is not Kronecker-separable");
        }
        first = Eigen::Map<const Eigen::MatrixXd>(x.data(), static_cast<Eigen::Index>(ni),
                                                  static_cast<Eigen::Index>(ni));
        second = Eigen::Map<const Eigen::MatrixXd>(y.data(), static_cast<Eigen::Index>(nj),
                                                   static_cast<Eigen::Index>(nj));
        // rebalance so both factors are orthogonal, not just their product
        const double c2 = (first.transpose() * first).trace() / static_cast<double>(ni);
        if (c2 > 0.0) {
            const double s = std::sqrt(std::sqrt(c2));
            first /= s * s;
            second *= s * s;
        }
    };

    Eigen::MatrixXd fa, fb, fc, fd;
    separate(r.u, "left factor", fa, fb);
    separate(r.v, "right factor", fc, fd);

    const std::size_t n = ni * nj;
    DenseTensor core{Shape({ni, nj, ni, nj})};
    const auto sigma = diagonal_values(r.d);
    for (std::size_t l = 0; l < nj; ++l) {
        for (std::size_t k = 0; k < ni; ++k) {
            const std::size_t c = k + l * ni;
            core.set({k, l, k, l}, sigma[c]);
        }
    }
    (void)n;

    auto to_tensor = [](const Eigen::MatrixXd& m) {
        std::vector<double> data(m.data(), m.data() + m.size());
        return DenseTensor(Shape({static_cast<std::size_t>(m.rows()),
                                  static_cast<std::size_t>(m.cols())}),
                           std::move(data));
    };
    MsvdForm out;
    out.core = std::move(core);
    out.a = to_tensor(fa);
    out.b = to_tensor(fb);
    out.c = to_tensor(fc);
    out.d = to_tensor(fd);
    return out;
}

DenseTensor cp_reconstruct(const CpForm& form) {
    const std::size_t ni = form.a.shape().extent(0);
    const std::size_t nj = form.b.shape().extent(0);
    const std::size_t nr = form.weights.size();
    DenseTensor out{Shape({ni, nj, ni, nj})};
    for (std::size_t r = 0; r < nr; ++r) {
        const double w = form.weights[r];
        if (w == 0.0) continue;
        for (std::size_t l = 0; l < nj; ++l)
            for (std::size_t k = 0; k < ni; ++k)
                for (std::size_t j = 0; j < nj; ++j)
                    for (std::size_t i = 0; i < ni; ++i) {
                        const std::size_t lin = i + ni * (j + nj * (k + ni * l));
                        out[lin] += w * form.a.at({i, r}) * form.b.at({j, r}) *
                                    form.c.at({k, r}) * form.d.at({l, r});
                    }
    }
    return out;
}

DenseTensor msvd_reconstruct(const MsvdForm& form) {
    DenseTensor t = mode_n_product(form.core, form.a, 0);
    t = mode_n_product(t, form.b, 1);
    t = mode_n_product(t, form.c, 2);
    t = mode_n_product(t, form.d, 3);
    return t;
}

} // namespace etn
