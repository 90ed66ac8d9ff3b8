#include "etn/lstsq.hpp"

#include <Eigen/Dense>

namespace etn {

namespace {

constexpr double kSingularRcond = 1e-14;

void require_order3(const DenseTensor& a) {
    if (a.order() != 3) {
        throw Error(ErrorCode::InvalidOrder, "expected an order-3 tensor");
    }
}

/// Matrix transpose of an order-2 tensor.
DenseTensor matrix_transpose(const DenseTensor& b) {
    const std::size_t rows = b.shape().extent(0);
    const std::size_t cols = b.shape().extent(1);
    DenseTensor out{Shape({cols, rows})};
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            out[j + i * cols] = b[i + j * rows];
    return out;
}

DenseTensor solve_spd(const EinsteinOperator& gram, const DenseTensor& rhs, double ridge,
                      const Shape& out_shape) {
    const std::size_t n = gram.rows();
    Eigen::MatrixXd g = Eigen::Map<const Eigen::MatrixXd>(
        gram.tensor().data().data(), static_cast<Eigen::Index>(n),
        static_cast<Eigen::Index>(n));
    if (ridge != 0.0) {
        g.diagonal().array() += ridge;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    // LDLT::rcond() behaves like a pseudo-inverse estimate on exactly
    // singular input, so gauge conditioning from the pivot spread directly.
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    const double dmin = d.cwiseAbs().minCoeff();
    if (ldlt.info() != Eigen::Success || !(dmin > kSingularRcond * dmax) ||
        !ldlt.isPositive()) {
        throw Error(ErrorCode::SingularNormal, "gram operator is numerically singular");
    }
    const std::size_t nrhs = rhs.size() / n;
    Eigen::MatrixXd x = ldlt.solve(Eigen::Map<const Eigen::MatrixXd>(
        rhs.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nrhs)));
    std::vector<double> data(x.data(), x.data() + x.size());
    return DenseTensor(out_shape, std::move(data));
}

} // namespace

DenseTensor transpose3(const DenseTensor& a) {
    if (a.order() != 3) {
        throw Error(ErrorCode::InvalidOrder, "transpose3 expects an order-3 tensor");
    }
    const std::size_t ni = a.shape().extent(0);
    const std::size_t nj = a.shape().extent(1);
    const std::size_t nk = a.shape().extent(2);
    DenseTensor out{Shape({nk, ni, nj})};
    for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t j = 0; j < nj; ++j)
            for (std::size_t i = 0; i < ni; ++i)
                out[k + nk * (i + ni * j)] = a[i + ni * (j + nj * k)];
    return out;
}

NormalSystem normal_system_for(LstsqLayout layout, const DenseTensor& a,
                               const DenseTensor& b) {
    require_order3(a);
    if (b.order() != 2) {
        throw Error(ErrorCode::ShapeMismatch, "observation must be a matrix");
    }
    const int row = static_cast<int>(layout);
    if (row < 1 || row > 6) {
        throw Error(ErrorCode::UnsupportedLayout, "layout must be one of rows 1-6");
    }
    const std::size_t p = a.shape().extent(0);
    const std::size_t q = a.shape().extent(1);
    const std::size_t k = a.shape().extent(2);
    if (p * q < k) {
        throw Error(ErrorCode::ShapeMismatch, "system must be overdetermined");
    }
    const bool swapped = (layout == LstsqLayout::Row4);
    const std::size_t want0 = swapped ? q : p;
    const std::size_t want1 = swapped ? p : q;
    if (b.shape().extent(0) != want0 || b.shape().extent(1) != want1) {
        throw Error(ErrorCode::ShapeMismatch, "observation extents do not match the layout");
    }

    DenseTensor at = transpose3(a);
    NormalSystem out;
    out.gram = EinsteinOperator(einstein_product(at, a, 2));
    out.rhs = einstein_product(at, swapped ? matrix_transpose(b) : b, 2);
    return out;
}

DenseTensor ls_solve_mode3(const DenseTensor& a, const DenseTensor& b,
                           const LstsqOptions& opts) {
    return ls_solve_layout(LstsqLayout::Row1, a, b, opts);
}

DenseTensor ls_solve_layout(LstsqLayout layout, const DenseTensor& a,
                            const DenseTensor& b, const LstsqOptions& opts) {
    NormalSystem sys = normal_system_for(layout, a, b);
    return solve_spd(sys.gram, sys.rhs, opts.ridge, sys.rhs.shape());
}

DenseTensor ls_solve_einstein(const DenseTensor& a, const DenseTensor& b,
                              const LstsqOptions& opts) {
    if (a.order() != 4 || b.order() != 4) {
        throw Error(ErrorCode::ShapeMismatch, "expected order-4 operand and observation");
    }
    const auto& da = a.shape().dims();
    const auto& db = b.shape().dims();
    if (da[0] != db[0] || da[1] != db[1]) {
        throw Error(ErrorCode::ShapeMismatch, "leading modes of a and b must agree");
    }
    if (da[0] * da[1] < da[2] * da[3]) {
        throw Error(ErrorCode::ShapeMismatch, "system must be overdetermined");
    }
    EinsteinOperator op{a};
    EinsteinOperator at = transpose(op);
    EinsteinOperator gram = einstein_product(at, op);
    DenseTensor rhs = einstein_product(at, b);
    return solve_spd(gram, rhs, opts.ridge, rhs.shape());
}

} // namespace etn
