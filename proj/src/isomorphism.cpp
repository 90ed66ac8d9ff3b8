#include "etn/isomorphism.hpp"

#include <Eigen/Dense>

namespace etn {

namespace {

constexpr double kSingularRcond = 1e-14;

using MatrixMap = Eigen::Map<const Eigen::MatrixXd>;

void require_even_square(const EinsteinOperator& t) {
    if (!t.is_square()) {
        throw Error(ErrorCode::NonSquare, "operator must have I_m == J_m for all m");
    }
}

} // namespace

FlattenPlan flatten_plan(const EinsteinOperator& t) {
    FlattenPlan plan;
    plan.left_modes = t.left_modes();
    plan.right_modes = t.right_modes();
    plan.rows = t.rows();
    plan.cols = t.cols();
    return plan;
}

DenseTensor flatten(const EinsteinOperator& t) {
    return DenseTensor(Shape({t.rows(), t.cols()}), t.tensor().data());
}

EinsteinOperator unflatten(const DenseTensor& m,
                           const std::vector<std::size_t>& left_modes,
                           const std::vector<std::size_t>& right_modes) {
    if (m.order() != 2) {
        throw Error(ErrorCode::ShapeMismatch, "unflatten expects a matrix");
    }
    if (left_modes.size() != right_modes.size()) {
        throw Error(ErrorCode::ShapeMismatch, "left/right mode lists must have equal length");
    }
    std::size_t rows = 1, cols = 1;
    for (std::size_t d : left_modes) rows *= d;
    for (std::size_t d : right_modes) cols *= d;
    if (rows != m.shape().extent(0) || cols != m.shape().extent(1)) {
        throw Error(ErrorCode::ShapeMismatch, "matrix extents do not match mode products");
    }
    std::vector<std::size_t> dims = left_modes;
    dims.insert(dims.end(), right_modes.begin(), right_modes.end());
    return EinsteinOperator(DenseTensor(Shape(dims), m.data()));
}

EinsteinOperator inverse(const EinsteinOperator& t) {
    require_even_square(t);
    const std::size_t n = t.rows();
    MatrixMap a(t.tensor().data().data(), static_cast<Eigen::Index>(n),
                static_cast<Eigen::Index>(n));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(lu.rcond() > kSingularRcond)) {
        throw Error(ErrorCode::SingularTensor, "flattened operator is numerically singular");
    }
    Eigen::MatrixXd inv = lu.inverse();
    std::vector<double> data(inv.data(), inv.data() + inv.size());
    std::vector<std::size_t> dims = t.right_modes();
    auto left = t.left_modes();
    dims.insert(dims.end(), left.begin(), left.end());
    return EinsteinOperator(DenseTensor(Shape(dims), std::move(data)));
}

DenseTensor direct_solve(const EinsteinOperator& a, const DenseTensor& b) {
    require_even_square(a);
    const auto right = a.right_modes();
    const auto& bd = b.shape().dims();
    if (bd.size() < right.size()) {
        throw Error(ErrorCode::ShapeMismatch, "rhs has fewer modes than the operator contracts");
    }
    for (std::size_t k = 0; k < right.size(); ++k) {
        if (bd[k] != right[k]) {
            throw Error(ErrorCode::ShapeMismatch, "rhs leading modes must match operator right modes");
        }
    }
    const std::size_t n = a.rows();
    const std::size_t nrhs = b.size() / n;

    MatrixMap am(a.tensor().data().data(), static_cast<Eigen::Index>(n),
                 static_cast<Eigen::Index>(n));
    MatrixMap bm(b.data().data(), static_cast<Eigen::Index>(n),
                 static_cast<Eigen::Index>(nrhs));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(am);
    if (!(lu.rcond() > kSingularRcond)) {
        throw Error(ErrorCode::SingularTensor, "flattened operator is numerically singular");
    }
    Eigen::MatrixXd x = lu.solve(bm);
    std::vector<double> data(x.data(), x.data() + x.size());

    std::vector<std::size_t> out_dims = a.left_modes();
    out_dims.insert(out_dims.end(), bd.begin() + static_cast<std::ptrdiff_t>(right.size()),
                    bd.end());
    return DenseTensor(Shape(out_dims), std::move(data));
}

} // namespace etn
