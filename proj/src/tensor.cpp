#include "etn/tensor.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace etn {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::OddOrder: return "OddOrder";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::SingularTensor: return "SingularTensor";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
        case ErrorCode::Diverged: return "Diverged";
        case ErrorCode::Breakdown: return "Breakdown";
        case ErrorCode::RankOneViolation: return "RankOneViolation";
        case ErrorCode::SeparabilityViolation: return "SeparabilityViolation";
        case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
        case ErrorCode::UnsupportedLayout: return "UnsupportedLayout";
        case ErrorCode::SingularNormal: return "SingularNormal";
        case ErrorCode::InvalidSize: return "InvalidSize";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "tensor order must be at least 1");
    }
    std::size_t total = 1;
    for (std::size_t d : dims_) {
        if (d == 0) {
            throw Error(ErrorCode::InvalidArgument, "every extent must be at least 1");
        }
        if (total > std::numeric_limits<std::size_t>::max() / d) {
            throw Error(ErrorCode::InvalidArgument, "element count overflows");
        }
        total *= d;
    }
}

std::size_t Shape::size() const noexcept {
    std::size_t total = 1;
    for (std::size_t d : dims_) total *= d;
    return total;
}

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), data_(shape_.size(), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
        throw Error(ErrorCode::ShapeMismatch, "data length does not match shape");
    }
}

std::size_t DenseTensor::offset(const std::vector<std::size_t>& idx) const {
    if (idx.size() != shape_.order()) {
        throw Error(ErrorCode::IndexOutOfRange, "multi-index order mismatch");
    }
    std::size_t off = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= shape_.extent(k)) {
            throw Error(ErrorCode::IndexOutOfRange, "index out of range");
        }
        off += idx[k] * stride;
        stride *= shape_.extent(k);
    }
    return off;
}

EinsteinOperator::EinsteinOperator(DenseTensor t) : tensor_(std::move(t)) {
    if (tensor_.order() % 2 != 0) {
        throw Error(ErrorCode::OddOrder, "operator order must be even");
    }
}

std::vector<std::size_t> EinsteinOperator::left_modes() const {
    const auto& d = tensor_.shape().dims();
    return {d.begin(), d.begin() + static_cast<std::ptrdiff_t>(half_order())};
}

std::vector<std::size_t> EinsteinOperator::right_modes() const {
    const auto& d = tensor_.shape().dims();
    return {d.begin() + static_cast<std::ptrdiff_t>(half_order()), d.end()};
}

bool EinsteinOperator::is_square() const noexcept {
    const auto& d = tensor_.shape().dims();
    const std::size_t n = tensor_.order() / 2;
    for (std::size_t m = 0; m < n; ++m) {
        if (d[m] != d[m + n]) return false;
    }
    return true;
}

std::size_t EinsteinOperator::rows() const noexcept {
    const auto& d = tensor_.shape().dims();
    const std::size_t n = tensor_.order() / 2;
    std::size_t r = 1;
    for (std::size_t m = 0; m < n; ++m) r *= d[m];
    return r;
}

std::size_t EinsteinOperator::cols() const noexcept {
    const auto& d = tensor_.shape().dims();
    const std::size_t n = tensor_.order() / 2;
    std::size_t c = 1;
    for (std::size_t m = n; m < 2 * n; ++m) c *= d[m];
    return c;
}

DenseTensor einstein_product(const DenseTensor& a, const DenseTensor& b, std::size_t n) {
    if (n == 0 || n > a.order() || n > b.order()) {
        throw Error(ErrorCode::InvalidOrder, "contraction order exceeds operand order");
    }
    const auto& da = a.shape().dims();
    const auto& db = b.shape().dims();
    const std::size_t lead = a.order() - n;
    for (std::size_t k = 0; k < n; ++k) {
        if (da[lead + k] != db[k]) {
            throw Error(ErrorCode::ShapeMismatch, "contracted extents differ");
        }
    }

    std::vector<std::size_t> out_dims(da.begin(), da.begin() + static_cast<std::ptrdiff_t>(lead));
    out_dims.insert(out_dims.end(), db.begin() + static_cast<std::ptrdiff_t>(n), db.end());
    if (out_dims.empty()) out_dims.push_back(1);  // full contraction -> scalar
    DenseTensor out{Shape(out_dims)};

    // Column-major layout makes both operands plain matrices: a is L x C with
    // leading modes fastest, b is C x T. The k loop runs ascending so every
    // output entry accumulates contracted indices in column-major order.
    std::size_t rows = 1;
    for (std::size_t m = 0; m < lead; ++m) rows *= da[m];
    std::size_t contracted = 1;
    for (std::size_t m = 0; m < n; ++m) contracted *= db[m];
    const std::size_t colsb = b.size() / contracted;

    const double* pa = a.data().data();
    const double* pb = b.data().data();
    double* pc = out.data().data();
    for (std::size_t j = 0; j < colsb; ++j) {
        double* cj = pc + j * rows;
        const double* bj = pb + j * contracted;
        for (std::size_t k = 0; k < contracted; ++k) {
            const double bkj = bj[k];
            const double* ak = pa + k * rows;
            for (std::size_t i = 0; i < rows; ++i) {
                cj[i] += ak[i] * bkj;
            }
        }
    }
    return out;
}

DenseTensor einstein_product(const EinsteinOperator& a, const DenseTensor& b) {
    return einstein_product(a.tensor(), b, a.half_order());
}

EinsteinOperator einstein_product(const EinsteinOperator& a, const EinsteinOperator& b) {
    return EinsteinOperator(einstein_product(a.tensor(), b.tensor(), a.half_order()));
}

DenseTensor mode_n_product(const DenseTensor& t, const DenseTensor& m, std::size_t mode) {
    if (m.order() != 2) {
        throw Error(ErrorCode::ShapeMismatch, "mode-n factor must be a matrix");
    }
    if (mode >= t.order()) {
        throw Error(ErrorCode::IndexOutOfRange, "mode out of range");
    }
    const std::size_t rows = m.shape().extent(0);
    const std::size_t cols = m.shape().extent(1);
    if (cols != t.shape().extent(mode)) {
        throw Error(ErrorCode::ShapeMismatch, "matrix column count must equal contracted extent");
    }

    std::vector<std::size_t> out_dims = t.shape().dims();
    out_dims[mode] = rows;
    DenseTensor out{Shape(out_dims)};

    // View t as (inner, J, outer) with inner = prod of modes before `mode`.
    std::size_t inner = 1;
    for (std::size_t k = 0; k < mode; ++k) inner *= t.shape().extent(k);
    std::size_t outer = t.size() / (inner * cols);

    const double* pt = t.data().data();
    const double* pm = m.data().data();
    double* po = out.data().data();
    for (std::size_t o = 0; o < outer; ++o) {
        const double* tslab = pt + o * inner * cols;
        double* oslab = po + o * inner * rows;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < cols; ++j) {
                const double mrj = pm[r + j * rows];
                const double* tj = tslab + j * inner;
                double* orow = oslab + r * inner;
                for (std::size_t i = 0; i < inner; ++i) {
                    orow[i] += tj[i] * mrj;
                }
            }
        }
    }
    return out;
}

DenseTensor matrix_slice(const DenseTensor& t, const std::map<std::size_t, std::size_t>& fixed) {
    if (fixed.size() >= t.order()) {
        throw Error(ErrorCode::InvalidArgument, "at least one mode must stay free");
    }
    for (const auto& [mode, idx] : fixed) {
        if (mode >= t.order()) {
            throw Error(ErrorCode::IndexOutOfRange, "fixed mode out of range");
        }
        if (idx >= t.shape().extent(mode)) {
            throw Error(ErrorCode::IndexOutOfRange, "fixed index out of range");
        }
    }

    std::vector<std::size_t> free_modes;
    std::vector<std::size_t> out_dims;
    for (std::size_t k = 0; k < t.order(); ++k) {
        if (!fixed.count(k)) {
            free_modes.push_back(k);
            out_dims.push_back(t.shape().extent(k));
        }
    }
    DenseTensor out{Shape(out_dims)};

    std::vector<std::size_t> idx(t.order(), 0);
    for (const auto& [mode, i] : fixed) idx[mode] = i;
    const std::size_t total = out.size();
    std::vector<std::size_t> free_idx(free_modes.size(), 0);
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (std::size_t k = 0; k < free_modes.size(); ++k) idx[free_modes[k]] = free_idx[k];
        out[lin] = t.at(idx);
        for (std::size_t k = 0; k < free_idx.size(); ++k) {
            if (++free_idx[k] < out_dims[k]) break;
            free_idx[k] = 0;
        }
    }
    return out;
}

EinsteinOperator transpose(const EinsteinOperator& t) {
    const std::size_t rows = t.rows();
    const std::size_t cols = t.cols();
    auto left = t.left_modes();
    auto right = t.right_modes();
    std::vector<std::size_t> out_dims = right;
    out_dims.insert(out_dims.end(), left.begin(), left.end());
    DenseTensor out{Shape(out_dims)};
    const double* p = t.tensor().data().data();
    double* q = out.data().data();
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            q[j + i * cols] = p[i + j * rows];
        }
    }
    return EinsteinOperator(std::move(out));
}

EinsteinOperator identity_tensor(const std::vector<std::size_t>& left_modes) {
    std::vector<std::size_t> dims = left_modes;
    dims.insert(dims.end(), left_modes.begin(), left_modes.end());
    DenseTensor out{Shape(dims)};
    std::size_t n = 1;
    for (std::size_t d : left_modes) n *= d;
    for (std::size_t i = 0; i < n; ++i) out[i + i * n] = 1.0;
    return EinsteinOperator(std::move(out));
}

namespace {

void require_square(const EinsteinOperator& t) {
    if (!t.is_square()) {
        throw Error(ErrorCode::NonSquare, "operator must have I_m == J_m for all m");
    }
}

} // namespace

bool is_symmetric(const EinsteinOperator& t, double tol) {
    if (!t.is_square()) return false;
    const std::size_t rows = t.rows();
    const std::size_t cols = t.cols();
    const double* p = t.tensor().data().data();
    double diff2 = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double d = p[i + j * rows] - p[j + i * rows];
            diff2 += d * d;
        }
    }
    const double scale = frobenius_norm(t.tensor());
    return std::sqrt(2.0 * diff2) <= tol * (scale > 0.0 ? scale : 1.0);
}

bool is_diagonal(const EinsteinOperator& t, double tol) {
    require_square(t);
    const std::size_t n = t.rows();
    const double* p = t.tensor().data().data();
    double off2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) off2 += p[i + j * n] * p[i + j * n];
        }
    }
    const double scale = frobenius_norm(t.tensor());
    return std::sqrt(off2) <= tol * (scale > 0.0 ? scale : 1.0);
}

bool is_orthogonal(const EinsteinOperator& t, double tol) {
    require_square(t);
    EinsteinOperator g = einstein_product(transpose(t), t);
    const std::size_t n = t.rows();
    double diff2 = 0.0;
    const double* p = g.tensor().data().data();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double e = (i == j) ? 1.0 : 0.0;
            const double d = p[i + j * n] - e;
            diff2 += d * d;
        }
    }
    const double scale = frobenius_norm(t.tensor());
    return std::sqrt(diff2) <= tol * (scale > 0.0 ? scale : 1.0);
}

double frobenius_norm(const DenseTensor& t) {
    double s = 0.0;
    for (double v : t.data()) s += v * v;
    return std::sqrt(s);
}

double inner_product(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) {
        throw Error(ErrorCode::ShapeMismatch, "inner product requires equal shapes");
    }
    double s = 0.0;
    const auto& x = a.data();
    const auto& y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

} // namespace etn
