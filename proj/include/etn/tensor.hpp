#ifndef ETN_TENSOR_HPP
#define ETN_TENSOR_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "etn/errors.hpp"

namespace etn {

/// Ordered list of positive mode extents (I_1,...,I_N).
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<std::size_t> dims);

    std::size_t order() const noexcept { return dims_.size(); }
    std::size_t extent(std::size_t mode) const { return dims_.at(mode); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    /// Total element count, prod of extents.
    std::size_t size() const noexcept;

    bool operator==(const Shape& other) const noexcept { return dims_ == other.dims_; }
    bool operator!=(const Shape& other) const noexcept { return dims_ != other.dims_; }

private:
    std::vector<std::size_t> dims_;
};

/// Dense order-N real tensor, contiguous column-major storage (first index
/// varies fastest). All public indices are 0-based; the math in the doc
/// comments follows the usual 1-based convention, shifted by one at this
/// boundary.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> data);

    static DenseTensor zeros(Shape shape) { return DenseTensor(std::move(shape)); }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.order(); }
    std::size_t size() const noexcept { return data_.size(); }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    double at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }
    void set(const std::vector<std::size_t>& idx, double v) { data_[offset(idx)] = v; }

    double operator[](std::size_t linear) const { return data_[linear]; }
    double& operator[](std::size_t linear) { return data_[linear]; }

    /// Column-major linear offset of a multi-index.
    std::size_t offset(const std::vector<std::size_t>& idx) const;

private:
    Shape shape_;
    std::vector<double> data_;
};

/// Even-order tensor of shape (I_1..I_N, J_1..J_N) acting on order-N tensors
/// via the Einstein product. The first N modes are the left (output) modes,
/// the last N the right (contracted) modes.
class EinsteinOperator {
public:
    EinsteinOperator() = default;
    explicit EinsteinOperator(DenseTensor t);

    std::size_t half_order() const noexcept { return tensor_.order() / 2; }
    const DenseTensor& tensor() const noexcept { return tensor_; }
    DenseTensor& tensor() noexcept { return tensor_; }

    std::vector<std::size_t> left_modes() const;
    std::vector<std::size_t> right_modes() const;

    /// I_m == J_m for every m.
    bool is_square() const noexcept;

    std::size_t rows() const noexcept;  // prod of left modes
    std::size_t cols() const noexcept;  // prod of right modes

private:
    DenseTensor tensor_;
};

// -- Contracted products ------------------------------------------------

/// Einstein product a *_n b: contracts the last n modes of a with the first
/// n modes of b, summing contracted indices in ascending column-major order.
DenseTensor einstein_product(const DenseTensor& a, const DenseTensor& b, std::size_t n);
DenseTensor einstein_product(const EinsteinOperator& a, const DenseTensor& b);
EinsteinOperator einstein_product(const EinsteinOperator& a, const EinsteinOperator& b);

/// Tucker mode-n product: replaces extent `mode` of t by the row count of m.
/// The contracted mode stays in place. m is given as an order-2 tensor.
DenseTensor mode_n_product(const DenseTensor& t, const DenseTensor& m, std::size_t mode);

/// Subtensor over the free modes with the given modes pinned.
/// `fixed` maps mode -> index (0-based); at least one mode must stay free.
DenseTensor matrix_slice(const DenseTensor& t, const std::map<std::size_t, std::size_t>& fixed);

// -- Structure ----------------------------------------------------------

/// Block transpose of an even-order tensor: out[i-block, j-block] = t[j-block, i-block].
EinsteinOperator transpose(const EinsteinOperator& t);

/// Identity element for *_N on operators with the given left modes.
EinsteinOperator identity_tensor(const std::vector<std::size_t>& left_modes);

bool is_symmetric(const EinsteinOperator& t, double tol = 1e-10);
bool is_diagonal(const EinsteinOperator& t, double tol = 1e-10);
bool is_orthogonal(const EinsteinOperator& t, double tol = 1e-10);

// -- Norms --------------------------------------------------------------

double frobenius_norm(const DenseTensor& t);
double inner_product(const DenseTensor& a, const DenseTensor& b);

} // namespace etn

#endif
