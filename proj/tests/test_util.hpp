#ifndef ETN_TEST_UTIL_HPP
#define ETN_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "etn/tensor.hpp"

namespace etn_test {

/// Deterministic uniform [-1,1] source for test fixtures.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return 2.0 * u - 1.0;
    }

    etn::DenseTensor tensor(const std::vector<std::size_t>& dims) {
        etn::DenseTensor t{etn::Shape(dims)};
        for (auto& v : t.data()) v = (*this)();
        return t;
    }

    etn::EinsteinOperator op(const std::vector<std::size_t>& dims) {
        return etn::EinsteinOperator(tensor(dims));
    }

    /// Square operator with a shifted flattening, comfortably invertible.
    etn::EinsteinOperator well_conditioned(const std::vector<std::size_t>& left) {
        std::vector<std::size_t> dims = left;
        dims.insert(dims.end(), left.begin(), left.end());
        etn::EinsteinOperator out{tensor(dims)};
        const std::size_t n = out.rows();
        for (std::size_t i = 0; i < n; ++i) out.tensor()[i + i * n] += 3.0;
        return out;
    }

private:
    std::mt19937_64 rng_;
};

inline double rel_diff(const etn::DenseTensor& a, const etn::DenseTensor& b) {
    double d2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
        n2 += b[i] * b[i];
    }
    return std::sqrt(d2) / (n2 > 0.0 ? std::sqrt(n2) : 1.0);
}

inline double max_abs_diff(const etn::DenseTensor& a, const etn::DenseTensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline bool bit_equal(const etn::DenseTensor& a, const etn::DenseTensor& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

} // namespace etn_test

#endif
