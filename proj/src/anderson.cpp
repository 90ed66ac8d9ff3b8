#include "etn/anderson.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace etn {

namespace {

void validate(const LatticeSpec& spec) {
    if (spec.dim < 1 || spec.dim > 3) {
        throw Error(ErrorCode::InvalidSpec, "dim must be 1, 2 or 3");
    }
    if (spec.n < 2) {
        throw Error(ErrorCode::InvalidSpec, "n must be at least 2");
    }
    if (!(spec.lambda >= 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "lambda must be nonnegative");
    }
}

std::size_t site_count(const LatticeSpec& spec) {
    std::size_t total = 1;
    for (int d = 0; d < spec.dim; ++d) total *= spec.n;
    return total;
}

} // namespace

const char* anderson_rng_name() noexcept { return "mt19937_64"; }

std::vector<double> potential_samples(const LatticeSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    const std::size_t sites = site_count(spec);
    std::vector<double> v(sites);
    for (std::size_t s = 0; s < sites; ++s) {
        // uniform [-1,1] via the top 53 bits of the generator output
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v[s] = 2.0 * u - 1.0;
    }
    return v;
}

EinsteinOperator build_hamiltonian(const LatticeSpec& spec) {
    validate(spec);
    const std::size_t n = spec.n;
    const std::size_t sites = site_count(spec);
    const double dx = 1.0 / static_cast<double>(n + 1);
    double scale = 1.0;
    if (spec.scaling == AndersonScaling::Paper) {
        for (int d = 0; d < spec.dim; ++d) scale /= dx;
    }
    const double hop = -scale;
    const std::vector<double> v = potential_samples(spec);

    std::vector<std::size_t> dims(static_cast<std::size_t>(2 * spec.dim), n);
    DenseTensor t{Shape(dims)};

    std::vector<std::size_t> site(static_cast<std::size_t>(spec.dim), 0);
    for (std::size_t s = 0; s < sites; ++s) {
        std::size_t rem = s;
        for (int d = 0; d < spec.dim; ++d) {
            site[static_cast<std::size_t>(d)] = rem % n;
            rem /= n;
        }
        const std::size_t base = s * sites;
        t[s + base] = spec.lambda * v[s] * scale;
        std::size_t stride = 1;
        for (int d = 0; d < spec.dim; ++d) {
            const std::size_t c = site[static_cast<std::size_t>(d)];
            if (c > 0) t[(s - stride) + base] = hop;
            if (c + 1 < n) t[(s + stride) + base] = hop;
            stride *= n;
        }
    }
    return EinsteinOperator(std::move(t));
}

double inverse_participation_ratio(const DenseTensor& psi) {
    double s2 = 0.0, s4 = 0.0;
    for (double x : psi.data()) {
        const double x2 = x * x;
        s2 += x2;
        s4 += x2 * x2;
    }
    if (s2 == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "zero vector has no participation ratio");
    }
    return s4 / (s2 * s2);
}

EigReport eig_spectrum(const EinsteinOperator& h, const LatticeSpec& spec,
                       const EigSelection& which) {
    if (!is_symmetric(h)) {
        throw Error(ErrorCode::NotSymmetric, "Hamiltonian must be symmetric");
    }
    const std::size_t sites = h.rows();
    Eigen::Map<const Eigen::MatrixXd> m(h.tensor().data().data(),
                                        static_cast<Eigen::Index>(sites),
                                        static_cast<Eigen::Index>(sites));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidArgument, "eigensolver failed to converge");
    }

    EigReport report;
    report.eigenvalues.assign(eig.eigenvalues().data(),
                              eig.eigenvalues().data() + sites);

    if (which.kind == EigSelection::Kind::IndexRange) {
        if (which.first > which.last || which.last >= sites) {
            throw Error(ErrorCode::IndexOutOfRange, "eigenpair index range out of bounds");
        }
        for (std::size_t i = which.first; i <= which.last; ++i) report.selected.push_back(i);
    } else {
        std::vector<std::size_t> order(sites);
        for (std::size_t i = 0; i < sites; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(report.eigenvalues[a] - which.energy) <
                   std::abs(report.eigenvalues[b] - which.energy);
        });
        const std::size_t count = std::min(which.count, sites);
        report.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
        std::sort(report.selected.begin(), report.selected.end());
    }

    std::vector<std::size_t> lattice_dims(static_cast<std::size_t>(spec.dim), spec.n);
    for (std::size_t idx : report.selected) {
        const auto col = eig.eigenvectors().col(static_cast<Eigen::Index>(idx));
        std::vector<double> data(col.data(), col.data() + sites);
        // sign convention: first nonzero entry positive
        for (double& x : data) {
            if (x != 0.0) {
                if (x < 0.0) {
                    for (double& y : data) y = -y;
                }
                break;
            }
        }
        DenseTensor psi(Shape(lattice_dims), std::move(data));
        report.ipr.push_back(inverse_participation_ratio(psi));
        report.eigenvectors.push_back(std::move(psi));
    }
    return report;
}

std::vector<SweepRow> localization_sweep(const std::vector<LatticeSpec>& specs,
                                         const EigSelection& which) {
    std::vector<SweepRow> rows;
    rows.reserve(specs.size());
    for (const LatticeSpec& spec : specs) {
        EinsteinOperator h = build_hamiltonian(spec);
        EigReport rep = eig_spectrum(h, spec, which);
        SweepRow row;
        row.lambda = spec.lambda;
        row.n = spec.n;
        row.seed = spec.seed;
        double sum = 0.0;
        for (double p : rep.ipr) {
            sum += p;
            row.max_ipr = std::max(row.max_ipr, p);
        }
        row.mean_ipr = rep.ipr.empty() ? 0.0 : sum / static_cast<double>(rep.ipr.size());
        rows.push_back(row);
    }
    return rows;
}

} // namespace etn
