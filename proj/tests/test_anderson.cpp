#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "etn/anderson.hpp"
#include "etn/isomorphism.hpp"
#include "etn/tensor.hpp"
#include "test_util.hpp"

using etn::AndersonScaling;
using etn::EigReport;
using etn::EigSelection;
using etn::EinsteinOperator;
using etn::Error;
using etn::ErrorCode;
using etn::LatticeSpec;

namespace {

constexpr double kPi = 3.14159265358979323846;

LatticeSpec spec_of(int dim, std::size_t n, double lambda, std::uint64_t seed,
                    AndersonScaling scaling = AndersonScaling::Lattice) {
    LatticeSpec s;
    s.dim = dim;
    s.n = n;
    s.lambda = lambda;
    s.seed = seed;
    s.scaling = scaling;
    return s;
}

EigSelection all_of(std::size_t sites) {
    EigSelection sel;
    sel.kind = EigSelection::Kind::IndexRange;
    sel.first = 0;
    sel.last = sites - 1;
    return sel;
}

} // namespace

TEST_CASE("clean 1D chain reproduces the analytic spectrum") {
    const std::size_t n = 100;
    LatticeSpec spec = spec_of(1, n, 0.0, 0);
    EinsteinOperator h = etn::build_hamiltonian(spec);
    EigReport rep = etn::eig_spectrum(h, spec, all_of(n));

    // eigenvalues of -tridiag(1,0,1) are -2 cos(k pi / (n+1)), ascending
    std::vector<double> expected(n);
    for (std::size_t k = 1; k <= n; ++k) {
        expected[k - 1] = -2.0 * std::cos(static_cast<double>(k) * kPi /
                                          static_cast<double>(n + 1));
    }
    std::sort(expected.begin(), expected.end());
    REQUIRE(rep.eigenvalues.size() == n);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        worst = std::max(worst, std::abs(rep.eigenvalues[k] - expected[k]));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("potential samples are deterministic and uniform on [-1,1]") {
    LatticeSpec spec = spec_of(2, 12, 1.0, 42);
    const auto v1 = etn::potential_samples(spec);
    const auto v2 = etn::potential_samples(spec);
    REQUIRE(v1.size() == 144);
    CHECK(v1 == v2);
    double lo = 1.0, hi = -1.0, mean = 0.0;
    for (double x : v1) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        mean += x;
    }
    mean /= static_cast<double>(v1.size());
    CHECK(lo >= -1.0);
    CHECK(hi <= 1.0);
    CHECK(std::abs(mean) < 0.25);

    spec.seed = 43;
    CHECK(etn::potential_samples(spec) != v1);
    CHECK(std::string(etn::anderson_rng_name()) == "mt19937_64");
}

TEST_CASE("hamiltonian wires nearest neighbors with open boundary") {
    LatticeSpec spec = spec_of(2, 4, 0.5, 9);
    EinsteinOperator h = etn::build_hamiltonian(spec);
    CHECK(etn::is_symmetric(h));
    const etn::DenseTensor m = etn::flatten(h);
    const std::size_t sites = 16;
    const auto v = etn::potential_samples(spec);
    for (std::size_t s = 0; s < sites; ++s) {
        const std::size_t i = s % 4, j = s / 4;
        for (std::size_t t = 0; t < sites; ++t) {
            const std::size_t ti = t % 4, tj = t / 4;
            const double got = m[t + s * sites];
            const std::size_t di = (i > ti) ? i - ti : ti - i;
            const std::size_t dj = (j > tj) ? j - tj : tj - j;
            if (s == t) {
                CHECK(got == doctest::Approx(0.5 * v[s]).epsilon(1e-14));
            } else if (di + dj == 1) {
                CHECK(got == -1.0);
            } else {
                CHECK(got == 0.0);
            }
        }
    }
}

TEST_CASE("spectra stay inside the deterministic support bound") {
    for (int dim : {1, 2}) {
        const std::size_t n = dim == 1 ? 64 : 12;
        for (double lambda : {0.0, 1.0, 5.0}) {
            LatticeSpec spec = spec_of(dim, n, lambda, 11);
            EinsteinOperator h = etn::build_hamiltonian(spec);
            std::size_t sites = 1;
            for (int d = 0; d < dim; ++d) sites *= n;
            EigReport rep = etn::eig_spectrum(h, spec, all_of(sites));
            const double bound = 2.0 * dim + lambda + 1e-9;
            for (double e : rep.eigenvalues) {
                CHECK(std::abs(e) <= bound);
            }
        }
    }
}

TEST_CASE("fixed seeds reproduce eigenvectors bit for bit") {
    LatticeSpec spec = spec_of(1, 60, 1.0, 7);
    EinsteinOperator h1 = etn::build_hamiltonian(spec);
    EinsteinOperator h2 = etn::build_hamiltonian(spec);
    CHECK(etn_test::bit_equal(h1.tensor(), h2.tensor()));

    EigSelection sel = all_of(60);
    EigReport r1 = etn::eig_spectrum(h1, spec, sel);
    EigReport r2 = etn::eig_spectrum(h2, spec, sel);
    REQUIRE(r1.eigenvectors.size() == r2.eigenvectors.size());
    for (std::size_t k = 0; k < r1.eigenvectors.size(); ++k) {
        CHECK(etn_test::bit_equal(r1.eigenvectors[k], r2.eigenvectors[k]));
    }
    CHECK(r1.eigenvalues == r2.eigenvalues);
    CHECK(r1.ipr == r2.ipr);
}

TEST_CASE("disorder localizes: IPR grows with lambda in 1D and 2D") {
    {
        const std::size_t n = 100;
        EigSelection sel = all_of(n);
        LatticeSpec clean = spec_of(1, n, 0.0, 5);
        LatticeSpec noisy = spec_of(1, n, 1.0, 5);
        auto rows = etn::localization_sweep({clean, noisy}, sel);
        REQUIRE(rows.size() == 2);
        CHECK(rows[1].mean_ipr > rows[0].mean_ipr);
    }
    {
        const std::size_t n = 29;
        EigSelection sel = all_of(n * n);
        LatticeSpec clean = spec_of(2, n, 0.0, 5);
        LatticeSpec noisy = spec_of(2, n, 1.0, 5);
        auto rows = etn::localization_sweep({clean, noisy}, sel);
        CHECK(rows[1].mean_ipr > rows[0].mean_ipr);
    }
}

TEST_CASE("eigenvectors come back on the lattice with unit norm and sign fixed") {
    LatticeSpec spec = spec_of(2, 8, 1.0, 3);
    EinsteinOperator h = etn::build_hamiltonian(spec);
    EigSelection sel;
    sel.kind = EigSelection::Kind::IndexRange;
    sel.first = 0;
    sel.last = 4;
    EigReport rep = etn::eig_spectrum(h, spec, sel);
    REQUIRE(rep.eigenvectors.size() == 5);
    REQUIRE(rep.selected == std::vector<std::size_t>({0, 1, 2, 3, 4}));
    for (const auto& psi : rep.eigenvectors) {
        CHECK(psi.shape() == etn::Shape({8, 8}));
        CHECK(etn::frobenius_norm(psi) == doctest::Approx(1.0).epsilon(1e-12));
        for (double x : psi.data()) {
            if (x != 0.0) {
                CHECK(x > 0.0);
                break;
            }
        }
    }
    // eigen relation h psi = e psi
    for (std::size_t k = 0; k < rep.eigenvectors.size(); ++k) {
        etn::DenseTensor hp = etn::einstein_product(h, rep.eigenvectors[k]);
        double r2 = 0.0;
        for (std::size_t i = 0; i < hp.size(); ++i) {
            const double diff =
                hp[i] - rep.eigenvalues[rep.selected[k]] * rep.eigenvectors[k][i];
            r2 += diff * diff;
        }
        CHECK(std::sqrt(r2) < 1e-10 * etn::frobenius_norm(h.tensor()));
    }
}

TEST_CASE("nearest-to-energy selection picks the closest eigenvalues") {
    LatticeSpec spec = spec_of(1, 40, 0.0, 0);
    EinsteinOperator h = etn::build_hamiltonian(spec);
    EigSelection sel;
    sel.kind = EigSelection::Kind::NearestToEnergy;
    sel.energy = 0.0;
    sel.count = 4;
    EigReport rep = etn::eig_spectrum(h, spec, sel);
    REQUIRE(rep.selected.size() == 4);
    // the four selected must all be closer to zero than any unselected one
    double worst_selected = 0.0;
    for (std::size_t idx : rep.selected) {
        worst_selected = std::max(worst_selected, std::abs(rep.eigenvalues[idx]));
    }
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        if (std::find(rep.selected.begin(), rep.selected.end(), i) ==
            rep.selected.end()) {
            CHECK(std::abs(rep.eigenvalues[i]) >= worst_selected - 1e-14);
        }
    }
}

TEST_CASE("paper scaling multiplies the lattice Hamiltonian by the mesh factor") {
    LatticeSpec lattice = spec_of(2, 6, 1.5, 21, AndersonScaling::Lattice);
    LatticeSpec paper = spec_of(2, 6, 1.5, 21, AndersonScaling::Paper);
    EinsteinOperator hl = etn::build_hamiltonian(lattice);
    EinsteinOperator hp = etn::build_hamiltonian(paper);
    const double dx = 1.0 / 7.0;
    const double factor = 1.0 / (dx * dx);
    double worst = 0.0;
    for (std::size_t i = 0; i < hl.tensor().size(); ++i) {
        worst = std::max(worst, std::abs(hp.tensor()[i] - factor * hl.tensor()[i]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("specs and selections are validated") {
    CHECK_THROWS_AS(etn::build_hamiltonian(spec_of(0, 4, 0.0, 0)), Error);
    CHECK_THROWS_AS(etn::build_hamiltonian(spec_of(1, 1, 0.0, 0)), Error);
    try {
        etn::build_hamiltonian(spec_of(1, 10, -1.0, 0));
        FAIL("expected InvalidSpec");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidSpec);
    }

    LatticeSpec spec = spec_of(1, 10, 0.0, 0);
    EinsteinOperator h = etn::build_hamiltonian(spec);
    EigSelection sel;
    sel.first = 5;
    sel.last = 20;
    CHECK_THROWS_AS(etn::eig_spectrum(h, spec, sel), Error);
}
