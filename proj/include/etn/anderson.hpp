#ifndef ETN_ANDERSON_HPP
#define ETN_ANDERSON_HPP

#include <cstdint>

#include "etn/tensor.hpp"

namespace etn {

/// Hamiltonian scaling: Lattice keeps unit hopping (-1) and center lambda*v;
/// Paper divides every entry by dx^dim with dx = 1/(n+1), reproducing the
/// printed stencil denominators.
enum class AndersonScaling { Lattice, Paper };

struct LatticeSpec {
    int dim = 1;                // 1, 2 or 3
    std::size_t n = 2;          // sites per side
    double lambda = 0.0;        // disorder strength, >= 0
    std::uint64_t seed = 0;
    AndersonScaling scaling = AndersonScaling::Lattice;
};

/// Which eigenpairs to report.
struct EigSelection {
    enum class Kind { IndexRange, NearestToEnergy } kind = Kind::IndexRange;
    std::size_t first = 0;   // inclusive, 0-based into the ascending spectrum
    std::size_t last = 0;    // inclusive
    double energy = 0.0;
    std::size_t count = 1;   // for NearestToEnergy
};

struct EigReport {
    std::vector<double> eigenvalues;             // full spectrum, ascending
    std::vector<std::size_t> selected;           // indices into eigenvalues
    std::vector<DenseTensor> eigenvectors;       // reshaped to the lattice
    std::vector<double> ipr;                     // per selected eigenvector
};

struct SweepRow {
    double lambda = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double mean_ipr = 0.0;
    double max_ipr = 0.0;
};

/// Nearest-neighbor Hamiltonian -Delta + lambda*V on a d-dimensional cube
/// with open boundary. Potential entries are i.i.d. uniform on [-1,1], drawn
/// from mt19937_64 in column-major site order.
EinsteinOperator build_hamiltonian(const LatticeSpec& spec);

/// Identifier of the potential PRNG, recorded in run manifests.
const char* anderson_rng_name() noexcept;

/// Draws the potential samples only (site order, one per site).
std::vector<double> potential_samples(const LatticeSpec& spec);

/// Inverse participation ratio of a vector, sum |psi|^4 / (sum |psi|^2)^2.
double inverse_participation_ratio(const DenseTensor& psi);

EigReport eig_spectrum(const EinsteinOperator& h, const LatticeSpec& spec,
                       const EigSelection& which);

std::vector<SweepRow> localization_sweep(const std::vector<LatticeSpec>& specs,
                                         const EigSelection& which);

} // namespace etn

#endif
