#ifndef ETN_SELFTEST_HPP
#define ETN_SELFTEST_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace etn {

struct SelftestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the library property suites at small sizes: the matricization
/// homomorphism, group axioms, inversion, SVD/EVD residuals, CP and
/// multilinear-SVD extraction, iterative-solver oracle equivalence, and the
/// third-order least-squares layouts.
std::vector<SelftestResult> run_selftest();

/// Prints one line per property; returns true when everything passed.
bool print_selftest(std::ostream& os, const std::vector<SelftestResult>& results);

} // namespace etn

#endif
