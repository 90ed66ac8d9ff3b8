#ifndef ETN_LSTSQ_HPP
#define ETN_LSTSQ_HPP

#include "etn/tensor.hpp"

namespace etn {

/// Cyclic third-order transpose out_{ijk} = a_{kij}; applying it three times
/// returns the original tensor.
DenseTensor transpose3(const DenseTensor& a);

/// Gram operator a^T *_2 a with right-hand side a^T *_2 b.
struct NormalSystem {
    EinsteinOperator gram;
    DenseTensor rhs;
};

struct LstsqOptions {
    double ridge = 0.0;  // mu added to the gram diagonal for demos
};

/// The six admissible third-order layouts. In every row the unknown
/// contracts the last mode of a and the transpose is the cyclic transpose3;
/// row 4 observes the remaining modes in swapped order.
///   row 1: a in I x J x K, x in R^K, b in I x J
///   row 2: a in J x K x I, x in R^I, b in J x K
///   row 3: a in K x I x J, x in R^J, b in K x I
///   row 4: a in I x K x J, x in R^J, b in K x I
///   row 5: a in K x J x I, x in R^I, b in K x J
///   row 6: a in J x I x K, x in R^K, b in J x I
enum class LstsqLayout { Row1 = 1, Row2, Row3, Row4, Row5, Row6 };

/// Builds the higher-order normal equations for the given layout.
NormalSystem normal_system_for(LstsqLayout layout, const DenseTensor& a,
                               const DenseTensor& b);

/// Least-squares solution of a .3 x = b (layout row 1): the K-vector
/// minimizing ||a .3 x - b||_F.
DenseTensor ls_solve_mode3(const DenseTensor& a, const DenseTensor& b,
                           const LstsqOptions& opts = {});

/// Layout-aware variant covering all six third-order rows.
DenseTensor ls_solve_layout(LstsqLayout layout, const DenseTensor& a,
                            const DenseTensor& b, const LstsqOptions& opts = {});

/// Least-squares solution of a *_2 x = b with a in I x J x R x S and b in
/// I x J x K x L, via the order-4 normal equations.
DenseTensor ls_solve_einstein(const DenseTensor& a, const DenseTensor& b,
                              const LstsqOptions& opts = {});

} // namespace etn

#endif
