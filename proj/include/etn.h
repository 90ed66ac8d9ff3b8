/* C interface to the Einstein-product tensor library.
 *
 * All entry points return an etn_status; ETN_OK means success. On failure a
 * thread-local message is available via etn_last_error_message(). Objects
 * returned through out-parameters are owned by the caller and must be
 * released with the matching *_destroy function.
 */
#ifndef ETN_H
#define ETN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum etn_status {
    ETN_OK = 0,
    ETN_ERR_SHAPE_MISMATCH,
    ETN_ERR_INVALID_ORDER,
    ETN_ERR_ODD_ORDER,
    ETN_ERR_NON_SQUARE,
    ETN_ERR_INDEX_OUT_OF_RANGE,
    ETN_ERR_SINGULAR_TENSOR,
    ETN_ERR_NOT_SYMMETRIC,
    ETN_ERR_ZERO_DIAGONAL,
    ETN_ERR_DIVERGED,
    ETN_ERR_BREAKDOWN,
    ETN_ERR_RANK_ONE_VIOLATION,
    ETN_ERR_SEPARABILITY_VIOLATION,
    ETN_ERR_UNSUPPORTED_ORDER,
    ETN_ERR_UNSUPPORTED_LAYOUT,
    ETN_ERR_SINGULAR_NORMAL,
    ETN_ERR_INVALID_SIZE,
    ETN_ERR_INVALID_SPEC,
    ETN_ERR_INVALID_ARGUMENT,
    ETN_ERR_IO,
    ETN_ERR_NULL_POINTER,
    ETN_ERR_INTERNAL
} etn_status;

const char* etn_status_name(etn_status s);

/* Message for the most recent failure on this thread; empty string if none. */
const char* etn_last_error_message(void);

const char* etn_version(void);

/* ---- tensors --------------------------------------------------------- */

typedef struct etn_tensor etn_tensor;

/* data may be NULL for a zero tensor; otherwise it must hold the product of
 * the dims values in column-major order. */
etn_status etn_tensor_create(const size_t* dims, size_t order, const double* data,
                             etn_tensor** out);
void etn_tensor_destroy(etn_tensor* t);

etn_status etn_tensor_order(const etn_tensor* t, size_t* out);
etn_status etn_tensor_dims(const etn_tensor* t, size_t* dims /* order entries */);
etn_status etn_tensor_size(const etn_tensor* t, size_t* out);
/* Borrowed pointer to the column-major payload; valid until the tensor is
 * destroyed. */
etn_status etn_tensor_data(const etn_tensor* t, const double** out);

/* Extension dispatch: ".tns" is the binary format, anything else TNS-JSON. */
etn_status etn_tensor_load(const char* path, etn_tensor** out);
etn_status etn_tensor_save(const etn_tensor* t, const char* path);

/* ---- products and the matricization map ------------------------------ */

/* c = a *_n b, contracting the last n modes of a with the first n of b. */
etn_status etn_einstein_product(const etn_tensor* a, const etn_tensor* b, size_t n,
                                etn_tensor** out);

/* Matrix image f(a) of an even-order tensor. */
etn_status etn_flatten(const etn_tensor* a, etn_tensor** out);

/* ---- inversion and direct solve -------------------------------------- */

etn_status etn_inverse(const etn_tensor* a, etn_tensor** out);
etn_status etn_direct_solve(const etn_tensor* a, const etn_tensor* b, etn_tensor** out);

/* ---- decompositions --------------------------------------------------- */

etn_status etn_svd(const etn_tensor* a, etn_tensor** u, etn_tensor** d, etn_tensor** v,
                   size_t* rank);
etn_status etn_evd(const etn_tensor* a, etn_tensor** p, etn_tensor** d);

/* CP form of an order-4 tensor in the group: weights is a length-R vector,
 * the four factors are matrices with the rank-one vectors as columns.
 * bound_holds reports the Sidiropoulos-Bro uniqueness check. */
etn_status etn_cp(const etn_tensor* a, etn_tensor** weights, etn_tensor** fa,
                  etn_tensor** fb, etn_tensor** fc, etn_tensor** fd, int* bound_holds);

/* Multilinear SVD: sparse core plus four orthogonal factors. */
etn_status etn_msvd(const etn_tensor* a, etn_tensor** core, etn_tensor** fa,
                    etn_tensor** fb, etn_tensor** fc, etn_tensor** fd);

/* ---- iterative solvers ------------------------------------------------ */

typedef struct etn_solver_opts {
    double tol;        /* relative residual target, > 0 */
    size_t max_iter;   /* >= 1 */
    int record_history;
} etn_solver_opts;

void etn_solver_opts_default(etn_solver_opts* opts);

typedef enum etn_solve_status {
    ETN_SOLVE_CONVERGED = 0,
    ETN_SOLVE_MAX_ITER,
    ETN_SOLVE_BREAKDOWN,
    ETN_SOLVE_DIVERGED
} etn_solve_status;

typedef struct etn_report etn_report;

etn_status etn_bicg_solve(const etn_tensor* a, const etn_tensor* b,
                          const etn_solver_opts* opts, etn_report** out);
etn_status etn_jacobi_solve(const etn_tensor* a, const etn_tensor* b,
                            const etn_solver_opts* opts, etn_report** out);

void etn_report_destroy(etn_report* r);
etn_status etn_report_solution(const etn_report* r, etn_tensor** out);
etn_status etn_report_status(const etn_report* r, etn_solve_status* out);
etn_status etn_report_iterations(const etn_report* r, size_t* out);
etn_status etn_report_residuals(const etn_report* r, const double** data, size_t* count);

/* ---- Poisson ---------------------------------------------------------- */

typedef enum etn_poisson_scaling { ETN_POISSON_PAPER = 0, ETN_POISSON_STANDARD } etn_poisson_scaling;
typedef enum etn_poisson_source {
    ETN_SOURCE_MANUFACTURED = 0,
    ETN_SOURCE_CONSTANT,
    ETN_SOURCE_FILE
} etn_poisson_source;
typedef enum etn_poisson_method {
    ETN_METHOD_BICG = 0,
    ETN_METHOD_JACOBI,
    ETN_METHOD_DIRECT
} etn_poisson_method;

etn_status etn_poisson_operator(int dim, size_t n, etn_poisson_scaling scaling,
                                etn_tensor** out);
/* file_rhs is required for ETN_SOURCE_FILE and ignored otherwise. */
etn_status etn_poisson_solve(int dim, size_t n, etn_poisson_scaling scaling,
                             etn_poisson_source source, const etn_tensor* file_rhs,
                             etn_poisson_method method, const etn_solver_opts* opts,
                             etn_report** out);
/* Error of x against the manufactured solution. */
etn_status etn_poisson_error(int dim, size_t n, etn_poisson_scaling scaling,
                             const etn_tensor* x, double* max_err, double* l2_err);

/* ---- Anderson model --------------------------------------------------- */

typedef enum etn_anderson_scaling { ETN_ANDERSON_LATTICE = 0, ETN_ANDERSON_PAPER } etn_anderson_scaling;

typedef struct etn_lattice_spec {
    int dim;            /* 1, 2 or 3 */
    size_t n;           /* sites per side */
    double lambda;      /* disorder strength */
    uint64_t seed;
    etn_anderson_scaling scaling;
} etn_lattice_spec;

typedef struct etn_eig_selection {
    int nearest_to_energy; /* 0: index range, 1: nearest-to-energy */
    size_t first;          /* inclusive, 0-based, index-range mode */
    size_t last;           /* inclusive */
    double energy;
    size_t count;          /* nearest-to-energy mode */
} etn_eig_selection;

etn_status etn_anderson_hamiltonian(const etn_lattice_spec* spec, etn_tensor** out);
const char* etn_anderson_rng_name(void);

typedef struct etn_eig_report etn_eig_report;

etn_status etn_anderson_spectrum(const etn_lattice_spec* spec,
                                 const etn_eig_selection* which, etn_eig_report** out);
void etn_eig_report_destroy(etn_eig_report* r);
etn_status etn_eig_report_eigenvalues(const etn_eig_report* r, const double** data,
                                      size_t* count);
etn_status etn_eig_report_selected(const etn_eig_report* r, const size_t** indices,
                                   size_t* count);
etn_status etn_eig_report_ipr(const etn_eig_report* r, const double** data, size_t* count);
/* Eigenvector i of the selected set, reshaped to the lattice. */
etn_status etn_eig_report_vector(const etn_eig_report* r, size_t i, etn_tensor** out);

/* ---- third-order least squares ---------------------------------------- */

/* layout_row selects one of the six admissible layouts (1-6); ridge adds a
 * Tikhonov term to the normal-equation diagonal (0 for plain LS). */
etn_status etn_lstsq_solve(int layout_row, const etn_tensor* a, const etn_tensor* b,
                           double ridge, etn_tensor** out);
/* As above, additionally reporting the data-space residual ||a .3 x - b||_F
 * and the 2-norm condition number of the gram operator. Either out-parameter
 * may be NULL. */
etn_status etn_lstsq_solve_report(int layout_row, const etn_tensor* a,
                                  const etn_tensor* b, double ridge, etn_tensor** out,
                                  double* residual, double* gram_cond);
etn_status etn_transpose3(const etn_tensor* a, etn_tensor** out);

/* ---- selftest ---------------------------------------------------------- */

/* Runs the built-in property suites. *report receives a malloc'd text block
 * (release with etn_string_free); *all_passed is 1 when every suite passed. */
etn_status etn_selftest(char** report, int* all_passed);
void etn_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ETN_H */
