#include "etn.h"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <sstream>
#include <string>

#include "etn/anderson.hpp"
#include "etn/decomp.hpp"
#include "etn/errors.hpp"
#include "etn/io.hpp"
#include "etn/isomorphism.hpp"
#include "etn/lstsq.hpp"
#include "etn/poisson.hpp"
#include "etn/selftest.hpp"
#include "etn/solvers.hpp"
#include "etn/tensor.hpp"

struct etn_tensor {
    etn::DenseTensor t;
};

struct etn_report {
    etn::SolveReport r;
};

struct etn_eig_report {
    etn::EigReport r;
};

namespace {

thread_local std::string g_last_error;

etn_status map_code(etn::ErrorCode c) {
    using etn::ErrorCode;
    switch (c) {
        case ErrorCode::Ok: return ETN_OK;
        case ErrorCode::ShapeMismatch: return ETN_ERR_SHAPE_MISMATCH;
        case ErrorCode::InvalidOrder: return ETN_ERR_INVALID_ORDER;
        case ErrorCode::OddOrder: return ETN_ERR_ODD_ORDER;
        case ErrorCode::NonSquare: return ETN_ERR_NON_SQUARE;
        case ErrorCode::IndexOutOfRange: return ETN_ERR_INDEX_OUT_OF_RANGE;
        case ErrorCode::SingularTensor: return ETN_ERR_SINGULAR_TENSOR;
        case ErrorCode::NotSymmetric: return ETN_ERR_NOT_SYMMETRIC;
        case ErrorCode::ZeroDiagonal: return ETN_ERR_ZERO_DIAGONAL;
        case ErrorCode::Diverged: return ETN_ERR_DIVERGED;
        case ErrorCode::Breakdown: return ETN_ERR_BREAKDOWN;
        case ErrorCode::RankOneViolation: return ETN_ERR_RANK_ONE_VIOLATION;
        case ErrorCode::SeparabilityViolation: return ETN_ERR_SEPARABILITY_VIOLATION;
        case ErrorCode::UnsupportedOrder: return ETN_ERR_UNSUPPORTED_ORDER;
        case ErrorCode::UnsupportedLayout: return ETN_ERR_UNSUPPORTED_LAYOUT;
        case ErrorCode::SingularNormal: return ETN_ERR_SINGULAR_NORMAL;
        case ErrorCode::InvalidSize: return ETN_ERR_INVALID_SIZE;
        case ErrorCode::InvalidSpec: return ETN_ERR_INVALID_SPEC;
        case ErrorCode::InvalidArgument: return ETN_ERR_INVALID_ARGUMENT;
        case ErrorCode::IoError: return ETN_ERR_IO;
    }
    return ETN_ERR_INTERNAL;
}

/// Runs fn, translating exceptions into status codes and the thread-local
/// message slot.
template <typename Fn>
etn_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return ETN_OK;
    } catch (const etn::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return ETN_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ETN_ERR_INTERNAL;
    }
}

etn_status fail_null() {
    g_last_error = "null pointer argument";
    return ETN_ERR_NULL_POINTER;
}

etn_tensor* wrap(etn::DenseTensor t) { return new etn_tensor{std::move(t)}; }

etn::SolverConfig to_config(const etn_solver_opts* opts) {
    etn::SolverConfig cfg;
    if (opts != nullptr) {
        cfg.tol = opts->tol;
        cfg.max_iter = opts->max_iter;
        cfg.record_history = opts->record_history != 0;
    }
    return cfg;
}

etn::LatticeSpec to_spec(const etn_lattice_spec* spec) {
    etn::LatticeSpec s;
    s.dim = spec->dim;
    s.n = spec->n;
    s.lambda = spec->lambda;
    s.seed = spec->seed;
    s.scaling = spec->scaling == ETN_ANDERSON_PAPER ? etn::AndersonScaling::Paper
                                                    : etn::AndersonScaling::Lattice;
    return s;
}

etn::EigSelection to_selection(const etn_eig_selection* which) {
    etn::EigSelection sel;
    if (which->nearest_to_energy != 0) {
        sel.kind = etn::EigSelection::Kind::NearestToEnergy;
        sel.energy = which->energy;
        sel.count = which->count;
    } else {
        sel.kind = etn::EigSelection::Kind::IndexRange;
        sel.first = which->first;
        sel.last = which->last;
    }
    return sel;
}

} // namespace

extern "C" {

const char* etn_status_name(etn_status s) {
    switch (s) {
        case ETN_OK: return "ok";
        case ETN_ERR_SHAPE_MISMATCH: return "shape_mismatch";
        case ETN_ERR_INVALID_ORDER: return "invalid_order";
        case ETN_ERR_ODD_ORDER: return "odd_order";
        case ETN_ERR_NON_SQUARE: return "non_square";
        case ETN_ERR_INDEX_OUT_OF_RANGE: return "index_out_of_range";
        case ETN_ERR_SINGULAR_TENSOR: return "singular_tensor";
        case ETN_ERR_NOT_SYMMETRIC: return "not_symmetric";
        case ETN_ERR_ZERO_DIAGONAL: return "zero_diagonal";
        case ETN_ERR_DIVERGED: return "diverged";
        case ETN_ERR_BREAKDOWN: return "breakdown";
        case ETN_ERR_RANK_ONE_VIOLATION: return "rank_one_violation";
        case ETN_ERR_SEPARABILITY_VIOLATION: return "separability_violation";
        case ETN_ERR_UNSUPPORTED_ORDER: return "unsupported_order";
        case ETN_ERR_UNSUPPORTED_LAYOUT: return "unsupported_layout";
        case ETN_ERR_SINGULAR_NORMAL: return "singular_normal";
        case ETN_ERR_INVALID_SIZE: return "invalid_size";
        case ETN_ERR_INVALID_SPEC: return "invalid_spec";
        case ETN_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case ETN_ERR_IO: return "io_error";
        case ETN_ERR_NULL_POINTER: return "null_pointer";
        case ETN_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* etn_last_error_message(void) { return g_last_error.c_str(); }

const char* etn_version(void) { return "1.0.0"; }

etn_status etn_tensor_create(const size_t* dims, size_t order, const double* data,
                             etn_tensor** out) {
    if (dims == nullptr || out == nullptr) return fail_null();
    return guarded([&] {
        etn::Shape shape(std::vector<std::size_t>(dims, dims + order));
        if (data != nullptr) {
            *out = wrap(etn::DenseTensor(
                shape, std::vector<double>(data, data + shape.size())));
        } else {
            *out = wrap(etn::DenseTensor(shape));
        }
    });
}

void etn_tensor_destroy(etn_tensor* t) { delete t; }

etn_status etn_tensor_order(const etn_tensor* t, size_t* out) {
    if (t == nullptr || out == nullptr) return fail_null();
    *out = t->t.order();
    return ETN_OK;
}

etn_status etn_tensor_dims(const etn_tensor* t, size_t* dims) {
    if (t == nullptr || dims == nullptr) return fail_null();
    const auto& d = t->t.shape().dims();
    std::memcpy(dims, d.data(), d.size() * sizeof(size_t));
    return ETN_OK;
}

etn_status etn_tensor_size(const etn_tensor* t, size_t* out) {
    if (t == nullptr || out == nullptr) return fail_null();
    *out = t->t.size();
    return ETN_OK;
}

etn_status etn_tensor_data(const etn_tensor* t, const double** out) {
    if (t == nullptr || out == nullptr) return fail_null();
    *out = t->t.data().data();
    return ETN_OK;
}

etn_status etn_tensor_load(const char* path, etn_tensor** out) {
    if (path == nullptr || out == nullptr) return fail_null();
    return guarded([&] { *out = wrap(etn::load_tensor(path)); });
}

etn_status etn_tensor_save(const etn_tensor* t, const char* path) {
    if (t == nullptr || path == nullptr) return fail_null();
    return guarded([&] { etn::save_tensor(t->t, path); });
}

etn_status etn_einstein_product(const etn_tensor* a, const etn_tensor* b, size_t n,
                                etn_tensor** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return fail_null();
    return guarded([&] { *out = wrap(etn::einstein_product(a->t, b->t, n)); });
}

etn_status etn_flatten(const etn_tensor* a, etn_tensor** out) {
    if (a == nullptr || out == nullptr) return fail_null();
    return guarded([&] { *out = wrap(etn::flatten(etn::EinsteinOperator(a->t))); });
}

etn_status etn_inverse(const etn_tensor* a, etn_tensor** out) {
    if (a == nullptr || out == nullptr) return fail_null();
    return guarded(
        [&] { *out = wrap(etn::inverse(etn::EinsteinOperator(a->t)).tensor()); });
}

etn_status etn_direct_solve(const etn_tensor* a, const etn_tensor* b, etn_tensor** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return fail_null();
    return guarded(
        [&] { *out = wrap(etn::direct_solve(etn::EinsteinOperator(a->t), b->t)); });
}

etn_status etn_svd(const etn_tensor* a, etn_tensor** u, etn_tensor** d, etn_tensor** v,
                   size_t* rank) {
    if (a == nullptr || u == nullptr || d == nullptr || v == nullptr) return fail_null();
    return guarded([&] {
        etn::SvdResult r = etn::tensor_svd(etn::EinsteinOperator(a->t));
        *u = wrap(r.u.tensor());
        *d = wrap(r.d.tensor());
        *v = wrap(r.v.tensor());
        if (rank != nullptr) *rank = r.rank;
    });
}

etn_status etn_evd(const etn_tensor* a, etn_tensor** p, etn_tensor** d) {
    if (a == nullptr || p == nullptr || d == nullptr) return fail_null();
    return guarded([&] {
        etn::EvdResult r = etn::tensor_evd(etn::EinsteinOperator(a->t));
        *p = wrap(r.p.tensor());
        *d = wrap(r.d.tensor());
    });
}

etn_status etn_cp(const etn_tensor* a, etn_tensor** weights, etn_tensor** fa,
                  etn_tensor** fb, etn_tensor** fc, etn_tensor** fd, int* bound_holds) {
    if (a == nullptr || weights == nullptr || fa == nullptr || fb == nullptr ||
        fc == nullptr || fd == nullptr) {
        return fail_null();
    }
    return guarded([&] {
        etn::CpForm form = etn::extract_cp(etn::tensor_svd(etn::EinsteinOperator(a->t)));
        *weights = wrap(etn::DenseTensor(etn::Shape({form.weights.size()}), form.weights));
        *fa = wrap(form.a);
        *fb = wrap(form.b);
        *fc = wrap(form.c);
        *fd = wrap(form.d);
        if (bound_holds != nullptr) *bound_holds = form.sidiropoulos_bro_holds ? 1 : 0;
    });
}

etn_status etn_msvd(const etn_tensor* a, etn_tensor** core, etn_tensor** fa,
                    etn_tensor** fb, etn_tensor** fc, etn_tensor** fd) {
    if (a == nullptr || core == nullptr || fa == nullptr || fb == nullptr ||
        fc == nullptr || fd == nullptr) {
        return fail_null();
    }
    return guarded([&] {
        etn::MsvdForm form =
            etn::extract_multilinear_svd(etn::tensor_svd(etn::EinsteinOperator(a->t)));
        *core = wrap(form.core);
        *fa = wrap(form.a);
        *fb = wrap(form.b);
        *fc = wrap(form.c);
        *fd = wrap(form.d);
    });
}

void etn_solver_opts_default(etn_solver_opts* opts) {
    if (opts == nullptr) return;
    etn::SolverConfig cfg;
    opts->tol = cfg.tol;
    opts->max_iter = cfg.max_iter;
    opts->record_history = cfg.record_history ? 1 : 0;
}

etn_status etn_bicg_solve(const etn_tensor* a, const etn_tensor* b,
                          const etn_solver_opts* opts, etn_report** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return fail_null();
    return guarded([&] {
        *out = new etn_report{
            etn::bicg_solve(etn::EinsteinOperator(a->t), b->t, to_config(opts))};
    });
}

etn_status etn_jacobi_solve(const etn_tensor* a, const etn_tensor* b,
                            const etn_solver_opts* opts, etn_report** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return fail_null();
    return guarded([&] {
        *out = new etn_report{
            etn::jacobi_solve(etn::EinsteinOperator(a->t), b->t, to_config(opts))};
    });
}

void etn_report_destroy(etn_report* r) { delete r; }

etn_status etn_report_solution(const etn_report* r, etn_tensor** out) {
    if (r == nullptr || out == nullptr) return fail_null();
    return guarded([&] { *out = wrap(r->r.x); });
}

etn_status etn_report_status(const etn_report* r, etn_solve_status* out) {
    if (r == nullptr || out == nullptr) return fail_null();
    switch (r->r.status) {
        case etn::SolveStatus::Converged: *out = ETN_SOLVE_CONVERGED; break;
        case etn::SolveStatus::MaxIter: *out = ETN_SOLVE_MAX_ITER; break;
        case etn::SolveStatus::Breakdown: *out = ETN_SOLVE_BREAKDOWN; break;
        case etn::SolveStatus::Diverged: *out = ETN_SOLVE_DIVERGED; break;
    }
    return ETN_OK;
}

etn_status etn_report_iterations(const etn_report* r, size_t* out) {
    if (r == nullptr || out == nullptr) return fail_null();
    *out = r->r.iterations;
    return ETN_OK;
}

etn_status etn_report_residuals(const etn_report* r, const double** data, size_t* count) {
    if (r == nullptr || data == nullptr || count == nullptr) return fail_null();
    *data = r->r.residuals.data();
    *count = r->r.residuals.size();
    return ETN_OK;
}

etn_status etn_poisson_operator(int dim, size_t n, etn_poisson_scaling scaling,
                                etn_tensor** out) {
    if (out == nullptr) return fail_null();
    return guarded([&] {
        *out = wrap(etn::build_poisson_operator(
                        dim, n,
                        scaling == ETN_POISSON_STANDARD ? etn::PoissonScaling::Standard
                                                        : etn::PoissonScaling::Paper)
                        .tensor());
    });
}

etn_status etn_poisson_solve(int dim, size_t n, etn_poisson_scaling scaling,
                             etn_poisson_source source, const etn_tensor* file_rhs,
                             etn_poisson_method method, const etn_solver_opts* opts,
                             etn_report** out) {
    if (out == nullptr) return fail_null();
    if (source == ETN_SOURCE_FILE && file_rhs == nullptr) {
        g_last_error = "file source requires a right-hand-side tensor";
        return ETN_ERR_NULL_POINTER;
    }
    return guarded([&] {
        const auto sc = scaling == ETN_POISSON_STANDARD ? etn::PoissonScaling::Standard
                                                        : etn::PoissonScaling::Paper;
        etn::PoissonSource src = etn::PoissonSource::Manufactured;
        if (source == ETN_SOURCE_CONSTANT) src = etn::PoissonSource::Constant;
        if (source == ETN_SOURCE_FILE) src = etn::PoissonSource::File;
        etn::PoissonProblem problem = etn::make_problem(
            dim, n, src, sc, file_rhs != nullptr ? &file_rhs->t : nullptr);
        etn::PoissonMethod m = etn::PoissonMethod::Bicg;
        if (method == ETN_METHOD_JACOBI) m = etn::PoissonMethod::Jacobi;
        if (method == ETN_METHOD_DIRECT) m = etn::PoissonMethod::Direct;
        *out = new etn_report{etn::solve_poisson(problem, m, to_config(opts))};
    });
}

etn_status etn_poisson_error(int dim, size_t n, etn_poisson_scaling scaling,
                             const etn_tensor* x, double* max_err, double* l2_err) {
    if (x == nullptr || max_err == nullptr || l2_err == nullptr) return fail_null();
    return guarded([&] {
        etn::PoissonProblem problem = etn::make_problem(
            dim, n, etn::PoissonSource::Manufactured,
            scaling == ETN_POISSON_STANDARD ? etn::PoissonScaling::Standard
                                            : etn::PoissonScaling::Paper);
        etn::ErrorReport rep = etn::error_report(problem, x->t);
        *max_err = rep.max_err;
        *l2_err = rep.l2_err;
    });
}

etn_status etn_anderson_hamiltonian(const etn_lattice_spec* spec, etn_tensor** out) {
    if (spec == nullptr || out == nullptr) return fail_null();
    return guarded([&] { *out = wrap(etn::build_hamiltonian(to_spec(spec)).tensor()); });
}

const char* etn_anderson_rng_name(void) { return etn::anderson_rng_name(); }

etn_status etn_anderson_spectrum(const etn_lattice_spec* spec,
                                 const etn_eig_selection* which, etn_eig_report** out) {
    if (spec == nullptr || which == nullptr || out == nullptr) return fail_null();
    return guarded([&] {
        etn::LatticeSpec s = to_spec(spec);
        etn::EinsteinOperator h = etn::build_hamiltonian(s);
        *out = new etn_eig_report{etn::eig_spectrum(h, s, to_selection(which))};
    });
}

void etn_eig_report_destroy(etn_eig_report* r) { delete r; }

etn_status etn_eig_report_eigenvalues(const etn_eig_report* r, const double** data,
                                      size_t* count) {
    if (r == nullptr || data == nullptr || count == nullptr) return fail_null();
    *data = r->r.eigenvalues.data();
    *count = r->r.eigenvalues.size();
    return ETN_OK;
}

etn_status etn_eig_report_selected(const etn_eig_report* r, const size_t** indices,
                                   size_t* count) {
    if (r == nullptr || indices == nullptr || count == nullptr) return fail_null();
    *indices = r->r.selected.data();
    *count = r->r.selected.size();
    return ETN_OK;
}

etn_status etn_eig_report_ipr(const etn_eig_report* r, const double** data, size_t* count) {
    if (r == nullptr || data == nullptr || count == nullptr) return fail_null();
    *data = r->r.ipr.data();
    *count = r->r.ipr.size();
    return ETN_OK;
}

etn_status etn_eig_report_vector(const etn_eig_report* r, size_t i, etn_tensor** out) {
    if (r == nullptr || out == nullptr) return fail_null();
    if (i >= r->r.eigenvectors.size()) {
        g_last_error = "eigenvector index out of range";
        return ETN_ERR_INDEX_OUT_OF_RANGE;
    }
    return guarded([&] { *out = wrap(r->r.eigenvectors[i]); });
}

etn_status etn_lstsq_solve(int layout_row, const etn_tensor* a, const etn_tensor* b,
                           double ridge, etn_tensor** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return fail_null();
    return guarded([&] {
        etn::LstsqOptions opts;
        opts.ridge = ridge;
        if (layout_row < 1 || layout_row > 6) {
            throw etn::Error(etn::ErrorCode::UnsupportedLayout,
                             "layout must be one of rows 1-6");
        }
        *out = wrap(etn::ls_solve_layout(static_cast<etn::LstsqLayout>(layout_row), a->t,
                                         b->t, opts));
    });
}

etn_status etn_lstsq_solve_report(int layout_row, const etn_tensor* a,
                                  const etn_tensor* b, double ridge, etn_tensor** out,
                                  double* residual, double* gram_cond) {
    if (a == nullptr || b == nullptr || out == nullptr) return fail_null();
    return guarded([&] {
        if (layout_row < 1 || layout_row > 6) {
            throw etn::Error(etn::ErrorCode::UnsupportedLayout,
                             "layout must be one of rows 1-6");
        }
        const auto layout = static_cast<etn::LstsqLayout>(layout_row);
        etn::LstsqOptions opts;
        opts.ridge = ridge;
        etn::DenseTensor x = etn::ls_solve_layout(layout, a->t, b->t, opts);

        if (residual != nullptr) {
            etn::DenseTensor pred = etn::einstein_product(a->t, x, 1);
            const std::size_t p = pred.shape().extent(0);
            const std::size_t q = pred.shape().extent(1);
            const bool swapped = layout == etn::LstsqLayout::Row4;
            double r2 = 0.0;
            for (std::size_t j = 0; j < q; ++j) {
                for (std::size_t i = 0; i < p; ++i) {
                    const double bij = swapped ? b->t.at({j, i}) : b->t.at({i, j});
                    const double d = pred[i + j * p] - bij;
                    r2 += d * d;
                }
            }
            *residual = std::sqrt(r2);
        }
        if (gram_cond != nullptr) {
            etn::NormalSystem sys = etn::normal_system_for(layout, a->t, b->t);
            const std::size_t k = sys.gram.rows();
            Eigen::Map<const Eigen::MatrixXd> g(sys.gram.tensor().data().data(),
                                                static_cast<Eigen::Index>(k),
                                                static_cast<Eigen::Index>(k));
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
            const auto& s = svd.singularValues();
            const double smin = s(s.size() - 1);
            *gram_cond = smin > 0.0 ? s(0) / smin
                                    : std::numeric_limits<double>::infinity();
        }
        *out = wrap(std::move(x));
    });
}

etn_status etn_transpose3(const etn_tensor* a, etn_tensor** out) {
    if (a == nullptr || out == nullptr) return fail_null();
    return guarded([&] { *out = wrap(etn::transpose3(a->t)); });
}

etn_status etn_selftest(char** report, int* all_passed) {
    if (report == nullptr || all_passed == nullptr) return fail_null();
    return guarded([&] {
        std::ostringstream os;
        const bool ok = etn::print_selftest(os, etn::run_selftest());
        const std::string text = os.str();
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (buf == nullptr) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *report = buf;
        *all_passed = ok ? 1 : 0;
    });
}

void etn_string_free(char* s) { std::free(s); }

} // extern "C"
