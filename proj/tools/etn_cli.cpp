// Command-line front end for the Einstein-product tensor library. Links the
// shared C API only; all numerics go to files, human summaries to stdout.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "etn.h"
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct TensorDeleter {
    void operator()(etn_tensor* t) const { etn_tensor_destroy(t); }
};
struct ReportDeleter {
    void operator()(etn_report* r) const { etn_report_destroy(r); }
};
struct EigReportDeleter {
    void operator()(etn_eig_report* r) const { etn_eig_report_destroy(r); }
};
using TensorPtr = std::unique_ptr<etn_tensor, TensorDeleter>;
using ReportPtr = std::unique_ptr<etn_report, ReportDeleter>;
using EigReportPtr = std::unique_ptr<etn_eig_report, EigReportDeleter>;

int fail(etn_status s) {
    std::cerr << "error: " << etn_status_name(s) << ": " << etn_last_error_message()
              << "\n";
    return 1;
}

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 1;
}

/// Collects run metadata and writes DIR/manifest.json at the end of a command.
class RunManifest {
public:
    RunManifest(std::string command, json flags)
        : start_(Clock::now()), command_(std::move(command)), flags_(std::move(flags)) {}

    void add_output(const fs::path& p) { outputs_.push_back(p.string()); }
    void set(const std::string& key, json value) { extra_[key] = std::move(value); }

    void write(const fs::path& dir) {
        json j;
        j["command"] = command_;
        j["flags"] = flags_;
        j["library_version"] = etn_version();
        j["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                              Clock::now() - start_)
                              .count();
        j["outputs"] = outputs_;
        for (auto& [k, v] : extra_.items()) j[k] = v;
        std::ofstream os(dir / "manifest.json");
        os << j.dump(2) << "\n";
    }

private:
    Clock::time_point start_;
    std::string command_;
    json flags_;
    std::vector<std::string> outputs_;
    json extra_ = json::object();
};

bool save_output(const etn_tensor* t, const fs::path& path, RunManifest& manifest) {
    const etn_status s = etn_tensor_save(t, path.string().c_str());
    if (s != ETN_OK) {
        fail(s);
        return false;
    }
    manifest.add_output(path);
    return true;
}

TensorPtr load_input(const std::string& path) {
    etn_tensor* t = nullptr;
    const etn_status s = etn_tensor_load(path.c_str(), &t);
    if (s != ETN_OK) {
        fail(s);
        return nullptr;
    }
    return TensorPtr(t);
}

std::vector<double> tensor_values(const etn_tensor* t) {
    const double* data = nullptr;
    size_t n = 0;
    etn_tensor_data(t, &data);
    etn_tensor_size(t, &n);
    return std::vector<double>(data, data + n);
}

std::vector<size_t> tensor_shape(const etn_tensor* t) {
    size_t order = 0;
    etn_tensor_order(t, &order);
    std::vector<size_t> dims(order);
    etn_tensor_dims(t, dims.data());
    return dims;
}

double frob(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// The --threads knob caps library workers; the env var mirrors it so child
/// invocations inherit the setting.
void apply_threads(int threads) {
    if (threads > 0) {
        setenv("EINSTEIN_TENSOR_THREADS", std::to_string(threads).c_str(), 1);
    }
}

int threads_default() {
    const char* env = std::getenv("EINSTEIN_TENSOR_THREADS");
    if (env != nullptr) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

bool ensure_outdir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        usage_error("cannot create output directory " + dir.string());
        return false;
    }
    return true;
}

void write_residual_csv(const etn_report* report, const fs::path& path,
                        RunManifest& manifest) {
    const double* res = nullptr;
    size_t count = 0;
    etn_report_residuals(report, &res, &count);
    std::ofstream os(path);
    os << "iter,residual\n";
    char buf[64];
    for (size_t k = 0; k < count; ++k) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k + 1, res[k]);
        os << buf;
    }
    manifest.add_output(path);
}

const char* solve_status_text(etn_solve_status s) {
    switch (s) {
        case ETN_SOLVE_CONVERGED: return "Converged";
        case ETN_SOLVE_MAX_ITER: return "MaxIter";
        case ETN_SOLVE_BREAKDOWN: return "Breakdown";
        case ETN_SOLVE_DIVERGED: return "Diverged";
    }
    return "Unknown";
}

// ---- poisson ------------------------------------------------------------

struct PoissonArgs {
    int dim = 2;
    size_t n = 0;
    std::string method = "bicg";
    std::string source = "manufactured";
    std::string scaling = "paper";
    double tol = 1e-8;
    size_t max_iter = 10000;
    std::string out = ".";
    int threads = threads_default();
};

int cmd_poisson(const PoissonArgs& args) {
    apply_threads(args.threads);
    if (args.n < 2) return usage_error("--n must be at least 2");
    if (args.tol <= 0.0) return usage_error("--tol must be positive");

    etn_poisson_method method;
    if (args.method == "bicg") {
        method = ETN_METHOD_BICG;
    } else if (args.method == "jacobi") {
        method = ETN_METHOD_JACOBI;
    } else if (args.method == "direct") {
        method = ETN_METHOD_DIRECT;
    } else {
        return usage_error("unknown method " + args.method);
    }
    const etn_poisson_scaling scaling =
        args.scaling == "standard" ? ETN_POISSON_STANDARD : ETN_POISSON_PAPER;

    etn_poisson_source source = ETN_SOURCE_MANUFACTURED;
    TensorPtr rhs;
    if (args.source == "constant") {
        source = ETN_SOURCE_CONSTANT;
    } else if (args.source.rfind("file:", 0) == 0) {
        source = ETN_SOURCE_FILE;
        rhs = load_input(args.source.substr(5));
        if (!rhs) return 1;
    } else if (args.source != "manufactured") {
        return usage_error("unknown source " + args.source);
    }

    const fs::path dir(args.out);
    if (!ensure_outdir(dir)) return 1;
    RunManifest manifest("poisson", json{{"dim", args.dim},
                                         {"n", args.n},
                                         {"method", args.method},
                                         {"source", args.source},
                                         {"scaling", args.scaling},
                                         {"tol", args.tol},
                                         {"max_iter", args.max_iter},
                                         {"threads", args.threads}});

    etn_solver_opts opts;
    etn_solver_opts_default(&opts);
    opts.tol = args.tol;
    opts.max_iter = args.max_iter;

    etn_report* raw = nullptr;
    etn_status s = etn_poisson_solve(args.dim, args.n, scaling, source, rhs.get(),
                                     method, &opts, &raw);
    if (s != ETN_OK) return fail(s);
    ReportPtr report(raw);

    etn_tensor* xraw = nullptr;
    s = etn_report_solution(report.get(), &xraw);
    if (s != ETN_OK) return fail(s);
    TensorPtr x(xraw);

    if (!save_output(x.get(), dir / "solution.json", manifest)) return 1;
    write_residual_csv(report.get(), dir / "residuals.csv", manifest);

    etn_solve_status status;
    size_t iterations = 0;
    etn_report_status(report.get(), &status);
    etn_report_iterations(report.get(), &iterations);
    manifest.set("status", solve_status_text(status));
    manifest.set("iterations", iterations);

    std::cout << "poisson dim=" << args.dim << " n=" << args.n << " method="
              << args.method << ": " << solve_status_text(status) << " after "
              << iterations << " iterations\n";

    if (source == ETN_SOURCE_MANUFACTURED) {
        double max_err = 0.0, l2_err = 0.0;
        if (etn_poisson_error(args.dim, args.n, scaling, x.get(), &max_err, &l2_err) ==
            ETN_OK) {
            manifest.set("max_err", max_err);
            manifest.set("l2_err", l2_err);
            std::cout << "  manufactured-solution error: max " << max_err << ", rms "
                      << l2_err << "\n";
        }
    }
    manifest.write(dir);

    if (status == ETN_SOLVE_CONVERGED) return 0;
    if (status == ETN_SOLVE_MAX_ITER) return 2;
    return 1;
}

// ---- anderson -----------------------------------------------------------

struct AndersonArgs {
    int dim = 1;
    size_t n = 0;
    double lambda = 0.0;
    uint64_t seed = 0;
    std::string which = "0:0";
    double energy = 0.0;
    size_t count = 1;
    bool nearest = false;
    std::string scaling = "lattice";
    std::string out = ".";
    int threads = threads_default();
};

bool parse_range(const std::string& text, size_t& first, size_t& last) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            first = last = std::stoul(text);
        } else {
            first = std::stoul(text.substr(0, colon));
            last = std::stoul(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        return false;
    }
    return first <= last;
}

void write_lattice_csv(const etn_tensor* psi, const fs::path& path,
                       RunManifest& manifest) {
    const auto dims = tensor_shape(psi);
    const auto values = tensor_values(psi);
    const size_t ni = dims.size() > 0 ? dims[0] : 1;
    const size_t nj = dims.size() > 1 ? dims[1] : 1;
    const size_t nk = dims.size() > 2 ? dims[2] : 1;
    std::ofstream os(path);
    os << "i,j,k,psi\n";
    char buf[96];
    size_t linear = 0;
    for (size_t k = 0; k < nk; ++k)
        for (size_t j = 0; j < nj; ++j)
            for (size_t i = 0; i < ni; ++i) {
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.17g\n", i, j, k,
                              values[i + ni * (j + nj * k)]);
                os << buf;
                ++linear;
            }
    manifest.add_output(path);
}

int cmd_anderson(const AndersonArgs& args) {
    apply_threads(args.threads);
    if (args.dim < 1 || args.dim > 3) return usage_error("--dim must be 1, 2 or 3");
    if (args.n < 2) return usage_error("--n must be at least 2");
    if (args.lambda < 0.0) return usage_error("--lambda must be nonnegative");

    etn_lattice_spec spec;
    spec.dim = args.dim;
    spec.n = args.n;
    spec.lambda = args.lambda;
    spec.seed = args.seed;
    spec.scaling = args.scaling == "paper" ? ETN_ANDERSON_PAPER : ETN_ANDERSON_LATTICE;
    if (args.scaling != "paper" && args.scaling != "lattice") {
        return usage_error("unknown scaling " + args.scaling);
    }

    etn_eig_selection which{};
    if (args.nearest) {
        which.nearest_to_energy = 1;
        which.energy = args.energy;
        which.count = args.count;
    } else {
        if (!parse_range(args.which, which.first, which.last)) {
            return usage_error("--which expects FIRST:LAST with FIRST <= LAST");
        }
    }

    const fs::path dir(args.out);
    if (!ensure_outdir(dir)) return 1;
    RunManifest manifest("anderson", json{{"dim", args.dim},
                                          {"n", args.n},
                                          {"lambda", args.lambda},
                                          {"seed", args.seed},
                                          {"which", args.which},
                                          {"nearest", args.nearest},
                                          {"energy", args.energy},
                                          {"count", args.count},
                                          {"scaling", args.scaling},
                                          {"threads", args.threads}});
    manifest.set("rng", etn_anderson_rng_name());

    etn_eig_report* raw = nullptr;
    const etn_status s = etn_anderson_spectrum(&spec, &which, &raw);
    if (s != ETN_OK) return fail(s);
    EigReportPtr report(raw);

    const double* eigenvalues = nullptr;
    size_t n_eigs = 0;
    etn_eig_report_eigenvalues(report.get(), &eigenvalues, &n_eigs);
    {
        std::ofstream os(dir / "spectrum.csv");
        os << "index,eigenvalue\n";
        char buf[64];
        for (size_t k = 0; k < n_eigs; ++k) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k, eigenvalues[k]);
            os << buf;
        }
        manifest.add_output(dir / "spectrum.csv");
    }

    const size_t* selected = nullptr;
    size_t n_sel = 0;
    etn_eig_report_selected(report.get(), &selected, &n_sel);
    const double* ipr = nullptr;
    size_t n_ipr = 0;
    etn_eig_report_ipr(report.get(), &ipr, &n_ipr);

    json jreport;
    jreport["spec"] = {{"dim", args.dim},      {"n", args.n},
                       {"lambda", args.lambda}, {"seed", args.seed},
                       {"scaling", args.scaling}, {"rng", etn_anderson_rng_name()}};
    json jsel = json::array();
    std::cout << "anderson dim=" << args.dim << " n=" << args.n
              << " lambda=" << args.lambda << " seed=" << args.seed << "\n";
    std::cout << "  index  eigenvalue            ipr\n";
    for (size_t k = 0; k < n_sel; ++k) {
        etn_tensor* vraw = nullptr;
        if (etn_eig_report_vector(report.get(), k, &vraw) != ETN_OK) {
            return fail(ETN_ERR_INDEX_OUT_OF_RANGE);
        }
        TensorPtr psi(vraw);
        char name[64];
        std::snprintf(name, sizeof(name), "eigvec_%04zu.csv", selected[k]);
        write_lattice_csv(psi.get(), dir / name, manifest);
        jsel.push_back({{"index", selected[k]},
                        {"eigenvalue", eigenvalues[selected[k]]},
                        {"ipr", ipr[k]}});
        std::printf("  %5zu  %-20.12g  %.12g\n", selected[k], eigenvalues[selected[k]],
                    ipr[k]);
    }
    jreport["eigenpairs"] = jsel;
    {
        std::ofstream os(dir / "report.json");
        os << jreport.dump(2) << "\n";
        manifest.add_output(dir / "report.json");
    }
    manifest.write(dir);
    return 0;
}

// ---- decompose ----------------------------------------------------------

struct DecomposeArgs {
    std::string input;
    std::string kind = "svd";
    std::string out = ".";
    int threads = threads_default();
};

/// Flattened reconstruction residual ||f(a) - f(u) f(d) f(v)^T||_F / ||f(a)||_F.
double factor_residual(const etn_tensor* a, const etn_tensor* u, const etn_tensor* d,
                       const etn_tensor* v) {
    const auto av = tensor_values(a);
    const auto uv = tensor_values(u);
    const auto dv = tensor_values(d);
    const auto vv = tensor_values(v);
    const size_t n = static_cast<size_t>(std::llround(std::sqrt(double(av.size()))));
    std::vector<double> ud(n * n, 0.0), full(n * n, 0.0);
    for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
            for (size_t i = 0; i < n; ++i)
                ud[i + j * n] += uv[i + k * n] * dv[k + j * n];
    for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
            for (size_t i = 0; i < n; ++i)
                full[i + j * n] += ud[i + k * n] * vv[j + k * n];  // times f(v)^T
    double r2 = 0.0;
    for (size_t i = 0; i < av.size(); ++i) {
        const double delta = av[i] - full[i];
        r2 += delta * delta;
    }
    const double anorm = frob(av);
    return anorm > 0.0 ? std::sqrt(r2) / anorm : std::sqrt(r2);
}

int cmd_decompose(const DecomposeArgs& args) {
    apply_threads(args.threads);
    TensorPtr a = load_input(args.input);
    if (!a) return 1;

    const fs::path dir(args.out);
    if (!ensure_outdir(dir)) return 1;
    RunManifest manifest("decompose", json{{"input", args.input},
                                           {"kind", args.kind},
                                           {"threads", args.threads}});
    json report;
    report["kind"] = args.kind;
    report["tolerances"] = {{"rank_tol", 1e-12}, {"sym_tol", 1e-10}, {"slice_tol", 1e-8}};

    if (args.kind == "svd") {
        etn_tensor *u = nullptr, *d = nullptr, *v = nullptr;
        size_t rank = 0;
        const etn_status s = etn_svd(a.get(), &u, &d, &v, &rank);
        if (s != ETN_OK) return fail(s);
        TensorPtr up(u), dp(d), vp(v);
        if (!save_output(u, dir / "u.json", manifest) ||
            !save_output(d, dir / "d.json", manifest) ||
            !save_output(v, dir / "v.json", manifest)) {
            return 1;
        }
        report["rank"] = rank;
        report["residuals"] = {{"reconstruction", factor_residual(a.get(), u, d, v)}};
        std::cout << "svd: rank " << rank << ", reconstruction residual "
                  << report["residuals"]["reconstruction"].get<double>() << "\n";
    } else if (args.kind == "evd") {
        etn_tensor *p = nullptr, *d = nullptr;
        const etn_status s = etn_evd(a.get(), &p, &d);
        if (s != ETN_OK) return fail(s);
        TensorPtr pp(p), dp(d);
        if (!save_output(p, dir / "p.json", manifest) ||
            !save_output(d, dir / "d.json", manifest)) {
            return 1;
        }
        report["residuals"] = {{"reconstruction", factor_residual(a.get(), p, d, p)}};
        std::cout << "evd: reconstruction residual "
                  << report["residuals"]["reconstruction"].get<double>() << "\n";
    } else if (args.kind == "cp") {
        etn_tensor *w = nullptr, *fa = nullptr, *fb = nullptr, *fc = nullptr,
                   *fd = nullptr;
        int bound = 0;
        const etn_status s = etn_cp(a.get(), &w, &fa, &fb, &fc, &fd, &bound);
        if (s != ETN_OK) return fail(s);
        TensorPtr wp(w), fap(fa), fbp(fb), fcp(fc), fdp(fd);
        if (!save_output(w, dir / "weights.json", manifest) ||
            !save_output(fa, dir / "factor_a.json", manifest) ||
            !save_output(fb, dir / "factor_b.json", manifest) ||
            !save_output(fc, dir / "factor_c.json", manifest) ||
            !save_output(fd, dir / "factor_d.json", manifest)) {
            return 1;
        }
        // rank-R outer-product reconstruction against the input
        const auto av = tensor_values(a.get());
        const auto dims = tensor_shape(a.get());
        const auto wv = tensor_values(w);
        const auto fav = tensor_values(fa), fbv = tensor_values(fb);
        const auto fcv = tensor_values(fc), fdv = tensor_values(fd);
        const size_t ni = dims[0], nj = dims[1];
        const size_t rr = wv.size();
        double r2 = 0.0;
        for (size_t l = 0; l < nj; ++l)
            for (size_t k = 0; k < ni; ++k)
                for (size_t j = 0; j < nj; ++j)
                    for (size_t i = 0; i < ni; ++i) {
                        double sum = 0.0;
                        for (size_t r = 0; r < rr; ++r) {
                            sum += wv[r] * fav[i + r * ni] * fbv[j + r * nj] *
                                   fcv[k + r * ni] * fdv[l + r * nj];
                        }
                        const double delta =
                            av[i + ni * (j + nj * (k + ni * l))] - sum;
                        r2 += delta * delta;
                    }
        const double anorm = frob(av);
        report["rank"] = rr;
        report["sidiropoulos_bro_holds"] = bound != 0;
        report["residuals"] = {
            {"reconstruction", anorm > 0.0 ? std::sqrt(r2) / anorm : std::sqrt(r2)}};
        std::cout << "cp: rank " << rr << ", uniqueness bound "
                  << (bound != 0 ? "holds" : "not established")
                  << ", reconstruction residual "
                  << report["residuals"]["reconstruction"].get<double>() << "\n";
    } else if (args.kind == "msvd") {
        etn_tensor *core = nullptr, *fa = nullptr, *fb = nullptr, *fc = nullptr,
                   *fd = nullptr;
        const etn_status s = etn_msvd(a.get(), &core, &fa, &fb, &fc, &fd);
        if (s != ETN_OK) return fail(s);
        TensorPtr cp(core), fap(fa), fbp(fb), fcp(fc), fdp(fd);
        if (!save_output(core, dir / "core.json", manifest) ||
            !save_output(fa, dir / "factor_a.json", manifest) ||
            !save_output(fb, dir / "factor_b.json", manifest) ||
            !save_output(fc, dir / "factor_c.json", manifest) ||
            !save_output(fd, dir / "factor_d.json", manifest)) {
            return 1;
        }
        // core x_1 A x_2 B x_3 C x_4 D, evaluated naively
        const auto av = tensor_values(a.get());
        const auto dims = tensor_shape(a.get());
        const auto cv = tensor_values(core);
        const auto fav = tensor_values(fa), fbv = tensor_values(fb);
        const auto fcv = tensor_values(fc), fdv = tensor_values(fd);
        const size_t ni = dims[0], nj = dims[1];
        double r2 = 0.0;
        for (size_t l = 0; l < nj; ++l)
            for (size_t k = 0; k < ni; ++k)
                for (size_t j = 0; j < nj; ++j)
                    for (size_t i = 0; i < ni; ++i) {
                        double sum = 0.0;
                        for (size_t s4 = 0; s4 < nj; ++s4)
                            for (size_t s3 = 0; s3 < ni; ++s3)
                                for (size_t s2 = 0; s2 < nj; ++s2)
                                    for (size_t s1 = 0; s1 < ni; ++s1) {
                                        const double c =
                                            cv[s1 + ni * (s2 + nj * (s3 + ni * s4))];
                                        if (c == 0.0) continue;
                                        sum += c * fav[i + s1 * ni] * fbv[j + s2 * nj] *
                                               fcv[k + s3 * ni] * fdv[l + s4 * nj];
                                    }
                        const double delta =
                            av[i + ni * (j + nj * (k + ni * l))] - sum;
                        r2 += delta * delta;
                    }
        const double anorm = frob(av);
        report["residuals"] = {
            {"reconstruction", anorm > 0.0 ? std::sqrt(r2) / anorm : std::sqrt(r2)}};
        std::cout << "msvd: reconstruction residual "
                  << report["residuals"]["reconstruction"].get<double>() << "\n";
    } else {
        return usage_error("unknown kind " + args.kind);
    }

    {
        std::ofstream os(dir / "report.json");
        os << report.dump(2) << "\n";
        manifest.add_output(dir / "report.json");
    }
    manifest.write(dir);
    return 0;
}

// ---- lstsq --------------------------------------------------------------

struct LstsqArgs {
    std::string a;
    std::string b;
    int layout = 1;
    double ridge = 0.0;
    std::string out = ".";
    int threads = threads_default();
};

int cmd_lstsq(const LstsqArgs& args) {
    apply_threads(args.threads);
    TensorPtr a = load_input(args.a);
    if (!a) return 1;
    TensorPtr b = load_input(args.b);
    if (!b) return 1;

    const fs::path dir(args.out);
    if (!ensure_outdir(dir)) return 1;
    RunManifest manifest("lstsq", json{{"a", args.a},
                                       {"b", args.b},
                                       {"layout", args.layout},
                                       {"ridge", args.ridge},
                                       {"threads", args.threads}});

    etn_tensor* xraw = nullptr;
    double residual = 0.0, gram_cond = 0.0;
    const etn_status s = etn_lstsq_solve_report(args.layout, a.get(), b.get(),
                                                args.ridge, &xraw, &residual, &gram_cond);
    if (s != ETN_OK) return fail(s);
    TensorPtr x(xraw);

    if (!save_output(x.get(), dir / "x.json", manifest)) return 1;
    json report = {{"layout", args.layout},
                   {"residual", residual},
                   {"gram_condition", gram_cond}};
    {
        std::ofstream os(dir / "report.json");
        os << report.dump(2) << "\n";
        manifest.add_output(dir / "report.json");
    }
    manifest.set("residual", residual);
    manifest.write(dir);
    std::cout << "lstsq layout " << args.layout << ": residual " << residual
              << ", gram condition " << gram_cond << "\n";
    return 0;
}

// ---- selftest -----------------------------------------------------------

int cmd_selftest(const std::string& out, int threads) {
    apply_threads(threads);
    char* text = nullptr;
    int all_passed = 0;
    const etn_status s = etn_selftest(&text, &all_passed);
    if (s != ETN_OK) return fail(s);
    std::cout << text;
    if (!out.empty()) {
        const fs::path dir(out);
        if (!ensure_outdir(dir)) {
            etn_string_free(text);
            return 1;
        }
        RunManifest manifest("selftest", json{{"threads", threads}});
        {
            std::ofstream os(dir / "selftest.txt");
            os << text;
            manifest.add_output(dir / "selftest.txt");
        }
        manifest.set("all_passed", all_passed != 0);
        manifest.write(dir);
    }
    etn_string_free(text);
    std::cout << (all_passed != 0 ? "all properties passed\n"
                                  : "property failures detected\n");
    return all_passed != 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Einstein-product tensor toolkit"};
    app.require_subcommand(1);

    PoissonArgs pargs;
    CLI::App* poisson = app.add_subcommand("poisson", "Tensor-format Poisson solver");
    poisson->add_option("--dim", pargs.dim, "Spatial dimension (2 or 3)")
        ->check(CLI::IsMember({2, 3}));
    poisson->add_option("--n", pargs.n, "Interior grid points per side")->required();
    poisson->add_option("--method", pargs.method, "bicg, jacobi or direct");
    poisson->add_option("--source", pargs.source,
                        "manufactured, constant or file:PATH");
    poisson->add_option("--scaling", pargs.scaling, "paper or standard")
        ->check(CLI::IsMember({"paper", "standard"}));
    poisson->add_option("--tol", pargs.tol, "Relative residual target");
    poisson->add_option("--max-iter", pargs.max_iter, "Iteration cap");
    poisson->add_option("--out", pargs.out, "Output directory");
    poisson->add_option("--threads", pargs.threads, "Worker cap");

    AndersonArgs aargs;
    CLI::App* anderson =
        app.add_subcommand("anderson", "Anderson-model eigenvector experiment");
    anderson->add_option("--dim", aargs.dim, "Lattice dimension (1, 2 or 3)");
    anderson->add_option("--n", aargs.n, "Sites per side")->required();
    anderson->add_option("--lambda", aargs.lambda, "Disorder strength");
    anderson->add_option("--seed", aargs.seed, "Potential RNG seed");
    anderson->add_option("--which", aargs.which, "Eigenpair range FIRST:LAST");
    anderson->add_flag("--nearest", aargs.nearest,
                       "Select eigenpairs nearest --energy instead of a range");
    anderson->add_option("--energy", aargs.energy, "Target energy for --nearest");
    anderson->add_option("--count", aargs.count, "Eigenpair count for --nearest");
    anderson->add_option("--scaling", aargs.scaling, "lattice or paper");
    anderson->add_option("--out", aargs.out, "Output directory");
    anderson->add_option("--threads", aargs.threads, "Worker cap");

    DecomposeArgs dargs;
    CLI::App* decompose = app.add_subcommand("decompose", "Tensor SVD/EVD/CP/MSVD");
    decompose->add_option("--input", dargs.input, "Input tensor file")->required();
    decompose->add_option("--kind", dargs.kind, "svd, evd, cp or msvd");
    decompose->add_option("--out", dargs.out, "Output directory");
    decompose->add_option("--threads", dargs.threads, "Worker cap");

    LstsqArgs largs;
    CLI::App* lstsq = app.add_subcommand("lstsq", "Third-order least squares");
    lstsq->add_option("--a", largs.a, "Operand tensor file")->required();
    lstsq->add_option("--b", largs.b, "Observation tensor file")->required();
    lstsq->add_option("--layout", largs.layout, "Table layout row (1-6)")
        ->check(CLI::Range(1, 6));
    lstsq->add_option("--ridge", largs.ridge, "Tikhonov term for the gram diagonal");
    lstsq->add_option("--out", largs.out, "Output directory");
    lstsq->add_option("--threads", largs.threads, "Worker cap");

    std::string selftest_out;
    int selftest_threads = threads_default();
    CLI::App* selftest = app.add_subcommand("selftest", "Built-in property suites");
    selftest->add_option("--out", selftest_out, "Optional output directory");
    selftest->add_option("--threads", selftest_threads, "Worker cap");

    CLI11_PARSE(app, argc, argv);

    if (poisson->parsed()) return cmd_poisson(pargs);
    if (anderson->parsed()) return cmd_anderson(aargs);
    if (decompose->parsed()) return cmd_decompose(dargs);
    if (lstsq->parsed()) return cmd_lstsq(largs);
    if (selftest->parsed()) return cmd_selftest(selftest_out, selftest_threads);
    return 1;
}
