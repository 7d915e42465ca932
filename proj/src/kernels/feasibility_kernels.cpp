#include "pqclone/kernels/feasibility_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "kernels_impl.hpp"
#include "pqclone/errors.hpp"

namespace pqclone::kernels {

CompiledFeasibility CompiledFeasibility::pack(const Eigen::MatrixXcd& x_m,
                                              const Eigen::MatrixXcd& x_n_p,
                                              double band) {
    const int n = static_cast<int>(x_m.rows());
    if (n < 2 || n > 4) {
        fail("InvariantViolation", "sweep kernels support N in {2,3,4}");
    }
    if (x_n_p.rows() != n || x_m.cols() != n || x_n_p.cols() != n) {
        fail("InvariantViolation", "gram matrices must agree in size");
    }
    CompiledFeasibility cf;
    cf.n = n;
    cf.band = band;
    int k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
            cf.xm_re[k] = x_m(i, j).real();
            cf.xm_im[k] = x_m(i, j).imag();
            cf.xnp_re[k] = x_n_p(i, j).real();
            cf.xnp_im[k] = x_n_p(i, j).imag();
        }
    }
    return cf;
}

namespace {

using BatchFn = void (*)(const CompiledFeasibility&, const double* const*,
                         std::size_t, PointClass*, double*);

struct Backend {
    const char* name;
    BatchFn fn;
};

Backend detect_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
        return {"avx2", &classify_batch_avx2};
    }
#elif defined(__aarch64__)
    return {"neon", &classify_batch_neon};
#endif
    return {"scalar", &classify_batch_scalar_impl};
}

Backend backend_by_name(const std::string& name) {
    if (name == "scalar") return {"scalar", &classify_batch_scalar_impl};
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2") {
        if (!__builtin_cpu_supports("avx2")) {
            fail("InvariantViolation", "avx2 backend not supported by this CPU");
        }
        return {"avx2", &classify_batch_avx2};
    }
#endif
#if defined(__aarch64__)
    if (name == "neon") return {"neon", &classify_batch_neon};
#endif
    fail("InvariantViolation", "unknown kernel backend \"" + name + "\"");
}

Backend initial_backend() {
    if (const char* env = std::getenv("PQCLONE_KERNEL")) {
        if (std::strlen(env) > 0 && std::strcmp(env, "auto") != 0) {
            return backend_by_name(env);
        }
    }
    return detect_backend();
}

Backend& current_backend() {
    static Backend backend = initial_backend();
    return backend;
}

} // namespace

void classify_batch(const CompiledFeasibility& cf, const double* const q[],
                    std::size_t count, PointClass* cls, double* dets) {
    current_backend().fn(cf, q, count, cls, dets);
}

void classify_batch_scalar(const CompiledFeasibility& cf, const double* const q[],
                           std::size_t count, PointClass* cls, double* dets) {
    classify_batch_scalar_impl(cf, q, count, cls, dets);
}

const char* active_backend() {
    return current_backend().name;
}

void force_backend(const char* name) {
    if (name == nullptr || std::strcmp(name, "auto") == 0) {
        current_backend() = detect_backend();
        return;
    }
    current_backend() = backend_by_name(name);
}

} // namespace pqclone::kernels
