#include <atomic>

#include "expaudit/kernels.hpp"

namespace ea::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::Auto};

inline bool use_avx2() {
    Backend b = g_backend.load(std::memory_order_relaxed);
    if (b == Backend::Scalar) return false;
    if (b == Backend::Avx2) return true;
    static const bool have = avx2_supported();
    return have;
}
}  // namespace

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported())
        throw ConfigError("avx2 backend requested but not supported by this CPU");
    g_backend.store(b, std::memory_order_relaxed);
}

Backend backend() { return g_backend.load(std::memory_order_relaxed); }

std::string backend_name() { return use_avx2() ? "avx2" : "scalar"; }

cplx gather_sum(const u32* idx, std::size_t n, const CisTable& t) {
    return use_avx2() ? gather_sum_avx2(idx, n, t) : gather_sum_scalar(idx, n, t);
}

cplx step_gather_sum(u32* idx, const u32* step, u32 c, std::size_t n, const CisTable& t) {
    return use_avx2() ? step_gather_sum_avx2(idx, step, c, n, t)
                      : step_gather_sum_scalar(idx, step, c, n, t);
}

cplx weighted_stride_sum(const double* w, std::size_t n, u32 base, u32 stride,
                         const CisTable& t) {
    return use_avx2() ? weighted_stride_sum_avx2(w, n, base, stride, t)
                      : weighted_stride_sum_scalar(w, n, base, stride, t);
}

}  // namespace ea::kernels
