#include <cassert>

#include "expaudit/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace ea::kernels {

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

__attribute__((target("avx2,fma"))) cplx gather_sum_avx2(const u32* idx, std::size_t n,
                                                     const CisTable& t) {
    __m256d accr = _mm256_setzero_pd();
    __m256d acci = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        accr = _mm256_add_pd(accr, _mm256_i32gather_pd(t.re.data(), v, 8));
        acci = _mm256_add_pd(acci, _mm256_i32gather_pd(t.im.data(), v, 8));
    }
    double sr = hsum(accr), si = hsum(acci);
    for (; i < n; ++i) {
        sr += t.re[idx[i]];
        si += t.im[idx[i]];
    }
    return {sr, si};
}

__attribute__((target("avx2,fma"))) cplx step_gather_sum_avx2(u32* idx, const u32* step, u32 c,
                                                          std::size_t n, const CisTable& t) {
    assert(c < (1u << 30));
    const __m256i vc = _mm256_set1_epi32(static_cast<int>(c));
    const __m256i vcm1 = _mm256_set1_epi32(static_cast<int>(c) - 1);
    __m256d accr = _mm256_setzero_pd();
    __m256d acci = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(step + i));
        v = _mm256_add_epi32(v, s);
        __m256i wrap = _mm256_cmpgt_epi32(v, vcm1);
        v = _mm256_sub_epi32(v, _mm256_and_si256(wrap, vc));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(idx + i), v);
        __m128i lo = _mm256_castsi256_si128(v);
        __m128i hi = _mm256_extracti128_si256(v, 1);
        accr = _mm256_add_pd(accr, _mm256_i32gather_pd(t.re.data(), lo, 8));
        acci = _mm256_add_pd(acci, _mm256_i32gather_pd(t.im.data(), lo, 8));
        accr = _mm256_add_pd(accr, _mm256_i32gather_pd(t.re.data(), hi, 8));
        acci = _mm256_add_pd(acci, _mm256_i32gather_pd(t.im.data(), hi, 8));
    }
    double sr = hsum(accr), si = hsum(acci);
    for (; i < n; ++i) {
        u32 v = idx[i] + step[i];
        if (v >= c) v -= c;
        idx[i] = v;
        sr += t.re[v];
        si += t.im[v];
    }
    return {sr, si};
}

__attribute__((target("avx2,fma"))) cplx weighted_stride_sum_avx2(const double* w, std::size_t n,
                                                              u32 base, u32 stride,
                                                              const CisTable& t) {
    u32 c = t.mod;
    assert(c < (1u << 30));
    base %= c;
    stride %= c;
    u32 step8 = static_cast<u32>((8ull * stride) % c);
    alignas(32) u32 lane[8];
    u64 v = base;
    for (int j = 0; j < 8; ++j) {
        lane[j] = static_cast<u32>(v);
        v += stride;
        if (v >= c) v -= c;
    }
    __m256i vidx = _mm256_load_si256(reinterpret_cast<const __m256i*>(lane));
    const __m256i vc = _mm256_set1_epi32(static_cast<int>(c));
    const __m256i vcm1 = _mm256_set1_epi32(static_cast<int>(c) - 1);
    const __m256i vstep = _mm256_set1_epi32(static_cast<int>(step8));
    __m256d accr = _mm256_setzero_pd();
    __m256d acci = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m128i lo = _mm256_castsi256_si128(vidx);
        __m128i hi = _mm256_extracti128_si256(vidx, 1);
        __m256d w0 = _mm256_loadu_pd(w + i);
        __m256d w1 = _mm256_loadu_pd(w + i + 4);
        accr = _mm256_fmadd_pd(w0, _mm256_i32gather_pd(t.re.data(), lo, 8), accr);
        acci = _mm256_fmadd_pd(w0, _mm256_i32gather_pd(t.im.data(), lo, 8), acci);
        accr = _mm256_fmadd_pd(w1, _mm256_i32gather_pd(t.re.data(), hi, 8), accr);
        acci = _mm256_fmadd_pd(w1, _mm256_i32gather_pd(t.im.data(), hi, 8), acci);
        vidx = _mm256_add_epi32(vidx, vstep);
        __m256i wrap = _mm256_cmpgt_epi32(vidx, vcm1);
        vidx = _mm256_sub_epi32(vidx, _mm256_and_si256(wrap, vc));
    }
    double sr = hsum(accr), si = hsum(acci);
    if (i < n) {
        alignas(32) u32 rest[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(rest), vidx);
        u32 cur = rest[0];
        for (; i < n; ++i) {
            sr += w[i] * t.re[cur];
            si += w[i] * t.im[cur];
            cur += stride;
            if (cur >= c) cur -= c;
        }
    }
    return {sr, si};
}

}  // namespace ea::kernels

#else

namespace ea::kernels {

bool avx2_supported() { return false; }

cplx gather_sum_avx2(const u32* idx, std::size_t n, const CisTable& t) {
    return gather_sum_scalar(idx, n, t);
}
cplx step_gather_sum_avx2(u32* idx, const u32* step, u32 c, std::size_t n, const CisTable& t) {
    return step_gather_sum_scalar(idx, step, c, n, t);
}
cplx weighted_stride_sum_avx2(const double* w, std::size_t n, u32 base, u32 stride,
                              const CisTable& t) {
    return weighted_stride_sum_scalar(w, n, base, stride, t);
}

}  // namespace ea::kernels

#endif
