#include <cassert>
#include <cmath>

#include "expaudit/kernels.hpp"

namespace ea::kernels {

CisTable CisTable::build(u32 c) {
    assert(c >= 1);
    CisTable t;
    t.mod = c;
    t.re.resize(c);
    t.im.resize(c);
    for (u32 j = 0; j < c; ++j) {
        double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(c);
        t.re[j] = std::cos(theta);
        t.im[j] = std::sin(theta);
    }
    return t;
}

cplx gather_sum_scalar(const u32* idx, std::size_t n, const CisTable& t) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += t.re[idx[i]];
        si += t.im[idx[i]];
    }
    return {sr, si};
}

cplx step_gather_sum_scalar(u32* idx, const u32* step, u32 c, std::size_t n, const CisTable& t) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u32 v = idx[i] + step[i];
        if (v >= c) v -= c;
        idx[i] = v;
        sr += t.re[v];
        si += t.im[v];
    }
    return {sr, si};
}

cplx weighted_stride_sum_scalar(const double* w, std::size_t n, u32 base, u32 stride,
                                const CisTable& t) {
    u32 c = t.mod;
    u32 v = base % c;
    u32 s = stride % c;
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += w[i] * t.re[v];
        si += w[i] * t.im[v];
        v += s;
        if (v >= c) v -= c;
    }
    return {sr, si};
}

}  // namespace ea::kernels
