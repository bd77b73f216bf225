#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "expaudit/common.hpp"

namespace ea::kernels {

// Table of c-th roots of unity, split into real/imag planes so the gather
// kernels can fetch each component with one vector load per lane group.
struct CisTable {
    u32 mod = 1;
    std::vector<double> re;
    std::vector<double> im;

    static CisTable build(u32 c);
    cplx at(u32 idx) const { return {re[idx], im[idx]}; }
};

// Sum of table[idx[i]] over i.
cplx gather_sum(const u32* idx, std::size_t n, const CisTable& t);

// In-place idx[i] = (idx[i] + step[i]) mod c followed by gather_sum.
// Requires idx[i], step[i] < c and c < 2^30.
cplx step_gather_sum(u32* idx, const u32* step, u32 c, std::size_t n, const CisTable& t);

// Sum of w[i] * table[(base + i*stride) mod c] over i in [0, n).
cplx weighted_stride_sum(const double* w, std::size_t n, u32 base, u32 stride, const CisTable& t);

// Explicit backends, exposed so the equivalence tests can pin each one down.
cplx gather_sum_scalar(const u32* idx, std::size_t n, const CisTable& t);
cplx step_gather_sum_scalar(u32* idx, const u32* step, u32 c, std::size_t n, const CisTable& t);
cplx weighted_stride_sum_scalar(const double* w, std::size_t n, u32 base, u32 stride,
                                const CisTable& t);

bool avx2_supported();
cplx gather_sum_avx2(const u32* idx, std::size_t n, const CisTable& t);
cplx step_gather_sum_avx2(u32* idx, const u32* step, u32 c, std::size_t n, const CisTable& t);
cplx weighted_stride_sum_avx2(const double* w, std::size_t n, u32 base, u32 stride,
                              const CisTable& t);

enum class Backend { Auto, Scalar, Avx2 };

// Process-wide selection; Auto resolves to AVX2 when the CPU supports it.
void set_backend(Backend b);
Backend backend();
std::string backend_name();

}  // namespace ea::kernels
