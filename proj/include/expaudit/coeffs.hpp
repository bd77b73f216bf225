#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "expaudit/common.hpp"
#include "expaudit/report.hpp"

namespace ea::coeffs {

// Ternary divisor count d3(n) = #{(a,b,c) : abc = n} via the factorization
// formula prod C(e+2, 2).
u64 d3(u64 n);
// d3(1..x) by two divisor-convolution passes.
std::vector<u64> d3_sieve(u32 x);

enum class SourceKind { TernaryDivisor, FileBacked, Constant };

class CoefficientSource {
public:
    static CoefficientSource ternary_divisor(u32 range);
    static CoefficientSource constant(cplx value, u32 range);
    // CSV rows "n,re,im" with n strictly increasing from 1; gaps rejected.
    static CoefficientSource from_csv(const std::string& path);
    static CoefficientSource from_stream(std::istream& in, const std::string& name);

    SourceKind kind() const { return kind_; }
    u64 range() const { return values_.size(); }
    cplx lambda(u64 n) const;

    void to_csv(std::ostream& out, u64 max_n) const;

private:
    SourceKind kind_ = SourceKind::Constant;
    std::vector<cplx> values_;  // values_[i] = lambda(1, i+1)
};

struct RankinSelbergOptions {
    u32 x_max = 1 << 16;
    double exponent_cap = 1.5;  // dyadic exponent ceiling for X >= 64
};

// Dyadic table of S(X) = sum_{n<=X} |lambda(1,n)|^2 and its empirical growth
// exponents log2(S(2X)/S(X)).
report::AuditReport rankin_selberg_audit(const CoefficientSource& src,
                                         const RankinSelbergOptions& opt,
                                         const registry::Registry& reg);

}  // namespace ea::coeffs
