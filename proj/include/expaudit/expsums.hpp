#pragma once

#include <vector>

#include "expaudit/core_arith.hpp"
#include "expaudit/kernels.hpp"
#include "expaudit/report.hpp"

namespace ea::sums {

enum class SumKind { Gauss, Kloosterman, TwistedKloosterman, Ramanujan, RationalPhase };

struct ExpSumValue {
    cplx value;
    u64 modulus = 1;
    SumKind kind = SumKind::Kloosterman;
    std::vector<i64> params;
};

// Units of Z/c with their inverses; inverse[x] = 0 for non-units.
struct UnitTables {
    u32 mod = 1;
    std::vector<u32> units;
    std::vector<u32> inverse;

    static UnitTables build(u32 c);
};

// S(a,b;c) = sum over units x mod c of e_c(a x + b x^{-1}).
ExpSumValue kloosterman(i64 a, i64 b, const arith::Modulus& c);
// K_c(a) = c^{-1/2} S(a,1;c); real-valued.
double kloosterman_normalized(i64 a, u64 c);
// K_c(m) for every m mod c.
std::vector<double> kloosterman_table(u32 c);

// S_chi(a,b;q) = sum over units x of chi(x) e_q(a x + b x^{-1}).
ExpSumValue twisted_kloosterman(const arith::DirichletCharacter& chi, i64 a, i64 b);
// T(m) = S_chi(m,1;q) for every m mod q; S_chi(a,b;q) = chi(b) T(a b mod q).
std::vector<cplx> twisted_kloosterman_table(const arith::DirichletCharacter& chi);

// eps(conj chi) = q^{-1/2} sum over units a of conj(chi)(a) e_q(a); magnitude 1
// when chi is primitive.
cplx gauss_eps(const arith::DirichletCharacter& chi);

// Sum over units of e_q(a x): q-1 when q | a, else -1 (q prime).
i64 ramanujan(i64 a, const arith::Modulus& q);

// |S(1/a, sign*n; c/d) - (c/d)^{1/2} K_{c/d}(sign*n/a)| with both sides
// evaluated independently.
double kloosterman_factorization_residual(i64 a, i64 n, const arith::Modulus& c, u64 d,
                                          int sign);

struct WeilOptions {
    u32 c_max = 200;
    double tol = 1e-9;
};

// Prime moduli: asserts |S(a,b;p)| <= 2 sqrt(p) for p not dividing ab.
// Prime powers: records max of |S(a,b;c)| / (tau(c) sqrt(c gcd(a,b,c))).
report::AuditReport weil_audit(const WeilOptions& opt, const registry::Registry& reg);

struct RealValuedOptions {
    u32 c_max = 500;
    double tol = 1e-10;
};

report::AuditReport real_valued_audit(const RealValuedOptions& opt,
                                      const registry::Registry& reg);

report::AuditReport gauss_magnitude_audit(u32 q_max, double tol,
                                          const registry::Registry& reg);

report::AuditReport factorization_audit(u32 c_max, double tol, const registry::Registry& reg);

}  // namespace ea::sums
