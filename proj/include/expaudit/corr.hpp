#pragma once

#include <optional>
#include <vector>

#include "expaudit/core_arith.hpp"
#include "expaudit/expsums.hpp"
#include "expaudit/report.hpp"
#include "expaudit/smooth_weight.hpp"

namespace ea::corr {

// Complete sum s^{-1} sum_{x in X} e_s(x (a x + b)/(c x + d)) over the domain
// X = {x : (c x + d, s) = 1, x mod p not excluded for p | s}.
struct RationalPhase {
    arith::Modulus s;
    u64 a = 0, b = 0, c = 0, d = 1;
    // Per prime p | s: at most one excluded residue class mod p.
    std::vector<std::pair<u64, u64>> excluded;

    std::vector<u32> domain() const;
};

struct RationalPhaseResult {
    sums::ExpSumValue sum;
    bool empty_domain = false;
};

RationalPhaseResult rational_phase_sum(const RationalPhase& rp);

// Stationary set R = {x mod p^alpha : phi'(x) = 0 mod p^alpha} for s = p^n,
// n >= 2, computed by Hensel lifting of the quadratic numerator
//   phi'(x) = (a c x^2 + 2 a d x + b d) / (c x + d)^2.
struct StationaryReport {
    int alpha = 0;
    u64 p = 0;
    std::vector<std::pair<u64, u64>> points;  // (x mod p^alpha, (phi''(x), p))
    bool second_derivative_check = true;      // (phi''(x), p) == (2, p^alpha) per point
};

StationaryReport stationary_points(const RationalPhase& rp);

struct RationalPhaseAuditOptions {
    u32 s_max = 343;
    double zero_tol = 1e-9;       // for the vanishing branch p | a, p ~| b
    double stationary_slack = 1e-9;
    bool exclusion_suite = false;  // X0(p) = Z/p minus the class of 1
    unsigned threads = 1;          // slices merge in s order for any count
};

// Exhaustive ratio audit of |Sigma| * s^{1/2} (a,s)^{1/2} / (a,b,s) over prime
// powers s <= s_max.  The (a,b,c,d) grid is quotiented by the exact symmetries
// Sigma(a,b,c,d) = Sigma(a/d, b/d, c/d, 1) and Sigma(a,b,c,1) =
// Sigma(a u^2, b u, c u, 1) for units u, which preserve the audited ratio, so
// d is fixed to 1 and b runs over the valuation classes {0, p^j}.
report::AuditReport rational_phase_audit(const RationalPhaseAuditOptions& opt, const registry::Registry& reg);

// Parameters of the correlation sum
//   Sigma = [s1,s2]^{-1} sum_x K_{s1}(l1 x) conj(K_{s2}(l2 x)) e_{[s1,s2]}(xi x)
// with l_i = a_i / b_i mod s_i and Delta = (s2^2 b2 a1 - s1^2 b1 a2)/(s1,s2)^2.
struct CorrelationParams {
    u64 s1 = 1, s2 = 1;
    i64 a1 = 0, a2 = 0, b1 = 1, b2 = 1;
    u64 xi = 0;
    u64 l1 = 0, l2 = 0;    // a_i / b_i mod s_i
    u64 g = 1, w1 = 1, w2 = 1, lcm = 1;
    i64 delta = 0;         // exact integer

    static CorrelationParams make(u64 s1, u64 s2, i64 a1, i64 a2, i64 b1, i64 b2, u64 xi);
};

sums::ExpSumValue correlation_sum(const CorrelationParams& cp);
// Same value via the opened-Kloosterman form (constrained double sum).
cplx correlation_sum_parseval(const CorrelationParams& cp);

// For prime powers s1 | s2 (strict) of the same p with (l1 l2 xi, p) = 1:
//   Sigma = (s1 s2)^{-1/2} e_{s2}(-(w2^2 l1 + l2)/xi) sqrt(s1) K_{s1}(l1 l2 / xi^2).
// Returns |brute force - closed form|.
double exact_identity_residual(const CorrelationParams& cp);

struct CorrelationAuditOptions {
    u32 lcm_max = 256;
    double tol = 1e-9;
};

report::AuditReport correlation_bound_audit(const CorrelationAuditOptions& opt,
                                       const registry::Registry& reg);
report::AuditReport parseval_audit(const CorrelationAuditOptions& opt, const registry::Registry& reg);

struct IncompleteResult {
    cplx direct;
    cplx poisson;
    double residual = 0;
    double envelope = 0;  // X (Delta,s1,s2)^{1/2} / [s1,s2]^{1/2} + [s1,s2]^{1/2}
    double ratio = 0;     // |direct| / envelope
    long xi_cutoff = 0;
};

// vhat_cache, when given, memoizes Vhat(xi * X / [s1,s2]) across calls that
// share (lcm, X); it is extended on demand.
IncompleteResult incomplete_correlation(const CorrelationParams& cp,
                                        const weight::InertFunction& v, double x_scale,
                                        double tol = 1e-8,
                                        std::vector<cplx>* vhat_cache = nullptr);

// Prime powers <= cap, ordered.
std::vector<u32> prime_powers_up_to(u32 cap);

}  // namespace ea::corr
