#pragma once

#include <vector>

#include "expaudit/coeffs.hpp"
#include "expaudit/core_arith.hpp"
#include "expaudit/expsums.hpp"
#include "expaudit/report.hpp"
#include "expaudit/smooth_weight.hpp"

namespace ea::charformula {

struct SupportCollisionError : PreconditionError {
    using PreconditionError::PreconditionError;
};

// alpha_r = eps(conj chi)^{-1} R^{-1} W(r/R) chi(r) on integers r in (R, 2R).
struct AlphaSequence {
    double r_scale = 0;
    u64 q = 0;
    long r_lo = 0;
    std::vector<cplx> alpha;  // alpha[r - r_lo]
    double sum_abs = 0;
    cplx eps;  // eps(conj chi)

    static AlphaSequence make(const arith::DirichletCharacter& chi, double r_scale,
                              const weight::BumpWeight& w);
};

// beta_s = chi(s)/#P_S on primes s in [S,2S]; gamma_t = conj(chi)(t)/#P_T.
struct AmplifierPair {
    std::vector<std::pair<u32, cplx>> beta, gamma;
    double s_scale = 0, t_scale = 0;

    static AmplifierPair make(const arith::DirichletCharacter& chi, double s_scale,
                              double t_scale);
    // |sum beta_s conj(chi)(s) - 1| and the gamma analogue.
    std::pair<double, double> normalization_residual(const arith::DirichletCharacter& chi) const;
};

// Shared state for evaluating the formula at many (chi, u): the root table
// mod q and the weights What(h/H), h = 1..h_cutoff, H = q/R.
struct ChiFormulaTables {
    kernels::CisTable cis;
    std::vector<cplx> what;
    double h_scale = 1;
    long h_cutoff = 0;

    static ChiFormulaTables make(u64 q, double r_scale, long h_cutoff,
                                 const weight::BumpWeight& w);
};

// RHS of the reconstruction formula
//   chi(u) = q^{1/2} sum_r alpha_r e_q(u/r)
//            - eps(conj chi)^{-1} sum_{h != 0} What(h/H) S_chi(h,u;q)/sqrt(q)
// with the h-sum truncated at |h| <= h_cutoff and H = q/R.
cplx chi_via_formula(const arith::DirichletCharacter& chi, u64 u, const AlphaSequence& alpha,
                     long h_cutoff, const weight::BumpWeight& w);

// Same value with caller-held tables (twisted = S_chi(m,1;q) for all m).
cplx chi_formula_rhs(const arith::DirichletCharacter& chi, const AlphaSequence& alpha,
                     const ChiFormulaTables& tables, const std::vector<cplx>& twisted, u64 u);

struct DecompositionReport {
    cplx sigma, f_term, o_term;
    cplx eps;
    double residual = 0;        // |Sigma - (F - eps^{-1} O)|
    double amplified_residual = 0;  // |Sigma_amplified - Sigma|
    long h_cutoff = 0;
    double tail_budget = 0;
    u64 q = 0;
    double n_scale = 0, r_scale = 0, s_scale = 0, t_scale = 0;

    report::json to_json() const;
};

cplx sigma_direct(const coeffs::CoefficientSource& src, const arith::DirichletCharacter& chi,
                  const weight::InertFunction& v, double n_scale);

cplx sigma_amplified(const coeffs::CoefficientSource& src, const arith::DirichletCharacter& chi,
                     const weight::InertFunction& v, double n_scale, const AmplifierPair& amp);

DecompositionReport decompose(const coeffs::CoefficientSource& src,
                              const arith::DirichletCharacter& chi,
                              const weight::InertFunction& v, double n_scale,
                              const AlphaSequence& alpha, const AmplifierPair& amp,
                              const weight::BumpWeight& w, double tolerance);

// |e_q(tn/rs) - e_{qrs}(tn) e_{rs}(-tn/q)| for (rs, q) = 1.
double reciprocity_residual(u64 t, u64 n, u64 r, u64 s, u64 q);

struct Pi0Result {
    cplx definitional;  // (1/q) sum_n S_chi(h1, t1 n/s1) conj S_chi(h2, t2 n/s2)
    cplx opened;        // constrained double sum over units x, y
    cplx predicted;     // chi(t1 s2 / (t2 s1)) * ramanujan value
    double predicted_magnitude = 0;
    u64 gcd_bound = 0;  // gcd(t1 s2 h2 - t2 s1 h1, q)
    double magnitude_residual = 0;
};

Pi0Result pi0_chain(const arith::DirichletCharacter& chi, i64 s1, i64 t1, i64 h1, i64 s2,
                    i64 t2, i64 h2, const std::vector<cplx>* twisted_table = nullptr);

struct DiagonalCount {
    u64 count = 0;
    double ratio = 0;  // count / (S T H)
};

// #{(t1,s1,h1,t2,s2,h2) in ([T,2T]x[S,2S]x[1,H])^2 : t1 s2 h2 = t2 s1 h1}.
DiagonalCount diagonal_count(u32 s_scale, u32 t_scale, u32 h_max);

// Envelope values reported (never asserted) alongside scan rows.
double f_envelope(u64 q, double n_scale, double r, double s, double t);
double o_envelope(u64 q, double r, double s, double t);

}  // namespace ea::charformula
