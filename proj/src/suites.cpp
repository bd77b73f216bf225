#include "expaudit/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "expaudit/chi_formula.hpp"
#include "expaudit/coeffs.hpp"
#include "expaudit/corr.hpp"
#include "expaudit/core_arith.hpp"
#include "expaudit/expsums.hpp"
#include "expaudit/smooth_weight.hpp"

namespace ea::suites {

using arith::DirichletCharacter;
using report::AuditReport;

namespace {

std::vector<u32> resolve_primes(const std::vector<u32>& qs, u32 lo, u32 hi) {
    std::vector<u32> out = qs.empty() ? arith::primes_in(lo, hi) : qs;
    for (u32 q : out)
        if (!arith::is_prime(q)) throw ConfigError("modulus " + std::to_string(q) + " not prime");
    if (out.empty()) throw ConfigError("empty prime list");
    return out;
}

double auto_n_scale(u32 q) {
    return std::floor(std::pow(static_cast<double>(q), 1.5) / 4.0);
}

}  // namespace

AuditReport chi_formula_suite(const ChiFormulaOptions& opt, const registry::Registry& reg) {
    auto qs = resolve_primes(opt.qs, opt.q_lo, opt.q_hi);
    if (opt.rs.empty() || opt.tol <= 0) throw ConfigError("chi-formula: bad R list or tolerance");
    AuditReport rep;
    rep.suite = "chi-formula";
    rep.registry_hash = reg.hash();
    rep.params = {{"q", qs}, {"R", opt.rs}, {"tol", opt.tol}};
    rep.modulus_lo = qs.front();
    rep.modulus_hi = qs.back();
    auto bump = weight::make_bump(reg);
    double budget = 1e-3 * opt.tol;

    for (u32 q : qs) {
        auto chars = arith::all_characters(q);
        for (double r_scale : opt.rs) {
            double h_scale = static_cast<double>(q) / r_scale;
            long cutoff = bump.cutoff_for_budget(h_scale, budget);
            auto tables = charformula::ChiFormulaTables::make(q, r_scale, cutoff, bump);
            for (auto& chi : chars) {
                if (!chi.primitive()) continue;
                auto alpha = charformula::AlphaSequence::make(chi, r_scale, bump);
                auto twisted = sums::twisted_kloosterman_table(chi);
                for (u64 u = 1; u < q; ++u) {
                    cplx rhs = charformula::chi_formula_rhs(chi, alpha, tables, twisted, u);
                    double res = std::abs(rhs - chi(static_cast<i64>(u)));
                    if (res > rep.max_ratio)
                        rep.observe(res, {{"q", q}, {"R", r_scale}, {"k", chi.exponent()},
                                          {"u", u}, {"h_cutoff", cutoff}});
                    if (res > opt.tol)
                        rep.note_violation({{"q", q}, {"R", r_scale}, {"k", chi.exponent()},
                                            {"u", u}, {"residual", res}});
                }
            }
        }
    }
    return rep;
}

AuditReport decomposition_suite(const DecompositionOptions& opt,
                                const registry::Registry& reg) {
    if (opt.tol <= 0 || opt.amplifier_tol <= 0)
        throw ConfigError("decomposition: tolerances must be positive");
    auto qs = resolve_primes(opt.qs, 0, 0);
    AuditReport rep;
    rep.suite = "decomposition";
    rep.registry_hash = reg.hash();
    rep.params = {{"q", qs},       {"R", opt.r_scale},       {"S", opt.s_scale},
                  {"T", opt.t_scale}, {"N", opt.n_scale},    {"tol", opt.tol},
                  {"amplifier_tol", opt.amplifier_tol}};
    rep.modulus_lo = *std::min_element(qs.begin(), qs.end());
    rep.modulus_hi = *std::max_element(qs.begin(), qs.end());
    auto bump = weight::make_bump(reg);
    auto window = weight::InertFunction::default_window(reg);

    double worst_amp = 0.0;
    report::json rows = report::json::array();
    for (u32 q : qs) {
        double n_scale = opt.n_scale > 0 ? opt.n_scale : auto_n_scale(q);
        u32 range = static_cast<u32>(std::floor(window.hi() * n_scale)) + 1;
        auto src = coeffs::CoefficientSource::ternary_divisor(range);
        for (auto& chi : arith::all_characters(q)) {
            if (!chi.primitive()) continue;
            auto alpha = charformula::AlphaSequence::make(chi, opt.r_scale, bump);
            auto amp = charformula::AmplifierPair::make(chi, opt.s_scale, opt.t_scale);
            auto dec = charformula::decompose(src, chi, window, n_scale, alpha, amp, bump,
                                              opt.tol);
            if (dec.residual > rep.max_ratio)
                rep.observe(dec.residual, {{"q", q}, {"k", chi.exponent()}});
            worst_amp = std::max(worst_amp, dec.amplified_residual);
            if (dec.residual > opt.tol)
                rep.note_violation({{"kind", "decomposition"}, {"q", q},
                                    {"k", chi.exponent()}, {"residual", dec.residual}});
            if (dec.amplified_residual > opt.amplifier_tol)
                rep.note_violation({{"kind", "amplifier"}, {"q", q}, {"k", chi.exponent()},
                                    {"residual", dec.amplified_residual}});
            if (chi.exponent() == 1) rows.push_back(dec.to_json());
        }
    }
    rep.extra["max_amplified_residual"] = worst_amp;
    rep.extra["sample_rows"] = rows;
    return rep;
}

AuditReport pi0_suite(const Pi0Options& opt, const registry::Registry& reg) {
    if (opt.param_max < 1 || opt.param_max > (1u << 16) || opt.tol <= 0)
        throw ConfigError("pi0: bad parameter box/tolerance");
    auto qs = resolve_primes(opt.qs, 0, 0);
    AuditReport rep;
    rep.suite = "pi0-chain";
    rep.registry_hash = reg.hash();
    rep.params = {{"q", qs}, {"param_max", opt.param_max}, {"tol", opt.tol}};
    rep.modulus_lo = *std::min_element(qs.begin(), qs.end());
    rep.modulus_hi = *std::max_element(qs.begin(), qs.end());

    double worst_open = 0.0;
    for (u32 q : qs) {
        for (auto& chi : arith::all_characters(q)) {
            if (!chi.primitive()) continue;
            auto twisted = sums::twisted_kloosterman_table(chi);
            for (u32 s1 = 1; s1 <= opt.param_max; ++s1)
                for (u32 t1 = 1; t1 <= opt.param_max; ++t1)
                    for (u32 h1 = 1; h1 <= opt.param_max; ++h1)
                        for (u32 s2 = 1; s2 <= opt.param_max; ++s2)
                            for (u32 t2 = 1; t2 <= opt.param_max; ++t2)
                                for (u32 h2 = 1; h2 <= opt.param_max; ++h2) {
                                    if (s1 % q == 0 || t1 % q == 0 || h1 % q == 0 ||
                                        s2 % q == 0 || t2 % q == 0 || h2 % q == 0)
                                        continue;
                                    auto r = charformula::pi0_chain(chi, s1, t1, h1, s2, t2,
                                                                    h2, &twisted);
                                    double open_res = std::abs(r.definitional - r.opened);
                                    worst_open = std::max(worst_open, open_res);
                                    bool mag_ok =
                                        r.magnitude_residual <= opt.tol &&
                                        std::abs(r.definitional - r.predicted) <= 1e-6;
                                    if (r.magnitude_residual > rep.max_ratio)
                                        rep.observe(r.magnitude_residual,
                                                    {{"q", q}, {"k", chi.exponent()},
                                                     {"s1", s1}, {"t1", t1}, {"h1", h1},
                                                     {"s2", s2}, {"t2", t2}, {"h2", h2}});
                                    if (!mag_ok || open_res > opt.tol)
                                        rep.note_violation(
                                            {{"q", q}, {"k", chi.exponent()}, {"s1", s1},
                                             {"t1", t1}, {"h1", h1}, {"s2", s2}, {"t2", t2},
                                             {"h2", h2},
                                             {"magnitude_residual", r.magnitude_residual},
                                             {"open_residual", open_res}});
                                }
        }
    }
    rep.extra["max_definitional_vs_opened"] = worst_open;
    return rep;
}

AuditReport reciprocity_suite(const ReciprocityOptions& opt, const registry::Registry& reg) {
    auto qs = resolve_primes(opt.qs, 0, 0);
    AuditReport rep;
    rep.suite = "reciprocity";
    rep.registry_hash = reg.hash();
    rep.params = {{"q", qs}, {"range", opt.range}, {"tol", opt.tol}};
    rep.modulus_lo = *std::min_element(qs.begin(), qs.end());
    rep.modulus_hi = *std::max_element(qs.begin(), qs.end());
    for (u32 q : qs)
        for (u32 r = 1; r <= opt.range; ++r)
            for (u32 s = 1; s <= opt.range; ++s) {
                if (std::gcd(static_cast<u64>(r) * s, static_cast<u64>(q)) != 1) continue;
                for (u32 t = 1; t <= opt.range; ++t)
                    for (u32 n = 1; n <= opt.range; ++n) {
                        double res = charformula::reciprocity_residual(t, n, r, s, q);
                        if (res > rep.max_ratio)
                            rep.observe(res, {{"q", q}, {"r", r}, {"s", s}, {"t", t},
                                              {"n", n}});
                        if (res > opt.tol)
                            rep.note_violation({{"q", q}, {"r", r}, {"s", s}, {"t", t},
                                                {"n", n}, {"residual", res}});
                    }
            }
    return rep;
}

AuditReport correlation_identity_suite(const CorrelationIdentityOptions& opt,
                                  const registry::Registry& reg) {
    AuditReport rep;
    rep.suite = "correlation-identity";
    rep.registry_hash = reg.hash();
    rep.params = {{"p", opt.ps}, {"tol", opt.tol}};
    rep.modulus_lo = opt.ps.empty() ? 0 : opt.ps.front();
    rep.modulus_hi = opt.ps.empty() ? 0 : opt.ps.back();
    for (u32 p : opt.ps) {
        if (!arith::is_prime(p)) throw ConfigError("correlation-identity: p must be prime");
        u32 s1 = p, s2 = p * p;
        u32 l = s2;
        auto k1 = sums::kloosterman_table(s1);
        auto k2 = sums::kloosterman_table(s2);
        kernels::CisTable cis = kernels::CisTable::build(l);
        std::vector<double> q(l);
        for (u32 l1 = 1; l1 < s1; ++l1) {
            for (u32 l2 = 1; l2 < s2; ++l2) {
                if (l2 % p == 0) continue;
                u32 i1 = 0, i2 = 0;
                for (u32 x = 0; x < l; ++x) {
                    q[x] = k1[i1] * k2[i2];
                    i1 += l1;
                    if (i1 >= s1) i1 -= s1;
                    i2 += l2;
                    if (i2 >= s2) i2 -= s2;
                }
                for (u32 xi = 1; xi < s2; ++xi) {
                    if (xi % p == 0) continue;
                    cplx direct =
                        kernels::weighted_stride_sum(q.data(), l, 0, xi, cis) /
                        static_cast<double>(l);
                    // closed form: (s1 s2)^{-1/2} e_{s2}(-(w2^2 l1 + l2)/xi) sqrt(s1)
                    //              K_{s1}(l1 l2 / xi^2)
                    u64 w2 = p;
                    u64 dplus = arith::addmod(
                        arith::mulmod(arith::mulmod(w2 * w2 % s2, l1, s2), 1, s2), l2, s2);
                    u64 phase = arith::mulmod((s2 - dplus % s2) % s2,
                                              arith::mod_inverse(xi, s2), s2);
                    double theta =
                        kTwoPi * static_cast<double>(phase) / static_cast<double>(s2);
                    u64 xi1 = arith::mod_inverse(xi % s1, s1);
                    u64 karg = arith::mulmod(arith::mulmod(l1 % s1, l2 % s1, s1),
                                             arith::mulmod(xi1, xi1, s1), s1);
                    cplx closed = cplx{std::cos(theta), std::sin(theta)} * k1[karg] /
                                  std::sqrt(static_cast<double>(s2));
                    double res = std::abs(direct - closed);
                    if (res > rep.max_ratio)
                        rep.observe(res, {{"p", p}, {"l1", l1}, {"l2", l2}, {"xi", xi}});
                    if (res > opt.tol)
                        rep.note_violation({{"p", p}, {"l1", l1}, {"l2", l2}, {"xi", xi},
                                            {"residual", res}});
                }
            }
        }
    }
    return rep;
}

AuditReport incomplete_suite(const IncompleteOptions& opt, const registry::Registry& reg) {
    if (opt.xs.empty() || opt.tol <= 0) throw ConfigError("incomplete: bad X list/tolerance");
    AuditReport rep;
    rep.suite = "incomplete-correlation";
    rep.registry_hash = reg.hash();
    rep.params = {{"lcm_max", opt.lcm_max}, {"X", opt.xs}, {"tol", opt.tol}};
    rep.modulus_lo = 2;
    rep.modulus_hi = opt.lcm_max;
    auto window = weight::InertFunction::default_window(reg);
    const double frozen = reg.at("incomplete_envelope_ratio_max");

    auto pps = corr::prime_powers_up_to(opt.lcm_max);
    double worst_ratio = 0.0;
    std::map<std::pair<u64, long>, std::vector<cplx>> vhat_cache;
    for (u32 s1 : pps) {
        for (u32 s2 : pps) {
            u64 g = std::gcd(s1, s2);
            u64 lcm = static_cast<u64>(s1) / g * s2;
            if (lcm > opt.lcm_max) continue;
            u64 p1 = arith::Modulus(s1).factorization[0].first;
            std::vector<std::pair<i64, i64>> params = {
                {1, 1}, {1, 2 % static_cast<i64>(s2) == 0 ? 1 : 2}, {3 % s1 == 0 ? 2 : 3, 1}};
            if (s1 > p1) params.emplace_back(static_cast<i64>(p1), 1);
            for (auto& [a1, a2] : params) {
                auto cp = corr::CorrelationParams::make(s1, s2, a1, a2, 1, 1, 0);
                for (double x : opt.xs) {
                    auto& cache = vhat_cache[{lcm, static_cast<long>(x)}];
                    auto res = corr::incomplete_correlation(cp, window, x, opt.tol, &cache);
                    if (res.residual > opt.tol)
                        rep.note_violation({{"kind", "poisson"}, {"s1", s1}, {"s2", s2},
                                            {"a1", a1}, {"a2", a2}, {"X", x},
                                            {"residual", res.residual}});
                    worst_ratio = std::max(worst_ratio, res.ratio);
                    if (res.ratio > rep.max_ratio)
                        rep.observe(res.ratio, {{"s1", s1}, {"s2", s2}, {"a1", a1},
                                                {"a2", a2}, {"X", x}});
                    if (res.ratio > frozen)
                        rep.note_violation({{"kind", "envelope"}, {"s1", s1}, {"s2", s2},
                                            {"a1", a1}, {"a2", a2}, {"X", x},
                                            {"ratio", res.ratio}});
                }
            }
        }
    }
    rep.extra["worst_envelope_ratio"] = worst_ratio;
    return rep;
}

AuditReport poisson_suite(const PoissonOptions& opt, const registry::Registry& reg) {
    AuditReport rep;
    rep.suite = "poisson";
    rep.registry_hash = reg.hash();
    rep.params = {{"R", opt.rs}, {"tol", opt.tol}};
    auto bump = weight::make_bump(reg);
    for (double r : opt.rs) {
        // Dual frequencies of x -> W(x/R) sit at R*h, so the envelope scale is
        // 1/R and the dual side carries an extra factor R.
        long cutoff = bump.cutoff_for_budget(1.0 / r, 1e-3 * opt.tol / r);
        double res = weight::poisson_residual([&bump](double x) { return bump(x); }, 1.0, 2.0,
                                              r, cutoff);
        if (res > rep.max_ratio) rep.observe(res, {{"R", r}, {"truncation", cutoff}});
        if (res > opt.tol)
            rep.note_violation({{"R", r}, {"truncation", cutoff}, {"residual", res}});
    }
    return rep;
}

AuditReport diagonal_suite(const DiagonalOptions& opt, const registry::Registry& reg) {
    for (auto& v : {opt.s_scales, opt.t_scales, opt.h_maxes}) {
        if (v.empty()) throw ConfigError("diagonal: empty grid");
        for (u32 x : v)
            if (x == 0 || x > (1u << 12)) throw ConfigError("diagonal: box out of range");
    }
    AuditReport rep;
    rep.suite = "diagonal-count";
    rep.registry_hash = reg.hash();
    rep.params = {{"S", opt.s_scales}, {"T", opt.t_scales}, {"H", opt.h_maxes}};
    const double frozen = reg.at("diagonal_count_ratio_max");
    report::json rows = report::json::array();
    for (u32 s : opt.s_scales)
        for (u32 t : opt.t_scales)
            for (u32 h : opt.h_maxes) {
                auto dc = charformula::diagonal_count(s, t, h);
                rows.push_back({{"S", s}, {"T", t}, {"H", h}, {"count", dc.count},
                                {"ratio", dc.ratio}});
                if (dc.ratio > rep.max_ratio)
                    rep.observe(dc.ratio, {{"S", s}, {"T", t}, {"H", h}});
                if (dc.ratio > frozen)
                    rep.note_violation({{"S", s}, {"T", t}, {"H", h}, {"ratio", dc.ratio},
                                        {"frozen", frozen}});
            }
    rep.extra["counts"] = rows;
    return rep;
}

AuditReport rankin_suite(const RankinOptions& opt, const registry::Registry& reg) {
    auto src = coeffs::CoefficientSource::ternary_divisor(
        std::max(opt.x_max, opt.agreement_max));
    coeffs::RankinSelbergOptions ro;
    ro.x_max = opt.x_max;
    ro.exponent_cap = opt.exponent_cap;
    auto rep = coeffs::rankin_selberg_audit(src, ro, reg);
    rep.params["agreement_max"] = opt.agreement_max;
    u64 mismatches = 0;
    for (u64 n = 1; n <= opt.agreement_max; ++n)
        if (static_cast<double>(coeffs::d3(n)) != src.lambda(n).real()) {
            ++mismatches;
            if (mismatches <= 5)
                rep.note_violation({{"kind", "sieve_vs_formula"}, {"n", n}});
        }
    rep.extra["sieve_formula_mismatches"] = mismatches;
    if (mismatches > 5)
        rep.note_violation({{"kind", "sieve_vs_formula_total"}, {"count", mismatches}});
    return rep;
}

double round_up_6(double v) {
    if (v == 0.0) return 0.0;
    double exp = std::floor(std::log10(std::abs(v)));
    double scale = std::pow(10.0, exp - 5.0);
    return std::ceil(v / scale) * scale;
}

registry::Registry refit(const registry::Registry& base) {
    registry::Registry out = base;
    // Envelope fits live on a grid that stops where quadrature output reaches
    // the double-precision noise floor; the transforms decay faster than any
    // power beyond it.
    auto bump = weight::make_bump(base);
    for (std::size_t i = 0; i < weight::BumpWeight::kEnvelopeA.size(); ++i) {
        int a = weight::BumpWeight::kEnvelopeA[i];
        double c = weight::fit_envelope([&](double xi) { return bump.fourier(xi); }, a, 60.0,
                                        0.25, a <= 4 ? 1000.0 : 0.0);
        out.set("bump_envelope_c" + std::to_string(a), round_up_6(c));
    }
    auto window = weight::InertFunction::default_window(base);
    for (std::size_t i = 0; i < weight::InertFunction::kEnvelopeA.size(); ++i) {
        int a = weight::InertFunction::kEnvelopeA[i];
        double c = weight::fit_envelope([&](double eta) { return window.fourier(eta); }, a,
                                        60.0, 0.25, a <= 4 ? 1000.0 : 0.0);
        out.set("inert_vhat_c" + std::to_string(a), round_up_6(c));
    }
    auto ld = window.measure_logderiv_bounds();
    for (int j = 0; j <= 4; ++j)
        out.set("inert_logderiv_j" + std::to_string(j), round_up_6(ld[j]));

    registry::Registry loose = out;
    for (auto& name : {"rational_phase_ratio_max", "correlation_weak_ratio_max", "correlation_strong_ratio_max",
                       "incomplete_envelope_ratio_max", "diagonal_count_ratio_max",
                       "weil_prime_power_ratio_max"})
        loose.set(name, 1e18);

    corr::RationalPhaseAuditOptions l1;
    auto r1 = corr::rational_phase_audit(l1, loose);
    out.set("rational_phase_ratio_max", round_up_6(r1.max_ratio));
    double st = std::max(r1.extra.value("worst_stationary_ratio", 0.0),
                         r1.extra.value("worst_stationary_ratio_p2", 0.0));
    out.set("stationary_phase_ratio_max", round_up_6(std::max(st, 1e-9)));

    corr::CorrelationAuditOptions l2;
    auto r2 = corr::correlation_bound_audit(l2, loose);
    out.set("correlation_weak_ratio_max", round_up_6(r2.max_ratio));
    out.set("correlation_strong_ratio_max",
            round_up_6(r2.extra.value("worst_strong_ratio", 0.0)));

    IncompleteOptions io;
    auto r3 = incomplete_suite(io, loose);
    out.set("incomplete_envelope_ratio_max",
            round_up_6(r3.extra.value("worst_envelope_ratio", 0.0)));

    DiagonalOptions dopt;
    auto r4 = diagonal_suite(dopt, loose);
    out.set("diagonal_count_ratio_max", round_up_6(r4.max_ratio));

    sums::WeilOptions wo;
    auto r5 = sums::weil_audit(wo, loose);
    out.set("weil_prime_power_ratio_max", round_up_6(r5.max_ratio));
    return out;
}

std::string scan_csv(const ScanOptions& opt, const registry::Registry& reg) {
    if (opt.qs.empty() || opt.ns.empty() || opt.rs.empty() || opt.ss.empty() || opt.ts.empty())
        throw ConfigError("scan: empty grid");
    auto bump = weight::make_bump(reg);
    auto window = weight::InertFunction::default_window(reg);
    std::ostringstream os;
    os << "q,N,R,S,T,abs_sigma,abs_F,abs_O,residual,predicted_F_envelope,predicted_O_envelope\n";
    char buf[256];
    for (u32 q : opt.qs) {
        if (!arith::is_prime(q)) throw ConfigError("scan: q must be prime");
        DirichletCharacter chi(q, 1);
        for (double n0 : opt.ns) {
            double n_scale = n0 > 0 ? n0 : auto_n_scale(q);
            u32 range = static_cast<u32>(std::floor(window.hi() * n_scale)) + 1;
            auto src = coeffs::CoefficientSource::ternary_divisor(range);
            for (double r : opt.rs) {
                auto alpha = charformula::AlphaSequence::make(chi, r, bump);
                for (double s : opt.ss)
                    for (double t : opt.ts) {
                        auto amp = charformula::AmplifierPair::make(chi, s, t);
                        auto dec = charformula::decompose(src, chi, window, n_scale, alpha,
                                                          amp, bump, opt.tol);
                        std::snprintf(buf, sizeof(buf),
                                      "%u,%.6g,%.6g,%.6g,%.6g,%.12e,%.12e,%.12e,%.12e,%.12e,"
                                      "%.12e\n",
                                      q, n_scale, r, s, t, std::abs(dec.sigma),
                                      std::abs(dec.f_term), std::abs(dec.o_term), dec.residual,
                                      charformula::f_envelope(q, n_scale, r, s, t),
                                      charformula::o_envelope(q, r, s, t));
                        os << buf;
                    }
            }
        }
    }
    return os.str();
}

std::string export_fourier_csv(double xi_max, double step, const registry::Registry& reg) {
    if (step <= 0 || xi_max < 0) throw ConfigError("export: bad grid");
    auto bump = weight::make_bump(reg);
    std::ostringstream os;
    os << "xi,re,im\n";
    char buf[128];
    for (double xi = 0.0; xi <= xi_max + 1e-12; xi += step) {
        cplx v = bump.fourier(xi);
        std::snprintf(buf, sizeof(buf), "%.6g,%.17g,%.17g\n", xi, v.real(), v.imag());
        os << buf;
    }
    return os.str();
}

std::string export_coefficients_csv(u32 max_n) {
    auto src = coeffs::CoefficientSource::ternary_divisor(max_n);
    std::ostringstream os;
    src.to_csv(os, max_n);
    return os.str();
}

}  // namespace ea::suites
