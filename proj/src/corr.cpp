#include "expaudit/corr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

namespace ea::corr {

using arith::Modulus;
using kernels::CisTable;
using sums::UnitTables;

namespace {

bool excluded_at(const std::vector<std::pair<u64, u64>>& excluded, u64 x, u64 p) {
    for (auto& [pp, r] : excluded)
        if (pp == p && x % p == r) return true;
    return false;
}

}  // namespace

std::vector<u32> RationalPhase::domain() const {
    u64 sv = s.value;
    std::vector<u32> xs;
    xs.reserve(sv);
    for (u64 x = 0; x < sv; ++x) {
        if (std::gcd(arith::addmod(arith::mulmod(c, x, sv), d, sv), sv) != 1) continue;
        bool skip = false;
        for (auto& [p, e] : s.factorization)
            if (excluded_at(excluded, x, p)) {
                skip = true;
                break;
            }
        if (!skip) xs.push_back(static_cast<u32>(x));
    }
    return xs;
}

RationalPhaseResult rational_phase_sum(const RationalPhase& rp) {
    u64 sv = rp.s.value;
    if (std::gcd(rp.d, sv) != 1)
        throw PreconditionError("rational phase requires (d, s) = 1");
    auto xs = rp.domain();
    RationalPhaseResult out;
    out.sum.modulus = sv;
    out.sum.kind = sums::SumKind::RationalPhase;
    out.sum.params = {static_cast<i64>(rp.a), static_cast<i64>(rp.b), static_cast<i64>(rp.c),
                      static_cast<i64>(rp.d)};
    if (xs.empty()) {
        out.empty_domain = true;
        out.sum.value = 0;
        return out;
    }
    CisTable cis = CisTable::build(static_cast<u32>(sv));
    cplx acc = 0;
    for (u32 x : xs) {
        u64 den = arith::mod_inverse(arith::addmod(arith::mulmod(rp.c, x, sv), rp.d, sv), sv);
        u64 num = arith::mulmod(x, arith::addmod(arith::mulmod(rp.a, x, sv), rp.b, sv), sv);
        acc += cis.at(static_cast<u32>(arith::mulmod(num, den, sv)));
    }
    out.sum.value = acc / static_cast<double>(sv);
    return out;
}

namespace {

// Roots of n2 x^2 + n1 x + n0 modulo p^alpha by level-by-level lifting.
std::vector<u64> quadratic_roots_mod_pk(u64 n2, u64 n1, u64 n0, u64 p, int alpha) {
    u64 mod = 1;
    for (int i = 0; i < alpha; ++i) mod *= p;
    auto value = [&](u64 x, u64 m) {
        return arith::addmod(
            arith::addmod(arith::mulmod(n2, arith::mulmod(x, x, m), m), arith::mulmod(n1, x, m),
                          m),
            n0, m);
    };
    std::vector<u64> roots;
    for (u64 x = 0; x < p; ++x)
        if (value(x, p) == 0) roots.push_back(x);
    u64 level = p;
    while (level < mod) {
        u64 next = level * p;
        std::vector<u64> lifted;
        for (u64 x0 : roots) {
            u64 fx = value(x0, next);
            u64 dfx = arith::addmod(arith::mulmod(2 * n2 % p, x0 % p, p), n1 % p, p);
            if (dfx % p != 0) {
                u64 t = arith::mulmod((next - fx) / level % p, arith::mod_inverse(dfx, p), p);
                lifted.push_back(x0 + t * level);
            } else if (fx == 0) {
                for (u64 t = 0; t < p; ++t) lifted.push_back(x0 + t * level);
            }
        }
        roots = std::move(lifted);
        level = next;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

StationaryReport stationary_points(const RationalPhase& rp) {
    if (!rp.s.is_prime_power() || rp.s.factorization[0].second < 2)
        throw PreconditionError("stationary_points requires s = p^n with n >= 2");
    u64 p = rp.s.factorization[0].first;
    int n = rp.s.factorization[0].second;
    if (rp.a % p == 0)
        throw DegenerateBranchError("stationary_points: p | a (degenerate branch)");
    StationaryReport rep;
    rep.p = p;
    rep.alpha = n / 2;
    u64 pa = 1;
    for (int i = 0; i < rep.alpha; ++i) pa *= p;
    // phi'(x) numerator: a c x^2 + 2 a d x + b d
    std::vector<u64> roots =
        quadratic_roots_mod_pk(arith::mulmod(rp.a % pa, rp.c % pa, pa),
                               arith::mulmod(2 * (rp.a % pa) % pa, rp.d % pa, pa),
                               arith::mulmod(rp.b % pa, rp.d % pa, pa), p, rep.alpha);
    u64 g2 = std::gcd<u64>(2, p);  // (2a, p^alpha) = (2, p^alpha) since (a,p) = 1
    for (u64 x : roots) {
        if (std::gcd(arith::addmod(arith::mulmod(rp.c, x, pa), rp.d % pa, pa), p) != 1) continue;
        if (excluded_at(rp.excluded, x, p)) continue;
        // phi''(x) = 2a/(cx+d) mod p at stationary points
        u64 cx = arith::addmod(arith::mulmod(rp.c % p, x % p, p), rp.d % p, p);
        u64 phi2 = arith::mulmod(2 * (rp.a % p) % p, arith::mod_inverse(cx, p), p);
        u64 gp = std::gcd(phi2 == 0 ? p : phi2, p);
        rep.points.emplace_back(x, gp);
        if (gp != g2) rep.second_derivative_check = false;
    }
    return rep;
}

namespace {

// Per-modulus slice of the rational-phase audit; slices are independent and merged
// in ascending s order so the report is identical for any worker count.
struct RationalPhaseSlice {
    double max_ratio = 0.0;
    report::json worst = report::json::object();
    std::vector<report::json> violations;
    u64 violation_total = 0;
    double worst_stationary = 0.0, worst_stationary_p2 = 0.0, worst_vanishing = 0.0;
    u64 hensel_checked = 0;

    void violate(report::json v) {
        ++violation_total;
        if (violations.size() < 100) violations.push_back(std::move(v));
    }
};

void rational_phase_slice(u32 s, const RationalPhaseAuditOptions& opt, double frozen, RationalPhaseSlice& out) {
    {
        Modulus ms(s);
        u64 p = ms.factorization[0].first;
        int n = ms.factorization[0].second;
        int alpha = n / 2;
        u64 pa = 1;
        for (int i = 0; i < alpha; ++i) pa *= p;
        CisTable cis = CisTable::build(s);
        UnitTables ut = UnitTables::build(s);

        // p-adic valuation of a, capped at n, and (a, s) = p^min(v, n).
        std::vector<int> val(s, n);
        std::vector<double> gcd_as(s), sqrt_gcd_as(s);
        for (u32 a = 1; a < s; ++a) {
            int v = 0;
            u32 t = a;
            while (t % p == 0) {
                t /= static_cast<u32>(p);
                ++v;
            }
            val[a] = v;
        }
        std::vector<double> ppow(n + 1);
        ppow[0] = 1;
        for (int i = 1; i <= n; ++i) ppow[i] = ppow[i - 1] * static_cast<double>(p);
        for (u32 a = 0; a < s; ++a) {
            gcd_as[a] = ppow[val[a]];
            sqrt_gcd_as[a] = std::sqrt(gcd_as[a]);
        }

        std::vector<u32> b_classes{0};
        {
            u32 pw = 1;
            for (int j = 0; j < n; ++j) {
                b_classes.push_back(pw);
                pw *= static_cast<u32>(p);
            }
        }

        double sq_s = std::sqrt(static_cast<double>(s));
        double inv_s = 1.0 / static_cast<double>(s);

        for (u32 c = 0; c < s; ++c) {
            RationalPhase rp{ms, 0, 0, c, 1, {}};
            if (opt.exclusion_suite) rp.excluded.emplace_back(p, 1 % p);
            auto xs = rp.domain();
            std::size_t m = xs.size();
            if (m == 0) continue;
            std::vector<u32> ucoef(m), tcoef(m), idx(m);
            for (std::size_t i = 0; i < m; ++i) {
                u64 den = ut.inverse[arith::addmod(arith::mulmod(c, xs[i], s), 1, s)];
                u64 t = arith::mulmod(xs[i], den, s);
                tcoef[i] = static_cast<u32>(t);
                ucoef[i] = static_cast<u32>(arith::mulmod(xs[i], t, s));
            }
            for (u32 b : b_classes) {
                int vb = (b == 0) ? n : val[b];
                for (std::size_t i = 0; i < m; ++i)
                    idx[i] = static_cast<u32>(arith::mulmod(b, tcoef[i], s));
                for (u32 a = 0; a < s; ++a) {
                    cplx sum = (a == 0)
                                   ? kernels::gather_sum(idx.data(), m, cis)
                                   : kernels::step_gather_sum(idx.data(), ucoef.data(), s, m, cis);
                    double sigma = std::abs(sum) * inv_s;
                    double gcd_abs = ppow[std::min(val[a], vb)];
                    double ratio = sigma * sq_s * sqrt_gcd_as[a] / gcd_abs;
                    if (ratio > out.max_ratio) {
                        out.max_ratio = ratio;
                        out.worst = {{"s", s}, {"a", a}, {"b", b}, {"c", c}};
                    }
                    if (ratio > frozen)
                        out.violate(
                            {{"kind", "ratio"}, {"s", s}, {"a", a}, {"b", b}, {"c", c},
                             {"ratio", ratio}, {"frozen", frozen}});
                    if (n < 2) continue;
                    if (a % p != 0) {
                        RationalPhase point{ms, a, b, c, 1, rp.excluded};
                        auto st = stationary_points(point);
                        double bound = 0.0;
                        for (auto& [x, gp] : st.points) bound += std::sqrt(static_cast<double>(gp));
                        bound /= sq_s;
                        if (sigma > bound + opt.stationary_slack)
                            out.violate({{"kind", "stationary"}, {"s", s}, {"a", a},
                                         {"b", b}, {"c", c}, {"sigma", sigma},
                                         {"bound", bound}});
                        double sr = bound > 0 ? sigma / bound
                                              : (sigma > opt.stationary_slack ? 1e9 : 0.0);
                        if (p == 2)
                            out.worst_stationary_p2 = std::max(out.worst_stationary_p2, sr);
                        else
                            out.worst_stationary = std::max(out.worst_stationary, sr);
                        if (!st.second_derivative_check)
                            out.violate({{"kind", "second_derivative"}, {"s", s},
                                         {"a", a}, {"b", b}, {"c", c}});
                        // Hensel count: simple-discriminant numerators have <= 2 roots.
                        if (p != 2) {
                            // disc = 4a(a - bc) mod p (d = 1)
                            u64 disc = arith::mulmod(
                                4 * (a % p) % p,
                                arith::reduce(static_cast<i64>(a % p) -
                                                  static_cast<i64>(arith::mulmod(
                                                      b % p, c % p, p)),
                                              p),
                                p);
                            if (disc % p != 0) {
                                ++out.hensel_checked;
                                if (st.points.size() > 2)
                                    out.violate({{"kind", "hensel_count"}, {"s", s},
                                                 {"a", a}, {"b", b}, {"c", c},
                                                 {"count", st.points.size()}});
                            }
                        }
                    } else if (b != 0 && b % p != 0) {
                        out.worst_vanishing = std::max(out.worst_vanishing, sigma);
                        if (sigma > opt.zero_tol)
                            out.violate({{"kind", "vanishing"}, {"s", s}, {"a", a},
                                         {"b", b}, {"c", c}, {"sigma", sigma}});
                    }
                }
            }
        }
    }
}

}  // namespace

report::AuditReport rational_phase_audit(const RationalPhaseAuditOptions& opt, const registry::Registry& reg) {
    if (opt.s_max < 2) throw ConfigError("rational-phase audit requires s_max >= 2");
    report::AuditReport rep;
    rep.suite = opt.exclusion_suite ? "rational-phase-excluded" : "rational-phase";
    rep.registry_hash = reg.hash();
    rep.params = {{"s_max", opt.s_max},
                  {"zero_tol", opt.zero_tol},
                  {"stationary_slack", opt.stationary_slack},
                  {"exclusion_suite", opt.exclusion_suite},
                  {"threads", opt.threads}};
    rep.modulus_lo = 2;
    rep.modulus_hi = opt.s_max;
    const double frozen = reg.at("rational_phase_ratio_max");

    auto moduli = prime_powers_up_to(opt.s_max);
    std::vector<RationalPhaseSlice> slices(moduli.size());
    unsigned workers = std::max(1u, opt.threads);
    if (workers <= 1) {
        for (std::size_t i = 0; i < moduli.size(); ++i)
            rational_phase_slice(moduli[i], opt, frozen, slices[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= moduli.size()) return;
                rational_phase_slice(moduli[i], opt, frozen, slices[i]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    double worst_stationary = 0.0, worst_stationary_p2 = 0.0, worst_vanishing = 0.0;
    u64 hensel_checked = 0;
    for (auto& sl : slices) {
        if (sl.max_ratio > rep.max_ratio) rep.observe(sl.max_ratio, sl.worst);
        for (auto& v : sl.violations) rep.note_violation(v);
        if (sl.violation_total > sl.violations.size()) {
            u64 n = rep.extra.value("violation_count", u64{0});
            rep.extra["violation_count"] =
                n + sl.violation_total - sl.violations.size();
        }
        worst_stationary = std::max(worst_stationary, sl.worst_stationary);
        worst_stationary_p2 = std::max(worst_stationary_p2, sl.worst_stationary_p2);
        worst_vanishing = std::max(worst_vanishing, sl.worst_vanishing);
        hensel_checked += sl.hensel_checked;
    }
    rep.extra["worst_stationary_ratio"] = worst_stationary;
    rep.extra["worst_stationary_ratio_p2"] = worst_stationary_p2;
    rep.extra["worst_vanishing_sigma"] = worst_vanishing;
    rep.extra["hensel_checked"] = hensel_checked;
    return rep;
}

CorrelationParams CorrelationParams::make(u64 s1, u64 s2, i64 a1, i64 a2, i64 b1, i64 b2,
                                          u64 xi) {
    CorrelationParams cp;
    cp.s1 = s1;
    cp.s2 = s2;
    cp.a1 = a1;
    cp.a2 = a2;
    cp.b1 = b1;
    cp.b2 = b2;
    cp.g = std::gcd(s1, s2);
    cp.w1 = s1 / cp.g;
    cp.w2 = s2 / cp.g;
    cp.lcm = cp.w1 * s2;
    cp.xi = xi % cp.lcm;
    if (std::gcd(arith::reduce(b1, s1), s1) != 1 || std::gcd(arith::reduce(b2, s2), s2) != 1)
        throw NotCoprimeError("correlation params require (b_i, s_i) = 1");
    cp.l1 = arith::mulmod(arith::reduce(a1, s1), arith::mod_inverse(arith::reduce(b1, s1), s1),
                          s1);
    cp.l2 = arith::mulmod(arith::reduce(a2, s2), arith::mod_inverse(arith::reduce(b2, s2), s2),
                          s2);
    i128 num = static_cast<i128>(s2) * s2 * b2 * a1 - static_cast<i128>(s1) * s1 * b1 * a2;
    i128 den = static_cast<i128>(cp.g) * cp.g;
    if (num % den != 0) throw PreconditionError("Delta not integral");
    i128 delta = num / den;
    if (delta > static_cast<i128>(INT64_MAX) || delta < -static_cast<i128>(INT64_MAX))
        throw PreconditionError("Delta overflows 64 bits");
    cp.delta = static_cast<i64>(delta);
    return cp;
}

sums::ExpSumValue correlation_sum(const CorrelationParams& cp) {
    u32 l = static_cast<u32>(cp.lcm);
    auto k1 = sums::kloosterman_table(static_cast<u32>(cp.s1));
    auto k2 = sums::kloosterman_table(static_cast<u32>(cp.s2));
    CisTable cis = CisTable::build(l);
    std::vector<double> q(l);
    u32 i1 = 0, i2 = 0;
    for (u32 x = 0; x < l; ++x) {
        q[x] = k1[i1] * k2[i2];
        i1 += static_cast<u32>(cp.l1);
        if (i1 >= cp.s1) i1 -= static_cast<u32>(cp.s1);
        i2 += static_cast<u32>(cp.l2);
        if (i2 >= cp.s2) i2 -= static_cast<u32>(cp.s2);
    }
    cplx acc = kernels::weighted_stride_sum(q.data(), l, 0, static_cast<u32>(cp.xi), cis);
    sums::ExpSumValue out;
    out.value = acc / static_cast<double>(l);
    out.modulus = cp.lcm;
    out.kind = sums::SumKind::Kloosterman;
    out.params = {static_cast<i64>(cp.s1), static_cast<i64>(cp.s2), static_cast<i64>(cp.l1),
                  static_cast<i64>(cp.l2), static_cast<i64>(cp.xi)};
    return out;
}

cplx correlation_sum_parseval(const CorrelationParams& cp) {
    u32 l = static_cast<u32>(cp.lcm);
    u32 s1 = static_cast<u32>(cp.s1), s2 = static_cast<u32>(cp.s2);
    CisTable cis1 = CisTable::build(s1);
    CisTable cis2 = CisTable::build(s2);
    UnitTables ut1 = UnitTables::build(s1);
    UnitTables ut2 = UnitTables::build(s2);
    // A[m] = sum over units v2 of s2 with w1 l2 v2 = m (mod L) of e_{s2}(-v2^{-1})
    std::vector<cplx> a_tab(l, cplx{0.0, 0.0});
    u64 w1l2 = arith::mulmod(cp.w1 % cp.lcm, cp.l2, cp.lcm);
    for (u32 v2 : ut2.units) {
        u64 m = arith::mulmod(w1l2, v2, cp.lcm);
        u32 minv = ut2.inverse[v2];
        a_tab[m] += std::conj(cis2.at(minv));
    }
    u64 w2l1 = arith::mulmod(cp.w2 % cp.lcm, cp.l1, cp.lcm);
    cplx acc = 0;
    for (u32 v1 : ut1.units) {
        u64 m = arith::addmod(arith::mulmod(w2l1, v1, cp.lcm), cp.xi, cp.lcm);
        acc += cis1.at(ut1.inverse[v1]) * a_tab[m];
    }
    return acc / std::sqrt(static_cast<double>(cp.s1) * static_cast<double>(cp.s2));
}

double exact_identity_residual(const CorrelationParams& cp) {
    Modulus m1(cp.s1), m2(cp.s2);
    if (!m1.is_prime_power() || !m2.is_prime_power() ||
        m1.factorization[0].first != m2.factorization[0].first || cp.s1 >= cp.s2 ||
        cp.s2 % cp.s1 != 0)
        throw PreconditionError("exact identity needs prime powers s1 | s2, s1 < s2");
    u64 p = m1.factorization[0].first;
    if (cp.l1 % p == 0 || cp.l2 % p == 0 || cp.xi % p == 0)
        throw PreconditionError("exact identity needs (l1 l2 xi, p) = 1");
    cplx brute = correlation_sum(cp).value;

    u64 w2 = cp.s2 / cp.s1;
    u64 xi_inv2 = arith::mod_inverse(cp.xi % cp.s2, cp.s2);
    u64 dplus = arith::addmod(arith::mulmod(arith::mulmod(w2 % cp.s2, w2 % cp.s2, cp.s2),
                                            cp.l1 % cp.s2, cp.s2),
                              cp.l2 % cp.s2, cp.s2);
    u64 phase = arith::mulmod(cp.s2 - dplus % cp.s2, xi_inv2, cp.s2);
    double theta = kTwoPi * static_cast<double>(phase) / static_cast<double>(cp.s2);
    u64 xi_inv1 = arith::mod_inverse(cp.xi % cp.s1, cp.s1);
    u64 karg = arith::mulmod(arith::mulmod(cp.l1 % cp.s1, cp.l2 % cp.s1, cp.s1),
                             arith::mulmod(xi_inv1, xi_inv1, cp.s1), cp.s1);
    cplx closed = cplx{std::cos(theta), std::sin(theta)} *
                  sums::kloosterman_normalized(static_cast<i64>(karg), cp.s1) /
                  std::sqrt(static_cast<double>(cp.s2));
    return std::abs(brute - closed);
}

std::vector<u32> prime_powers_up_to(u32 cap) {
    std::vector<u32> out;
    for (u32 p : arith::primes_up_to(cap)) {
        u64 s = p;
        while (s <= cap) {
            out.push_back(static_cast<u32>(s));
            s *= p;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<u64> divisors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

u64 gcd3(u64 a, u64 b, u64 c) { return std::gcd(a, std::gcd(b, c)); }

// Orbit representatives of xi under simultaneous unit scaling of
// (l1, l2, xi): one representative per gcd class, with divisor d = lcm
// standing for xi = 0.
std::vector<u64> xi_orbit_reps(u64 lcm) {
    auto ds = divisors(lcm);
    std::vector<u64> out;
    for (u64 d : ds) out.push_back(d % lcm);
    return out;
}

}  // namespace

report::AuditReport correlation_bound_audit(const CorrelationAuditOptions& opt,
                                       const registry::Registry& reg) {
    report::AuditReport rep;
    rep.suite = "correlation-bounds";
    rep.registry_hash = reg.hash();
    rep.params = {{"lcm_max", opt.lcm_max}, {"tol", opt.tol}};
    rep.modulus_lo = 2;
    rep.modulus_hi = opt.lcm_max;
    const double frozen_weak = reg.at("correlation_weak_ratio_max");
    const double frozen_strong = reg.at("correlation_strong_ratio_max");
    double worst_strong = 0.0;

    auto pps = prime_powers_up_to(opt.lcm_max);
    for (u32 s1 : pps) {
        for (u32 s2 : pps) {
            u64 g = std::gcd(s1, s2);
            u64 lcm = static_cast<u64>(s1) / g * s2;
            if (lcm > opt.lcm_max) continue;
            u32 l = static_cast<u32>(lcm);
            auto k1 = sums::kloosterman_table(s1);
            auto k2 = sums::kloosterman_table(s2);
            CisTable cis = CisTable::build(l);
            u64 w1 = s1 / g, w2 = s2 / g;
            double sql = std::sqrt(static_cast<double>(lcm));
            std::vector<double> q(l);
            for (u32 l1 = 0; l1 < s1; ++l1) {
                for (u32 l2 = 0; l2 < s2; ++l2) {
                    u32 i1 = 0, i2 = 0;
                    for (u32 x = 0; x < l; ++x) {
                        q[x] = k1[i1] * k2[i2];
                        i1 += l1;
                        if (i1 >= s1) i1 -= s1;
                        i2 += l2;
                        if (i2 >= s2) i2 -= s2;
                    }
                    i64 delta = static_cast<i64>(w2) * w2 * l1 - static_cast<i64>(w1) * w1 * l2;
                    u64 dabs = static_cast<u64>(delta < 0 ? -delta : delta);
                    for (u64 xi : xi_orbit_reps(lcm)) {
                        cplx sum = kernels::weighted_stride_sum(q.data(), l, 0,
                                                                static_cast<u32>(xi), cis);
                        double mag = std::abs(sum) / static_cast<double>(lcm);
                        u64 g4 = std::gcd(dabs == 0 ? g : std::gcd(dabs, g),
                                          xi == 0 ? g : std::gcd(xi, g));
                        u64 g3 = gcd3(xi == 0 ? lcm : xi, s1, s2);
                        double weak = mag * sql / std::sqrt(static_cast<double>(g4));
                        double strong = mag * sql * std::sqrt(static_cast<double>(g3)) / g4;
                        if (weak > rep.max_ratio)
                            rep.observe(weak, {{"s1", s1}, {"s2", s2}, {"l1", l1}, {"l2", l2},
                                               {"xi", xi}});
                        worst_strong = std::max(worst_strong, strong);
                        if (weak > frozen_weak)
                            rep.note_violation({{"kind", "weak"}, {"s1", s1}, {"s2", s2},
                                                {"l1", l1}, {"l2", l2}, {"xi", xi},
                                                {"ratio", weak}});
                        if (strong > frozen_strong)
                            rep.note_violation({{"kind", "strong"}, {"s1", s1}, {"s2", s2},
                                                {"l1", l1}, {"l2", l2}, {"xi", xi},
                                                {"ratio", strong}});
                    }
                }
            }
        }
    }
    rep.extra["worst_strong_ratio"] = worst_strong;
    return rep;
}

report::AuditReport parseval_audit(const CorrelationAuditOptions& opt, const registry::Registry& reg) {
    report::AuditReport rep;
    rep.suite = "correlation-parseval";
    rep.registry_hash = reg.hash();
    rep.params = {{"lcm_max", opt.lcm_max}, {"tol", opt.tol}};
    rep.modulus_lo = 2;
    rep.modulus_hi = opt.lcm_max;

    auto pps = prime_powers_up_to(opt.lcm_max);
    for (u32 s1 : pps) {
        for (u32 s2 : pps) {
            u64 g = std::gcd(s1, s2);
            u64 lcm = static_cast<u64>(s1) / g * s2;
            if (lcm > opt.lcm_max) continue;
            u32 l = static_cast<u32>(lcm);
            auto k1 = sums::kloosterman_table(s1);
            auto k2 = sums::kloosterman_table(s2);
            CisTable cis = CisTable::build(l);
            CisTable cis1 = CisTable::build(s1);
            CisTable cis2 = CisTable::build(s2);
            UnitTables ut1 = UnitTables::build(s1);
            UnitTables ut2 = UnitTables::build(s2);
            u64 w1 = s1 / g, w2 = s2 / g;
            double inv_sq = 1.0 / std::sqrt(static_cast<double>(s1) * s2);
            std::vector<double> q(l);
            std::vector<cplx> a_tab(l);
            for (u32 l2 = 0; l2 < s2; ++l2) {
                std::fill(a_tab.begin(), a_tab.end(), cplx{0.0, 0.0});
                u64 w1l2 = arith::mulmod(w1 % lcm, l2, lcm);
                for (u32 v2 : ut2.units)
                    a_tab[arith::mulmod(w1l2, v2, lcm)] += std::conj(cis2.at(ut2.inverse[v2]));
                for (u32 l1 = 0; l1 < s1; ++l1) {
                    u32 i1 = 0, i2 = 0;
                    for (u32 x = 0; x < l; ++x) {
                        q[x] = k1[i1] * k2[i2];
                        i1 += l1;
                        if (i1 >= s1) i1 -= s1;
                        i2 += l2;
                        if (i2 >= s2) i2 -= s2;
                    }
                    u64 w2l1 = arith::mulmod(w2 % lcm, l1, lcm);
                    for (u64 xi : xi_orbit_reps(lcm)) {
                        cplx direct = kernels::weighted_stride_sum(q.data(), l, 0,
                                                                   static_cast<u32>(xi), cis) /
                                      static_cast<double>(lcm);
                        cplx pv = 0;
                        for (u32 v1 : ut1.units) {
                            u64 m = arith::addmod(arith::mulmod(w2l1, v1, lcm), xi, lcm);
                            pv += cis1.at(ut1.inverse[v1]) * a_tab[m];
                        }
                        pv *= inv_sq;
                        double r = std::abs(direct - pv);
                        if (r > rep.max_ratio)
                            rep.observe(r, {{"s1", s1}, {"s2", s2}, {"l1", l1}, {"l2", l2},
                                            {"xi", xi}});
                        if (r > opt.tol)
                            rep.note_violation({{"s1", s1}, {"s2", s2}, {"l1", l1}, {"l2", l2},
                                                {"xi", xi}, {"residual", r}});
                    }
                }
            }
        }
    }
    return rep;
}

IncompleteResult incomplete_correlation(const CorrelationParams& cp,
                                        const weight::InertFunction& v, double x_scale,
                                        double tol, std::vector<cplx>* vhat_cache) {
    if (x_scale < 1.0) throw PreconditionError("incomplete correlation requires X >= 1");
    u32 l = static_cast<u32>(cp.lcm);
    auto k1 = sums::kloosterman_table(static_cast<u32>(cp.s1));
    auto k2 = sums::kloosterman_table(static_cast<u32>(cp.s2));
    IncompleteResult out;

    long n_lo = std::max<long>(1, static_cast<long>(std::ceil(v.lo() * x_scale)));
    long n_hi = static_cast<long>(std::floor(v.hi() * x_scale));
    cplx direct = 0;
    for (long n = n_lo; n <= n_hi; ++n) {
        u64 m1 = arith::mulmod(cp.l1, arith::reduce(n, cp.s1), cp.s1);
        u64 m2 = arith::mulmod(cp.l2, arith::reduce(n, cp.s2), cp.s2);
        direct += v(static_cast<double>(n) / x_scale) * k1[m1] * k2[m2];
    }
    out.direct = direct;

    // Poisson side: X sum_xi Vhat(xi X / L) Sigma_corr(xi), with the complete
    // correlation sums tabulated over a period.
    CisTable cis = CisTable::build(l);
    std::vector<double> q(l);
    {
        u32 i1 = 0, i2 = 0;
        for (u32 x = 0; x < l; ++x) {
            q[x] = k1[i1] * k2[i2];
            i1 += static_cast<u32>(cp.l1);
            if (i1 >= cp.s1) i1 -= static_cast<u32>(cp.s1);
            i2 += static_cast<u32>(cp.l2);
            if (i2 >= cp.s2) i2 -= static_cast<u32>(cp.s2);
        }
    }
    std::vector<cplx> corr(l);
    double max_corr = 0.0;
    for (u32 j = 0; j < l; ++j) {
        corr[j] = kernels::weighted_stride_sum(q.data(), l, 0, j, cis) /
                  static_cast<double>(l);
        max_corr = std::max(max_corr, std::abs(corr[j]));
    }
    double scale = static_cast<double>(cp.lcm) / x_scale;
    double budget = 0.5 * tol / (x_scale * std::max(max_corr, 1e-30));
    long cutoff = v.cutoff_for_budget(scale, budget);
    out.xi_cutoff = cutoff;

    std::vector<cplx> own;
    std::vector<cplx>& vhat = vhat_cache ? *vhat_cache : own;
    std::size_t have = vhat.size();
    vhat.resize(std::max<std::size_t>(have, static_cast<std::size_t>(cutoff) + 1));
    for (std::size_t xi = have; xi < vhat.size(); ++xi)
        vhat[xi] = v.fourier(static_cast<double>(xi) / scale);

    cplx poisson = vhat[0] * corr[0];
    for (long xi = 1; xi <= cutoff; ++xi) {
        cplx vh = vhat[static_cast<std::size_t>(xi)];
        poisson += vh * corr[static_cast<u64>(xi) % l];
        poisson += std::conj(vh) * corr[(l - static_cast<u64>(xi) % l) % l];
    }
    poisson *= x_scale;
    out.poisson = poisson;
    out.residual = std::abs(out.direct - out.poisson);

    u64 dabs = static_cast<u64>(cp.delta < 0 ? -cp.delta : cp.delta);
    u64 gd = dabs == 0 ? cp.g : std::gcd(dabs, cp.g);
    double sql = std::sqrt(static_cast<double>(cp.lcm));
    out.envelope = x_scale * std::sqrt(static_cast<double>(gd)) / sql + sql;
    out.ratio = std::abs(out.direct) / out.envelope;
    return out;
}

}  // namespace ea::corr
