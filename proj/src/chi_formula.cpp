#include "expaudit/chi_formula.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ea::charformula {

using arith::DirichletCharacter;
using arith::Modulus;

AlphaSequence AlphaSequence::make(const DirichletCharacter& chi, double r_scale,
                                  const weight::BumpWeight& w) {
    u64 q = chi.conductor();
    if (!chi.primitive()) throw DegenerateCharacterError("alpha sequence needs primitive chi");
    if (r_scale >= static_cast<double>(q))
        throw SupportCollisionError("alpha support [R,2R] must start below q");
    AlphaSequence a;
    a.r_scale = r_scale;
    a.q = q;
    a.eps = sums::gauss_eps(chi);
    a.r_lo = static_cast<long>(std::ceil(r_scale));
    long r_hi = static_cast<long>(std::floor(2.0 * r_scale));
    cplx inv_eps = 1.0 / a.eps;
    for (long r = a.r_lo; r <= r_hi; ++r) {
        cplx val = inv_eps * (w(static_cast<double>(r) / r_scale) / r_scale) * chi(r);
        a.alpha.push_back(val);
        a.sum_abs += std::abs(val);
    }
    if (a.sum_abs < 0.25 || a.sum_abs > 4.0)
        throw PreconditionError("alpha mass out of the [1/4, 4] bracket");
    return a;
}

AmplifierPair AmplifierPair::make(const DirichletCharacter& chi, double s_scale,
                                  double t_scale) {
    u64 q = chi.conductor();
    AmplifierPair amp;
    amp.s_scale = s_scale;
    amp.t_scale = t_scale;
    auto ps = arith::primes_in(static_cast<u32>(std::ceil(s_scale)),
                               static_cast<u32>(std::floor(2.0 * s_scale)));
    auto pt = arith::primes_in(static_cast<u32>(std::ceil(t_scale)),
                               static_cast<u32>(std::floor(2.0 * t_scale)));
    if (ps.empty() || pt.empty())
        throw PreconditionError("no primes in an amplifier interval");
    for (u32 s : ps) {
        if (s % q == 0) throw SupportCollisionError("amplifier prime divides q");
        amp.beta.emplace_back(s, chi(s) / static_cast<double>(ps.size()));
    }
    for (u32 t : pt) {
        if (t % q == 0) throw SupportCollisionError("amplifier prime divides q");
        amp.gamma.emplace_back(t, std::conj(chi(t)) / static_cast<double>(pt.size()));
    }
    return amp;
}

std::pair<double, double> AmplifierPair::normalization_residual(
    const DirichletCharacter& chi) const {
    cplx sb = 0, sg = 0;
    for (auto& [s, b] : beta) sb += b * std::conj(chi(s));
    for (auto& [t, g] : gamma) sg += g * chi(t);
    return {std::abs(sb - 1.0), std::abs(sg - 1.0)};
}

namespace {

// Truncated dual-side sum with precomputed tables:
//   sum_{0<h<=M} [ What(h/H) S_chi(h,u;q) + What(-h/H) S_chi(-h,u;q) ] / sqrt(q)
// using S_chi(h,u;q) = chi(u) T(h u mod q) with T(m) = S_chi(m,1;q).
cplx dual_sum(u64 q, u64 u, const std::vector<cplx>& what, const std::vector<cplx>& twisted,
              const DirichletCharacter& chi) {
    u32 qq = static_cast<u32>(q);
    u32 uu = static_cast<u32>(u % q);
    cplx acc = 0;
    u32 m = 0;
    for (std::size_t h = 1; h < what.size(); ++h) {
        m += uu;
        if (m >= qq) m -= qq;
        acc += what[h] * twisted[m] + std::conj(what[h]) * twisted[m ? qq - m : 0];
    }
    return chi(static_cast<i64>(u)) * acc / std::sqrt(static_cast<double>(q));
}

}  // namespace

ChiFormulaTables ChiFormulaTables::make(u64 q, double r_scale, long h_cutoff,
                                        const weight::BumpWeight& w) {
    ChiFormulaTables t;
    t.cis = kernels::CisTable::build(static_cast<u32>(q));
    t.h_scale = static_cast<double>(q) / r_scale;
    t.h_cutoff = h_cutoff;
    t.what.resize(static_cast<std::size_t>(h_cutoff) + 1);
    t.what[0] = 0;  // h = 0 slot unused
    for (long h = 1; h <= h_cutoff; ++h)
        t.what[static_cast<std::size_t>(h)] =
            w.fourier(static_cast<double>(h) / t.h_scale);
    return t;
}

cplx chi_formula_rhs(const DirichletCharacter& chi, const AlphaSequence& alpha,
                     const ChiFormulaTables& tables, const std::vector<cplx>& twisted, u64 u) {
    u64 q = chi.conductor();
    if (u % q == 0)
        throw SupportCollisionError("chi_via_formula requires gcd(u, q) = 1");
    double sq = std::sqrt(static_cast<double>(q));
    cplx main = 0;
    for (std::size_t i = 0; i < alpha.alpha.size(); ++i) {
        long r = alpha.r_lo + static_cast<long>(i);
        u64 rr = arith::reduce(r, q);
        if (rr == 0) continue;  // chi(r) = 0 annihilates the term
        u64 idx = arith::mulmod(u % q, arith::mod_inverse(rr, q), q);
        main += alpha.alpha[i] * tables.cis.at(static_cast<u32>(idx));
    }
    main *= sq;
    return main - (1.0 / alpha.eps) * dual_sum(q, u % q, tables.what, twisted, chi);
}

cplx chi_via_formula(const DirichletCharacter& chi, u64 u, const AlphaSequence& alpha,
                     long h_cutoff, const weight::BumpWeight& w) {
    auto tables = ChiFormulaTables::make(chi.conductor(), alpha.r_scale, h_cutoff, w);
    auto twisted = sums::twisted_kloosterman_table(chi);
    return chi_formula_rhs(chi, alpha, tables, twisted, u);
}

cplx sigma_direct(const coeffs::CoefficientSource& src, const DirichletCharacter& chi,
                  const weight::InertFunction& v, double n_scale) {
    if (n_scale <= 0) throw PreconditionError("sigma_direct: N must be positive");
    long n_lo = std::max<long>(1, static_cast<long>(std::ceil(v.lo() * n_scale)));
    long n_hi = static_cast<long>(std::floor(v.hi() * n_scale));
    cplx acc = 0;
    for (long n = n_lo; n <= n_hi; ++n)
        acc += (v(static_cast<double>(n) / n_scale) / n_scale) *
               src.lambda(static_cast<u64>(n)) * chi(n);
    return acc;
}

cplx sigma_amplified(const coeffs::CoefficientSource& src, const DirichletCharacter& chi,
                     const weight::InertFunction& v, double n_scale, const AmplifierPair& amp) {
    u64 q = chi.conductor();
    long n_lo = std::max<long>(1, static_cast<long>(std::ceil(v.lo() * n_scale)));
    long n_hi = static_cast<long>(std::floor(v.hi() * n_scale));
    cplx acc = 0;
    for (auto& [s, bs] : amp.beta) {
        u64 sinv = arith::mod_inverse(s % q, q);
        for (auto& [t, gt] : amp.gamma) {
            u64 tsi = arith::mulmod(t % q, sinv, q);
            cplx inner = 0;
            for (long n = n_lo; n <= n_hi; ++n) {
                u64 u = arith::mulmod(arith::reduce(n, q), tsi, q);
                inner += (v(static_cast<double>(n) / n_scale) / n_scale) *
                         src.lambda(static_cast<u64>(n)) * chi(static_cast<i64>(u));
            }
            acc += bs * gt * inner;
        }
    }
    return acc;
}

DecompositionReport decompose(const coeffs::CoefficientSource& src,
                              const DirichletCharacter& chi, const weight::InertFunction& v,
                              double n_scale, const AlphaSequence& alpha,
                              const AmplifierPair& amp, const weight::BumpWeight& w,
                              double tolerance) {
    u64 q = chi.conductor();
    u32 qq = static_cast<u32>(q);
    DecompositionReport rep;
    rep.q = q;
    rep.n_scale = n_scale;
    rep.r_scale = alpha.r_scale;
    rep.s_scale = amp.s_scale;
    rep.t_scale = amp.t_scale;
    rep.eps = alpha.eps;
    rep.tail_budget = 1e-3 * tolerance;

    double h_scale = static_cast<double>(q) / alpha.r_scale;
    rep.h_cutoff = w.cutoff_for_budget(h_scale, rep.tail_budget);

    rep.sigma = sigma_direct(src, chi, v, n_scale);
    rep.amplified_residual = std::abs(sigma_amplified(src, chi, v, n_scale, amp) - rep.sigma);

    long n_lo = std::max<long>(1, static_cast<long>(std::ceil(v.lo() * n_scale)));
    long n_hi = static_cast<long>(std::floor(v.hi() * n_scale));
    std::vector<cplx> weights(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (long n = n_lo; n <= n_hi; ++n)
        weights[static_cast<std::size_t>(n - n_lo)] =
            (v(static_cast<double>(n) / n_scale) / n_scale) * src.lambda(static_cast<u64>(n));

    kernels::CisTable cis = kernels::CisTable::build(qq);
    double sq = std::sqrt(static_cast<double>(q));

    // F = q^{1/2} sum_{r,s,t} alpha_r beta_s gamma_t sum_n (V/N) lambda e_q(t n / r s)
    cplx f_term = 0;
    for (std::size_t i = 0; i < alpha.alpha.size(); ++i) {
        long r = alpha.r_lo + static_cast<long>(i);
        if (alpha.alpha[i] == cplx{0.0, 0.0}) continue;
        for (auto& [s, bs] : amp.beta) {
            u64 rs = arith::reduce(r, q) * (s % q) % q;
            if (std::gcd(rs, q) != 1)
                throw SupportCollisionError("decompose: r*s shares a factor with q");
            u64 rs_inv = arith::mod_inverse(rs, q);
            for (auto& [t, gt] : amp.gamma) {
                u32 stride = static_cast<u32>(arith::mulmod(t % q, rs_inv, q));
                u32 idx = static_cast<u32>((static_cast<u64>(stride) * arith::reduce(n_lo, q)) %
                                           q);
                cplx inner = 0;
                for (long n = n_lo; n <= n_hi; ++n) {
                    inner += weights[static_cast<std::size_t>(n - n_lo)] * cis.at(idx);
                    idx += stride;
                    if (idx >= qq) idx -= qq;
                }
                f_term += alpha.alpha[i] * bs * gt * inner;
            }
        }
    }
    rep.f_term = sq * f_term;

    // O = sum_n (V/N) lambda sum_{s,t} beta gamma sum_{h != 0} What(h/H) S_chi(h, tn/s; q)/sqrt(q)
    std::vector<cplx> what(static_cast<std::size_t>(rep.h_cutoff) + 1);
    what[0] = 0;
    for (long h = 1; h <= rep.h_cutoff; ++h)
        what[static_cast<std::size_t>(h)] = w.fourier(static_cast<double>(h) / h_scale);
    auto twisted = sums::twisted_kloosterman_table(chi);
    // Rows with q | n: S_chi(h, 0; q) = conj(chi)(h) tau(chi), a Gauss-type sum.
    cplx tau = 0;
    for (u64 x = 1; x < q; ++x) tau += chi(static_cast<i64>(x)) * cis.at(static_cast<u32>(x));
    cplx zero_row = 0;
    for (long h = 1; h <= rep.h_cutoff; ++h) {
        zero_row += what[static_cast<std::size_t>(h)] * std::conj(chi(h)) +
                    std::conj(what[static_cast<std::size_t>(h)]) * std::conj(chi(-h));
    }
    zero_row *= tau / sq;
    cplx o_term = 0;
    for (auto& [s, bs] : amp.beta) {
        u64 sinv = arith::mod_inverse(s % q, q);
        for (auto& [t, gt] : amp.gamma) {
            u64 tsi = arith::mulmod(t % q, sinv, q);
            cplx inner = 0;
            for (long n = n_lo; n <= n_hi; ++n) {
                u64 u = arith::mulmod(arith::reduce(n, q), tsi, q);
                inner += weights[static_cast<std::size_t>(n - n_lo)] *
                         (u == 0 ? zero_row : dual_sum(q, u, what, twisted, chi));
            }
            o_term += bs * gt * inner;
        }
    }
    rep.o_term = o_term;

    rep.residual = std::abs(rep.sigma - (rep.f_term - (1.0 / rep.eps) * rep.o_term));
    return rep;
}

report::json DecompositionReport::to_json() const {
    return {{"q", q},
            {"N", n_scale},
            {"R", r_scale},
            {"S", s_scale},
            {"T", t_scale},
            {"abs_sigma", std::abs(sigma)},
            {"abs_F", std::abs(f_term)},
            {"abs_O", std::abs(o_term)},
            {"residual", residual},
            {"amplified_residual", amplified_residual},
            {"h_cutoff", h_cutoff},
            {"tail_budget", tail_budget}};
}

double reciprocity_residual(u64 t, u64 n, u64 r, u64 s, u64 q) {
    if (r == 0 || s == 0 || q == 0 || r > (1u << 20) || s > (1u << 20) || q > (1u << 20) ||
        t > (1u << 20) || n > (1u << 20))
        throw PreconditionError("reciprocity arguments out of the supported range");
    u64 rs = r * s;
    if (std::gcd(rs, q) != 1) throw NotCoprimeError("reciprocity requires (rs, q) = 1");
    u64 tn = t * n;
    auto ec = [](u64 num, u64 mod) {
        double theta = kTwoPi * static_cast<double>(num % mod) / static_cast<double>(mod);
        return cplx{std::cos(theta), std::sin(theta)};
    };
    cplx lhs = ec(arith::mulmod(tn % q, arith::mod_inverse(rs % q, q), q), q);
    u64 qrs = q * rs;
    cplx rhs = ec(tn % qrs, qrs) *
               ec(arith::mulmod(arith::reduce(-static_cast<i64>(tn % rs), rs),
                                arith::mod_inverse(q % rs, rs), rs),
                  rs);
    return std::abs(lhs - rhs);
}

Pi0Result pi0_chain(const DirichletCharacter& chi, i64 s1, i64 t1, i64 h1, i64 s2, i64 t2,
                    i64 h2, const std::vector<cplx>* twisted_table) {
    u64 q = chi.conductor();
    for (i64 v : {s1, t1, h1, s2, t2, h2})
        if (arith::reduce(v, q) == 0)
            throw NotCoprimeError("pi0_chain: parameter divisible by q");
    u32 qq = static_cast<u32>(q);
    kernels::CisTable cis = kernels::CisTable::build(qq);
    std::vector<cplx> own;
    if (!twisted_table) {
        own = sums::twisted_kloosterman_table(chi);
        twisted_table = &own;
    }
    const auto& twisted = *twisted_table;
    auto schi = [&](i64 h, u64 u) {
        // S_chi(h, u; q) = chi(u) T(h u mod q)
        u64 m = arith::mulmod(arith::reduce(h, q), u, q);
        return chi(static_cast<i64>(u)) * twisted[m];
    };
    u64 s1i = arith::mod_inverse(arith::reduce(s1, q), q);
    u64 s2i = arith::mod_inverse(arith::reduce(s2, q), q);
    Pi0Result out;

    cplx acc = 0;
    for (u64 n = 0; n < q; ++n) {
        u64 u1 = arith::mulmod(arith::mulmod(arith::reduce(t1, q), n, q), s1i, q);
        u64 u2 = arith::mulmod(arith::mulmod(arith::reduce(t2, q), n, q), s2i, q);
        if (u1 == 0 || u2 == 0) {
            // n = 0 row: S_chi(h, 0; q) = sum chi(x) e_q(h x), a Gauss-type sum
            cplx a = 0, b = 0;
            for (u64 x = 1; x < q; ++x) {
                a += chi(static_cast<i64>(x)) * cis.at(static_cast<u32>(arith::mulmod(
                         arith::reduce(h1, q), x, q)));
                b += chi(static_cast<i64>(x)) * cis.at(static_cast<u32>(arith::mulmod(
                         arith::reduce(h2, q), x, q)));
            }
            acc += a * std::conj(b);
            continue;
        }
        acc += schi(h1, u1) * std::conj(schi(h2, u2));
    }
    out.definitional = acc / static_cast<double>(q);

    // Opened route: sum over unit pairs with t1/(s1 x) = t2/(s2 y).
    cplx open = 0;
    for (u64 x = 1; x < q; ++x) {
        // y = x t2 s1 / (t1 s2)
        u64 y = arith::mulmod(
            arith::mulmod(x, arith::mulmod(arith::reduce(t2, q), arith::reduce(s1, q), q), q),
            arith::mod_inverse(arith::mulmod(arith::reduce(t1, q), arith::reduce(s2, q), q), q),
            q);
        u64 ph = arith::reduce(static_cast<i64>(arith::mulmod(arith::reduce(h1, q), x, q)) -
                                   static_cast<i64>(arith::mulmod(arith::reduce(h2, q), y, q)),
                               q);
        open += chi.ratio(static_cast<i64>(x), static_cast<i64>(y)) *
                cis.at(static_cast<u32>(ph));
    }
    out.opened = open;

    i128 delta = static_cast<i128>(t1) * s2 * h1 - static_cast<i128>(t2) * s1 * h2;
    bool diag = static_cast<u64>(delta % static_cast<i128>(q) < 0
                                     ? delta % static_cast<i128>(q) + static_cast<i128>(q)
                                     : delta % static_cast<i128>(q)) == 0;
    i64 ram = diag ? static_cast<i64>(q) - 1 : -1;
    u64 ts1 = arith::mulmod(arith::reduce(t1, q), arith::reduce(s2, q), q);
    u64 ts2 = arith::mulmod(arith::reduce(t2, q), arith::reduce(s1, q), q);
    out.predicted = chi.ratio(static_cast<i64>(ts1), static_cast<i64>(ts2)) *
                    static_cast<double>(ram);
    out.predicted_magnitude = std::abs(static_cast<double>(ram));
    i128 gquant = static_cast<i128>(t1) * s2 * h2 - static_cast<i128>(t2) * s1 * h1;
    i128 gq = gquant % static_cast<i128>(q);
    if (gq < 0) gq += static_cast<i128>(q);
    out.gcd_bound = std::gcd(static_cast<u64>(gq), q);
    if (out.gcd_bound == 0) out.gcd_bound = q;
    out.magnitude_residual = std::abs(std::abs(out.definitional) - out.predicted_magnitude);
    return out;
}

DiagonalCount diagonal_count(u32 s_scale, u32 t_scale, u32 h_max) {
    std::map<u64, u64> hist;
    for (u32 t = t_scale; t <= 2 * t_scale; ++t)
        for (u32 s = s_scale; s <= 2 * s_scale; ++s)
            for (u32 h = 1; h <= h_max; ++h)
                hist[static_cast<u64>(t) * s * h] += 1;
    DiagonalCount out;
    for (auto& [prod, c] : hist) out.count += c * c;
    out.ratio = static_cast<double>(out.count) /
                (static_cast<double>(s_scale) * t_scale * h_max);
    return out;
}

double f_envelope(u64 q, double n_scale, double r, double s, double t) {
    double qd = static_cast<double>(q);
    double first = qd / n_scale * std::pow(qd * r * s / (t * n_scale), 3.0);
    double second = qd * std::pow(r * s, 3.0) / (n_scale * n_scale) *
                    (1.0 / (s * t) + (1.0 + n_scale / (r * r * s)) / (std::sqrt(r) * s));
    return std::sqrt(first + second);
}

double o_envelope(u64 q, double r, double s, double t) {
    double h = static_cast<double>(q) / r;
    return h / std::sqrt(s * t * h);
}

}  // namespace ea::charformula
