#include "expaudit/expsums.hpp"

#include <cmath>
#include <numeric>

namespace ea::sums {

using arith::DirichletCharacter;
using arith::Modulus;
using kernels::CisTable;

UnitTables UnitTables::build(u32 c) {
    UnitTables t;
    t.mod = c;
    if (c == 1) {
        t.units = {0};
        t.inverse = {0};
        return t;
    }
    t.inverse.assign(c, 0);
    for (u32 x = 1; x < c; ++x) {
        if (std::gcd(x, c) == 1) {
            t.units.push_back(x);
            t.inverse[x] = static_cast<u32>(arith::mod_inverse(x, c));
        }
    }
    return t;
}

ExpSumValue kloosterman(i64 a, i64 b, const Modulus& c) {
    u32 m = static_cast<u32>(c.value);
    u64 ar = arith::reduce(a, m), br = arith::reduce(b, m);
    CisTable cis = CisTable::build(m);
    UnitTables ut = UnitTables::build(m);
    cplx acc = 0;
    for (u32 x : ut.units) {
        u64 idx = (ar * x + br * ut.inverse[x]) % m;
        acc += cis.at(static_cast<u32>(idx));
    }
    if (std::abs(acc) > static_cast<double>(m) + 1e-9)
        throw Error("kloosterman sum exceeds its trivial bound");
    return {acc, c.value, SumKind::Kloosterman, {a, b}};
}

double kloosterman_normalized(i64 a, u64 c) {
    ExpSumValue s = kloosterman(a, 1, Modulus(c));
    return s.value.real() / std::sqrt(static_cast<double>(c));
}

std::vector<double> kloosterman_table(u32 c) {
    CisTable cis = CisTable::build(c);
    UnitTables ut = UnitTables::build(c);
    std::size_t n = ut.units.size();
    std::vector<u32> idx(n), step(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = ut.inverse[ut.units[i]];
        step[i] = ut.units[i];
    }
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(c));
    std::vector<double> out(c);
    out[0] = kernels::gather_sum(idx.data(), n, cis).real() * inv_sqrt;
    for (u32 m = 1; m < c; ++m)
        out[m] = kernels::step_gather_sum(idx.data(), step.data(), c, n, cis).real() * inv_sqrt;
    return out;
}

ExpSumValue twisted_kloosterman(const DirichletCharacter& chi, i64 a, i64 b) {
    u32 q = static_cast<u32>(chi.conductor());
    u64 ar = arith::reduce(a, q), br = arith::reduce(b, q);
    CisTable cis = CisTable::build(q);
    UnitTables ut = UnitTables::build(q);
    cplx acc = 0;
    for (u32 x : ut.units) {
        u64 idx = (ar * x + br * ut.inverse[x]) % q;
        acc += chi(x) * cis.at(static_cast<u32>(idx));
    }
    if (std::abs(acc) > static_cast<double>(q) + 1e-9)
        throw Error("twisted kloosterman sum exceeds its trivial bound");
    return {acc, q, SumKind::TwistedKloosterman, {a, b}};
}

std::vector<cplx> twisted_kloosterman_table(const DirichletCharacter& chi) {
    u32 q = static_cast<u32>(chi.conductor());
    CisTable cis = CisTable::build(q);
    UnitTables ut = UnitTables::build(q);
    std::vector<cplx> out(q, cplx{0.0, 0.0});
    for (u32 x : ut.units) {
        cplx cx = chi(x);
        u32 idx = ut.inverse[x];
        for (u32 m = 0; m < q; ++m) {
            out[m] += cx * cis.at(idx);
            idx += x;
            if (idx >= q) idx -= q;
        }
    }
    return out;
}

cplx gauss_eps(const DirichletCharacter& chi) {
    if (chi.trivial())
        throw DegenerateCharacterError("gauss_eps requires a primitive (nontrivial) character");
    u32 q = static_cast<u32>(chi.conductor());
    CisTable cis = CisTable::build(q);
    cplx acc = 0;
    for (u32 a = 1; a < q; ++a) acc += std::conj(chi(a)) * cis.at(a);
    cplx eps = acc / std::sqrt(static_cast<double>(q));
    if (std::abs(std::abs(eps) - 1.0) > 1e-10)
        throw Error("normalized Gauss sum magnitude off unit circle");
    return eps;
}

i64 ramanujan(i64 a, const Modulus& q) {
    if (!q.is_prime()) throw PreconditionError("ramanujan sum evaluated at prime moduli only");
    return (arith::reduce(a, q.value) == 0) ? static_cast<i64>(q.value) - 1 : -1;
}

double kloosterman_factorization_residual(i64 a, i64 n, const Modulus& c, u64 d, int sign) {
    if (d == 0 || c.value % d != 0)
        throw PreconditionError("factorization check requires d | c");
    u64 cd = c.value / d;
    Modulus mcd(cd);
    u64 ainv = arith::mod_inverse(arith::reduce(a, cd), cd);  // NonInvertible if gcd > 1
    i64 sn = sign >= 0 ? n : -n;
    cplx lhs = kloosterman(static_cast<i64>(ainv), sn, mcd).value;
    u64 arg = arith::mulmod(arith::reduce(sn, cd), ainv, cd);
    cplx rhs = std::sqrt(static_cast<double>(cd)) *
               kloosterman_normalized(static_cast<i64>(arg), cd);
    return std::abs(lhs - rhs);
}

report::AuditReport weil_audit(const WeilOptions& opt, const registry::Registry& reg) {
    if (opt.c_max < 2) throw ConfigError("weil audit requires c_max >= 2");
    report::AuditReport rep;
    rep.suite = "weil";
    rep.registry_hash = reg.hash();
    rep.params = {{"c_max", opt.c_max}, {"tol", opt.tol}};
    rep.modulus_lo = 2;
    rep.modulus_hi = opt.c_max;
    double frozen_pp = reg.at("weil_prime_power_ratio_max");

    double worst_prime_ratio = 0.0;
    for (u32 c = 2; c <= opt.c_max; ++c) {
        Modulus mc(c);
        if (!mc.is_prime_power()) continue;
        bool prime = mc.is_prime();
        double tau = static_cast<double>(mc.factorization[0].second + 1);
        CisTable cis = CisTable::build(c);
        UnitTables ut = UnitTables::build(c);
        std::size_t n = ut.units.size();
        std::vector<u32> idx(n), step(n);
        for (std::size_t i = 0; i < n; ++i) step[i] = ut.units[i];
        u32 a_lo = prime ? 1 : 0;
        u32 b_lo = prime ? 1 : 0;
        for (u32 b = b_lo; b < c; ++b) {
            for (std::size_t i = 0; i < n; ++i)
                idx[i] = static_cast<u32>((static_cast<u64>(b) * ut.inverse[ut.units[i]] +
                                           a_lo * static_cast<u64>(ut.units[i])) %
                                          c);
            for (u32 a = a_lo; a < c; ++a) {
                cplx s = (a == a_lo) ? kernels::gather_sum(idx.data(), n, cis)
                                     : kernels::step_gather_sum(idx.data(), step.data(), c, n, cis);
                double mag = std::abs(s);
                if (prime) {
                    double bound = 2.0 * std::sqrt(static_cast<double>(c));
                    double ratio = mag / bound;
                    if (ratio > worst_prime_ratio) worst_prime_ratio = ratio;
                    if (mag > bound + opt.tol)
                        rep.note_violation({{"kind", "prime"},
                                            {"c", c},
                                            {"a", a},
                                            {"b", b},
                                            {"abs_sum", mag},
                                            {"bound", bound}});
                } else {
                    u64 g = std::gcd(std::gcd<u64>(a, b), static_cast<u64>(c));
                    if (g == 0) g = c;
                    double bound = tau * std::sqrt(static_cast<double>(c) * g);
                    double ratio = mag / bound;
                    if (ratio > rep.max_ratio)
                        rep.observe(ratio, {{"c", c}, {"a", a}, {"b", b}, {"abs_sum", mag}});
                    if (ratio > frozen_pp)
                        rep.note_violation({{"kind", "prime_power"},
                                            {"c", c},
                                            {"a", a},
                                            {"b", b},
                                            {"ratio", ratio},
                                            {"frozen", frozen_pp}});
                }
            }
        }
    }
    rep.extra["worst_prime_ratio"] = worst_prime_ratio;
    return rep;
}

report::AuditReport real_valued_audit(const RealValuedOptions& opt,
                                      const registry::Registry& reg) {
    report::AuditReport rep;
    rep.suite = "kloosterman-real";
    rep.registry_hash = reg.hash();
    rep.params = {{"c_max", opt.c_max}, {"tol", opt.tol}};
    rep.modulus_lo = 1;
    rep.modulus_hi = opt.c_max;
    for (u32 c = 1; c <= opt.c_max; ++c) {
        CisTable cis = CisTable::build(c);
        UnitTables ut = UnitTables::build(c);
        std::size_t n = ut.units.size();
        std::vector<u32> idx(n), step(n);
        for (std::size_t i = 0; i < n; ++i) {
            idx[i] = ut.inverse[ut.units[i]];
            step[i] = ut.units[i];
        }
        double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(c));
        for (u32 a = 0; a < c; ++a) {
            cplx s = (a == 0) ? kernels::gather_sum(idx.data(), n, cis)
                              : kernels::step_gather_sum(idx.data(), step.data(), c, n, cis);
            double im = std::abs(s.imag()) * inv_sqrt;
            if (im > rep.max_ratio) rep.observe(im, {{"c", c}, {"a", a}});
            if (im > opt.tol)
                rep.note_violation({{"c", c}, {"a", a}, {"imag", im}, {"tol", opt.tol}});
        }
    }
    return rep;
}

report::AuditReport gauss_magnitude_audit(u32 q_max, double tol,
                                          const registry::Registry& reg) {
    report::AuditReport rep;
    rep.suite = "gauss-magnitude";
    rep.registry_hash = reg.hash();
    rep.params = {{"q_max", q_max}, {"tol", tol}};
    rep.modulus_lo = 3;
    rep.modulus_hi = q_max;
    for (u32 q : arith::primes_in(3, q_max)) {
        CisTable cis = CisTable::build(q);
        for (auto& chi : arith::all_characters(q)) {
            if (chi.trivial()) continue;
            cplx acc = 0;
            for (u32 a = 1; a < q; ++a) acc += std::conj(chi(a)) * cis.at(a);
            double dev = std::abs(std::abs(acc) / std::sqrt(static_cast<double>(q)) - 1.0);
            rep.observe(dev, {{"q", q}, {"k", chi.exponent()}});
            if (dev > tol)
                rep.note_violation({{"q", q}, {"k", chi.exponent()}, {"deviation", dev}});
        }
    }
    return rep;
}

report::AuditReport factorization_audit(u32 c_max, double tol, const registry::Registry& reg) {
    report::AuditReport rep;
    rep.suite = "kloosterman-factorization";
    rep.registry_hash = reg.hash();
    rep.params = {{"c_max", c_max}, {"tol", tol}};
    rep.modulus_lo = 1;
    rep.modulus_hi = c_max;
    for (u32 c = 1; c <= c_max; ++c) {
        Modulus mc(c);
        for (u32 d = 1; d <= c; ++d) {
            if (c % d != 0) continue;
            u32 cd = c / d;
            UnitTables ut = UnitTables::build(cd);
            for (u32 a : ut.units) {
                if (cd > 1 && a == 0) continue;
                for (u32 nn = 0; nn < cd; ++nn) {
                    for (int sign : {+1, -1}) {
                        double r = kloosterman_factorization_residual(a, nn, mc, d, sign);
                        rep.observe(r, {{"c", c}, {"d", d}, {"a", a}, {"n", nn}, {"sign", sign}});
                        if (r > tol)
                            rep.note_violation({{"c", c},
                                                {"d", d},
                                                {"a", a},
                                                {"n", nn},
                                                {"sign", sign},
                                                {"residual", r}});
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace ea::sums
