// Acceptance suite: one line per criterion, nonzero exit iff any fail.
#include <chrono>
#include <cstdio>
#include <string>

#include "expaudit/corr.hpp"
#include "expaudit/expsums.hpp"
#include "expaudit/report.hpp"
#include "expaudit/suites.hpp"

using namespace ea;

namespace {

int failures = 0;

void line(int id, const std::string& name, bool pass, const std::string& detail,
          double seconds) {
    std::printf("[%s] criterion %2d: %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str(), seconds);
    if (!pass) ++failures;
}

template <class F>
void run(int id, const std::string& name, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = body();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    line(id, name, pass, detail, dt);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

u64 count_kind(const report::AuditReport& rep, const std::string& kind) {
    u64 n = 0;
    for (auto& v : rep.violations)
        if (v.value("kind", std::string()) == kind) ++n;
    return n;
}

}  // namespace

int main() {
    auto reg = registry::Registry::resolve_default();
    std::printf("registry_hash=%s backend=%s\n", reg.hash().c_str(),
                kernels::backend_name().c_str());

    report::AuditReport decomposition_rep;

    run(1, "chi-formula identity", [&] {
        suites::ChiFormulaOptions opt;  // primes in [11, 97], R in {4, 8}, tol 1e-8
        auto rep = suites::chi_formula_suite(opt, reg);
        return std::pair{rep.pass(), "max residual " + fmt(rep.max_ratio) + " (tol 1e-8)"};
    });

    run(2, "decomposition identity", [&] {
        suites::DecompositionOptions opt;  // q in {29, 53}, R 4, S = T = 2, tol 1e-6
        decomposition_rep = suites::decomposition_suite(opt, reg);
        bool ok = count_kind(decomposition_rep, "decomposition") == 0;
        return std::pair{ok, "max residual " + fmt(decomposition_rep.max_ratio) +
                                 " (tol 1e-6, all primitive chi)"};
    });

    run(3, "pi0 chain", [&] {
        suites::Pi0Options opt;  // q in {5,7,11,13}, parameters in [1,4]^6
        auto rep = suites::pi0_suite(opt, reg);
        return std::pair{rep.pass(),
                         "max |Pi0| residual " + fmt(rep.max_ratio) + ", def-vs-open " +
                             fmt(rep.extra.value("max_definitional_vs_opened", 0.0))};
    });

    run(4, "weil and gauss audits", [&] {
        sums::WeilOptions wo;  // primes and prime powers to 200
        auto w = sums::weil_audit(wo, reg);
        auto gsum = sums::gauss_magnitude_audit(101, 1e-10, reg);
        return std::pair{w.pass() && gsum.pass(),
                         "worst prime ratio " +
                             fmt(w.extra.value("worst_prime_ratio", 0.0)) +
                             ", worst |eps|-1 " + fmt(gsum.max_ratio)};
    });

    run(5, "rational-phase sums", [&] {
        corr::RationalPhaseAuditOptions opt;  // prime powers to 343
        auto rep = corr::rational_phase_audit(opt, reg);
        return std::pair{rep.pass(),
                         "max ratio " + fmt(rep.max_ratio) + " <= frozen " +
                             fmt(reg.at("rational_phase_ratio_max")) + ", stationary ratio " +
                             fmt(std::max(rep.extra.value("worst_stationary_ratio", 0.0),
                                          rep.extra.value("worst_stationary_ratio_p2", 0.0)))};
    });

    run(6, "correlation closed form", [&] {
        suites::CorrelationIdentityOptions io;  // (p, p^2), p in {3,5,7,11,13}
        auto ident = suites::correlation_identity_suite(io, reg);
        corr::CorrelationAuditOptions po;  // lcm <= 256
        auto pv = corr::parseval_audit(po, reg);
        return std::pair{ident.pass() && pv.pass(),
                         "identity residual " + fmt(ident.max_ratio) + ", parseval " +
                             fmt(pv.max_ratio) + " (tol 1e-9)"};
    });

    run(7, "incomplete correlations", [&] {
        suites::IncompleteOptions opt;  // lcm <= 100, X in {10,100,1000}
        auto rep = suites::incomplete_suite(opt, reg);
        return std::pair{rep.pass(),
                         "envelope ratio " + fmt(rep.max_ratio) + " <= frozen " +
                             fmt(reg.at("incomplete_envelope_ratio_max")) +
                             ", poisson residuals < 1e-8"};
    });

    run(8, "kloosterman factorization", [&] {
        auto rep = sums::factorization_audit(100, 1e-9, reg);
        return std::pair{rep.pass(), "max residual " + fmt(rep.max_ratio) + " (tol 1e-9)"};
    });

    run(9, "amplified sigma equality", [&] {
        bool ok = !decomposition_rep.suite.empty() &&
                  count_kind(decomposition_rep, "amplifier") == 0;
        return std::pair{
            ok, "max residual " +
                    fmt(decomposition_rep.extra.value("max_amplified_residual", 1.0)) +
                    " (tol 1e-10)"};
    });

    run(10, "rankin-selberg audit", [&] {
        suites::RankinOptions opt;  // X to 2^16, exponent cap 1.5, agreement to 1e5
        auto rep = suites::rankin_suite(opt, reg);
        bool agree = rep.extra.value("sieve_formula_mismatches", u64{1}) == 0;
        std::string note = agree ? "sieve==formula to 1e5" : "sieve/formula mismatch";
        return std::pair{rep.pass(), "max dyadic exponent " + fmt(rep.max_ratio) +
                                         " vs cap 1.5, " + note};
    });

    run(11, "determinism", [&] {
        sums::WeilOptions wo;
        bool ok = sums::weil_audit(wo, reg).dump() == sums::weil_audit(wo, reg).dump();
        suites::ScanOptions so;
        so.qs = {29};
        ok = ok && suites::scan_csv(so, reg) == suites::scan_csv(so, reg);
        suites::CorrelationIdentityOptions io;
        io.ps = {3, 5};
        ok = ok &&
             suites::correlation_identity_suite(io, reg).dump() ==
                 suites::correlation_identity_suite(io, reg).dump();
        return std::pair{ok, "reports and scan tables byte-identical across reruns"};
    });

    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
