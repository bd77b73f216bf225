#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "expaudit/chi_formula.hpp"

using namespace ea;
using namespace ea::charformula;
using arith::DirichletCharacter;

namespace {
const registry::Registry& reg() {
    static auto r = registry::Registry::builtin();
    return r;
}
}  // namespace

TEST_CASE("alpha sequence mass and support") {
    auto bump = weight::make_bump(reg());
    DirichletCharacter chi(13, 1);
    auto a = AlphaSequence::make(chi, 4.0, bump);
    CHECK(a.sum_abs >= 0.25);
    CHECK(a.sum_abs <= 4.0);
    CHECK(a.r_lo == 4);
    CHECK(a.alpha.size() == 5);       // r = 4..8
    CHECK(std::abs(a.alpha.front()) == 0.0);  // W(1) = 0
    CHECK(std::abs(a.alpha.back()) == 0.0);   // W(2) = 0
    CHECK_THROWS_AS(AlphaSequence::make(DirichletCharacter(13, 0), 4.0, bump),
                    DegenerateCharacterError);
}

TEST_CASE("amplifier normalization is exact") {
    DirichletCharacter chi(29, 3);
    auto amp = AmplifierPair::make(chi, 2.0, 2.0);
    auto [rb, rg] = amp.normalization_residual(chi);
    CHECK(rb < 1e-12);
    CHECK(rg < 1e-12);
    for (auto& [s, b] : amp.beta) CHECK(std::abs(b) <= 1.0 / amp.beta.size() + 1e-15);
    for (auto& [t, g] : amp.gamma) CHECK(std::abs(g) <= 1.0 / amp.gamma.size() + 1e-15);
}

TEST_CASE("chi formula reconstructs chi for q = 13, R = 4") {
    auto bump = weight::make_bump(reg());
    double budget = 1e-3 * 1e-8;
    long cutoff = bump.cutoff_for_budget(13.0 / 4.0, budget);
    for (u64 k = 1; k < 12; ++k) {
        DirichletCharacter chi(13, k);
        auto alpha = AlphaSequence::make(chi, 4.0, bump);
        for (u64 u = 1; u < 13; ++u) {
            cplx rhs = chi_via_formula(chi, u, alpha, cutoff, bump);
            CHECK(std::abs(rhs - chi(static_cast<i64>(u))) < 1e-8);
        }
    }
}

TEST_CASE("chi formula rejects u divisible by q") {
    auto bump = weight::make_bump(reg());
    DirichletCharacter chi(13, 1);
    auto alpha = AlphaSequence::make(chi, 4.0, bump);
    CHECK_THROWS_AS(chi_via_formula(chi, 13, alpha, 32, bump), SupportCollisionError);
}

TEST_CASE("h = 0 mod q twisted sums collapse to the Gauss factor, q <= 31") {
    for (u32 q : arith::primes_in(3, 31)) {
        for (u64 k = 1; k < q - 1; ++k) {
            DirichletCharacter chi(q, k);
            cplx eps = sums::gauss_eps(chi);
            double sq = std::sqrt(static_cast<double>(q));
            for (u64 u = 1; u < q; ++u) {
                cplx lhs = sums::twisted_kloosterman(chi, 0, static_cast<i64>(u)).value;
                CHECK(std::abs(lhs - sq * eps * chi(static_cast<i64>(u))) < 1e-10);
            }
        }
    }
}

TEST_CASE("sigma_direct basics") {
    auto window = weight::InertFunction::default_window(reg());
    auto ones = coeffs::CoefficientSource::constant({1.0, 0.0}, 400);
    DirichletCharacter triv(13, 0);
    // constant coefficients and trivial character: a Riemann-type sum near int V
    cplx s = sigma_direct(ones, triv, window, 40.0);
    double riemann = 0.0;
    for (long n = 1; n <= 160; ++n)
        if (n % 13 != 0) riemann += window(n / 40.0) / 40.0;
    CHECK(std::abs(s - cplx{riemann, 0.0}) < 1e-12);

    // empty support
    CHECK(std::abs(sigma_direct(ones, triv, window, 0.2)) == 0.0);
}

TEST_CASE("sigma order independence") {
    auto window = weight::InertFunction::default_window(reg());
    auto src = coeffs::CoefficientSource::ternary_divisor(200);
    DirichletCharacter chi(13, 2);
    cplx fwd = sigma_direct(src, chi, window, 40.0);
    // reverse traversal oracle
    cplx rev = 0;
    for (long n = 160; n >= 1; --n)
        rev += (window(n / 40.0) / 40.0) * src.lambda(n) * chi(n);
    CHECK(std::abs(fwd - rev) < 1e-12);
}

TEST_CASE("amplified sigma equals direct sigma, q <= 31") {
    auto window = weight::InertFunction::default_window(reg());
    auto src = coeffs::CoefficientSource::ternary_divisor(200);
    for (u32 q : {13u, 29u, 31u}) {
        for (u64 k : {1ull, 2ull}) {
            DirichletCharacter chi(q, k);
            auto amp = AmplifierPair::make(chi, 2.0, 2.0);
            cplx a = sigma_amplified(src, chi, window, 30.0, amp);
            cplx d = sigma_direct(src, chi, window, 30.0);
            CHECK(std::abs(a - d) < 1e-10);
            // conjugate character smoke test
            auto bar = chi.conjugate();
            auto amp2 = AmplifierPair::make(bar, 2.0, 2.0);
            CHECK(std::abs(sigma_amplified(src, bar, window, 30.0, amp2) -
                           sigma_direct(src, bar, window, 30.0)) < 1e-10);
        }
    }
}

TEST_CASE("single-prime amplifiers collapse algebraically") {
    // [1.4, 2.8] contains the single prime 2, so beta_2 conj(chi)(2) = 1 holds
    // term by term and the amplified sum telescopes exactly
    auto window = weight::InertFunction::default_window(reg());
    auto src = coeffs::CoefficientSource::ternary_divisor(150);
    DirichletCharacter chi(17, 4);
    auto amp = AmplifierPair::make(chi, 1.4, 1.4);
    CHECK(amp.beta.size() == 1);
    CHECK(amp.gamma.size() == 1);
    CHECK(std::abs(sigma_amplified(src, chi, window, 30.0, amp) -
                   sigma_direct(src, chi, window, 30.0)) < 1e-12);
}

TEST_CASE("decomposition at q = 29 and truncation monotonicity") {
    auto bump = weight::make_bump(reg());
    auto window = weight::InertFunction::default_window(reg());
    double n_scale = std::floor(std::pow(29.0, 1.5) / 4.0);
    auto src = coeffs::CoefficientSource::ternary_divisor(
        static_cast<u32>(window.hi() * n_scale) + 1);
    DirichletCharacter chi(29, 1);
    auto alpha = AlphaSequence::make(chi, 4.0, bump);
    auto amp = AmplifierPair::make(chi, 2.0, 2.0);
    auto rep = decompose(src, chi, window, n_scale, alpha, amp, bump, 1e-6);
    CHECK(rep.residual < 1e-6);
    CHECK(rep.amplified_residual < 1e-10);

    // zero coefficients: everything vanishes
    auto zeros = coeffs::CoefficientSource::constant({0.0, 0.0}, 200);
    auto rep0 = decompose(zeros, chi, window, 30.0, alpha, amp, bump, 1e-6);
    CHECK(std::abs(rep0.sigma) == 0.0);
    CHECK(std::abs(rep0.f_term) < 1e-15);
    CHECK(std::abs(rep0.o_term) < 1e-15);

    // doubling the cutoff never worsens the residual beyond the rounding floor
    auto tight = decompose(src, chi, window, n_scale, alpha, amp, bump, 1e-4);
    auto wide = decompose(src, chi, window, n_scale, alpha, amp, bump, 1e-8);
    CHECK(wide.h_cutoff > tight.h_cutoff);
    CHECK(wide.residual <= tight.residual + 1e-12);
}

TEST_CASE("reciprocity identity") {
    for (u32 q : {7u, 13u}) {
        double worst = 0;
        for (u32 r = 1; r <= 12; ++r)
            for (u32 s = 1; s <= 12; ++s) {
                if (std::gcd(r * s, q) != 1) continue;
                for (u32 t = 1; t <= 12; ++t)
                    for (u32 n = 1; n <= 12; ++n)
                        worst = std::max(worst, reciprocity_residual(t, n, r, s, q));
            }
        CHECK(worst < 1e-12);
    }
    // t n = 0: both sides are 1
    CHECK(reciprocity_residual(0, 5, 3, 4, 7) < 1e-15);
    CHECK_THROWS_AS(reciprocity_residual(1, 1, 7, 2, 7), NotCoprimeError);
}

TEST_CASE("pi0 chain examples") {
    DirichletCharacter chi5(5, 1);
    auto r = pi0_chain(chi5, 1, 1, 1, 1, 1, 1);
    CHECK(std::abs(std::abs(r.definitional) - 4.0) < 1e-10);
    CHECK(r.predicted_magnitude == 4.0);

    // witness where the (t1 s2 h1 - t2 s1 h2) pairing decides the answer:
    // (s1,t1,h1,s2,t2,h2) = (1,2,1,1,1,3) has |Pi0| = 1
    auto w = pi0_chain(chi5, 1, 2, 1, 1, 1, 3);
    CHECK(std::abs(std::abs(w.definitional) - 1.0) < 1e-10);
    CHECK(w.predicted_magnitude == 1.0);
    CHECK(std::abs(w.definitional - w.opened) < 1e-10);
    CHECK(std::abs(w.definitional - w.predicted) < 1e-10);

    DirichletCharacter chi7(7, 2);
    auto o = pi0_chain(chi7, 1, 1, 1, 2, 1, 1);  // t1 s2 h1 - t2 s1 h2 = 1
    CHECK(std::abs(std::abs(o.definitional) - 1.0) < 1e-8);

    CHECK_THROWS_AS(pi0_chain(chi5, 5, 1, 1, 1, 1, 1), NotCoprimeError);
}

TEST_CASE("diagonal counts by brute force cross-check") {
    auto dc = diagonal_count(2, 2, 4);
    u64 brute = 0;
    for (u32 t1 = 2; t1 <= 4; ++t1)
        for (u32 s1 = 2; s1 <= 4; ++s1)
            for (u32 h1 = 1; h1 <= 4; ++h1)
                for (u32 t2 = 2; t2 <= 4; ++t2)
                    for (u32 s2 = 2; s2 <= 4; ++s2)
                        for (u32 h2 = 1; h2 <= 4; ++h2)
                            if (t1 * s2 * h2 == t2 * s1 * h1) ++brute;
    CHECK(dc.count == brute);
    CHECK(dc.ratio == doctest::Approx(static_cast<double>(brute) / 16.0));
}

TEST_CASE("envelope report values are finite and positive") {
    CHECK(f_envelope(29, 39.0, 4.0, 2.0, 2.0) > 0.0);
    CHECK(o_envelope(29, 4.0, 2.0, 2.0) > 0.0);
}
