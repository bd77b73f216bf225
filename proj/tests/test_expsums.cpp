#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "expaudit/expsums.hpp"

using namespace ea;
using namespace ea::sums;
using arith::DirichletCharacter;
using arith::Modulus;

TEST_CASE("kloosterman small values") {
    // S(1,1;3) = e_3(2) + e_3(4) = 2 cos(2 pi / 3) = -1
    auto s = kloosterman(1, 1, Modulus(3));
    CHECK(std::abs(s.value - cplx{-1.0, 0.0}) < 1e-14);

    // S(0,0;c) = phi(c)
    for (u32 c : {2u, 6u, 12u, 30u, 49u}) {
        auto v = kloosterman(0, 0, Modulus(c));
        CHECK(std::abs(v.value - cplx{static_cast<double>(Modulus(c).euler_phi()), 0.0}) <
              1e-11);
    }

    // S(1,1;2) = e_2(2) = 1
    CHECK(std::abs(kloosterman(1, 1, Modulus(2)).value - cplx{1.0, 0.0}) < 1e-14);

    // trivial bound
    for (i64 a = 0; a < 11; ++a)
        CHECK(std::abs(kloosterman(a, 3, Modulus(11)).value) <= 11.0 + 1e-9);
}

TEST_CASE("kloosterman symmetry S(a,b;c) = S(b,a;c), c <= 50") {
    double worst = 0;
    for (u32 c = 1; c <= 50; ++c)
        for (u32 a = 0; a < c; ++a)
            for (u32 b = a; b < c; ++b)
                worst = std::max(worst, std::abs(kloosterman(a, b, Modulus(c)).value -
                                                 kloosterman(b, a, Modulus(c)).value));
    CHECK(worst < 1e-10);
}

TEST_CASE("kloosterman table matches single evaluations") {
    for (u32 c : {7u, 12u, 25u}) {
        auto table = kloosterman_table(c);
        for (u32 m = 0; m < c; ++m) {
            double direct = kloosterman(m, 1, Modulus(c)).value.real() /
                            std::sqrt(static_cast<double>(c));
            CHECK(std::abs(table[m] - direct) < 1e-12);
        }
    }
}

TEST_CASE("CRT multiplicativity of kloosterman sums, coprime c1 c2 <= 60") {
    double worst = 0;
    for (u32 c1 = 2; c1 <= 60; ++c1) {
        for (u32 c2 = c1 + 1; c2 <= 60; ++c2) {
            if (std::gcd(c1, c2) != 1) continue;
            u64 n1 = arith::mod_inverse(c2 % c1, c1);
            u64 n2 = arith::mod_inverse(c1 % c2, c2);
            for (auto [a, b] : {std::pair<u64, u64>{1, 1}, {1, 2}, {2, 1}, {3, 5}, {0, 1},
                                {c1 - 1, 7 % c2}}) {
                cplx lhs = kloosterman(static_cast<i64>(a), static_cast<i64>(b),
                                       Modulus(static_cast<u64>(c1) * c2))
                               .value;
                cplx rhs = kloosterman(static_cast<i64>(a * n1 % c1),
                                       static_cast<i64>(b * n1 % c1), Modulus(c1))
                               .value *
                           kloosterman(static_cast<i64>(a * n2 % c2),
                                       static_cast<i64>(b * n2 % c2), Modulus(c2))
                               .value;
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("twisted kloosterman reduces to plain for trivial chi, q <= 31") {
    for (u32 q : arith::primes_in(3, 31)) {
        DirichletCharacter triv(q, 0);
        double worst = 0;
        for (u32 a = 0; a < q; ++a)
            for (u32 b = 0; b < q; ++b)
                worst = std::max(worst, std::abs(twisted_kloosterman(triv, a, b).value -
                                                 kloosterman(a, b, Modulus(q)).value));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("twisted kloosterman at (0,0) is orthogonality") {
    for (u64 k = 1; k < 12; ++k)
        CHECK(std::abs(twisted_kloosterman(DirichletCharacter(13, k), 0, 0).value) < 1e-12);
}

TEST_CASE("twisted kloosterman Weil-type size at q = 7") {
    for (u64 k = 0; k < 6; ++k) {
        DirichletCharacter chi(7, k);
        CHECK(std::abs(twisted_kloosterman(chi, 1, 1).value) / std::sqrt(7.0) <= 2.0 + 1e-12);
    }
}

TEST_CASE("twisted table identity S_chi(a,b;q) = chi(b) T(ab)") {
    for (u64 k : {1ull, 2ull, 5ull}) {
        DirichletCharacter chi(11, k);
        auto t = twisted_kloosterman_table(chi);
        for (u32 a = 0; a < 11; ++a)
            for (u32 b = 1; b < 11; ++b) {
                cplx via = chi(b) * t[a * b % 11];
                CHECK(std::abs(via - twisted_kloosterman(chi, a, b).value) < 1e-11);
            }
    }
}

TEST_CASE("gauss eps examples") {
    // quadratic character mod 5: sum chi(a) e_5(a) = sqrt(5), so eps = 1
    DirichletCharacter quad(5, 2);
    CHECK(std::abs(gauss_eps(quad) - cplx{1.0, 0.0}) < 1e-12);

    for (u32 q : arith::primes_in(3, 101)) {
        for (u64 k = 1; k < q - 1; ++k) {
            cplx eps = gauss_eps(DirichletCharacter(q, k));
            CHECK(std::abs(std::abs(eps) - 1.0) < 1e-10);
        }
    }

    CHECK_THROWS_AS(gauss_eps(DirichletCharacter(7, 0)), DegenerateCharacterError);
}

TEST_CASE("ramanujan sums at primes") {
    Modulus q7(7);
    CHECK(ramanujan(0, q7) == 6);
    CHECK(ramanujan(3, q7) == -1);
    CHECK(ramanujan(14, q7) == 6);
    CHECK_THROWS_AS(ramanujan(1, Modulus(6)), PreconditionError);

    // against the definitional sum over units
    for (u32 q : {5u, 11u, 13u}) {
        for (u32 a = 0; a < q; ++a) {
            cplx direct = 0;
            auto cis = kernels::CisTable::build(q);
            for (u32 x = 1; x < q; ++x) direct += cis.at(a * x % q);
            CHECK(std::abs(direct - cplx{static_cast<double>(ramanujan(a, Modulus(q))), 0.0}) <
                  1e-11);
        }
    }
}

TEST_CASE("factorization identity examples") {
    CHECK(kloosterman_factorization_residual(1, 1, Modulus(6), 1, +1) < 1e-10);
    CHECK(kloosterman_factorization_residual(1, 0, Modulus(17), 17, +1) < 1e-12);
    CHECK_THROWS_AS(kloosterman_factorization_residual(2, 1, Modulus(8), 2, +1),
                    NonInvertibleError);
}

TEST_CASE("real-valuedness of K_c up to 120") {
    sums::RealValuedOptions opt;
    opt.c_max = 120;
    auto rep = real_valued_audit(opt, registry::Registry::builtin());
    CHECK(rep.pass());
}

TEST_CASE("weil audit rejects bad config") {
    sums::WeilOptions opt;
    opt.c_max = 0;
    CHECK_THROWS_AS(weil_audit(opt, registry::Registry::builtin()), ConfigError);
}

TEST_CASE("weil audit small run") {
    sums::WeilOptions opt;
    opt.c_max = 60;
    auto rep = weil_audit(opt, registry::Registry::builtin());
    CHECK(rep.pass());
    CHECK(rep.extra["worst_prime_ratio"].get<double>() <= 1.0);
}
