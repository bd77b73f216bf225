#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "expaudit/coeffs.hpp"

using namespace ea;
using namespace ea::coeffs;

TEST_CASE("d3 examples") {
    CHECK(d3(1) == 1);
    CHECK(d3(4) == 6);
    for (u64 p : {2ull, 3ull, 5ull, 97ull}) CHECK(d3(p) == 3);
    CHECK(d3(8) == 10);
    CHECK(d3(6) == 9);
    CHECK_THROWS_AS(d3(0), PreconditionError);
}

TEST_CASE("d3 multiplicativity on coprime pairs up to 10^4") {
    u64 bad = 0;
    for (u64 m = 2; m <= 100; ++m)
        for (u64 n = m + 1; m * n <= 10000; ++n) {
            if (std::gcd(m, n) != 1) continue;
            if (d3(m * n) != d3(m) * d3(n)) ++bad;
        }
    CHECK(bad == 0);
}

TEST_CASE("sieve agrees with the factorization formula up to 10^5") {
    auto sieve = d3_sieve(100000);
    u64 bad = 0;
    for (u64 n = 1; n <= 100000; ++n)
        if (sieve[n] != d3(n)) ++bad;
    CHECK(bad == 0);
}

TEST_CASE("ternary divisor source and S(10) = 371") {
    auto src = CoefficientSource::ternary_divisor(100);
    double s10 = 0;
    for (u64 n = 1; n <= 10; ++n) {
        double v = std::abs(src.lambda(n));
        s10 += v * v;
    }
    CHECK(s10 == 371.0);
    CHECK_THROWS_AS(src.lambda(0), PreconditionError);
    CHECK_THROWS_AS(src.lambda(101), PreconditionError);
}

TEST_CASE("csv round trip") {
    auto src = CoefficientSource::ternary_divisor(25);
    std::ostringstream out;
    src.to_csv(out, 25);
    std::istringstream in(out.str());
    auto back = CoefficientSource::from_stream(in, "mem");
    CHECK(back.range() == 25);
    for (u64 n = 1; n <= 25; ++n) CHECK(back.lambda(n) == src.lambda(n));
}

TEST_CASE("csv gap and malformed rows are rejected") {
    {
        std::istringstream in("n,re,im\n1,1,0\n3,6,0\n");
        CHECK_THROWS_AS(CoefficientSource::from_stream(in, "gap"), GapError);
    }
    {
        std::istringstream in("n,re,im\n1,1,0\nBAD\n");
        CHECK_THROWS_AS(CoefficientSource::from_stream(in, "bad"), ParseError);
    }
    {
        std::istringstream in("wrong header\n");
        CHECK_THROWS_AS(CoefficientSource::from_stream(in, "hdr"), ParseError);
    }
    {
        std::istringstream in("n,re,im\n1,1,0\n1,1,0\n");
        CHECK_THROWS_AS(CoefficientSource::from_stream(in, "dup"), ParseError);
    }
}

TEST_CASE("well-formed three-row file") {
    std::istringstream in("n,re,im\n1,1,0\n2,0.5,-0.25\n3,2,0\n");
    auto src = CoefficientSource::from_stream(in, "mem");
    CHECK(src.range() == 3);
    CHECK(src.lambda(2) == cplx{0.5, -0.25});
}

TEST_CASE("rankin-selberg table values and empirical exponents") {
    auto src = CoefficientSource::ternary_divisor(1 << 12);
    RankinSelbergOptions opt;
    opt.x_max = 1 << 12;
    opt.exponent_cap = 2.5;  // generous cap; the criterion-level 1.5 run lives in acceptance
    auto rep = rankin_selberg_audit(src, opt, registry::Registry::builtin());
    CHECK(rep.pass());
    auto table = rep.extra["dyadic"];
    CHECK(table[0]["S"].get<double>() == 1.0);
    // exponents decrease monotonically across the recorded dyadic range
    double prev = 100.0;
    for (auto& row : table) {
        double e = row["exponent"].get<double>();
        CHECK(e < prev + 1e-12);
        prev = e;
    }
    CHECK_THROWS_AS(rankin_selberg_audit(src, RankinSelbergOptions{1 << 13, 1.5},
                                         registry::Registry::builtin()),
                    ConfigError);
}
