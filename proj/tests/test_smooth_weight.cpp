#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expaudit/smooth_weight.hpp"

using namespace ea;
using namespace ea::weight;

namespace {
const registry::Registry& reg() {
    static auto r = registry::Registry::builtin();
    return r;
}
}  // namespace

TEST_CASE("bump support, positivity, midpoint value") {
    auto w = make_bump(reg());
    CHECK(w(1.0) == 0.0);
    CHECK(w(2.0) == 0.0);
    CHECK(w(0.99) == 0.0);
    CHECK(w(2.01) == 0.0);
    for (double x = 1.01; x < 2.0; x += 0.05) CHECK(w(x) > 0.0);
    // W(3/2) = exp(-4)/mass since (x-1)(2-x) = 1/4 there
    CHECK(w(1.5) == doctest::Approx(std::exp(-4.0) / w.mass()).epsilon(1e-14));
}

TEST_CASE("bump mass against a Simpson oracle") {
    auto w = make_bump(reg());
    // composite Simpson on a fine grid, independent of the Gauss-Legendre path
    long n = 200000;
    double h = 1.0 / n;
    double acc = 0.0;
    auto f = [](double x) {
        double t = (x - 1.0) * (2.0 - x);
        return t > 0 ? std::exp(-1.0 / t) : 0.0;
    };
    for (long i = 0; i < n; ++i) {
        double a = 1.0 + i * h;
        acc += (f(a) + 4.0 * f(a + h / 2) + f(a + h)) * h / 6.0;
    }
    CHECK(std::abs(acc - w.mass()) < 1e-12);
}

TEST_CASE("fourier at zero is one") {
    auto w = make_bump(reg());
    CHECK(std::abs(w.fourier(0.0) - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("fourier conjugate symmetry") {
    auto w = make_bump(reg());
    for (double xi : {0.3, 1.7, 5.0, 12.25}) {
        CHECK(std::abs(w.fourier(-xi) - std::conj(w.fourier(xi))) < 1e-12);
    }
}

TEST_CASE("fourier decay against the frozen A=4 envelope on a log grid") {
    auto w = make_bump(reg());
    double c4 = reg().at("bump_envelope_c4");
    for (double xi = 1.0; xi <= 1000.0; xi *= 1.6) {
        double v = std::abs(w.fourier(xi));
        CHECK(v * std::pow(1.0 + xi, 4.0) <= c4 * (1.0 + 1e-9));
    }
    // |What(40)| <= C4 * 41^{-4}
    CHECK(std::abs(w.fourier(40.0)) <= c4 * std::pow(41.0, -4.0));
}

TEST_CASE("quadrature self-consistency under panel halving") {
    auto w = make_bump(reg());
    double nrm = w.norm();
    for (double xi : {0.0, 2.5, 10.0, 33.0}) {
        auto f = [xi, nrm](double x) {
            double t = (x - 1.0) * (2.0 - x);
            double val = t > 0 ? nrm * std::exp(-1.0 / t) : 0.0;
            double ph = -kTwoPi * xi * x;
            return cplx{val * std::cos(ph), val * std::sin(ph)};
        };
        cplx coarse = integrate(f, 1.0, 2.0, 1e-13, 32);
        cplx fine = integrate(f, 1.0, 2.0, 1e-13, 64);
        CHECK(std::abs(coarse - fine) < 1e-12);
    }
}

TEST_CASE("fourier table interpolates the transform") {
    auto w = make_bump(reg());
    CHECK(std::abs(w.fourier_table(0.0) - cplx{1.0, 0.0}) < 1e-12);
    // linear interpolation on a 1/64 grid is good to ~1e-4; just sanity here
    CHECK(std::abs(w.fourier_table(3.3) - w.fourier(3.3)) < 1e-3);
    CHECK_THROWS_AS(w.fourier_table(1e6), PreconditionError);
}

TEST_CASE("tail bounds and cutoffs are monotone and honored") {
    auto w = make_bump(reg());
    double h = 24.25;
    long m = w.cutoff_for_budget(h, 1e-11);
    CHECK(w.tail_bound(static_cast<double>(m), h) <= 1e-11);
    CHECK(w.tail_bound(static_cast<double>(2 * m), h) <=
          w.tail_bound(static_cast<double>(m), h));
    CHECK_THROWS_AS(w.cutoff_for_budget(h, 0.0), TruncationError);
}

TEST_CASE("poisson residual for W(./R)") {
    auto w = make_bump(reg());
    for (double r : {4.0, 8.0, 16.0}) {
        long cutoff = w.cutoff_for_budget(1.0 / r, 1e-12 / r);
        double res = poisson_residual([&w](double x) { return w(x); }, 1.0, 2.0, r, cutoff);
        CHECK(res < 1e-9);
    }
    // f identically zero
    CHECK(poisson_residual([](double) { return 0.0; }, 1.0, 2.0, 4.0, 3) == 0.0);
    // f = W itself at period 1
    long cutoff = w.cutoff_for_budget(1.0, 1e-12);
    CHECK(poisson_residual([&w](double x) { return w(x); }, 1.0, 2.0, 1.0, cutoff) < 1e-9);
}

TEST_CASE("poisson residual shrinks as truncation grows") {
    auto w = make_bump(reg());
    // monotone decrease until the quadrature floor, then parked there
    constexpr double floor = 5e-12;
    for (double r : {4.0, 8.0, 16.0}) {
        double r1 = poisson_residual([&w](double x) { return w(x); }, 1.0, 2.0, r, 2);
        double r2 = poisson_residual([&w](double x) { return w(x); }, 1.0, 2.0, r, 8);
        double r3 = poisson_residual([&w](double x) { return w(x); }, 1.0, 2.0, r, 20);
        CHECK((r2 <= r1 + 1e-12 || (r1 < floor && r2 < floor)));
        CHECK((r3 <= r2 + 1e-12 || (r2 < floor && r3 < floor)));
    }
}

TEST_CASE("default inert window shape and certificates") {
    auto v = InertFunction::default_window(reg());
    CHECK(v(0.5) == 0.0);
    CHECK(v(4.0) == 0.0);
    CHECK(v(2.25) == doctest::Approx(1.0).epsilon(1e-12));
    auto measured = v.measure_logderiv_bounds();
    for (int j = 0; j <= 4; ++j) {
        CHECK(std::isfinite(measured[j]));
        CHECK(measured[j] <= v.logderiv_bound[j] * (1.0 + 1e-6));
    }
}

TEST_CASE("inert fourier decay against frozen envelopes") {
    auto v = InertFunction::default_window(reg());
    for (double eta = 1.0; eta <= 50.0; eta *= 1.7) {
        CHECK(std::abs(v.fourier(eta)) <= v.envelope(eta) * (1.0 + 1e-9));
    }
}

TEST_CASE("quadrature failure surfaces as QuadratureError") {
    // a pure oscillation never settles at this tolerance within the panel cap
    CHECK_THROWS_AS(integrate([](double x) { return cplx{std::cos(1e9 * x), 0.0}; }, 0.0, 1.0,
                              1e-30, 1, 4),
                    QuadratureError);
}
