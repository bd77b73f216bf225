#include "expaudit/smooth_weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ea::weight {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kNodes[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542,
};
constexpr double kWeights[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

cplx composite_gl16(const std::function<cplx(double)>& f, double a, double b, int panels) {
    cplx acc = 0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        double half = 0.5 * h;
        for (int i = 0; i < 8; ++i) {
            double dx = half * kNodes[i];
            acc += kWeights[i] * (f(mid + dx) + f(mid - dx)) * half;
        }
    }
    return acc;
}

double bump_raw(double x) {
    double t = (x - 1.0) * (2.0 - x);
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

// Window on [1/2, 4], amplitude-normalized to peak 1 at x = 9/4.
double inert_raw(double x) {
    double t = (x - 0.5) * (4.0 - x);
    return t > 0.0 ? std::exp(16.0 / 49.0 - 1.0 / t) : 0.0;
}

}  // namespace

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
               int base_panels, int max_panels) {
    int n = std::max(1, base_panels);
    cplx prev = composite_gl16(f, a, b, n);
    while (n <= max_panels) {
        int n2 = 2 * n;
        cplx cur = composite_gl16(f, a, b, n2);
        if (std::abs(cur - prev) < abs_tol) return cur;
        prev = cur;
        n = n2;
    }
    throw QuadratureError("quadrature did not reach tolerance " + std::to_string(abs_tol));
}

BumpWeight BumpWeight::make(const registry::Registry& reg) {
    BumpWeight w;
    w.mass_ = integrate([](double x) { return cplx{bump_raw(x), 0.0}; }, 1.0, 2.0, 1e-15, 16)
                  .real();
    w.envelope_c = {reg.at("bump_envelope_c2"), reg.at("bump_envelope_c4"),
                    reg.at("bump_envelope_c8")};
    std::size_t entries = static_cast<std::size_t>(64.0 / w.table_step_) + 1;
    w.table_.resize(entries);
    for (std::size_t i = 0; i < entries; ++i)
        w.table_[i] = w.fourier(w.table_step_ * static_cast<double>(i));
    return w;
}

double BumpWeight::operator()(double x) const { return bump_raw(x) / mass_; }

cplx BumpWeight::fourier(double xi, double abs_tol) const {
    int base = std::max(8, static_cast<int>(std::ceil(std::abs(xi) / 2.0)));
    double nrm = 1.0 / mass_;
    return integrate(
        [xi, nrm](double x) {
            double phase = -kTwoPi * xi * x;
            return nrm * bump_raw(x) * cplx{std::cos(phase), std::sin(phase)};
        },
        1.0, 2.0, abs_tol, base);
}

cplx BumpWeight::fourier_table(double xi) const {
    double a = std::abs(xi);
    if (a > table_max()) throw PreconditionError("fourier_table: xi beyond tabulated range");
    double u = a / table_step_;
    std::size_t i = std::min(static_cast<std::size_t>(u), table_.size() - 2);
    double t = u - static_cast<double>(i);
    cplx v = (1.0 - t) * table_[i] + t * table_[i + 1];
    return xi < 0 ? std::conj(v) : v;
}

double BumpWeight::envelope(double xi) const {
    double best = 1.0;
    double a = std::abs(xi);
    for (std::size_t i = 0; i < kEnvelopeA.size(); ++i)
        best = std::min(best, envelope_c[i] * std::pow(1.0 + a, -kEnvelopeA[i]));
    return best;
}

double BumpWeight::tail_bound(double m, double h_scale) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kEnvelopeA.size(); ++i) {
        int a = kEnvelopeA[i];
        // sum_{h > M} C (1+h/H)^{-A} <= C * H/(A-1) * (1+M/H)^{1-A}
        double t = envelope_c[i] * h_scale / (a - 1) * std::pow(1.0 + m / h_scale, 1 - a);
        best = std::min(best, t);
    }
    return 2.0 * best;
}

long BumpWeight::cutoff_for_budget(double h_scale, double budget) const {
    if (budget <= 0.0) throw TruncationError("nonpositive tail budget");
    long best = -1;
    for (std::size_t i = 0; i < kEnvelopeA.size(); ++i) {
        int a = kEnvelopeA[i];
        double m = h_scale * (std::pow(2.0 * envelope_c[i] * h_scale / ((a - 1) * budget),
                                       1.0 / (a - 1)) -
                              1.0);
        long cand = std::max<long>(4, static_cast<long>(std::ceil(m)) + 1);
        if (best < 0 || cand < best) best = cand;
    }
    // Guard against rounding in the closed-form inversion.
    while (tail_bound(static_cast<double>(best), h_scale) > budget) ++best;
    return best;
}

BumpWeight make_bump(const registry::Registry& reg) { return BumpWeight::make(reg); }

InertFunction InertFunction::default_window(const registry::Registry& reg) {
    InertFunction v;
    v.eval_ = inert_raw;
    v.lo_ = 0.5;
    v.hi_ = 4.0;
    v.envelope_c = {reg.at("inert_vhat_c2"), reg.at("inert_vhat_c4"), reg.at("inert_vhat_c8")};
    v.logderiv_bound = {reg.at("inert_logderiv_j0"), reg.at("inert_logderiv_j1"),
                        reg.at("inert_logderiv_j2"), reg.at("inert_logderiv_j3"),
                        reg.at("inert_logderiv_j4")};
    return v;
}

cplx InertFunction::fourier(double eta, double abs_tol) const {
    int base = std::max(8, static_cast<int>(std::ceil(std::abs(eta) * (hi_ - lo_) / 2.0)));
    const auto& f = eval_;
    return integrate(
        [&f, eta](double x) {
            double phase = -kTwoPi * eta * x;
            return f(x) * cplx{std::cos(phase), std::sin(phase)};
        },
        lo_, hi_, abs_tol, base);
}

double InertFunction::envelope(double eta) const {
    double best = std::numeric_limits<double>::infinity();
    double a = std::abs(eta);
    for (std::size_t i = 0; i < kEnvelopeA.size(); ++i)
        best = std::min(best, envelope_c[i] * std::pow(1.0 + a, -kEnvelopeA[i]));
    return best;
}

double InertFunction::tail_bound(double m, double scale) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kEnvelopeA.size(); ++i) {
        int a = kEnvelopeA[i];
        double t = envelope_c[i] * scale / (a - 1) * std::pow(1.0 + m / scale, 1 - a);
        best = std::min(best, t);
    }
    return 2.0 * best;
}

long InertFunction::cutoff_for_budget(double scale, double budget) const {
    if (budget <= 0.0) throw TruncationError("nonpositive tail budget");
    long best = -1;
    for (std::size_t i = 0; i < kEnvelopeA.size(); ++i) {
        int a = kEnvelopeA[i];
        double m = scale * (std::pow(2.0 * envelope_c[i] * scale / ((a - 1) * budget),
                                     1.0 / (a - 1)) -
                            1.0);
        long cand = std::max<long>(4, static_cast<long>(std::ceil(m)) + 1);
        if (best < 0 || cand < best) best = cand;
    }
    while (tail_bound(static_cast<double>(best), scale) > budget) ++best;
    return best;
}

std::array<double, 5> InertFunction::measure_logderiv_bounds() const {
    constexpr double h = 1e-4;
    constexpr int grid = 256;
    // g_{j+1}(x) = x (g_j(x+h) - g_j(x-h)) / (2h), evaluated recursively.
    std::function<double(int, double)> g = [&](int j, double x) -> double {
        if (j == 0) return eval_(x);
        return x * (g(j - 1, x + h) - g(j - 1, x - h)) / (2.0 * h);
    };
    std::array<double, 5> out{};
    for (int i = 0; i < grid; ++i) {
        double x = lo_ + (hi_ - lo_) * (i + 0.5) / grid;
        for (int j = 0; j <= 4; ++j) out[j] = std::max(out[j], std::abs(g(j, x)));
    }
    return out;
}

double poisson_residual(const std::function<double(double)>& f, double lo, double hi,
                        double scale, long truncation, double quad_tol) {
    if (scale <= 0.0) throw PreconditionError("poisson_residual: scale must be positive");
    double lhs = 0.0;
    long n_lo = static_cast<long>(std::ceil(lo * scale));
    long n_hi = static_cast<long>(std::floor(hi * scale));
    for (long n = n_lo; n <= n_hi; ++n) lhs += f(static_cast<double>(n) / scale);
    cplx rhs = 0;
    for (long h = -truncation; h <= truncation; ++h) {
        double eta = scale * static_cast<double>(h);
        int base = std::max(8, static_cast<int>(std::ceil(std::abs(eta) * (hi - lo) / 2.0)));
        rhs += scale * integrate(
                           [&f, eta](double x) {
                               double phase = -kTwoPi * eta * x;
                               return f(x) * cplx{std::cos(phase), std::sin(phase)};
                           },
                           lo, hi, quad_tol, base);
    }
    return std::abs(cplx{lhs, 0.0} - rhs);
}

double fit_envelope(const std::function<cplx(double)>& transform, int a_power, double xi_max,
                    double step, double log_to) {
    double best = 0.0;
    for (double xi = 0.0; xi <= xi_max + 1e-12; xi += step)
        best = std::max(best, std::abs(transform(xi)) * std::pow(1.0 + xi, a_power));
    for (double xi = 1.0; xi <= log_to; xi *= 1.6)
        best = std::max(best, std::abs(transform(xi)) * std::pow(1.0 + xi, a_power));
    return best;
}

}  // namespace ea::weight
