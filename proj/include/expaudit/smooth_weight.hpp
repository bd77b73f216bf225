#pragma once

#include <array>
#include <functional>
#include <vector>

#include "expaudit/common.hpp"
#include "expaudit/registry.hpp"

namespace ea::weight {

// Composite 16-point Gauss-Legendre with panel doubling until two successive
// refinements agree to abs_tol.  Throws QuadratureError past max_panels.
cplx integrate(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
               int base_panels = 8, int max_panels = 1 << 15);

// Smooth unit-mass bump supported on [1,2]:
//   W(x) = norm * exp(-1/((x-1)(2-x))).
class BumpWeight {
public:
    static BumpWeight make(const registry::Registry& reg);

    double operator()(double x) const;
    double mass() const { return mass_; }       // integral of the raw bump
    double norm() const { return 1.0 / mass_; }

    // What(xi) = int W(x) e(-xi x) dx by adaptive quadrature.
    cplx fourier(double xi, double abs_tol = 1e-12) const;
    // Interpolated from the tabulated grid (|xi| <= table_max()).
    cplx fourier_table(double xi) const;
    double table_max() const { return table_step_ * static_cast<double>(table_.size() - 1); }
    double table_step() const { return table_step_; }
    const std::vector<cplx>& table() const { return table_; }

    // min over fitted A of C_A (1+|xi|)^{-A}.
    double envelope(double xi) const;
    // Bound for 2 * sum_{h > M} |What(h/H)|.
    double tail_bound(double m, double h_scale) const;
    // Smallest cutoff M with tail_bound(M, H) <= budget.
    long cutoff_for_budget(double h_scale, double budget) const;

    static constexpr std::array<int, 3> kEnvelopeA = {2, 4, 8};
    std::array<double, 3> envelope_c{};

private:
    double mass_ = 1.0;
    double table_step_ = 1.0 / 64.0;
    std::vector<cplx> table_;
};

BumpWeight make_bump(const registry::Registry& reg);

// Smooth window supported on [1/2, 4] with recorded log-derivative bounds
// |(x d/dx)^j V| for j <= 4 and Fourier-decay envelopes for its transform.
class InertFunction {
public:
    static InertFunction default_window(const registry::Registry& reg);

    double operator()(double x) const { return eval_(x); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    cplx fourier(double eta, double abs_tol = 1e-12) const;
    double envelope(double eta) const;
    double tail_bound(double m, double scale) const;
    long cutoff_for_budget(double scale, double budget) const;

    // Recorded sup of |(x d/dx)^j V| on the support, j = 0..4, measured by
    // nested central differences (step 1e-4, 256-point grid).
    std::array<double, 5> measure_logderiv_bounds() const;
    std::array<double, 5> logderiv_bound{};

    static constexpr std::array<int, 3> kEnvelopeA = {2, 4, 8};
    std::array<double, 3> envelope_c{};

private:
    std::function<double(double)> eval_;
    double lo_ = 0.5, hi_ = 4.0;
};

// |sum_n f(n/scale) - sum_{|h|<=truncation} scale*fhat(scale*h)| where fhat is
// computed by quadrature over [lo, hi].
double poisson_residual(const std::function<double(double)>& f, double lo, double hi,
                        double scale, long truncation, double quad_tol = 1e-12);

// Envelope fit helper: max over a xi-grid of |transform(xi)| * (1+xi)^A.
// The linear grid ends where quadrature output still dominates the fp noise
// floor; log_to > 0 appends a geometric grid (ratio 1.6) for the low powers
// whose weight cannot amplify that noise.
double fit_envelope(const std::function<cplx(double)>& transform, int a_power, double xi_max,
                    double step, double log_to = 0.0);

}  // namespace ea::weight
