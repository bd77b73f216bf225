#pragma once

#include <string>
#include <vector>

#include "expaudit/registry.hpp"
#include "expaudit/report.hpp"

namespace ea::suites {

struct ChiFormulaOptions {
    std::vector<u32> qs;            // primes; empty => all primes in [q_lo, q_hi]
    u32 q_lo = 11, q_hi = 97;
    std::vector<double> rs = {4.0, 8.0};
    double tol = 1e-8;
};
report::AuditReport chi_formula_suite(const ChiFormulaOptions& opt,
                                      const registry::Registry& reg);

struct DecompositionOptions {
    std::vector<u32> qs = {29, 53};
    double r_scale = 4.0, s_scale = 2.0, t_scale = 2.0;
    double n_scale = 0.0;  // 0 => floor(q^{3/2} / 4) per q
    double tol = 1e-6;
    double amplifier_tol = 1e-10;
};
report::AuditReport decomposition_suite(const DecompositionOptions& opt,
                                        const registry::Registry& reg);

struct Pi0Options {
    std::vector<u32> qs = {5, 7, 11, 13};
    u32 param_max = 4;
    double tol = 1e-8;
};
report::AuditReport pi0_suite(const Pi0Options& opt, const registry::Registry& reg);

struct ReciprocityOptions {
    std::vector<u32> qs = {7, 13};
    u32 range = 12;
    double tol = 1e-12;
};
report::AuditReport reciprocity_suite(const ReciprocityOptions& opt,
                                      const registry::Registry& reg);

struct CorrelationIdentityOptions {
    std::vector<u32> ps = {3, 5, 7, 11, 13};
    double tol = 1e-9;
};
report::AuditReport correlation_identity_suite(const CorrelationIdentityOptions& opt,
                                          const registry::Registry& reg);

struct IncompleteOptions {
    u32 lcm_max = 100;
    std::vector<double> xs = {10.0, 100.0, 1000.0};
    double tol = 1e-8;
};
report::AuditReport incomplete_suite(const IncompleteOptions& opt,
                                     const registry::Registry& reg);

struct PoissonOptions {
    std::vector<double> rs = {4.0, 8.0, 16.0};
    double tol = 1e-9;
};
report::AuditReport poisson_suite(const PoissonOptions& opt, const registry::Registry& reg);

struct DiagonalOptions {
    std::vector<u32> s_scales = {2, 4, 8};
    std::vector<u32> t_scales = {2, 4, 8};
    std::vector<u32> h_maxes = {4, 8, 16};
};
report::AuditReport diagonal_suite(const DiagonalOptions& opt, const registry::Registry& reg);

struct RankinOptions {
    u32 x_max = 1 << 16;
    double exponent_cap = 1.5;
    u32 agreement_max = 100000;
};
report::AuditReport rankin_suite(const RankinOptions& opt, const registry::Registry& reg);

// Recompute every frozen constant from scratch (envelope fits plus the ratio
// maxima of the bound audits) and return the refreshed registry.  Values are
// rounded up at the 6th significant digit so reruns compare clean.
registry::Registry refit(const registry::Registry& base);

struct ScanOptions {
    std::vector<u32> qs = {29};
    std::vector<double> ns = {0.0};  // 0 => floor(q^{3/2}/4)
    std::vector<double> rs = {4.0};
    std::vector<double> ss = {2.0};
    std::vector<double> ts = {2.0};
    double tol = 1e-6;
};
std::string scan_csv(const ScanOptions& opt, const registry::Registry& reg);

std::string export_fourier_csv(double xi_max, double step, const registry::Registry& reg);
std::string export_coefficients_csv(u32 max_n);

double round_up_6(double v);

}  // namespace ea::suites
