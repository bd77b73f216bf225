#include "expaudit/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "expaudit/corr.hpp"
#include "expaudit/expsums.hpp"
#include "expaudit/kernels.hpp"
#include "expaudit/report.hpp"
#include "expaudit/suites.hpp"

namespace ea::cli {

namespace {

struct GlobalOptions {
    std::string out;
    std::string registry_path;
    std::string backend = "auto";
    int threads = 1;
};

void emit_text(const GlobalOptions& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw ConfigError("cannot write " + g.out);
    f << text;
    std::cout << "wrote " << g.out << "\n";
}

int emit_report(const GlobalOptions& g, const report::AuditReport& rep) {
    if (g.out.empty()) {
        std::cout << rep.dump();
    } else {
        rep.write(g.out);
        std::cout << "suite=" << rep.suite << " pass=" << (rep.pass() ? "true" : "false")
                  << " max_ratio=" << rep.max_ratio << " violations=" << rep.violations.size()
                  << " out=" << g.out << "\n";
    }
    return rep.pass() ? 0 : 1;
}

template <class T>
void override_if_set(std::vector<T>& target, const std::vector<T>& given) {
    if (!given.empty()) target = given;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"exponential-sum identity verifier and bound auditor", "expaudit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.set_config("--config", "", "optional config file; flags override");
    app.add_option("--out", g.out, "write the report/table to this path");
    app.add_option("--registry", g.registry_path, "frozen-constants registry file");
    app.add_option("--backend", g.backend, "kernel backend: auto|scalar|avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    app.add_option("--threads", g.threads, "worker count (reports are order-independent)")
        ->check(CLI::PositiveNumber);

    std::function<int(const registry::Registry&)> action;

    auto* verify = app.add_subcommand("verify", "exact identity suites");
    verify->require_subcommand(1);
    auto* audit = app.add_subcommand("audit", "bound audit suites");
    audit->require_subcommand(1);
    auto* scan = app.add_subcommand("scan", "F/O envelope table over a parameter grid");
    auto* exp = app.add_subcommand("export", "table exports");
    exp->require_subcommand(1);

    // verify chi-formula
    {
        auto* c = verify->add_subcommand("chi-formula", "character reconstruction identity");
        auto qs = std::make_shared<std::vector<u32>>();
        auto opt = std::make_shared<suites::ChiFormulaOptions>();
        c->add_option("--q", *qs, "prime moduli (repeatable)");
        c->add_option("--q-lo", opt->q_lo, "smallest prime when --q absent");
        c->add_option("--q-hi", opt->q_hi, "largest prime when --q absent");
        auto rs = std::make_shared<std::vector<double>>();
        c->add_option("--r", *rs, "R values (repeatable)");
        c->add_option("--tolerance", opt->tol, "residual tolerance");
        c->parse_complete_callback([&action, qs, rs, opt, &g] {
            action = [qs, rs, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.qs, *qs);
                override_if_set(o.rs, *rs);
                return emit_report(g, suites::chi_formula_suite(o, reg));
            };
        });
    }

    // verify decomposition
    {
        auto* c = verify->add_subcommand("decomposition", "Sigma = F - eps^{-1} O identity");
        auto qs = std::make_shared<std::vector<u32>>();
        auto opt = std::make_shared<suites::DecompositionOptions>();
        c->add_option("--q", *qs, "prime moduli (repeatable)");
        c->add_option("--r", opt->r_scale, "R");
        c->add_option("--s", opt->s_scale, "S");
        c->add_option("--t", opt->t_scale, "T");
        c->add_option("--n", opt->n_scale, "N (0 = q^{3/2}/4)");
        c->add_option("--tolerance", opt->tol, "residual tolerance");
        c->add_option("--amplifier-tolerance", opt->amplifier_tol, "amplified-Sigma tolerance");
        c->parse_complete_callback([&action, qs, opt, &g] {
            action = [qs, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.qs, *qs);
                return emit_report(g, suites::decomposition_suite(o, reg));
            };
        });
    }

    // verify pi0
    {
        auto* c = verify->add_subcommand("pi0", "Kloosterman-correlation period sums");
        auto qs = std::make_shared<std::vector<u32>>();
        auto opt = std::make_shared<suites::Pi0Options>();
        c->add_option("--q", *qs, "prime moduli (repeatable)");
        c->add_option("--param-max", opt->param_max, "parameter box upper bound");
        c->add_option("--tolerance", opt->tol, "magnitude tolerance");
        c->parse_complete_callback([&action, qs, opt, &g] {
            action = [qs, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.qs, *qs);
                return emit_report(g, suites::pi0_suite(o, reg));
            };
        });
    }

    // verify reciprocity
    {
        auto* c = verify->add_subcommand("reciprocity", "CRT reciprocity identity");
        auto qs = std::make_shared<std::vector<u32>>();
        auto opt = std::make_shared<suites::ReciprocityOptions>();
        c->add_option("--q", *qs, "prime moduli (repeatable)");
        c->add_option("--range", opt->range, "upper bound for r,s,t,n");
        c->add_option("--tolerance", opt->tol, "residual tolerance");
        c->parse_complete_callback([&action, qs, opt, &g] {
            action = [qs, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.qs, *qs);
                return emit_report(g, suites::reciprocity_suite(o, reg));
            };
        });
    }

    // verify correlation-identity
    {
        auto* c = verify->add_subcommand("correlation-identity",
                                         "closed form for (p, p^2) correlation sums");
        auto ps = std::make_shared<std::vector<u32>>();
        auto opt = std::make_shared<suites::CorrelationIdentityOptions>();
        c->add_option("--p", *ps, "primes (repeatable)");
        c->add_option("--tolerance", opt->tol, "residual tolerance");
        c->parse_complete_callback([&action, ps, opt, &g] {
            action = [ps, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.ps, *ps);
                return emit_report(g, suites::correlation_identity_suite(o, reg));
            };
        });
    }

    // verify parseval
    {
        auto* c = verify->add_subcommand("parseval", "two-route correlation equivalence");
        auto opt = std::make_shared<corr::CorrelationAuditOptions>();
        c->add_option("--lcm-max", opt->lcm_max, "lcm cap");
        c->add_option("--tolerance", opt->tol, "residual tolerance");
        c->parse_complete_callback([&action, opt, &g] {
            action = [opt, &g](const registry::Registry& reg) -> int {
                return emit_report(g, corr::parseval_audit(*opt, reg));
            };
        });
    }

    // verify factorization
    {
        auto* c = verify->add_subcommand("factorization", "Kloosterman m=1 factorization");
        auto cmax = std::make_shared<u32>(100);
        auto tol = std::make_shared<double>(1e-9);
        c->add_option("--c-max", *cmax, "modulus cap");
        c->add_option("--tolerance", *tol, "residual tolerance");
        c->parse_complete_callback([&action, cmax, tol, &g] {
            action = [cmax, tol, &g](const registry::Registry& reg) -> int {
                if (*cmax < 1) throw ConfigError("factorization: c-max must be >= 1");
                return emit_report(g, sums::factorization_audit(*cmax, *tol, reg));
            };
        });
    }

    // verify poisson
    {
        auto* c = verify->add_subcommand("poisson", "Poisson summation residuals");
        auto rs = std::make_shared<std::vector<double>>();
        auto opt = std::make_shared<suites::PoissonOptions>();
        c->add_option("--r", *rs, "dilation scales (repeatable)");
        c->add_option("--tolerance", opt->tol, "residual tolerance");
        c->parse_complete_callback([&action, rs, opt, &g] {
            action = [rs, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.rs, *rs);
                return emit_report(g, suites::poisson_suite(o, reg));
            };
        });
    }

    // audit weil
    {
        auto* c = audit->add_subcommand("weil", "Weil bound for Kloosterman sums");
        auto opt = std::make_shared<sums::WeilOptions>();
        c->add_option("--c-max", opt->c_max, "modulus cap");
        c->add_option("--tolerance", opt->tol, "slack");
        c->parse_complete_callback([&action, opt, &g] {
            action = [opt, &g](const registry::Registry& reg) -> int {
                return emit_report(g, sums::weil_audit(*opt, reg));
            };
        });
    }

    // audit gauss
    {
        auto* c = audit->add_subcommand("gauss", "normalized Gauss sum magnitudes");
        auto qmax = std::make_shared<u32>(101);
        auto tol = std::make_shared<double>(1e-10);
        c->add_option("--q-max", *qmax, "prime cap");
        c->add_option("--tolerance", *tol, "magnitude tolerance");
        c->parse_complete_callback([&action, qmax, tol, &g] {
            action = [qmax, tol, &g](const registry::Registry& reg) -> int {
                if (*qmax < 3) throw ConfigError("gauss: q-max must be >= 3");
                return emit_report(g, sums::gauss_magnitude_audit(*qmax, *tol, reg));
            };
        });
    }

    // audit realvalued
    {
        auto* c = audit->add_subcommand("realvalued", "K_c real-valuedness");
        auto opt = std::make_shared<sums::RealValuedOptions>();
        c->add_option("--c-max", opt->c_max, "modulus cap");
        c->add_option("--tolerance", opt->tol, "imaginary-part tolerance");
        c->parse_complete_callback([&action, opt, &g] {
            action = [opt, &g](const registry::Registry& reg) -> int {
                return emit_report(g, sums::real_valued_audit(*opt, reg));
            };
        });
    }

    // audit rational-phase
    {
        auto* c = audit->add_subcommand("rational-phase", "rational-phase complete sum ratios");
        auto opt = std::make_shared<corr::RationalPhaseAuditOptions>();
        c->add_option("--s-max", opt->s_max, "prime power cap");
        c->add_flag("--exclusion-suite", opt->exclusion_suite,
                    "run with one excluded class per prime");
        c->parse_complete_callback([&action, opt, &g] {
            action = [opt, &g](const registry::Registry& reg) -> int {
                opt->threads = static_cast<unsigned>(g.threads);
                return emit_report(g, corr::rational_phase_audit(*opt, reg));
            };
        });
    }

    // audit correlation
    {
        auto* c = audit->add_subcommand("correlation", "correlation-sum bound ratios");
        auto opt = std::make_shared<corr::CorrelationAuditOptions>();
        c->add_option("--lcm-max", opt->lcm_max, "lcm cap");
        c->parse_complete_callback([&action, opt, &g] {
            action = [opt, &g](const registry::Registry& reg) -> int {
                return emit_report(g, corr::correlation_bound_audit(*opt, reg));
            };
        });
    }

    // audit incomplete
    {
        auto* c = audit->add_subcommand("incomplete", "incomplete correlation sums");
        auto xs = std::make_shared<std::vector<double>>();
        auto opt = std::make_shared<suites::IncompleteOptions>();
        c->add_option("--lcm-max", opt->lcm_max, "lcm cap");
        c->add_option("--x", *xs, "window lengths X (repeatable)");
        c->add_option("--tolerance", opt->tol, "Poisson residual tolerance");
        c->parse_complete_callback([&action, xs, opt, &g] {
            action = [xs, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.xs, *xs);
                return emit_report(g, suites::incomplete_suite(o, reg));
            };
        });
    }

    // audit rankin-selberg
    {
        auto* c = audit->add_subcommand("rankin-selberg", "mean-square coefficient growth");
        auto opt = std::make_shared<suites::RankinOptions>();
        c->add_option("--x-max", opt->x_max, "dyadic range cap");
        c->add_option("--exponent-cap", opt->exponent_cap, "dyadic exponent ceiling");
        c->add_option("--agreement-max", opt->agreement_max, "sieve/formula agreement range");
        c->parse_complete_callback([&action, opt, &g] {
            action = [opt, &g](const registry::Registry& reg) -> int {
                return emit_report(g, suites::rankin_suite(*opt, reg));
            };
        });
    }

    // audit diagonal
    {
        auto* c = audit->add_subcommand("diagonal", "diagonal tuple counts");
        auto ss = std::make_shared<std::vector<u32>>();
        auto ts = std::make_shared<std::vector<u32>>();
        auto hs = std::make_shared<std::vector<u32>>();
        auto opt = std::make_shared<suites::DiagonalOptions>();
        c->add_option("--s", *ss, "S values");
        c->add_option("--t", *ts, "T values");
        c->add_option("--h-max", *hs, "H values");
        c->parse_complete_callback([&action, ss, ts, hs, opt, &g] {
            action = [ss, ts, hs, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.s_scales, *ss);
                override_if_set(o.t_scales, *ts);
                override_if_set(o.h_maxes, *hs);
                return emit_report(g, suites::diagonal_suite(o, reg));
            };
        });
    }

    // audit refit
    {
        auto* c = audit->add_subcommand("refit", "recompute frozen constants (never in CI)");
        c->parse_complete_callback([&action, &g] {
            action = [&g](const registry::Registry& reg) -> int {
                auto fresh = suites::refit(reg);
                if (g.out.empty())
                    std::cout << fresh.dump();
                else {
                    fresh.save(g.out);
                    std::cout << "wrote " << g.out << " registry_hash=" << fresh.hash()
                              << "\n";
                }
                return 0;
            };
        });
    }

    // scan
    {
        auto qs = std::make_shared<std::vector<u32>>();
        auto ns = std::make_shared<std::vector<double>>();
        auto rs = std::make_shared<std::vector<double>>();
        auto ss = std::make_shared<std::vector<double>>();
        auto ts = std::make_shared<std::vector<double>>();
        auto opt = std::make_shared<suites::ScanOptions>();
        scan->add_option("--q", *qs, "prime moduli");
        scan->add_option("--n", *ns, "N values (0 = auto)");
        scan->add_option("--r", *rs, "R values");
        scan->add_option("--s", *ss, "S values");
        scan->add_option("--t", *ts, "T values");
        scan->add_option("--tolerance", opt->tol, "decomposition tail tolerance");
        scan->parse_complete_callback([&action, qs, ns, rs, ss, ts, opt, &g] {
            action = [qs, ns, rs, ss, ts, opt, &g](const registry::Registry& reg) -> int {
                auto o = *opt;
                override_if_set(o.qs, *qs);
                override_if_set(o.ns, *ns);
                override_if_set(o.rs, *rs);
                override_if_set(o.ss, *ss);
                override_if_set(o.ts, *ts);
                emit_text(g, suites::scan_csv(o, reg));
                return 0;
            };
        });
    }

    // export fourier-table / coefficients
    {
        auto* c = exp->add_subcommand("fourier-table", "bump transform grid as CSV");
        auto xi_max = std::make_shared<double>(64.0);
        auto step = std::make_shared<double>(0.25);
        c->add_option("--xi-max", *xi_max, "grid end");
        c->add_option("--step", *step, "grid step");
        c->parse_complete_callback([&action, xi_max, step, &g] {
            action = [xi_max, step, &g](const registry::Registry& reg) -> int {
                emit_text(g, suites::export_fourier_csv(*xi_max, *step, reg));
                return 0;
            };
        });
    }
    {
        auto* c = exp->add_subcommand("coefficients", "ternary-divisor coefficients as CSV");
        auto max_n = std::make_shared<u32>(1000);
        c->add_option("--max-n", *max_n, "largest n");
        c->parse_complete_callback([&action, max_n, &g] {
            action = [max_n, &g](const registry::Registry&) -> int {
                emit_text(g, suites::export_coefficients_csv(*max_n));
                return 0;
            };
        });
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (g.backend == "scalar") kernels::set_backend(kernels::Backend::Scalar);
        else if (g.backend == "avx2") kernels::set_backend(kernels::Backend::Avx2);
        else kernels::set_backend(kernels::Backend::Auto);
        auto reg = g.registry_path.empty() ? registry::Registry::resolve_default()
                                           : registry::Registry::load_or_builtin(g.registry_path);
        if (!action) throw ConfigError("no action selected");
        return action(reg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const TruncationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ea::cli
