#include "expaudit/coeffs.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "expaudit/core_arith.hpp"

namespace ea::coeffs {

u64 d3(u64 n) {
    if (n == 0) throw PreconditionError("d3 requires n >= 1");
    u64 out = 1;
    for (auto& [p, e] : arith::factorize(n))
        out *= static_cast<u64>(e + 2) * static_cast<u64>(e + 1) / 2;
    return out;
}

std::vector<u64> d3_sieve(u32 x) {
    std::vector<u64> tau(static_cast<std::size_t>(x) + 1, 0);
    for (u32 d = 1; d <= x; ++d)
        for (u64 m = d; m <= x; m += d) tau[m] += 1;
    std::vector<u64> out(static_cast<std::size_t>(x) + 1, 0);
    for (u32 d = 1; d <= x; ++d)
        for (u64 m = d; m <= x; m += d) out[m] += tau[d];
    return out;
}

CoefficientSource CoefficientSource::ternary_divisor(u32 range) {
    CoefficientSource src;
    src.kind_ = SourceKind::TernaryDivisor;
    auto sieve = d3_sieve(range);
    src.values_.resize(range);
    for (u32 n = 1; n <= range; ++n)
        src.values_[n - 1] = cplx{static_cast<double>(sieve[n]), 0.0};
    return src;
}

CoefficientSource CoefficientSource::constant(cplx value, u32 range) {
    CoefficientSource src;
    src.kind_ = SourceKind::Constant;
    src.values_.assign(range, value);
    return src;
}

CoefficientSource CoefficientSource::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open coefficient file " + path);
    return from_stream(in, path);
}

CoefficientSource CoefficientSource::from_stream(std::istream& in, const std::string& name) {
    CoefficientSource src;
    src.kind_ = SourceKind::FileBacked;
    std::string line;
    if (!std::getline(in, line) || line != "n,re,im")
        throw ParseError(name + ": expected header n,re,im");
    u64 expect = 1;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        u64 n;
        double re, im;
        try {
            if (!std::getline(row, field, ',')) throw ParseError("");
            n = std::stoull(field);
            if (!std::getline(row, field, ',')) throw ParseError("");
            re = std::stod(field);
            if (!std::getline(row, field, ',')) throw ParseError("");
            im = std::stod(field);
        } catch (const std::exception&) {
            throw ParseError(name + ":" + std::to_string(lineno) + ": malformed row");
        }
        if (n != expect) {
            if (n > expect)
                throw GapError(name + ":" + std::to_string(lineno) + ": missing n=" +
                               std::to_string(expect));
            throw ParseError(name + ":" + std::to_string(lineno) + ": n not increasing");
        }
        src.values_.emplace_back(re, im);
        ++expect;
    }
    return src;
}

cplx CoefficientSource::lambda(u64 n) const {
    if (n == 0 || n > values_.size())
        throw PreconditionError("coefficient index " + std::to_string(n) + " out of range");
    return values_[n - 1];
}

void CoefficientSource::to_csv(std::ostream& out, u64 max_n) const {
    out << "n,re,im\n";
    char buf[64];
    for (u64 n = 1; n <= std::min<u64>(max_n, values_.size()); ++n) {
        std::snprintf(buf, sizeof(buf), "%llu,%.17g,%.17g",
                      static_cast<unsigned long long>(n), values_[n - 1].real(),
                      values_[n - 1].imag());
        out << buf << '\n';
    }
}

report::AuditReport rankin_selberg_audit(const CoefficientSource& src,
                                         const RankinSelbergOptions& opt,
                                         const registry::Registry& reg) {
    if (opt.x_max > src.range()) throw ConfigError("rankin-selberg: x_max beyond source range");
    report::AuditReport rep;
    rep.suite = "rankin-selberg";
    rep.registry_hash = reg.hash();
    rep.params = {{"x_max", opt.x_max}, {"exponent_cap", opt.exponent_cap}};
    rep.modulus_lo = 1;
    rep.modulus_hi = opt.x_max;

    double running = 0.0;
    std::vector<double> dyadic;  // S(X) at X = 1, 2, 4, ...
    u64 next = 1;
    for (u64 n = 1; n <= opt.x_max; ++n) {
        double a = std::abs(src.lambda(n));
        running += a * a;
        if (n == next) {
            dyadic.push_back(running);
            next *= 2;
        }
    }
    report::json table = report::json::array();
    for (std::size_t i = 0; i + 1 < dyadic.size(); ++i) {
        double x = std::pow(2.0, static_cast<double>(i));
        double expo = std::log2(dyadic[i + 1] / dyadic[i]);
        table.push_back({{"X", x}, {"S", dyadic[i]}, {"exponent", expo}});
        if (x >= 64.0) {
            rep.observe(expo, {{"X", x}});
            if (expo >= opt.exponent_cap)
                rep.note_violation({{"X", x}, {"exponent", expo}, {"cap", opt.exponent_cap}});
        }
    }
    rep.extra["dyadic"] = table;
    return rep;
}

}  // namespace ea::coeffs
