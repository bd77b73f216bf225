#include "expaudit/report.hpp"

#include <fstream>

namespace ea::report {

namespace {
constexpr std::size_t kMaxStoredViolations = 100;
}

void AuditReport::note_violation(json v) {
    if (violations.size() < kMaxStoredViolations) violations.push_back(std::move(v));
    std::size_t n = extra.value("violation_count", std::size_t{0});
    extra["violation_count"] = n + 1;
}

bool AuditReport::observe(double ratio, json witness) {
    if (ratio > max_ratio) {
        max_ratio = ratio;
        worst_witness = std::move(witness);
        return true;
    }
    return false;
}

json AuditReport::to_json() const {
    json j;
    j["suite"] = suite;
    j["tool_version"] = kVersion;
    j["config_hash"] = config_hash(params);
    j["registry_hash"] = registry_hash;
    j["params"] = params;
    j["modulus_range"] = json::array({modulus_lo, modulus_hi});
    j["max_ratio"] = max_ratio;
    j["worst_witness"] = worst_witness;
    j["violations"] = violations;
    j["extra"] = extra;
    j["pass"] = pass();
    return j;
}

std::string AuditReport::dump() const { return to_json().dump(2) + "\n"; }

void AuditReport::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write report file " + path);
    out << dump();
}

std::string config_hash(const json& params) {
    return registry::hex64(registry::fnv1a(params.dump()));
}

}  // namespace ea::report
