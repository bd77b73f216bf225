#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "expaudit/common.hpp"
#include "expaudit/registry.hpp"

namespace ea::report {

using json = nlohmann::ordered_json;

// Per-suite audit record: max bound ratios, identity residuals, worst-case
// witnesses.  Serialization is canonical so reruns are byte-identical.
struct AuditReport {
    std::string suite;
    json params = json::object();
    u64 modulus_lo = 0, modulus_hi = 0;
    double max_ratio = 0.0;
    json worst_witness = json::object();
    std::vector<json> violations;
    json extra = json::object();
    std::string registry_hash;

    bool pass() const { return violations.empty(); }

    void note_violation(json v);
    // Keeps max_ratio/worst_witness up to date; returns true if this is a
    // new maximum.
    bool observe(double ratio, json witness);

    json to_json() const;
    std::string dump() const;
    void write(const std::string& path) const;
};

std::string config_hash(const json& params);

}  // namespace ea::report
