#pragma once

#include <map>
#include <optional>
#include <string>

#include "expaudit/common.hpp"

namespace ea::registry {

// Frozen fitted constants (envelope constants, audited ratio ceilings).
// The shipped data/frozen_constants.json mirrors the builtin table; audits
// fail only on regression past these values, never on a constant the
// bounds leave implicit.
class Registry {
public:
    static Registry builtin();
    // Load from file; falls back to builtin when path is empty/missing.
    static Registry load_or_builtin(const std::string& path);
    // Resolution order: $EXPAUDIT_REGISTRY, ./data/frozen_constants.json, builtin.
    static Registry resolve_default();

    double at(const std::string& name) const;
    void set(const std::string& name, double v) { values_[name] = v; }
    const std::map<std::string, double>& values() const { return values_; }

    std::string hash() const;  // FNV-1a over the canonical serialization
    std::string dump() const;
    void save(const std::string& path) const;

private:
    std::map<std::string, double> values_;
};

u64 fnv1a(const std::string& s);
std::string hex64(u64 v);

}  // namespace ea::registry
