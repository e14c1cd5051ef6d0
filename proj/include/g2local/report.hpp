#pragma once

// Run configuration, per-check records, and report serialization for the CLI.

#include "g2local/etype.hpp"
#include "g2local/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace g2local {

struct RunConfig {
    long long prime = 5;
    LocalCubicType etype = LocalCubicType::quad;
    std::optional<long long> D_override;
    std::optional<long long> N_override;
    long n_max = 2;
    long m_max = -1;           // -1: derive from n per the support conditions
    long k_max = 2;
    long order = 10;
    unsigned long long budget = 200'000'000ULL;
    int jobs = 1;
    std::string format = "json";
    bool corrected = false;    // enable corrected-variant provenance

    void validate() const;
};

enum class Provenance { paper_formula, corrected_variant };

struct CheckRecord {
    std::string id;
    std::string instance;
    std::string lhs;
    std::string rhs;
    bool equal = false;
    Provenance provenance = Provenance::paper_formula;
    double ms = 0.0;
};

struct Report {
    std::vector<CheckRecord> checks;
    int total() const { return static_cast<int>(checks.size()); }
    int failures() const {
        int f = 0;
        for (auto& c : checks)
            if (!c.equal) ++f;
        return f;
    }
    // nonzero iff any paper-formula check fails
    int exit_status() const {
        for (auto& c : checks)
            if (!c.equal && c.provenance == Provenance::paper_formula) return 1;
        return 0;
    }
    std::string to_json(const RunConfig& cfg) const;
    std::string to_csv() const;
};

}  // namespace g2local
