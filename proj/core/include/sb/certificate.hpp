#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sb {

// One verified inequality inside a certificate.  margin is the signed distance
// to the failure threshold (positive = pass, and by how much).  rigor records
// whether the check pushed exact disk enclosures through the maps or sampled a
// finite net.
struct CertCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string rigor;  // "exact-disk" or "sampled"
    std::string detail; // first violation, or the governing quantity
};

struct BlenderCertificate {
    bool pass = false;
    std::vector<CertCheck> checks;
    // named scalars worth reporting alongside the pass/fail verdicts
    std::vector<std::pair<std::string, double>> quantities;

    const CertCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    double quantity(const std::string& name, double fallback = 0.0) const {
        for (const auto& q : quantities)
            if (q.first == name) return q.second;
        return fallback;
    }

    void finish() {
        pass = !checks.empty();
        for (const auto& c : checks) pass = pass && c.pass;
    }
};

} // namespace sb
