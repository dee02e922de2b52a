#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sb/skew_family.hpp"

namespace sb {

enum class AssumptionStatus { pass, fail, not_checkable };

const char* to_string(AssumptionStatus s);

// One entry of the standing-hypothesis checklist, with a numeric witness.
// margin is item-specific (each detail string says what was measured) but the
// sign convention is uniform: positive means the check passed with that much
// room.  not_checkable entries carry margin 0 and a justification in detail.
struct AssumptionItem {
    int index = 0;  // 1..10
    std::string title;
    AssumptionStatus status = AssumptionStatus::fail;
    double margin = 0.0;
    std::string detail;
};

// Evaluates the whole checklist at lam, using the degree-d regular
// perturbation f = F + c (z^d, w^d) for the items that need a genuine
// polynomial endomorphism (critical curve, small Julia set).  Only d = 2 is
// implemented; c must be nonzero with a + c != 0.  Item failures are recorded
// in the returned vector rather than thrown; only malformed arguments throw.
// The seed drives the sampled-graph item and nothing else.
std::vector<AssumptionItem> check_assumptions(const SkewParams& lam, int d,
                                              Complex c, std::uint64_t seed = 1);

} // namespace sb
