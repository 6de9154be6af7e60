#pragma once

#include <string>
#include <vector>

#include "chancesplit/profiles.hpp"

namespace chancesplit {

/// Result of recomputing a fixture and diffing it field by field against its
/// stored values.
struct ReproReport {
    std::string fixture;
    std::vector<std::string> lines;       // one per compared field, "ok" or a diff
    std::vector<std::string> mismatches;  // field-level diffs only
    [[nodiscard]] bool ok() const { return mismatches.empty(); }
};

ReproReport reproduce(FixtureId id);

/// Separate uniform-rule division of every column, ignoring agent feasibility.
Matrix columnwise_uniform_rule(const Profile& c);

}  // namespace chancesplit
