#include "chancesplit/uniform_rule.hpp"

#include <algorithm>
#include <functional>

#include "chancesplit/errors.hpp"

namespace chancesplit {

namespace {

void validate(const PeakVector& v) {
    if (v.peaks.empty()) throw InstanceError("uniform_rule: empty peak vector");
    if (v.supply.sign() <= 0) throw InstanceError("uniform_rule: supply must be positive");
    for (const auto& x : v.peaks) {
        if (x.sign() < 0) throw InstanceError("uniform_rule: negative peak " + x.str());
    }
}

bool excess_demand(const PeakVector& v) {
    Rational total(0);
    for (const auto& x : v.peaks) total += x;
    return total >= v.supply;
}

// Sorted so that the agents who keep their peaks come first: ascending for
// rationing from above, descending for topping up from below. The first
// breakpoint k where (supply - prefix) / (n - k) is on the far side of the
// k-th peak fixes the bound.
Rational scan(std::vector<Rational> sorted, const Rational& supply, bool rationing) {
    const std::size_t n = sorted.size();
    Rational prefix(0);
    for (std::size_t k = 0; k < n; ++k) {
        const Rational candidate = (supply - prefix) / Rational(static_cast<std::int64_t>(n - k));
        if (rationing ? candidate <= sorted[k] : candidate >= sorted[k]) return candidate;
        prefix += sorted[k];
    }
    // Unreachable when the branch was dispatched on the peak sum.
    throw PreconditionError("uniform_rule: no breakpoint found");
}

}  // namespace

Rational uniform_rule_bound(const PeakVector& v) {
    validate(v);
    std::vector<Rational> sorted = v.peaks;
    if (excess_demand(v)) {
        std::sort(sorted.begin(), sorted.end());
        return scan(std::move(sorted), v.supply, true);
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    return scan(std::move(sorted), v.supply, false);
}

std::vector<Rational> uniform_rule(const PeakVector& v) {
    const Rational bound = uniform_rule_bound(v);
    const bool rationing = excess_demand(v);
    std::vector<Rational> shares;
    shares.reserve(v.peaks.size());
    for (const auto& x : v.peaks) shares.push_back(rationing ? min(x, bound) : max(x, bound));
    return shares;
}

}  // namespace chancesplit
