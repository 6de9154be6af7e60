#pragma once

#include <vector>

#include "chancesplit/rational.hpp"

namespace chancesplit {

/// Single-commodity instance: one peak per agent and the amount to divide.
struct PeakVector {
    std::vector<Rational> peaks;
    Rational supply{1};
};

/// Uniform rule by exact breakpoint scan.
///
/// When the peaks sum to at least the supply, every agent receives
/// min(peak, lambda) with lambda chosen so the shares exhaust the supply;
/// otherwise every agent receives max(peak, nu). At equality both branches
/// coincide and the peaks are returned. Throws InstanceError on an empty
/// vector, a negative peak, or a nonpositive supply.
std::vector<Rational> uniform_rule(const PeakVector& v);

/// The common bound used by uniform_rule: lambda in the excess-demand case,
/// nu in the excess-supply case.
Rational uniform_rule_bound(const PeakVector& v);

}  // namespace chancesplit
