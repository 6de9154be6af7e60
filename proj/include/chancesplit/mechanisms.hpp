#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chancesplit/model.hpp"

namespace chancesplit {

/// Order in which agents (alpha) or objects (beta) are visited by the phase-2 fill.
using Sequence = Permutation;

/// Intermediate tank/bucket state after phase 1.
///
/// w(i, a) is the amount of object a already poured into agent i's bucket.
/// tank_remaining[a] = 1 - column sum, bucket_free[i] = 1 - row sum; both
/// nonnegative, and their totals agree.
struct PartialFill {
    Matrix w;
    std::vector<Rational> tank_remaining;
    std::vector<Rational> bucket_free;

    /// Derives tank and bucket slack from `w`. Throws PreconditionError if
    /// an entry is negative or a row or column already exceeds 1.
    static PartialFill from_matrix(Matrix w);
};

enum class MechanismKind { Urc, Sdc, Pdc, EqualDivision, Except, Me, Meu };

struct MechanismId {
    MechanismKind kind = MechanismKind::Urc;
    /// Agent and object orders for phase 2; identity when unset. Except, ME
    /// and MEU use their own fixed orders and ignore these.
    std::optional<Sequence> alpha;
    std::optional<Sequence> beta;

    static MechanismId of(MechanismKind kind) { return MechanismId{kind, std::nullopt, std::nullopt}; }
    friend bool operator==(const MechanismId&, const MechanismId&) = default;
};

/// CLI identifiers: "urc", "sdc", "pdc", "equal", "except", "me", "meu".
std::string_view mechanism_name(MechanismKind kind);
/// Throws std::invalid_argument on an unknown name.
MechanismKind parse_mechanism_kind(std::string_view name);
std::string describe(const MechanismId& id);

/// Phase 1 of URC: uniform rule on every excess-demand column, peaks elsewhere.
PartialFill urc_phase1(const Profile& c);

/// Phase 2 shared by URC, SDC, PDC and Except: walk buckets in alpha order and
/// tanks in beta order, pouring min(free capacity, remaining liquid) at each step
/// until every bucket is full. Throws PreconditionError when the slack totals
/// disagree.
RandomMatching phase2_fill(PartialFill state, const Sequence& alpha, const Sequence& beta);

RandomMatching urc(const Profile& c, const Sequence& alpha, const Sequence& beta);
/// Serial dictatorship: in alpha order each agent takes min(remaining, peak) of every object.
RandomMatching sdc(const Profile& c, const Sequence& alpha, const Sequence& beta);
/// Proportional division of excess-demand objects, peaks elsewhere.
RandomMatching pdc(const Profile& c, const Sequence& alpha, const Sequence& beta);
RandomMatching equal_division(const Profile& c);

// n = 3 only; UnsupportedInstance otherwise.
RandomMatching except_mech(const Profile& c);
RandomMatching me_mech(const Profile& c);
RandomMatching meu_mech(const Profile& c);

/// The three-agent profile at which MEU departs from URC, and MEU's outcome there.
const Profile& meu_special_profile();
const RandomMatching& meu_special_outcome();

/// Dispatches on the mechanism id.
RandomMatching run_mechanism(const MechanismId& id, const Profile& c);

}  // namespace chancesplit
