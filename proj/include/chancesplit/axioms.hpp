#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chancesplit/mechanisms.hpp"
#include "chancesplit/model.hpp"

namespace chancesplit {

enum class Property {
    StrategyProof,
    Efficient,
    ReplacementMonotonic,
    NonBossy,
    InBetween,
    Anonymous,
    EnvyFree,
    WelfareEquivalent,
};

enum class Outcome { Pass, Fail, Inconclusive };

/// CLI identifiers: sp, eff, rm, nb, ib, ano, ef, we.
std::string_view property_name(Property p);
/// Column headers of the property table: SP, PF, RM, NB, IB, ANO, EF, WE.
std::string_view property_label(Property p);
Property parse_property(std::string_view name);
std::string_view outcome_name(Outcome o);

/// How a coordinate whose report is unchanged (c'_ia = c_ia) is constrained.
/// ByClass: by the object's class at the original profile; an excess-demand
/// share must not increase, an excess-supply share must not decrease, a
/// unanimous share must not move. Literal: both "<=" and ">=" apply, so the
/// share must not move at all.
enum class BetweenReading { ByClass, Literal };

/// Everything needed to replay a counterexample by exact recomputation.
struct Witness {
    std::optional<MechanismId> mechanism;  // unset for checks on a bare (profile, matching)
    std::optional<MechanismId> other_mechanism;  // welfare equivalence only
    Profile profile;
    std::optional<std::size_t> deviator;
    std::optional<std::size_t> affected;  // the harmed, envious or bossed-over agent
    std::optional<std::size_t> counterpart;  // the envied agent
    std::optional<IdealLottery> misreport;
    std::optional<Permutation> permutation;
    std::optional<RandomMatching> before;  // outcome at the reported profile
    std::optional<RandomMatching> after;   // outcome after the deviation, or the dominating matching
    std::vector<Rational> distances_before;
    std::vector<Rational> distances_after;
    std::optional<std::uint64_t> sample_seed;
    BetweenReading between_reading = BetweenReading::ByClass;  // in-betweenness only
    std::string source;  // "fuzz", "fixture:<key>", "profile"
};

struct AxiomVerdict {
    Property property = Property::StrategyProof;
    Outcome result = Outcome::Inconclusive;
    std::optional<Witness> witness;
    std::uint64_t checked = 0;  // instances on which the property was actually evaluated
    std::uint64_t skipped = 0;  // instances whose preconditions failed
    std::string detail;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct FuzzConfig {
    std::size_t n = 3;
    std::uint64_t denominator = 6;
    std::uint64_t samples = 500;
    std::uint64_t seed = kDefaultSeed;
    /// Upper bound on grid misreports tried per agent; the whole grid is used when smaller.
    std::uint64_t misreport_budget = 64;
    unsigned jobs = 1;
    BetweenReading between_reading = BetweenReading::ByClass;
};

// ---------------------------------------------------------------------------
// Decidable checks on a fixed (profile, matching).

/// Pass iff P is same-sided; a Fail carries the dominating matching from improve_to_same_sided.
AxiomVerdict check_efficiency(const Profile& c, const RandomMatching& p);
/// Weak form: every agent is at least as close to its own row as to any other row.
AxiomVerdict check_envy_freeness(const Profile& c, const RandomMatching& p);

/// Repeated two-agent, two-object transfers until P is same-sided. The result
/// weakly improves every agent and strictly improves at least one when P was
/// not already same-sided.
RandomMatching improve_to_same_sided(const Profile& c, const RandomMatching& p);

/// True iff q strictly lottery-dominates p for the profile.
bool strictly_dominates(const Profile& c, const RandomMatching& q, const RandomMatching& p);

struct DominanceSearch {
    bool exhausted_budget = false;  // enumeration stopped early: result is inconclusive
    std::optional<RandomMatching> dominator;
    std::uint64_t enumerated = 0;
};

/// Enumerates bistochastic matrices on the 1/D grid looking for one that
/// strictly dominates P.
DominanceSearch brute_force_dominance(const Profile& c, const RandomMatching& p, std::uint64_t denominator,
                                      std::uint64_t budget = 50'000'000);

// ---------------------------------------------------------------------------
// Single-deviation checks. Inconclusive when the deviation violates the
// property's precondition.

/// Fail iff the misreport brings the deviator strictly closer to its true ideal.
AxiomVerdict check_strategy_proofness(const MechanismId& m, const Profile& c, std::size_t agent,
                                      const IdealLottery& misreport);
AxiomVerdict check_replacement_monotonicity(const MechanismId& m, const Profile& c, std::size_t agent,
                                            const IdealLottery& replacement);
AxiomVerdict check_non_bossiness(const MechanismId& m, const Profile& c, std::size_t agent,
                                 const IdealLottery& replacement);
AxiomVerdict check_in_betweenness(const MechanismId& m, const Profile& c, std::size_t agent,
                                  const IdealLottery& replacement, BetweenReading reading = BetweenReading::ByClass);
/// Relabels agents so agent i's lottery goes to H(i) and compares welfare.
AxiomVerdict check_anonymity(const MechanismId& m, const Profile& c, const Permutation& h);
AxiomVerdict check_welfare_equivalence(const MechanismId& m1, const MechanismId& m2, const Profile& c);

// ---------------------------------------------------------------------------
// Search over deviations.

struct SearchOptions {
    std::uint64_t denominator = 6;
    std::uint64_t misreport_budget = 64;
    std::uint64_t seed = kDefaultSeed;
    BetweenReading between_reading = BetweenReading::ByClass;
};

/// Candidate misreports for one agent: the 1/D grid (whole or sampled),
/// other agents' lotteries, the agent's own allocation, unit and uniform
/// lotteries, lotteries between the ideal and the allocation, and
/// excess-demand-releasing perturbations. The truthful lottery is excluded.
std::vector<IdealLottery> candidate_misreports(const Profile& c, const RandomMatching& outcome, std::size_t agent,
                                               const SearchOptions& options);

/// Checks one property of one mechanism on one profile against every
/// generated deviation (or every agent permutation for anonymity).
AxiomVerdict check_profile(Property property, const MechanismId& m, const Profile& c, const SearchOptions& options,
                           const std::optional<MechanismId>& other = std::nullopt);

/// Samples profiles and runs check_profile on each; stops at the first
/// counterexample (the lowest sample index when running in parallel).
AxiomVerdict fuzz_property(Property property, const MechanismId& m, const FuzzConfig& cfg,
                           const std::optional<MechanismId>& other = std::nullopt);

AxiomVerdict falsify_strategy_proofness(const MechanismId& m, const FuzzConfig& cfg);

/// Recomputes a Fail witness from scratch and confirms the violation.
bool reverify(const AxiomVerdict& verdict);

// ---------------------------------------------------------------------------
// Property table.

inline constexpr std::array<Property, 7> kTableProperties{
    Property::StrategyProof, Property::Efficient,  Property::ReplacementMonotonic, Property::NonBossy,
    Property::InBetween,     Property::Anonymous, Property::EnvyFree,
};

struct TableRow {
    MechanismId mechanism;
    std::string label;
    std::array<AxiomVerdict, 7> cells;
    std::array<bool, 7> expected_pass;
};

struct Table1 {
    std::vector<TableRow> rows;
    /// Cells whose outcome differs from the expected pattern, as "SDC/ANO".
    std::vector<std::string> deviations;
    [[nodiscard]] bool matches() const { return deviations.empty(); }
};

/// Reproduces the mechanism/property table for URC, SDC, PDC and Equal-Division.
/// Known counterexample fixtures back the Fail cells when the fuzzer does not
/// find one on its own.
Table1 run_table1(const FuzzConfig& cfg);
std::string render_table1(const Table1& table);

// ---------------------------------------------------------------------------
// JSON.

nlohmann::json mechanism_to_json(const MechanismId& m);
MechanismId mechanism_from_json(const nlohmann::json& j);
nlohmann::json verdict_to_json(const AxiomVerdict& v);
AxiomVerdict verdict_from_json(const nlohmann::json& j);
nlohmann::json table1_to_json(const Table1& table);

}  // namespace chancesplit
