#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chancesplit/mechanisms.hpp"
#include "chancesplit/model.hpp"

namespace chancesplit {

/// Seeded generator. Bounded draws use rejection sampling on the raw
/// mt19937_64 stream, so sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform on [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; derives independent per-sample seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Lottery drawn uniformly from the compositions of D into n parts, scaled by 1/D.
IdealLottery random_lottery(std::size_t n, std::uint64_t denominator, Rng& rng);
Profile random_profile(std::size_t n, std::uint64_t denominator, std::uint64_t seed);

/// Number of lotteries on the 1/D grid (compositions of D into n parts), saturated at `cap`.
std::uint64_t grid_size(std::size_t n, std::uint64_t denominator, std::uint64_t cap);
/// Every lottery on the 1/D grid, in lexicographic order of numerators.
std::vector<IdealLottery> grid_lotteries(std::size_t n, std::uint64_t denominator);

/// Lottery between `ideal` and `allocation`: a random share of the mass the
/// allocation moved away from the ideal is moved back, taken from coordinates
/// where the allocation exceeds the ideal and returned where it falls short.
/// Returns `ideal` when the two coincide.
IdealLottery between_sample(const IdealLottery& ideal, Row allocation, std::uint64_t seed);

/// Replacement-monotonicity preconditions: the excess-demand set is unchanged
/// and the deviator does not raise any excess-demand peak.
bool satisfies_rm_preconditions(const Profile& c, std::size_t agent, const IdealLottery& replacement);

/// Lowers the agent's excess-demand peaks by random grid fractions (each
/// column stays above 1) and spreads the freed mass over excess-supply
/// objects (each stays below 1). Returns nullopt if the agent holds no
/// excess-demand mass or verification fails. Throws PreconditionError when
/// the profile has no excess-demand object.
std::optional<IdealLottery> rm_perturbation(const Profile& c, std::size_t agent, std::uint64_t seed);

enum class FixtureId {
    Example1,
    ExampleSdc,
    ExampleNonBossy,
    ExampleGurInfeasible,
    ProfileE,
    ExceptFixture,
    PdcEnvyFixture,
    EsImpossibleFamily,
};

/// Outcome printed for a fixture: a mechanism run on the fixture profile
/// (or on `profile_override`), optionally after one agent's misreport.
/// Distances are measured against the true lotteries of the base profile.
struct ExpectedOutcome {
    MechanismId mechanism;
    std::optional<Profile> profile_override;
    std::optional<std::size_t> deviator;
    std::optional<IdealLottery> misreport;
    std::optional<Matrix> phase1;
    std::optional<RandomMatching> matching;
    std::vector<std::pair<std::size_t, std::vector<Rational>>> rows;
    std::vector<std::pair<std::size_t, std::vector<Rational>>> columns;
    std::vector<std::pair<std::size_t, Rational>> distances;
};

struct NamedValue {
    std::string name;
    Rational value;
};

struct Fixture {
    FixtureId id;
    std::string key;
    std::string description;
    Profile profile;
    std::vector<ExpectedOutcome> expected;
    std::vector<Profile> family;
    std::vector<NamedValue> values;
};

std::vector<FixtureId> all_fixtures();
std::string_view fixture_key(FixtureId id);
/// Throws std::invalid_argument on an unknown key.
FixtureId parse_fixture_id(std::string_view key);
Fixture load_fixture(FixtureId id);

}  // namespace chancesplit
