#include <array>
#include <stdexcept>

#include "chancesplit/errors.hpp"
#include "chancesplit/io.hpp"
#include "chancesplit/profiles.hpp"

namespace chancesplit {

namespace {

using nlohmann::json;

struct FixtureSource {
    FixtureId id;
    std::string_view key;
    std::string_view data;
};

// Values as printed for the worked examples. Expected outcomes use 0-based
// agent/object indices for alpha, beta and deviators.
constexpr std::array<FixtureSource, 8> kSources{{
    {FixtureId::Example1, "example1", R"json({
      "description": "Three agents, ED = {a, c}; URC with alpha = 123, beta = abc",
      "agents": ["1", "2", "3"], "objects": ["a", "b", "c"],
      "rows": [["3/5", "1/5", "1/5"], ["1/2", "2/5", "1/10"], ["1/5", "0", "4/5"]],
      "expected": [{
        "mechanism": "urc", "alpha": [0, 1, 2], "beta": [0, 1, 2],
        "phase1": [["2/5", "1/5", "1/5"], ["2/5", "2/5", "1/10"], ["1/5", "0", "7/10"]],
        "matching": [["2/5", "2/5", "1/5"], ["2/5", "1/2", "1/10"], ["1/5", "1/10", "7/10"]]
      }]
    })json"},
    {FixtureId::ExampleSdc, "example-sdc", R"json({
      "description": "Serial dictatorship on the example1 profile, alpha = 123, beta = abc",
      "agents": ["1", "2", "3"], "objects": ["a", "b", "c"],
      "rows": [["3/5", "1/5", "1/5"], ["1/2", "2/5", "1/10"], ["1/5", "0", "4/5"]],
      "expected": [{
        "mechanism": "sdc", "alpha": [0, 1, 2], "beta": [0, 1, 2],
        "matching": [["3/5", "1/5", "1/5"], ["2/5", "1/2", "1/10"], ["0", "3/10", "7/10"]]
      }]
    })json"},
    {FixtureId::ExampleNonBossy, "example-nonbossy", R"json({
      "description": "URC is not welfare non-bossy: agent 2 misreports without changing own welfare, agent 3's welfare changes",
      "agents": ["1", "2", "3"], "objects": ["a", "b", "c"],
      "rows": [["3/10", "1/2", "1/5"], ["7/10", "1/5", "1/10"], ["1/10", "2/5", "1/2"]],
      "expected": [{
        "mechanism": "urc", "alpha": [0, 1, 2], "beta": [0, 1, 2],
        "matching": [["3/10", "2/5", "3/10"], ["3/5", "1/5", "1/5"], ["1/10", "2/5", "1/2"]],
        "distances": {"1": "1/5"}
      }, {
        "mechanism": "urc", "alpha": [0, 1, 2], "beta": [0, 1, 2],
        "deviator": 1, "misreport": ["7/10", "3/10", "0"],
        "matching": [["3/10", "7/20", "7/20"], ["3/5", "3/10", "1/10"], ["1/10", "7/20", "11/20"]],
        "distances": {"1": "1/5"}
      }]
    })json"},
    {FixtureId::ExampleGurInfeasible, "gur-infeasible", R"json({
      "description": "Dividing each object by the uniform rule separately breaks agent feasibility",
      "agents": ["1", "2", "3"], "objects": ["a", "b", "c"],
      "rows": [["1/5", "3/5", "1/5"], ["2/5", "3/5", "0"], ["0", "1/5", "4/5"]],
      "values": [
        {"name": "p_3a", "value": "3/10"},
        {"name": "p_3c", "value": "4/5"},
        {"name": "p_3a+p_3c", "value": "11/10"}
      ]
    })json"},
    {FixtureId::ProfileE, "profile-e", R"json({
      "description": "MEU: welfare equivalent to URC(123, abc) at e, yet manipulable from ((2/3,0,1/3), e_2, e_3)",
      "agents": ["1", "2", "3"], "objects": ["a", "b", "c"],
      "rows": [["2/3", "1/3", "0"], ["1/3", "2/3", "0"], ["1/3", "1/3", "1/3"]],
      "expected": [{
        "mechanism": "meu",
        "matching": [["2/3", "0", "1/3"], ["0", "2/3", "1/3"], ["1/3", "1/3", "1/3"]],
        "distances": {"0": "2/3", "1": "2/3", "2": "0"}
      }, {
        "mechanism": "urc", "alpha": [0, 1, 2], "beta": [0, 1, 2],
        "matching": [["1/3", "1/3", "1/3"], ["1/3", "1/3", "1/3"], ["1/3", "1/3", "1/3"]],
        "distances": {"0": "2/3", "1": "2/3", "2": "0"}
      }, {
        "mechanism": "meu",
        "profile": [["2/3", "0", "1/3"], ["1/3", "2/3", "0"], ["1/3", "1/3", "1/3"]],
        "distances": {"0": "2/3"}
      }, {
        "mechanism": "meu",
        "profile": [["2/3", "0", "1/3"], ["1/3", "2/3", "0"], ["1/3", "1/3", "1/3"]],
        "deviator": 0, "misreport": ["2/3", "1/3", "0"],
        "distances": {"0": "0"}
      }]
    })json"},
    {FixtureId::ExceptFixture, "except-fixture", R"json({
      "description": "Except is not replacement monotonic: agent 1 reports the uniform lottery and reverses the serving order",
      "agents": ["1", "2", "3"], "objects": ["a", "b", "c"],
      "rows": [["2/5", "2/5", "1/5"], ["2/5", "2/5", "1/5"], ["2/5", "2/5", "1/5"]],
      "expected": [{
        "mechanism": "except",
        "rows": {"0": ["2/5", "2/5", "1/5"]},
        "distances": {"0": "0"}
      }, {
        "mechanism": "except",
        "deviator": 0, "misreport": ["1/3", "1/3", "1/3"],
        "rows": {"0": ["1/3", "1/3", "1/3"]}
      }]
    })json"},
    {FixtureId::PdcEnvyFixture, "pdc-envy", R"json({
      "description": "PDC is not envy free: agent 4 prefers agent 1's allocation",
      "agents": ["1", "2", "3", "4"], "objects": ["a", "b", "d", "e"],
      "rows": [["1", "0", "0", "0"], ["1", "0", "0", "0"], ["1", "0", "0", "0"], ["1/3", "1/2", "1/6", "0"]],
      "expected": [{
        "mechanism": "pdc", "alpha": [0, 1, 2, 3], "beta": [0, 1, 2, 3],
        "columns": {"0": ["3/10", "3/10", "3/10", "1/10"]}
      }]
    })json"},
    {FixtureId::EsImpossibleFamily, "es-impossible", R"json({
      "description": "No efficient mechanism can fix welfare from excess-supply ideals alone: forced column a sums to 0",
      "agents": ["1", "2", "3"], "objects": ["a", "b", "c"],
      "rows": [["0", "1/3", "2/3"], ["0", "1/3", "2/3"], ["0", "1/3", "2/3"]],
      "family": [
        [["0", "1", "0"], ["0", "0", "1"], ["0", "0", "1"]],
        [["0", "0", "1"], ["0", "1", "0"], ["0", "0", "1"]],
        [["0", "0", "1"], ["0", "0", "1"], ["0", "1", "0"]]
      ],
      "values": [{"name": "forced column a sum", "value": "0"}]
    })json"},
}};

const FixtureSource& source(FixtureId id) {
    for (const auto& s : kSources) {
        if (s.id == id) return s;
    }
    throw std::invalid_argument("unknown fixture id");
}

Profile rows_profile(const json& rows, const Labels& labels, const std::string& where) {
    return profile_from_json(json{{"rows", rows}, {"agents", labels.agents}, {"objects", labels.objects}}, where);
}

std::vector<std::pair<std::size_t, std::vector<Rational>>> indexed_rows(const json& j, const std::string& where) {
    std::vector<std::pair<std::size_t, std::vector<Rational>>> out;
    for (const auto& [key, value] : j.items()) {
        out.emplace_back(std::stoul(key), rational_row_from_json(value, where + "." + key));
    }
    return out;
}

ExpectedOutcome parse_expected(const json& j, const Labels& labels, const std::string& where) {
    ExpectedOutcome e;
    e.mechanism.kind = parse_mechanism_kind(j.at("mechanism").get<std::string>());
    if (j.contains("alpha")) e.mechanism.alpha = Sequence(j.at("alpha").get<std::vector<std::size_t>>());
    if (j.contains("beta")) e.mechanism.beta = Sequence(j.at("beta").get<std::vector<std::size_t>>());
    if (j.contains("profile")) e.profile_override = rows_profile(j.at("profile"), labels, where + ".profile");
    if (j.contains("deviator")) e.deviator = j.at("deviator").get<std::size_t>();
    if (j.contains("misreport")) e.misreport = IdealLottery(rational_row_from_json(j.at("misreport"), where + ".misreport"));
    if (j.contains("phase1")) {
        std::vector<std::vector<Rational>> rows;
        for (const auto& r : j.at("phase1")) rows.push_back(rational_row_from_json(r, where + ".phase1"));
        e.phase1 = Matrix::from_rows(rows);
    }
    if (j.contains("matching")) {
        e.matching = matching_from_json(json{{"rows", j.at("matching")}}, where + ".matching").matching;
    }
    if (j.contains("rows")) e.rows = indexed_rows(j.at("rows"), where + ".rows");
    if (j.contains("columns")) e.columns = indexed_rows(j.at("columns"), where + ".columns");
    if (j.contains("distances")) {
        for (const auto& [key, value] : j.at("distances").items()) {
            e.distances.emplace_back(std::stoul(key), rational_from_json(value, where + ".distances." + key));
        }
    }
    return e;
}

}  // namespace

std::vector<FixtureId> all_fixtures() {
    std::vector<FixtureId> ids;
    for (const auto& s : kSources) ids.push_back(s.id);
    return ids;
}

std::string_view fixture_key(FixtureId id) { return source(id).key; }

FixtureId parse_fixture_id(std::string_view key) {
    for (const auto& s : kSources) {
        if (s.key == key) return s.id;
    }
    std::string known;
    for (const auto& s : kSources) known += (known.empty() ? "" : ", ") + std::string(s.key);
    throw std::invalid_argument("unknown fixture '" + std::string(key) + "' (known: " + known + ")");
}

Fixture load_fixture(FixtureId id) {
    const FixtureSource& src = source(id);
    const json j = json::parse(src.data);
    const std::string where = "fixture " + std::string(src.key);

    Fixture f{id, std::string(src.key), j.at("description").get<std::string>(), profile_from_json(j, where), {}, {}, {}};
    const Labels& labels = f.profile.labels();
    if (j.contains("expected")) {
        std::size_t k = 0;
        for (const auto& e : j.at("expected")) {
            f.expected.push_back(parse_expected(e, labels, where + ".expected[" + std::to_string(k++) + "]"));
        }
    }
    if (j.contains("family")) {
        for (const auto& rows : j.at("family")) f.family.push_back(rows_profile(rows, labels, where + ".family"));
    }
    if (j.contains("values")) {
        for (const auto& v : j.at("values")) {
            f.values.push_back({v.at("name").get<std::string>(), rational_from_json(v.at("value"), where + ".values")});
        }
    }
    return f;
}

}  // namespace chancesplit
