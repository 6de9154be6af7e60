#include "chancesplit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chancesplit/axioms.hpp"
#include "chancesplit/errors.hpp"
#include "chancesplit/io.hpp"
#include "chancesplit/profiles.hpp"
#include "chancesplit/repro.hpp"

namespace chancesplit::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size() || text.empty() || text[0] == '-') throw std::invalid_argument(what);
        return value;
    } catch (const std::exception&) {
        throw ParseError(what + ": expected a nonnegative integer, got '" + text + "'");
    }
}

Sequence parse_sequence(const std::string& text, const std::string& what) {
    std::vector<std::size_t> mapping;
    for (const auto& part : split(text, ',')) mapping.push_back(parse_count(part, what));
    try {
        return Sequence(std::move(mapping));
    } catch (const InstanceError& e) {
        throw ParseError(what + ": " + e.what());
    }
}

IdealLottery parse_lottery(const std::string& text) {
    std::vector<Rational> shares;
    for (const auto& part : split(text, ',')) {
        try {
            shares.push_back(Rational::parse(part));
        } catch (const std::invalid_argument& e) {
            throw ParseError("--misreport: " + std::string(e.what()));
        }
    }
    return IdealLottery(std::move(shares));
}

// "n=3,D=6,samples=500,seed=7"; omitted keys keep their defaults.
FuzzConfig parse_fuzz(const std::string& text, FuzzConfig cfg) {
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("--fuzz: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "n") {
            cfg.n = parse_count(value, "--fuzz n");
        } else if (key == "D" || key == "d") {
            cfg.denominator = parse_count(value, "--fuzz D");
        } else if (key == "samples") {
            cfg.samples = parse_count(value, "--fuzz samples");
        } else if (key == "seed") {
            cfg.seed = parse_count(value, "--fuzz seed");
        } else if (key == "budget") {
            cfg.misreport_budget = parse_count(value, "--fuzz budget");
        } else {
            throw ParseError("--fuzz: unknown key '" + key + "' (known: n, D, samples, seed, budget)");
        }
    }
    if (cfg.n == 0 || cfg.denominator == 0) throw ParseError("--fuzz: n and D must be positive");
    return cfg;
}

unsigned default_jobs() {
    if (const char* env = std::getenv("CHANCE_SPLIT_JOBS")) {
        try {
            return static_cast<unsigned>(std::max<std::uint64_t>(1, parse_count(env, "CHANCE_SPLIT_JOBS")));
        } catch (const ParseError&) {
            return 1;
        }
    }
    return 1;
}

MechanismId mechanism_id(const std::string& name, const std::string& alpha, const std::string& beta) {
    MechanismId m;
    try {
        m = MechanismId::of(parse_mechanism_kind(name));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    if (!alpha.empty()) m.alpha = parse_sequence(alpha, "--alpha");
    if (!beta.empty()) m.beta = parse_sequence(beta, "--beta");
    return m;
}

Property property_id(const std::string& name) {
    try {
        return parse_property(name);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

int verdict_exit(Outcome o) {
    switch (o) {
        case Outcome::Pass: return kPass;
        case Outcome::Fail: return kFail;
        case Outcome::Inconclusive: return kInconclusive;
    }
    return kFail;
}

void print_distances(std::ostream& out, const Profile& c, const RandomMatching& p) {
    std::size_t width = 5;
    for (const auto& name : c.labels().agents) width = std::max(width, name.size());
    const auto ds = distances(c, p);
    out << std::left;
    out.width(static_cast<std::streamsize>(width + 2));
    out << "agent" << "distance\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        out.width(static_cast<std::streamsize>(width + 2));
        out << c.labels().agents[i] << ds[i].str() << '\n';
    }
}

struct Options {
    std::string mechanism;
    std::string property;
    std::string profile_path;
    std::string alpha;
    std::string beta;
    std::string fuzz;
    std::string against;
    std::string replay;
    std::string misreport;
    std::string permutation;
    std::string fixture;
    std::string properties;
    std::int64_t agent = -1;
    std::uint64_t n = 3;
    std::uint64_t denominator = 6;
    std::uint64_t samples = 500;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t budget = 64;
    std::uint64_t count = 1;
    unsigned jobs = 1;
    bool json_output = false;
    bool literal_between = false;
};

BetweenReading reading(const Options& o) {
    return o.literal_between ? BetweenReading::Literal : BetweenReading::ByClass;
}

int cmd_run(const Options& o, std::ostream& out) {
    const Profile c = parse_profile(read_file(o.profile_path));
    const MechanismId m = mechanism_id(o.mechanism, o.alpha, o.beta);
    const RandomMatching p = run_mechanism(m, c);
    out << matching_to_json(p, c.labels()).dump(2) << "\n\n";
    print_distances(out, c, p);
    return kPass;
}

AxiomVerdict check_on_profile(const Options& o, Property property, const MechanismId& m, const Profile& c) {
    const SearchOptions search{o.denominator, o.budget, o.seed, reading(o)};
    std::optional<MechanismId> other;
    if (property == Property::WelfareEquivalent) {
        if (o.against.empty()) throw ParseError("check we: --against <mechanism> is required");
        other = mechanism_id(o.against, "", "");
    }
    if (o.agent >= 0 || !o.misreport.empty()) {
        if (o.agent < 0 || o.misreport.empty()) throw ParseError("--agent and --misreport must be given together");
        const auto i = static_cast<std::size_t>(o.agent);
        if (i >= c.size()) throw ParseError("--agent: index out of range");
        const IdealLottery dev = parse_lottery(o.misreport);
        if (dev.size() != c.size()) throw ParseError("--misreport: length does not match the profile");
        switch (property) {
            case Property::StrategyProof: return check_strategy_proofness(m, c, i, dev);
            case Property::ReplacementMonotonic: return check_replacement_monotonicity(m, c, i, dev);
            case Property::NonBossy: return check_non_bossiness(m, c, i, dev);
            case Property::InBetween: return check_in_betweenness(m, c, i, dev, reading(o));
            default: throw ParseError("--misreport applies to sp, rm, nb and ib only");
        }
    }
    if (!o.permutation.empty()) {
        if (property != Property::Anonymous) throw ParseError("--permutation applies to ano only");
        return check_anonymity(m, c, parse_sequence(o.permutation, "--permutation"));
    }
    return check_profile(property, m, c, search, other);
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
    if (!o.replay.empty()) {
        json j;
        try {
            j = json::parse(read_file(o.replay));
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("--replay: malformed JSON: ") + e.what());
        }
        const AxiomVerdict stored = verdict_from_json(j);
        if (stored.result != Outcome::Fail || !stored.witness) {
            throw ParseError("--replay: the verdict carries no failing witness");
        }
        const bool confirmed = reverify(stored);
        json report = verdict_to_json(stored);
        report["replayed"] = confirmed;
        out << report.dump(2) << '\n';
        if (!confirmed) err << "witness does not re-verify\n";
        return confirmed ? kFail : kInconclusive;
    }
    if (o.property.empty() || o.mechanism.empty()) throw ParseError("check: <property> <mechanism> are required");
    const Property property = property_id(o.property);
    const MechanismId m = mechanism_id(o.mechanism, o.alpha, o.beta);

    AxiomVerdict v;
    if (!o.fuzz.empty()) {
        FuzzConfig cfg;
        cfg.jobs = o.jobs;
        cfg.seed = o.seed;
        cfg.misreport_budget = o.budget;
        cfg.between_reading = reading(o);
        cfg = parse_fuzz(o.fuzz, cfg);
        std::optional<MechanismId> other;
        if (property == Property::WelfareEquivalent) {
            if (o.against.empty()) throw ParseError("check we: --against <mechanism> is required");
            other = mechanism_id(o.against, "", "");
        }
        v = fuzz_property(property, m, cfg, other);
    } else {
        if (o.profile_path.empty()) throw ParseError("check: give a profile file or --fuzz");
        v = check_on_profile(o, property, m, parse_profile(read_file(o.profile_path)));
    }
    out << verdict_to_json(v).dump(2) << '\n';
    return verdict_exit(v.result);
}

FuzzConfig config_from(const Options& o) {
    FuzzConfig cfg;
    cfg.n = o.n;
    cfg.denominator = o.denominator;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.misreport_budget = o.budget;
    cfg.jobs = o.jobs;
    cfg.between_reading = reading(o);
    if (!o.fuzz.empty()) cfg = parse_fuzz(o.fuzz, cfg);
    if (cfg.n == 0 || cfg.denominator == 0) throw ParseError("n and D must be positive");
    return cfg;
}

int cmd_fuzz(const Options& o, std::ostream& out) {
    const MechanismId m = mechanism_id(o.mechanism, o.alpha, o.beta);
    const FuzzConfig cfg = config_from(o);
    std::vector<Property> props(kTableProperties.begin(), kTableProperties.end());
    if (!o.properties.empty()) {
        props.clear();
        for (const auto& name : split(o.properties, ',')) props.push_back(property_id(name));
    }
    std::optional<MechanismId> other;
    if (!o.against.empty()) other = mechanism_id(o.against, "", "");
    json verdicts = json::array();
    bool failed = false;
    bool inconclusive = false;
    for (Property p : props) {
        if (p == Property::WelfareEquivalent && !other) throw ParseError("fuzz we: --against <mechanism> is required");
        const AxiomVerdict v = fuzz_property(p, m, cfg, other);
        failed = failed || v.result == Outcome::Fail;
        inconclusive = inconclusive || v.result == Outcome::Inconclusive;
        verdicts.push_back(verdict_to_json(v));
    }
    out << json{{"mechanism", mechanism_to_json(m)},
                {"config", {{"n", cfg.n}, {"D", cfg.denominator}, {"samples", cfg.samples}, {"seed", cfg.seed},
                            {"budget", cfg.misreport_budget}}},
                {"verdicts", verdicts}}
               .dump(2)
        << '\n';
    if (failed) return kFail;
    return inconclusive ? kInconclusive : kPass;
}

int cmd_repro(const Options& o, std::ostream& out) {
    FixtureId id;
    try {
        id = parse_fixture_id(o.fixture);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    const ReproReport report = reproduce(id);
    out << "fixture " << report.fixture << '\n';
    for (const auto& line : report.lines) out << "  " << line << '\n';
    out << (report.ok() ? "match\n" : "MISMATCH (" + std::to_string(report.mismatches.size()) + " fields)\n");
    return report.ok() ? kPass : kFail;
}

int cmd_gen(const Options& o, std::ostream& out) {
    if (o.n == 0 || o.denominator == 0) throw ParseError("gen: n and D must be positive");
    for (std::uint64_t k = 0; k < o.count; ++k) {
        out << serialize_profile(random_profile(o.n, o.denominator, mix_seed(o.seed, k))) << '\n';
    }
    return kPass;
}

int cmd_table1(const Options& o, std::ostream& out) {
    const FuzzConfig cfg = config_from(o);
    const Table1 table = run_table1(cfg);
    if (o.json_output) {
        json j = table1_to_json(table);
        j["config"] = {{"n", cfg.n}, {"D", cfg.denominator}, {"samples", cfg.samples}, {"seed", cfg.seed},
                       {"budget", cfg.misreport_budget}};
        out << j.dump(2) << '\n';
    } else {
        out << "n=" << cfg.n << " D=" << cfg.denominator << " samples=" << cfg.samples << " seed=" << cfg.seed
            << " budget=" << cfg.misreport_budget << "\n\n"
            << render_table1(table);
    }
    return table.matches() ? kPass : kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact mechanisms for dividing chances under ideal-lottery preferences"};
    app.require_subcommand(1);
    Options o;
    o.jobs = default_jobs();

    auto add_orders = [&](CLI::App* sub) {
        sub->add_option("--alpha", o.alpha, "agent order for phase 2, e.g. 0,1,2");
        sub->add_option("--beta", o.beta, "object order for phase 2, e.g. 0,1,2");
    };
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "base seed")->capture_default_str();
        sub->add_option("--budget", o.budget, "grid misreports per agent")->capture_default_str();
        sub->add_option("--jobs", o.jobs, "worker threads (default: CHANCE_SPLIT_JOBS or 1)");
        sub->add_flag("--literal-ib", o.literal_between, "unchanged report coordinates must keep their allocation");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "agents")->capture_default_str();
        sub->add_option("--D", o.denominator, "grid denominator")->capture_default_str();
        sub->add_option("--samples", o.samples, "profiles per property")->capture_default_str();
        sub->add_option("--fuzz", o.fuzz, "n=3,D=6,samples=500,seed=7");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run a mechanism on a profile file");
    run_cmd->add_option("mechanism", o.mechanism, "urc, sdc, pdc, equal, except, me, meu")->required();
    run_cmd->add_option("profile", o.profile_path, "profile JSON file")->required();
    add_orders(run_cmd);

    CLI::App* check_cmd = app.add_subcommand("check", "check one property on a profile, by fuzzing, or replay a witness");
    check_cmd->add_option("property", o.property, "sp, eff, rm, nb, ib, ano, ef, we");
    check_cmd->add_option("mechanism", o.mechanism, "mechanism id");
    check_cmd->add_option("profile", o.profile_path, "profile JSON file");
    check_cmd->add_option("--fuzz", o.fuzz, "n=3,D=6,samples=500,seed=7");
    check_cmd->add_option("--against", o.against, "second mechanism for we");
    check_cmd->add_option("--agent", o.agent, "deviating agent (0-based)");
    check_cmd->add_option("--misreport", o.misreport, "comma-separated lottery, e.g. 1,0,0");
    check_cmd->add_option("--permutation", o.permutation, "agent relabeling for ano, e.g. 1,0,2");
    check_cmd->add_option("--replay", o.replay, "verdict JSON whose witness is re-verified");
    check_cmd->add_option("--D", o.denominator, "grid denominator for profile checks")->capture_default_str();
    add_orders(check_cmd);
    add_budget(check_cmd);

    CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "fuzz properties of one mechanism");
    fuzz_cmd->add_option("mechanism", o.mechanism, "mechanism id")->required();
    fuzz_cmd->add_option("--properties", o.properties, "comma-separated properties (default: the seven table columns)");
    fuzz_cmd->add_option("--against", o.against, "second mechanism for we");
    add_orders(fuzz_cmd);
    add_grid(fuzz_cmd);
    add_budget(fuzz_cmd);

    CLI::App* repro_cmd = app.add_subcommand("repro", "recompute a stored fixture and diff it");
    repro_cmd->add_option("fixture", o.fixture, "fixture key")->required();

    CLI::App* gen_cmd = app.add_subcommand("gen", "generate random grid profiles");
    gen_cmd->add_option("--n", o.n, "agents")->capture_default_str();
    gen_cmd->add_option("--D", o.denominator, "grid denominator")->capture_default_str();
    gen_cmd->add_option("--seed", o.seed, "seed")->capture_default_str();
    gen_cmd->add_option("--count", o.count, "profiles to print")->capture_default_str();

    CLI::App* table_cmd = app.add_subcommand("table1", "reproduce the mechanism/property table");
    table_cmd->add_flag("--json", o.json_output, "machine-readable output");
    add_grid(table_cmd);
    add_budget(table_cmd);

    std::vector<const char*> argv{"chancesplit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(o, out);
        if (check_cmd->parsed()) return cmd_check(o, out, err);
        if (fuzz_cmd->parsed()) return cmd_fuzz(o, out);
        if (repro_cmd->parsed()) return cmd_repro(o, out);
        if (gen_cmd->parsed()) return cmd_gen(o, out);
        if (table_cmd->parsed()) return cmd_table1(o, out);
    } catch (const UnsupportedInstance& e) {
        err << "unsupported instance: " << e.what() << '\n';
        return kUnsupported;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    return kParseError;
}

}  // namespace chancesplit::cli
