#include "chancesplit/repro.hpp"

#include "chancesplit/uniform_rule.hpp"

namespace chancesplit {

namespace {

class Differ {
public:
    explicit Differ(ReproReport& report) : report_(report) {}

    void value(const std::string& field, const Rational& expected, const Rational& got) {
        if (expected == got) {
            report_.lines.push_back(field + ": ok (" + got.str() + ")");
        } else {
            mismatch(field + ": expected " + expected.str() + ", got " + got.str());
        }
    }

    void row(const std::string& field, const std::vector<Rational>& expected, const std::vector<Rational>& got) {
        bool same = expected.size() == got.size();
        for (std::size_t k = 0; same && k < got.size(); ++k) same = expected[k] == got[k];
        if (same) {
            report_.lines.push_back(field + ": ok");
            return;
        }
        if (expected.size() != got.size()) {
            mismatch(field + ": expected " + std::to_string(expected.size()) + " entries, got " +
                     std::to_string(got.size()));
            return;
        }
        for (std::size_t k = 0; k < got.size(); ++k) {
            if (expected[k] != got[k]) {
                mismatch(field + "[" + std::to_string(k) + "]: expected " + expected[k].str() + ", got " + got[k].str());
            }
        }
    }

    void matrix(const std::string& field, const Matrix& expected, const Matrix& got) {
        if (expected == got) {
            report_.lines.push_back(field + ": ok");
            return;
        }
        if (expected.size() != got.size()) {
            mismatch(field + ": size " + std::to_string(got.size()) + ", expected " + std::to_string(expected.size()));
            return;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            for (std::size_t a = 0; a < got.size(); ++a) {
                if (expected.at(i, a) != got.at(i, a)) {
                    mismatch(field + "[" + std::to_string(i) + "][" + std::to_string(a) + "]: expected " +
                             expected.at(i, a).str() + ", got " + got.at(i, a).str());
                }
            }
        }
    }

    void note(std::string line) { report_.lines.push_back(std::move(line)); }

private:
    void mismatch(std::string line) {
        report_.lines.push_back(line);
        report_.mismatches.push_back(std::move(line));
    }

    ReproReport& report_;
};

Rational row_total(Row r) {
    Rational total(0);
    for (const auto& x : r) total += x;
    return total;
}

// Named scalar values stored with a fixture, recomputed from its profile.
std::optional<Rational> named_value(const Fixture& f, const std::string& name) {
    if (f.id == FixtureId::ExampleGurInfeasible) {
        const Matrix split = columnwise_uniform_rule(f.profile);
        if (name == "p_3a") return split.at(2, 0);
        if (name == "p_3c") return split.at(2, 2);
        if (name == "p_3a+p_3c") return split.at(2, 0) + split.at(2, 2);
    }
    if (f.id == FixtureId::EsImpossibleFamily && name == "forced column a sum") {
        // In z^j the deviating agent's whole lottery sits on a unanimous
        // object, which same-sidedness hands over in full; its share of a is
        // therefore forced to 1 minus that mass. A rule reading only
        // excess-supply ideals cannot tell the z^j apart, so these shares
        // make up column a at every member.
        Rational total(0);
        for (std::size_t j = 0; j < f.family.size(); ++j) {
            const Profile& z = f.family[j];
            const auto cls = classify_objects(z);
            Rational unanimous_mass(0);
            for (std::size_t b : cls.un()) unanimous_mass += z.peak(j, b);
            total += Rational(1) - unanimous_mass;
        }
        return total;
    }
    return std::nullopt;
}

}  // namespace

Matrix columnwise_uniform_rule(const Profile& c) {
    Matrix m(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) {
        const auto shares = uniform_rule(PeakVector{c.column(a), Rational(1)});
        for (std::size_t i = 0; i < c.size(); ++i) m.at(i, a) = shares[i];
    }
    return m;
}

ReproReport reproduce(FixtureId id) {
    const Fixture f = load_fixture(id);
    ReproReport report;
    report.fixture = f.key;
    Differ diff(report);

    for (std::size_t k = 0; k < f.expected.size(); ++k) {
        const ExpectedOutcome& e = f.expected[k];
        const std::string where = "expected[" + std::to_string(k) + "] " + describe(e.mechanism);
        const Profile& truth = e.profile_override ? *e.profile_override : f.profile;
        Profile reported = truth;
        if (e.deviator && e.misreport) reported = truth.with_agent(*e.deviator, *e.misreport);

        if (e.phase1) diff.matrix(where + " phase1", *e.phase1, urc_phase1(reported).w);
        const RandomMatching got = run_mechanism(e.mechanism, reported);
        if (e.matching) diff.matrix(where + " matching", e.matching->matrix(), got.matrix());
        for (const auto& [i, expected] : e.rows) {
            diff.row(where + " row " + truth.labels().agents.at(i), expected,
                     std::vector<Rational>(got.row(i).begin(), got.row(i).end()));
        }
        for (const auto& [a, expected] : e.columns) {
            diff.row(where + " column " + truth.labels().objects.at(a), expected, got.matrix().column(a));
        }
        for (const auto& [i, expected] : e.distances) {
            diff.value(where + " distance of agent " + truth.labels().agents.at(i), expected,
                       l1_distance(truth[i].shares(), got.row(i)));
        }
    }

    for (const auto& v : f.values) {
        const auto got = named_value(f, v.name);
        if (!got) {
            diff.note(v.name + ": no recomputation available");
            continue;
        }
        diff.value(v.name, v.value, *got);
    }

    if (id == FixtureId::ExampleGurInfeasible) {
        const Matrix split = columnwise_uniform_rule(f.profile);
        for (std::size_t i = 0; i < split.size(); ++i) {
            const Rational total = row_total(split.row(i));
            if (total != Rational(1)) {
                diff.note("agent " + f.profile.labels().agents[i] + " receives " + total.str() +
                          " in total: agent feasibility violated");
            }
        }
    }
    if (id == FixtureId::EsImpossibleFamily) {
        for (std::size_t j = 0; j < f.family.size(); ++j) {
            const auto es = classify_objects(f.profile).es();
            bool same_es = classify_objects(f.family[j]).es() == es;
            for (std::size_t a : es) same_es = same_es && f.family[j].column(a) == f.profile.column(a);
            diff.note("z^" + std::to_string(j + 1) + ": excess-supply objects " +
                      (same_es ? "and their ideals match" : "differ from") + " the base profile");
        }
    }
    return report;
}

}  // namespace chancesplit
