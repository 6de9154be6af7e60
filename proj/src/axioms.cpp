#include "chancesplit/axioms.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "chancesplit/errors.hpp"
#include "chancesplit/io.hpp"
#include "chancesplit/profiles.hpp"

namespace chancesplit {

using nlohmann::json;

namespace {

AxiomVerdict make_verdict(Property p, Outcome o, std::string detail) {
    AxiomVerdict v;
    v.property = p;
    v.result = o;
    v.detail = std::move(detail);
    if (o == Outcome::Inconclusive) {
        v.skipped = 1;
    } else {
        v.checked = 1;
    }
    return v;
}

Witness base_witness(const std::optional<MechanismId>& m, const Profile& c) {
    Witness w;
    w.mechanism = m;
    w.profile = c;
    w.source = "profile";
    return w;
}

std::string agent_name(const Profile& c, std::size_t i) { return c.labels().agents.at(i); }

std::vector<Rational> own_distances(const Profile& truth, const RandomMatching& p) { return distances(truth, p); }

// --- single checks against a precomputed truthful outcome -------------------

AxiomVerdict sp_against(const MechanismId& m, const Profile& c, const RandomMatching& truthful, std::size_t i,
                        const IdealLottery& misreport) {
    const RandomMatching after = run_mechanism(m, c.with_agent(i, misreport));
    const Rational d_truth = l1_distance(c[i].shares(), truthful.row(i));
    const Rational d_lie = l1_distance(c[i].shares(), after.row(i));
    if (d_lie < d_truth) {
        AxiomVerdict v = make_verdict(Property::StrategyProof, Outcome::Fail,
                                      "agent " + agent_name(c, i) + " gains by misreporting: distance " + d_truth.str() +
                                          " -> " + d_lie.str());
        Witness w = base_witness(m, c);
        w.deviator = i;
        w.affected = i;
        w.misreport = misreport;
        w.before = truthful;
        w.after = after;
        w.distances_before = own_distances(c, truthful);
        w.distances_after = own_distances(c, after);
        v.witness = std::move(w);
        return v;
    }
    return make_verdict(Property::StrategyProof, Outcome::Pass, "misreport does not help the deviator");
}

AxiomVerdict rm_against(const MechanismId& m, const Profile& c, const RandomMatching& truthful, std::size_t i,
                        const IdealLottery& replacement) {
    if (!satisfies_rm_preconditions(c, i, replacement)) {
        return make_verdict(Property::ReplacementMonotonic, Outcome::Inconclusive,
                            "replacement changes the excess-demand set or raises an excess-demand peak");
    }
    const RandomMatching after = run_mechanism(m, c.with_agent(i, replacement));
    if (l1_distance(c[i].shares(), truthful.row(i)) > l1_distance(c[i].shares(), after.row(i))) {
        return make_verdict(Property::ReplacementMonotonic, Outcome::Pass, "deviator gains; vacuous");
    }
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (j == i) continue;
        const Rational d_before = l1_distance(c[j].shares(), truthful.row(j));
        const Rational d_after = l1_distance(c[j].shares(), after.row(j));
        if (d_after > d_before) {
            AxiomVerdict v = make_verdict(Property::ReplacementMonotonic, Outcome::Fail,
                                          "agent " + agent_name(c, i) + "'s replacement hurts agent " +
                                              agent_name(c, j) + ": distance " + d_before.str() + " -> " +
                                              d_after.str());
            Witness w = base_witness(m, c);
            w.deviator = i;
            w.affected = j;
            w.misreport = replacement;
            w.before = truthful;
            w.after = after;
            w.distances_before = own_distances(c, truthful);
            w.distances_after = own_distances(c, after);
            v.witness = std::move(w);
            return v;
        }
    }
    return make_verdict(Property::ReplacementMonotonic, Outcome::Pass, "no other agent is hurt");
}

AxiomVerdict nb_against(const MechanismId& m, const Profile& c, const RandomMatching& truthful, std::size_t i,
                        const IdealLottery& replacement) {
    const auto ed = classify_objects(c).ed();
    const RandomMatching after = run_mechanism(m, c.with_agent(i, replacement));
    for (std::size_t a : ed) {
        if (after.at(i, a) != truthful.at(i, a)) {
            return make_verdict(Property::NonBossy, Outcome::Pass, "deviator's excess-demand allocation changes; vacuous");
        }
    }
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (j == i) continue;
        for (std::size_t a : ed) {
            if (after.at(j, a) != truthful.at(j, a)) {
                AxiomVerdict v = make_verdict(
                    Property::NonBossy, Outcome::Fail,
                    "agent " + agent_name(c, i) + " keeps its excess-demand allocation but changes agent " +
                        agent_name(c, j) + "'s share of object " + c.labels().objects[a] + ": " +
                        truthful.at(j, a).str() + " -> " + after.at(j, a).str());
                Witness w = base_witness(m, c);
                w.deviator = i;
                w.affected = j;
                w.misreport = replacement;
                w.before = truthful;
                w.after = after;
                w.distances_before = own_distances(c, truthful);
                w.distances_after = own_distances(c, after);
                v.witness = std::move(w);
                return v;
            }
        }
    }
    return make_verdict(Property::NonBossy, Outcome::Pass, "other agents' excess-demand allocations unchanged");
}

AxiomVerdict ib_against(const MechanismId& m, const Profile& c, const RandomMatching& truthful, std::size_t i,
                        const IdealLottery& replacement, BetweenReading reading = BetweenReading::ByClass) {
    if (!is_between(replacement.shares(), c[i].shares(), truthful.row(i))) {
        return make_verdict(Property::InBetween, Outcome::Inconclusive,
                            "replacement is not between the ideal and the allocation");
    }
    const RandomMatching after = run_mechanism(m, c.with_agent(i, replacement));
    const auto cls = classify_objects(c);
    for (std::size_t a = 0; a < c.size(); ++a) {
        bool lowered = replacement[a] <= c.peak(i, a);
        bool raised = replacement[a] >= c.peak(i, a);
        if (reading == BetweenReading::ByClass && replacement[a] == c.peak(i, a)) {
            lowered = !cls.excess_supply(a);
            raised = !cls.excess_demand(a);
        }
        const bool bad = (lowered && after.at(i, a) > truthful.at(i, a)) || (raised && after.at(i, a) < truthful.at(i, a));
        if (bad) {
            AxiomVerdict v = make_verdict(Property::InBetween, Outcome::Fail,
                                          "agent " + agent_name(c, i) + "'s share of object " + c.labels().objects[a] +
                                              " moves against the report: " + truthful.at(i, a).str() + " -> " +
                                              after.at(i, a).str());
            Witness w = base_witness(m, c);
            w.deviator = i;
            w.affected = i;
            w.misreport = replacement;
            w.before = truthful;
            w.after = after;
            w.distances_before = own_distances(c, truthful);
            w.distances_after = own_distances(c, after);
            w.between_reading = reading;
            v.witness = std::move(w);
            return v;
        }
    }
    return make_verdict(Property::InBetween, Outcome::Pass, "allocation responds monotonically");
}

Profile relabel(const Profile& c, const Permutation& h) {
    std::vector<IdealLottery> moved(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) moved[h[i]] = c[i];
    return Profile(std::move(moved), c.labels());
}

AxiomVerdict ano_against(const MechanismId& m, const Profile& c, const RandomMatching& truthful, const Permutation& h) {
    if (h.size() != c.size()) throw InstanceError("permutation size does not match the profile");
    const Profile moved = relabel(c, h);
    const RandomMatching after = run_mechanism(m, moved);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Rational d_before = l1_distance(c[i].shares(), truthful.row(i));
        const Rational d_after = l1_distance(moved[h[i]].shares(), after.row(h[i]));
        if (d_before != d_after) {
            AxiomVerdict v = make_verdict(Property::Anonymous, Outcome::Fail,
                                          "relabeling changes agent " + agent_name(c, i) + "'s distance: " +
                                              d_before.str() + " -> " + d_after.str());
            Witness w = base_witness(m, c);
            w.affected = i;
            w.permutation = h;
            w.before = truthful;
            w.after = after;
            w.distances_before = own_distances(c, truthful);
            w.distances_after = own_distances(moved, after);
            v.witness = std::move(w);
            return v;
        }
    }
    return make_verdict(Property::Anonymous, Outcome::Pass, "welfare preserved under relabeling");
}

void add_counts(AxiomVerdict& total, const AxiomVerdict& part) {
    total.checked += part.checked;
    total.skipped += part.skipped;
}

std::vector<Permutation> anonymity_permutations(std::size_t n, const SearchOptions& options) {
    std::vector<Permutation> out;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    if (n <= 5) {
        while (std::next_permutation(p.begin(), p.end())) out.emplace_back(p);
        return out;
    }
    Rng rng(mix_seed(options.seed, 0xA70));
    for (std::uint64_t k = 0; k < options.misreport_budget; ++k) {
        for (std::size_t j = n; j > 1; --j) std::swap(p[j - 1], p[rng.below(j)]);
        out.emplace_back(p);
    }
    return out;
}

bool is_fail(const AxiomVerdict& v) { return v.result == Outcome::Fail; }

std::string counts_text(const AxiomVerdict& v) {
    return std::to_string(v.checked) + " checks, " + std::to_string(v.skipped) + " skipped";
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view property_name(Property p) {
    switch (p) {
        case Property::StrategyProof: return "sp";
        case Property::Efficient: return "eff";
        case Property::ReplacementMonotonic: return "rm";
        case Property::NonBossy: return "nb";
        case Property::InBetween: return "ib";
        case Property::Anonymous: return "ano";
        case Property::EnvyFree: return "ef";
        case Property::WelfareEquivalent: return "we";
    }
    return "?";
}

std::string_view property_label(Property p) {
    switch (p) {
        case Property::StrategyProof: return "SP";
        case Property::Efficient: return "PF";
        case Property::ReplacementMonotonic: return "RM";
        case Property::NonBossy: return "NB";
        case Property::InBetween: return "IB";
        case Property::Anonymous: return "ANO";
        case Property::EnvyFree: return "EF";
        case Property::WelfareEquivalent: return "WE";
    }
    return "?";
}

Property parse_property(std::string_view name) {
    for (auto p : {Property::StrategyProof, Property::Efficient, Property::ReplacementMonotonic, Property::NonBossy,
                   Property::InBetween, Property::Anonymous, Property::EnvyFree, Property::WelfareEquivalent}) {
        if (property_name(p) == name) return p;
    }
    throw std::invalid_argument("unknown property '" + std::string(name) + "' (known: sp, eff, rm, nb, ib, ano, ef, we)");
}

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

// ---------------------------------------------------------------------------

RandomMatching improve_to_same_sided(const Profile& c, const RandomMatching& p) {
    const std::size_t n = c.size();
    if (p.size() != n) throw InstanceError("matching size does not match the profile");
    Matrix m = p.matrix();
    // Each transfer lowers the total distance by at least 2 * eps > 0.
    for (int step = 0; step < 1'000'000; ++step) {
        bool moved = false;
        for (std::size_t b0 = 0; b0 < n && !moved; ++b0) {
            for (std::size_t i = 0; i < n && !moved; ++i) {
                if (!(m.at(i, b0) < c.peak(i, b0))) continue;
                for (std::size_t j = 0; j < n && !moved; ++j) {
                    if (!(m.at(j, b0) > c.peak(j, b0))) continue;
                    std::size_t b1 = n;
                    for (std::size_t b = 0; b < n; ++b) {
                        if (m.at(i, b) > c.peak(i, b)) {
                            b1 = b;
                            break;
                        }
                    }
                    if (b1 == n) throw std::logic_error("improve_to_same_sided: row sums out of balance");
                    const Rational cap = m.at(j, b1) < c.peak(j, b1) ? c.peak(j, b1) : Rational(1);
                    const Rational eps = min(min(c.peak(i, b0) - m.at(i, b0), m.at(j, b0) - c.peak(j, b0)),
                                             min(m.at(i, b1) - c.peak(i, b1), cap - m.at(j, b1)));
                    m.at(i, b0) += eps;
                    m.at(j, b0) -= eps;
                    m.at(i, b1) -= eps;
                    m.at(j, b1) += eps;
                    moved = true;
                }
            }
        }
        if (!moved) return RandomMatching(std::move(m));
    }
    throw std::logic_error("improve_to_same_sided: did not terminate");
}

bool strictly_dominates(const Profile& c, const RandomMatching& q, const RandomMatching& p) {
    bool strict = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Rational dq = l1_distance(c[i].shares(), q.row(i));
        const Rational dp = l1_distance(c[i].shares(), p.row(i));
        if (dq > dp) return false;
        if (dq < dp) strict = true;
    }
    return strict;
}

AxiomVerdict check_efficiency(const Profile& c, const RandomMatching& p) {
    if (is_same_sided(c, p)) return make_verdict(Property::Efficient, Outcome::Pass, "matching is same-sided");
    const RandomMatching q = improve_to_same_sided(c, p);
    AxiomVerdict v = make_verdict(Property::Efficient, Outcome::Fail,
                                  "matching is not same-sided; the witness matching strictly dominates it");
    Witness w = base_witness(std::nullopt, c);
    w.before = p;
    w.after = q;
    w.distances_before = distances(c, p);
    w.distances_after = distances(c, q);
    v.witness = std::move(w);
    return v;
}

AxiomVerdict check_envy_freeness(const Profile& c, const RandomMatching& p) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Rational own = l1_distance(c[i].shares(), p.row(i));
        for (std::size_t j = 0; j < c.size(); ++j) {
            const Rational other = l1_distance(c[i].shares(), p.row(j));
            if (other < own) {
                AxiomVerdict v = make_verdict(Property::EnvyFree, Outcome::Fail,
                                              "agent " + agent_name(c, i) + " envies agent " + agent_name(c, j) +
                                                  ": distance " + own.str() + " to own allocation, " + other.str() +
                                                  " to theirs");
                Witness w = base_witness(std::nullopt, c);
                w.affected = i;
                w.counterpart = j;
                w.before = p;
                w.distances_before = distances(c, p);
                v.witness = std::move(w);
                return v;
            }
        }
    }
    return make_verdict(Property::EnvyFree, Outcome::Pass, "no agent prefers another agent's allocation");
}

DominanceSearch brute_force_dominance(const Profile& c, const RandomMatching& p, std::uint64_t denominator,
                                      std::uint64_t budget) {
    const std::size_t n = c.size();
    if (denominator == 0) throw InstanceError("brute_force_dominance: denominator must be positive");
    if (p.size() != n) throw InstanceError("matching size does not match the profile");
    DominanceSearch result;
    if (n == 0) return result;

    const auto rows = grid_lotteries(n, denominator);
    std::vector<std::vector<std::int64_t>> numerators;
    numerators.reserve(rows.size());
    const Rational scale(static_cast<std::int64_t>(denominator));
    for (const auto& r : rows) {
        std::vector<std::int64_t> nums;
        for (std::size_t a = 0; a < n; ++a) nums.push_back((r[a] * scale).numerator().get_si());
        numerators.push_back(std::move(nums));
    }
    std::map<std::vector<std::int64_t>, std::size_t> index_of;
    for (std::size_t k = 0; k < numerators.size(); ++k) index_of.emplace(numerators[k], k);

    // dist[i][k]: agent i's distance to grid row k; only rows no worse than P matter.
    std::vector<Rational> target(n);
    std::vector<std::vector<Rational>> dist(n);
    std::vector<std::vector<std::size_t>> admissible(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = l1_distance(c[i].shares(), p.row(i));
        dist[i].reserve(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            dist[i].push_back(l1_distance(c[i].shares(), rows[k].shares()));
            if (dist[i][k] <= target[i]) admissible[i].push_back(k);
        }
    }

    std::vector<std::int64_t> column(n, 0);
    std::vector<std::size_t> chosen(n);
    const auto d = static_cast<std::int64_t>(denominator);
    auto recurse = [&](auto&& self, std::size_t i, bool strict) -> bool {
        if (++result.enumerated > budget) {
            result.exhausted_budget = true;
            return true;
        }
        if (i + 1 == n) {
            std::vector<std::int64_t> last(n);
            for (std::size_t a = 0; a < n; ++a) {
                last[a] = d - column[a];
                if (last[a] < 0) return false;
            }
            const auto it = index_of.find(last);
            if (it == index_of.end()) return false;
            const std::size_t k = it->second;
            if (dist[i][k] > target[i]) return false;
            if (!strict && !(dist[i][k] < target[i])) return false;
            chosen[i] = k;
            return true;
        }
        for (std::size_t k : admissible[i]) {
            bool fits = true;
            for (std::size_t a = 0; a < n; ++a) {
                if (column[a] + numerators[k][a] > d) {
                    fits = false;
                    break;
                }
            }
            if (!fits) continue;
            for (std::size_t a = 0; a < n; ++a) column[a] += numerators[k][a];
            chosen[i] = k;
            const bool found = self(self, i + 1, strict || dist[i][k] < target[i]);
            for (std::size_t a = 0; a < n; ++a) column[a] -= numerators[k][a];
            if (found) return true;
        }
        return false;
    };
    if (recurse(recurse, 0, false) && !result.exhausted_budget) {
        Matrix q(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 0; a < n; ++a) q.at(i, a) = rows[chosen[i]][a];
        }
        result.dominator = RandomMatching(std::move(q));
    }
    return result;
}

AxiomVerdict check_strategy_proofness(const MechanismId& m, const Profile& c, std::size_t agent,
                                      const IdealLottery& misreport) {
    return sp_against(m, c, run_mechanism(m, c), agent, misreport);
}

AxiomVerdict check_replacement_monotonicity(const MechanismId& m, const Profile& c, std::size_t agent,
                                            const IdealLottery& replacement) {
    return rm_against(m, c, run_mechanism(m, c), agent, replacement);
}

AxiomVerdict check_non_bossiness(const MechanismId& m, const Profile& c, std::size_t agent,
                                 const IdealLottery& replacement) {
    return nb_against(m, c, run_mechanism(m, c), agent, replacement);
}

AxiomVerdict check_in_betweenness(const MechanismId& m, const Profile& c, std::size_t agent,
                                  const IdealLottery& replacement, BetweenReading reading) {
    return ib_against(m, c, run_mechanism(m, c), agent, replacement, reading);
}

AxiomVerdict check_anonymity(const MechanismId& m, const Profile& c, const Permutation& h) {
    return ano_against(m, c, run_mechanism(m, c), h);
}

AxiomVerdict check_welfare_equivalence(const MechanismId& m1, const MechanismId& m2, const Profile& c) {
    const RandomMatching p1 = run_mechanism(m1, c);
    const RandomMatching p2 = run_mechanism(m2, c);
    const auto d1 = distances(c, p1);
    const auto d2 = distances(c, p2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (d1[i] != d2[i]) {
            AxiomVerdict v = make_verdict(Property::WelfareEquivalent, Outcome::Fail,
                                          "agent " + agent_name(c, i) + ": distance " + d1[i].str() + " under " +
                                              describe(m1) + ", " + d2[i].str() + " under " + describe(m2));
            Witness w = base_witness(m1, c);
            w.other_mechanism = m2;
            w.affected = i;
            w.before = p1;
            w.after = p2;
            w.distances_before = d1;
            w.distances_after = d2;
            v.witness = std::move(w);
            return v;
        }
    }
    return make_verdict(Property::WelfareEquivalent, Outcome::Pass, "per-agent distances agree");
}

// ---------------------------------------------------------------------------

std::vector<IdealLottery> candidate_misreports(const Profile& c, const RandomMatching& outcome, std::size_t agent,
                                               const SearchOptions& options) {
    const std::size_t n = c.size();
    std::vector<IdealLottery> out;
    auto push = [&](IdealLottery l) {
        if (l == c[agent]) return;
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
    };

    if (grid_size(n, options.denominator, options.misreport_budget + 1) <= options.misreport_budget) {
        for (auto& l : grid_lotteries(n, options.denominator)) push(std::move(l));
    } else {
        Rng rng(mix_seed(options.seed, 1));
        for (std::uint64_t k = 0; k < options.misreport_budget; ++k) push(random_lottery(n, options.denominator, rng));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (j != agent) push(c[j]);
    }
    push(IdealLottery::from_row(outcome.row(agent)));
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<Rational> unit(n, Rational(0));
        unit[a] = Rational(1);
        push(IdealLottery(std::move(unit)));
    }
    push(IdealLottery::uniform(n));
    for (std::uint64_t k = 0; k < 8; ++k) {
        push(between_sample(c[agent], outcome.row(agent), mix_seed(options.seed, 100 + k)));
    }

    const auto cls = classify_objects(c);
    const auto ed = cls.ed();
    if (!ed.empty()) {
        for (std::uint64_t k = 0; k < 4; ++k) {
            if (auto r = rm_perturbation(c, agent, mix_seed(options.seed, 200 + k))) push(std::move(*r));
        }
    }
    // Single transfers of one grid step from an excess-demand coordinate to
    // any other coordinate.
    const Rational step(1, static_cast<std::int64_t>(options.denominator));
    for (std::size_t a : ed) {
        const Rational t = min(step, c.peak(agent, a));
        if (t.is_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a || cls.excess_demand(b)) continue;
            std::vector<Rational> shares(c[agent].shares().begin(), c[agent].shares().end());
            shares[a] -= t;
            shares[b] += t;
            push(IdealLottery(std::move(shares)));
        }
    }
    return out;
}

AxiomVerdict check_profile(Property property, const MechanismId& m, const Profile& c, const SearchOptions& options,
                           const std::optional<MechanismId>& other) {
    AxiomVerdict total;
    total.property = property;

    switch (property) {
        case Property::Efficient:
        case Property::EnvyFree: {
            const RandomMatching p = run_mechanism(m, c);
            AxiomVerdict v = property == Property::Efficient ? check_efficiency(c, p) : check_envy_freeness(c, p);
            if (v.witness) v.witness->mechanism = m;
            return v;
        }
        case Property::WelfareEquivalent:
            if (!other) throw std::invalid_argument("welfare equivalence needs a second mechanism");
            return check_welfare_equivalence(m, *other, c);
        case Property::Anonymous: {
            const RandomMatching truthful = run_mechanism(m, c);
            for (const auto& h : anonymity_permutations(c.size(), options)) {
                AxiomVerdict v = ano_against(m, c, truthful, h);
                add_counts(total, v);
                if (is_fail(v)) {
                    v.checked = total.checked;
                    v.skipped = total.skipped;
                    return v;
                }
            }
            break;
        }
        default: {
            const RandomMatching truthful = run_mechanism(m, c);
            for (std::size_t i = 0; i < c.size(); ++i) {
                SearchOptions local = options;
                local.seed = mix_seed(options.seed, 1000 + i);
                for (const auto& dev : candidate_misreports(c, truthful, i, local)) {
                    AxiomVerdict v;
                    switch (property) {
                        case Property::StrategyProof: v = sp_against(m, c, truthful, i, dev); break;
                        case Property::ReplacementMonotonic: v = rm_against(m, c, truthful, i, dev); break;
                        case Property::NonBossy: v = nb_against(m, c, truthful, i, dev); break;
                        case Property::InBetween: v = ib_against(m, c, truthful, i, dev, options.between_reading); break;
                        default: throw std::logic_error("check_profile: unhandled property");
                    }
                    add_counts(total, v);
                    if (is_fail(v)) {
                        v.checked = total.checked;
                        v.skipped = total.skipped;
                        return v;
                    }
                }
            }
            break;
        }
    }
    total.result = total.checked == 0 ? Outcome::Inconclusive : Outcome::Pass;
    total.detail = total.checked == 0 ? "no deviation met the preconditions"
                                      : "no counterexample on this profile (" + counts_text(total) + ")";
    return total;
}

AxiomVerdict fuzz_property(Property property, const MechanismId& m, const FuzzConfig& cfg,
                           const std::optional<MechanismId>& other) {
    if (cfg.n == 0) throw InstanceError("fuzz: n must be positive");
    if (cfg.denominator == 0) throw InstanceError("fuzz: denominator must be positive");

    struct Slot {
        std::optional<AxiomVerdict> verdict;
        std::uint64_t seed = 0;
    };
    std::vector<Slot> slots(cfg.samples);
    std::atomic<std::uint64_t> first_fail{cfg.samples};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&](std::uint64_t start, std::uint64_t stride) {
        try {
            for (std::uint64_t k = start; k < cfg.samples; k += stride) {
                if (k > first_fail.load()) return;
                const std::uint64_t seed = mix_seed(cfg.seed, k);
                const Profile c = random_profile(cfg.n, cfg.denominator, seed);
                AxiomVerdict v = check_profile(property, m, c,
                                               {cfg.denominator, cfg.misreport_budget, seed, cfg.between_reading}, other);
                if (is_fail(v)) {
                    std::uint64_t current = first_fail.load();
                    while (k < current && !first_fail.compare_exchange_weak(current, k)) {
                    }
                }
                slots[k].seed = seed;
                slots[k].verdict = std::move(v);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            first_fail.store(0);
        }
    };

    const unsigned jobs = std::max(1U, cfg.jobs);
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w, jobs);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    // Aggregate in sample order so the result does not depend on scheduling.
    AxiomVerdict total;
    total.property = property;
    for (std::uint64_t k = 0; k < cfg.samples; ++k) {
        const AxiomVerdict& v = *slots[k].verdict;
        add_counts(total, v);
        if (is_fail(v)) {
            AxiomVerdict out = v;
            out.checked = total.checked;
            out.skipped = total.skipped;
            out.witness->sample_seed = slots[k].seed;
            out.witness->source = "fuzz";
            out.detail = "sample " + std::to_string(k) + ": " + v.detail;
            return out;
        }
    }
    const std::string scope = std::to_string(cfg.samples) + " profiles (n=" + std::to_string(cfg.n) +
                              ", D=" + std::to_string(cfg.denominator) + ", seed=" + std::to_string(cfg.seed) + ")";
    if (total.checked == 0) {
        total.result = Outcome::Inconclusive;
        total.detail = "nothing checked over " + scope;
    } else {
        total.result = Outcome::Pass;
        const bool decidable = property == Property::Efficient || property == Property::EnvyFree ||
                               property == Property::WelfareEquivalent;
        total.detail = (decidable ? "holds on all " : "no counterexample within budget over ") + scope + ": " +
                       counts_text(total);
    }
    return total;
}

AxiomVerdict falsify_strategy_proofness(const MechanismId& m, const FuzzConfig& cfg) {
    return fuzz_property(Property::StrategyProof, m, cfg);
}

bool reverify(const AxiomVerdict& verdict) {
    if (verdict.result != Outcome::Fail) return false;
    if (!verdict.witness) return false;
    const Witness& w = *verdict.witness;
    const Profile& c = w.profile;
    try {
        // Outcome the witness was computed against, rebuilt from scratch when a mechanism is named.
        std::optional<RandomMatching> base;
        if (w.mechanism) base = run_mechanism(*w.mechanism, c);
        if (base && w.before && *base != *w.before) return false;
        if (w.before && !w.distances_before.empty() && distances(c, *w.before) != w.distances_before) return false;

        auto deviation_check = [&](auto&& check) -> bool {
            if (!w.mechanism || !w.deviator || !w.misreport) return false;
            const AxiomVerdict again = check(*w.mechanism, c, *w.deviator, *w.misreport);
            if (!is_fail(again)) return false;
            return !w.after || *again.witness->after == *w.after;
        };

        switch (verdict.property) {
            case Property::StrategyProof: return deviation_check(check_strategy_proofness);
            case Property::ReplacementMonotonic: return deviation_check(check_replacement_monotonicity);
            case Property::NonBossy: return deviation_check(check_non_bossiness);
            case Property::InBetween:
                return deviation_check([&](const MechanismId& mm, const Profile& cc, std::size_t i, const IdealLottery& l) {
                    return check_in_betweenness(mm, cc, i, l, w.between_reading);
                });
            case Property::Anonymous: {
                if (!w.mechanism || !w.permutation) return false;
                const AxiomVerdict again = check_anonymity(*w.mechanism, c, *w.permutation);
                return is_fail(again) && (!w.after || *again.witness->after == *w.after);
            }
            case Property::Efficient: {
                const RandomMatching p = base ? *base : (w.before ? *w.before : throw PreconditionError("no matching"));
                if (is_same_sided(c, p)) return false;
                return w.after && validate_matching(w.after->matrix()) && strictly_dominates(c, *w.after, p);
            }
            case Property::EnvyFree: {
                const RandomMatching p = base ? *base : (w.before ? *w.before : throw PreconditionError("no matching"));
                if (!w.affected || !w.counterpart) return false;
                const std::size_t i = *w.affected;
                return l1_distance(c[i].shares(), p.row(*w.counterpart)) < l1_distance(c[i].shares(), p.row(i));
            }
            case Property::WelfareEquivalent: {
                if (!w.mechanism || !w.other_mechanism) return false;
                return distances(c, run_mechanism(*w.mechanism, c)) != distances(c, run_mechanism(*w.other_mechanism, c));
            }
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

// ---------------------------------------------------------------------------

namespace {

struct CellFixture {
    std::size_t row;
    Property property;
    std::string key;
    std::function<AxiomVerdict()> run;
};

Profile order_dependence_profile() {
    return Profile::from_rows({{Rational(1), Rational(0), Rational(0)},
                               {Rational(1), Rational(0), Rational(0)},
                               {Rational(0), Rational(0), Rational(1)}});
}

std::vector<CellFixture> table_fixtures(const std::vector<TableRow>& rows) {
    std::vector<CellFixture> out;
    const MechanismId sdc = rows[1].mechanism;
    const MechanismId pdc = rows[2].mechanism;
    const MechanismId equal = rows[3].mechanism;

    // Two identical agents peaked on one contested object: serving order decides who gets it.
    out.push_back({1, Property::Anonymous, "sdc-order", [sdc] {
                       return check_anonymity(sdc, order_dependence_profile(), Permutation({1, 0, 2}));
                   }});
    out.push_back({1, Property::EnvyFree, "sdc-order", [sdc] {
                       const Profile c = order_dependence_profile();
                       AxiomVerdict v = check_envy_freeness(c, run_mechanism(sdc, c));
                       if (v.witness) v.witness->mechanism = sdc;
                       return v;
                   }});
    out.push_back({2, Property::StrategyProof, "pdc-overclaim", [pdc] {
                       const Profile c = Profile::from_rows({{Rational(9, 10), Rational(1, 10)},
                                                             {Rational(9, 10), Rational(1, 10)}});
                       MechanismId m = pdc;
                       m.alpha = Permutation::identity(2);
                       m.beta = Permutation::identity(2);
                       return check_strategy_proofness(m, c, 0, IdealLottery({Rational(1), Rational(0)}));
                   }});
    out.push_back({2, Property::EnvyFree, "pdc-envy", [pdc] {
                       const Fixture f = load_fixture(FixtureId::PdcEnvyFixture);
                       MechanismId m = pdc;
                       m.alpha = Permutation::identity(4);
                       m.beta = Permutation::identity(4);
                       AxiomVerdict v = check_envy_freeness(f.profile, run_mechanism(m, f.profile));
                       if (v.witness) v.witness->mechanism = m;
                       return v;
                   }});
    out.push_back({3, Property::Efficient, "example1", [equal] {
                       const Fixture f = load_fixture(FixtureId::Example1);
                       AxiomVerdict v = check_efficiency(f.profile, run_mechanism(equal, f.profile));
                       if (v.witness) v.witness->mechanism = equal;
                       return v;
                   }});
    return out;
}

std::size_t column_of(Property p) {
    for (std::size_t k = 0; k < kTableProperties.size(); ++k) {
        if (kTableProperties[k] == p) return k;
    }
    throw std::logic_error("property is not a table column");
}

}  // namespace

Table1 run_table1(const FuzzConfig& cfg) {
    Table1 table;
    const auto identity = Permutation::identity(cfg.n);
    auto with_orders = [&](MechanismKind kind) { return MechanismId{kind, identity, identity}; };
    table.rows = {
        {with_orders(MechanismKind::Urc), "URC", {}, {true, true, true, true, true, true, true}},
        {with_orders(MechanismKind::Sdc), "SDC", {}, {true, true, true, true, true, false, false}},
        {with_orders(MechanismKind::Pdc), "PDC", {}, {false, true, true, true, true, true, false}},
        {MechanismId::of(MechanismKind::EqualDivision), "Equal-Division", {}, {true, false, true, true, true, true, true}},
    };

    for (auto& row : table.rows) {
        for (std::size_t k = 0; k < kTableProperties.size(); ++k) {
            row.cells[k] = fuzz_property(kTableProperties[k], row.mechanism, cfg);
        }
    }

    for (const auto& fx : table_fixtures(table.rows)) {
        AxiomVerdict& cell = table.rows[fx.row].cells[column_of(fx.property)];
        if (is_fail(cell)) continue;
        AxiomVerdict v = fx.run();
        if (!is_fail(v)) continue;
        v.witness->source = "fixture:" + fx.key;
        v.detail = "fixture " + fx.key + ": " + v.detail + "; fuzz: " + cell.detail;
        v.checked += cell.checked;
        v.skipped += cell.skipped;
        cell = std::move(v);
    }

    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < kTableProperties.size(); ++k) {
            const AxiomVerdict& cell = row.cells[k];
            const bool ok = row.expected_pass[k] ? cell.result == Outcome::Pass
                                                 : (is_fail(cell) && reverify(cell));
            if (!ok) {
                table.deviations.push_back(row.label + "/" + std::string(property_label(kTableProperties[k])) +
                                           ": expected " + (row.expected_pass[k] ? "pass" : "fail") + ", got " +
                                           std::string(outcome_name(cell.result)));
            }
        }
    }
    return table;
}

std::string render_table1(const Table1& table) {
    std::ostringstream out;
    auto mark = [](Outcome o) {
        switch (o) {
            case Outcome::Pass: return "✓";
            case Outcome::Fail: return "✗";
            case Outcome::Inconclusive: return "?";
        }
        return "?";
    };
    auto pad = [](std::string s, std::size_t width) {
        s.resize(std::max(s.size(), width), ' ');
        return s;
    };
    out << pad("", 16);
    for (Property p : kTableProperties) out << pad(std::string(property_label(p)), 5);
    out << '\n';
    for (const auto& row : table.rows) {
        out << pad(row.label, 16);
        for (const auto& cell : row.cells) out << mark(cell.result) << "    ";
        out << '\n';
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < kTableProperties.size(); ++k) {
            const AxiomVerdict& cell = row.cells[k];
            out << row.label << '/' << property_label(kTableProperties[k]) << ": " << outcome_name(cell.result);
            if (cell.witness) out << " [" << cell.witness->source << "]";
            out << " - " << cell.detail << '\n';
        }
    }
    out << '\n';
    if (table.matches()) {
        out << "pattern matches the expected table\n";
    } else {
        for (const auto& d : table.deviations) out << "deviation: " << d << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------

json mechanism_to_json(const MechanismId& m) {
    json j{{"name", mechanism_name(m.kind)}};
    if (m.alpha) j["alpha"] = m.alpha->mapping();
    if (m.beta) j["beta"] = m.beta->mapping();
    return j;
}

MechanismId mechanism_from_json(const json& j) {
    MechanismId m = MechanismId::of(parse_mechanism_kind(j.at("name").get<std::string>()));
    if (j.contains("alpha")) m.alpha = Permutation(j.at("alpha").get<std::vector<std::size_t>>());
    if (j.contains("beta")) m.beta = Permutation(j.at("beta").get<std::vector<std::size_t>>());
    return m;
}

namespace {

json rationals_to_json(const std::vector<Rational>& xs) {
    json arr = json::array();
    for (const auto& x : xs) arr.push_back(x.str());
    return arr;
}

json witness_to_json(const Witness& w) {
    json j;
    j["source"] = w.source;
    if (w.mechanism) j["mechanism"] = mechanism_to_json(*w.mechanism);
    if (w.other_mechanism) j["other_mechanism"] = mechanism_to_json(*w.other_mechanism);
    j["profile"] = profile_to_json(w.profile);
    if (w.deviator) j["deviator"] = *w.deviator;
    if (w.affected) j["affected"] = *w.affected;
    if (w.counterpart) j["counterpart"] = *w.counterpart;
    if (w.misreport) j["misreport"] = lottery_to_json(w.misreport->shares());
    if (w.permutation) j["permutation"] = w.permutation->mapping();
    if (w.before) j["before"] = rows_to_json(w.before->matrix());
    if (w.after) j["after"] = rows_to_json(w.after->matrix());
    if (!w.distances_before.empty()) j["distances_before"] = rationals_to_json(w.distances_before);
    if (!w.distances_after.empty()) j["distances_after"] = rationals_to_json(w.distances_after);
    if (w.sample_seed) j["sample_seed"] = *w.sample_seed;
    if (w.between_reading == BetweenReading::Literal) j["between_reading"] = "literal";
    return j;
}

Witness witness_from_json(const json& j) {
    Witness w;
    w.source = j.value("source", "profile");
    if (j.contains("mechanism")) w.mechanism = mechanism_from_json(j.at("mechanism"));
    if (j.contains("other_mechanism")) w.other_mechanism = mechanism_from_json(j.at("other_mechanism"));
    w.profile = profile_from_json(j.at("profile"), "witness.profile");
    if (j.contains("deviator")) w.deviator = j.at("deviator").get<std::size_t>();
    if (j.contains("affected")) w.affected = j.at("affected").get<std::size_t>();
    if (j.contains("counterpart")) w.counterpart = j.at("counterpart").get<std::size_t>();
    if (j.contains("misreport")) {
        w.misreport = IdealLottery(rational_row_from_json(j.at("misreport"), "witness.misreport"));
    }
    if (j.contains("permutation")) w.permutation = Permutation(j.at("permutation").get<std::vector<std::size_t>>());
    if (j.contains("before")) w.before = matching_from_json(json{{"rows", j.at("before")}}, "witness.before").matching;
    if (j.contains("after")) w.after = matching_from_json(json{{"rows", j.at("after")}}, "witness.after").matching;
    if (j.contains("distances_before")) {
        w.distances_before = rational_row_from_json(j.at("distances_before"), "witness.distances_before");
    }
    if (j.contains("distances_after")) {
        w.distances_after = rational_row_from_json(j.at("distances_after"), "witness.distances_after");
    }
    if (j.contains("sample_seed")) w.sample_seed = j.at("sample_seed").get<std::uint64_t>();
    if (j.value("between_reading", "by-class") == "literal") w.between_reading = BetweenReading::Literal;
    return w;
}

}  // namespace

json verdict_to_json(const AxiomVerdict& v) {
    json j{{"property", property_name(v.property)},
           {"result", outcome_name(v.result)},
           {"checked", v.checked},
           {"skipped", v.skipped},
           {"detail", v.detail}};
    if (v.witness) j["witness"] = witness_to_json(*v.witness);
    return j;
}

AxiomVerdict verdict_from_json(const json& j) {
    try {
        AxiomVerdict v;
        v.property = parse_property(j.at("property").get<std::string>());
        const auto result = j.at("result").get<std::string>();
        if (result == "pass") {
            v.result = Outcome::Pass;
        } else if (result == "fail") {
            v.result = Outcome::Fail;
        } else if (result == "inconclusive") {
            v.result = Outcome::Inconclusive;
        } else {
            throw ParseError("verdict.result: unknown outcome '" + result + "'");
        }
        v.checked = j.value("checked", std::uint64_t{0});
        v.skipped = j.value("skipped", std::uint64_t{0});
        v.detail = j.value("detail", "");
        if (j.contains("witness")) v.witness = witness_from_json(j.at("witness"));
        return v;
    } catch (const json::exception& e) {
        throw ParseError(std::string("verdict: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("verdict: ") + e.what());
    }
}

json table1_to_json(const Table1& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json cells = json::object();
        for (std::size_t k = 0; k < kTableProperties.size(); ++k) {
            json cell = verdict_to_json(row.cells[k]);
            cell["expected"] = row.expected_pass[k] ? "pass" : "fail";
            cells[std::string(property_label(kTableProperties[k]))] = std::move(cell);
        }
        rows.push_back({{"mechanism", row.label}, {"id", mechanism_to_json(row.mechanism)}, {"cells", std::move(cells)}});
    }
    return json{{"rows", std::move(rows)}, {"matches", table.matches()}, {"deviations", table.deviations}};
}

}  // namespace chancesplit
