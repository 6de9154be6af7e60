// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "chancesplit/axioms.hpp"
#include "chancesplit/mechanisms.hpp"
#include "chancesplit/profiles.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chancesplit;
using testing_support::lottery;
using testing_support::matching;
using testing_support::profile;
using testing_support::q;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream note;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) note << "first failure: " << what << "; ";
        ok = ok && cond;
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const Sequence& id3() {
    static const Sequence s = Sequence::identity(3);
    return s;
}

Profile example1() {
    return profile({{"3/5", "1/5", "1/5"}, {"1/2", "2/5", "1/10"}, {"1/5", "0", "4/5"}});
}

// Fuzz corpus shared by criteria 7 to 10: n in 2..5, D in 2..12.
constexpr std::uint64_t kCorpusSize = 1200;
constexpr std::uint64_t kCorpusSeed = 424242;

Profile corpus_profile(std::uint64_t k) {
    const std::size_t n = 2 + k % 4;
    const std::uint64_t d = 2 + (k / 4) % 11;
    return random_profile(n, d, mix_seed(kCorpusSeed, k));
}

std::string list(const std::vector<Rational>& xs) {
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i].str();
    return s + ")";
}

Check golden_urc() {
    Check c;
    const Profile p = example1();
    const RandomMatching want = matching({{"2/5", "2/5", "1/5"}, {"2/5", "1/2", "1/10"}, {"1/5", "1/10", "7/10"}});
    (void)urc(p, id3(), id3());
    double best = 1e9;
    RandomMatching got;
    for (int k = 0; k < 20; ++k) {
        const auto t0 = Clock::now();
        got = urc(p, id3(), id3());
        best = std::min(best, seconds_since(t0));
    }
    c.expect(got == want, "URC matrix differs");
    c.expect(best < 1e-3, "runtime over 1 ms");
    c.note << "runtime " << best * 1e6 << " us";
    return c;
}

Check golden_sdc() {
    Check c;
    const RandomMatching got = sdc(example1(), id3(), id3());
    c.expect(got == matching({{"3/5", "1/5", "1/5"}, {"2/5", "1/2", "1/10"}, {"0", "3/10", "7/10"}}),
             "SDC matrix differs");
    c.note << "exact match";
    return c;
}

Check nonbossy_pair() {
    Check c;
    const Profile truth = profile({{"3/10", "1/2", "1/5"}, {"7/10", "1/5", "1/10"}, {"1/10", "2/5", "1/2"}});
    const Profile lie = truth.with_agent(1, lottery({"7/10", "3/10", "0"}));
    const RandomMatching before = urc(truth, id3(), id3());
    const RandomMatching after = urc(lie, id3(), id3());
    c.expect(before == matching({{"3/10", "2/5", "3/10"}, {"3/5", "1/5", "1/5"}, {"1/10", "2/5", "1/2"}}),
             "first matrix differs");
    c.expect(after == matching({{"3/10", "7/20", "7/20"}, {"3/5", "3/10", "1/10"}, {"1/10", "7/20", "11/20"}}),
             "second matrix differs");
    const auto d0 = distances(truth, before);
    const auto d1 = distances(truth, after);
    c.expect(d0[1] == q("1/5") && d1[1] == q("1/5"), "agent 2 distance is not 1/5 in both");
    c.expect(d0[2] != d1[2], "agent 3 distance unchanged");
    c.note << "agent 2: " << d0[1].str() << " -> " << d1[1].str() << ", agent 3: " << d0[2].str() << " -> "
           << d1[2].str();
    return c;
}

Check meu_equivalence() {
    Check c;
    const Profile& e = meu_special_profile();
    const auto want = testing_support::row({"2/3", "2/3", "0"});
    const auto d_meu = distances(e, meu_mech(e));
    const auto d_urc = distances(e, urc(e, id3(), id3()));
    c.expect(d_meu == want, "MEU distances at e are " + list(d_meu));
    c.expect(d_urc == want, "URC distances at e are " + list(d_urc));
    const Profile start = e.with_agent(0, lottery({"2/3", "0", "1/3"}));
    const Rational truthful = distances(start, meu_mech(start))[0];
    const Rational lied = l1_distance(start[0].shares(), meu_mech(e).row(0));
    c.expect(lied < truthful, "misreport does not help agent 1");
    const AxiomVerdict v = check_strategy_proofness(MechanismId::of(MechanismKind::Meu), start, 0, e[0]);
    c.expect(v.result == Outcome::Fail && reverify(v), "SP check did not produce a replayable witness");
    c.note << "agent 1: " << truthful.str() << " truthful, " << lied.str() << " after misreport";
    return c;
}

Check table_reproduction() {
    Check c;
    FuzzConfig cfg;
    cfg.samples = 500;
    if (const char* env = std::getenv("CHANCE_SPLIT_JOBS")) {
        cfg.jobs = static_cast<unsigned>(std::max(1, std::atoi(env)));
    } else {
        cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    const auto t0 = Clock::now();
    const Table1 t = run_table1(cfg);
    const double secs = seconds_since(t0);
    c.expect(t.matches(), "pattern deviates");
    for (const auto& d : t.deviations) c.note << d << "; ";
    std::size_t fails = 0;
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < kTableProperties.size(); ++k) {
            if (row.cells[k].result != Outcome::Fail) continue;
            ++fails;
            c.expect(reverify(verdict_from_json(verdict_to_json(row.cells[k]))),
                     row.label + " witness does not replay");
        }
    }
    c.expect(fails == 5, "expected 5 failing cells");
    c.expect(secs <= 300, "runtime over 5 minutes");
    c.note << fails << " failing cells replayed, " << secs << " s";
    return c;
}

std::uint64_t lcm_of_denominators(const Profile& c, const RandomMatching& p) {
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t a = 0; a < c.size(); ++a) {
            d = std::lcm(d, c.peak(i, a).denominator().get_ui());
            d = std::lcm(d, p.at(i, a).denominator().get_ui());
        }
    }
    return d;
}

// Returns false when the grid is too fine to enumerate.
bool efficiency_agrees(Check& c, const Profile& prof, const RandomMatching& p, std::uint64_t max_d,
                       const std::string& tag) {
    const std::uint64_t d = lcm_of_denominators(prof, p);
    if (d > max_d) return false;
    const bool same_sided = is_same_sided(prof, p);
    const DominanceSearch s = brute_force_dominance(prof, p, d);
    c.expect(!s.exhausted_budget, tag + ": enumeration budget exhausted");
    c.expect(s.dominator.has_value() == !same_sided, tag + ": brute force disagrees with same-sidedness");
    if (!same_sided) {
        const RandomMatching better = improve_to_same_sided(prof, p);
        c.expect(is_same_sided(prof, better) && strictly_dominates(prof, better, p),
                 tag + ": improvement is not a same-sided dominator");
    }
    return true;
}

Check efficiency_oracle() {
    Check c;
    std::uint64_t small = 0;
    const auto two = grid_lotteries(2, 4);
    for (const auto& l1 : two) {
        for (const auto& l2 : two) {
            const Profile prof({l1, l2});
            for (const auto& x : two) {
                const RandomMatching p = RandomMatching::from_rows({{x[0], x[1]}, {x[1], x[0]}});
                efficiency_agrees(c, prof, p, 4, "n=2");
                ++small;
            }
        }
    }
    std::uint64_t checked = 0;
    std::uint64_t skipped = 0;
    std::uint64_t dominated = 0;
    Rng rng(606);
    for (std::uint64_t k = 0; k < 220; ++k) {
        const Profile prof = random_profile(3, 5, mix_seed(606, k));
        const std::vector<RandomMatching> cands{oracle::grid_matching(3, 5, rng), urc(prof, id3(), id3()),
                                                RandomMatching::constant(3)};
        for (const auto& p : cands) {
            if (efficiency_agrees(c, prof, p, 30, "n=3 profile " + std::to_string(k))) {
                ++checked;
                dominated += is_same_sided(prof, p) ? 0 : 1;
            } else {
                ++skipped;
            }
        }
    }
    c.expect(checked >= 200, "fewer than 200 three-agent instances checked");
    c.note << small << " two-agent pairs, " << checked << " three-agent pairs (" << dominated << " dominated, "
           << skipped << " skipped on grids finer than 1/30)";
    return c;
}

Check sequence_independence() {
    Check c;
    Rng rng(77);
    std::uint64_t pairs = 0;
    for (std::uint64_t k = 0; k < kCorpusSize; ++k) {
        const Profile prof = corpus_profile(k);
        const std::size_t n = prof.size();
        const auto base = distances(prof, urc(prof, Sequence::identity(n), Sequence::identity(n)));
        for (int t = 0; t < 3; ++t) {
            const Sequence alpha(oracle::shuffled(n, rng));
            const Sequence beta(oracle::shuffled(n, rng));
            c.expect(distances(prof, urc(prof, alpha, beta)) == base, "distances move with the sequences");
            ++pairs;
        }
    }
    c.note << kCorpusSize << " profiles, " << pairs << " sequence pairs";
    return c;
}

Check ed_columns_follow_uniform_rule() {
    Check c;
    std::uint64_t columns = 0;
    Rng rng(78);
    for (std::uint64_t k = 0; k < kCorpusSize; ++k) {
        const Profile prof = corpus_profile(k);
        const std::size_t n = prof.size();
        const RandomMatching p = urc(prof, Sequence(oracle::shuffled(n, rng)), Sequence(oracle::shuffled(n, rng)));
        for (std::size_t a : classify_objects(prof).ed()) {
            std::vector<Rational> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = p.at(i, a);
            c.expect(col == oracle::uniform_rule(prof.column(a)), "ED column differs from the uniform rule");
            ++columns;
        }
    }
    c.note << columns << " excess-demand columns";
    return c;
}

Check between_invariance() {
    Check c;
    std::uint64_t triples = 0;
    for (std::uint64_t k = 0; triples < 1000 && k < 20 * kCorpusSize; ++k) {
        const Profile prof = corpus_profile(k % kCorpusSize);
        const std::size_t n = prof.size();
        const std::size_t i = k % n;
        const RandomMatching before = urc(prof, Sequence::identity(n), Sequence::identity(n));
        const IdealLottery moved = between_sample(prof[i], before.row(i), mix_seed(991, k));
        if (moved == prof[i]) continue;
        ++triples;
        const RandomMatching after = urc(prof.with_agent(i, moved), Sequence::identity(n), Sequence::identity(n));
        for (std::size_t a = 0; a < n; ++a) c.expect(after.at(i, a) == before.at(i, a), "deviator's row moved");
        for (std::size_t a : classify_objects(prof).ed()) {
            for (std::size_t j = 0; j < n; ++j) c.expect(after.at(j, a) == before.at(j, a), "ED allocation moved");
        }
    }
    c.expect(triples >= 1000, "fewer than 1000 nontrivial triples");
    c.note << triples << " nontrivial triples";
    return c;
}

Check welfare_identity() {
    Check c;
    Rng rng(79);
    std::uint64_t rows = 0;
    for (std::uint64_t k = 0; k < kCorpusSize; ++k) {
        const Profile prof = corpus_profile(k);
        const std::size_t n = prof.size();
        const auto cls = classify_objects(prof);
        const Sequence alpha(oracle::shuffled(n, rng));
        const Sequence beta(oracle::shuffled(n, rng));
        for (const RandomMatching& p : {urc(prof, alpha, beta), sdc(prof, alpha, beta), pdc(prof, alpha, beta)}) {
            for (std::size_t i = 0; i < n; ++i) {
                Rational ed(0);
                Rational es(0);
                for (std::size_t a = 0; a < n; ++a) {
                    if (cls.excess_demand(a)) ed += prof.peak(i, a) - p.at(i, a);
                    if (cls.excess_supply(a)) es += p.at(i, a) - prof.peak(i, a);
                }
                const Rational d = l1_distance(prof[i].shares(), p.row(i));
                c.expect(Rational(2) * ed == d && d == Rational(2) * es, "welfare identity broken");
                ++rows;
            }
        }
    }
    c.note << rows << " agent rows across URC, SDC and PDC";
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"golden URC example", golden_urc},
        {"golden SDC example", golden_sdc},
        {"URC welfare non-bossiness pair", nonbossy_pair},
        {"MEU welfare equivalence and manipulation", meu_equivalence},
        {"property table reproduction", table_reproduction},
        {"efficiency equals same-sidedness", efficiency_oracle},
        {"URC welfare is sequence independent", sequence_independence},
        {"URC excess-demand columns follow the uniform rule", ed_columns_follow_uniform_rule},
        {"URC ignores in-between reports", between_invariance},
        {"welfare identity on excess-demand and excess-supply objects", welfare_identity},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Check result;
        try {
            result = criteria[k].second();
        } catch (const std::exception& e) {
            result.ok = false;
            result.note << "exception: " << e.what();
        }
        failed += result.ok ? 0 : 1;
        std::cout << (result.ok ? "[PASS] " : "[FAIL] ") << k + 1 << ". " << criteria[k].first << ": "
                  << result.note.str() << std::endl;
    }
    std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
