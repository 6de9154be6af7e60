#include <gtest/gtest.h>

#include "chancesplit/errors.hpp"
#include "chancesplit/mechanisms.hpp"
#include "chancesplit/model.hpp"
#include "chancesplit/profiles.hpp"
#include "support.hpp"

using namespace chancesplit;
using testing_support::lottery;
using testing_support::matching;
using testing_support::profile;
using testing_support::q;
using testing_support::row;

namespace {

Profile example1() {
    return profile({{"3/5", "1/5", "1/5"}, {"1/2", "2/5", "1/10"}, {"1/5", "0", "4/5"}});
}

}  // namespace

TEST(Distance, ComputesL1) {
    const auto c = row({"3/5", "1/5", "1/5"});
    const auto p = row({"2/5", "2/5", "1/5"});
    EXPECT_EQ(l1_distance(c, p), q("2/5"));
    EXPECT_EQ(l1_distance(c, c), Rational(0));
    EXPECT_EQ(l1_distance(row({"1", "0"}), row({"0", "1"})), Rational(2));
    EXPECT_THROW((void)l1_distance(row({"1"}), row({"1", "0"})), InstanceError);
}

TEST(Distance, MetricAxiomsOnGridLotteries) {
    const auto grid = grid_lotteries(3, 4);
    for (const auto& x : grid) {
        for (const auto& y : grid) {
            EXPECT_EQ(l1_distance(x.shares(), y.shares()), l1_distance(y.shares(), x.shares()));
            EXPECT_EQ(l1_distance(x.shares(), y.shares()).is_zero(), x == y);
            EXPECT_LE(l1_distance(x.shares(), y.shares()), Rational(2));
            for (std::size_t k = 0; k < grid.size(); k += 5) {
                const auto& z = grid[k];
                EXPECT_LE(l1_distance(x.shares(), z.shares()),
                          l1_distance(x.shares(), y.shares()) + l1_distance(y.shares(), z.shares()));
            }
        }
    }
}

TEST(IdealLottery, ValidatesShares) {
    EXPECT_NO_THROW(lottery({"1/2", "1/2"}));
    EXPECT_THROW(lottery({"1/2", "1/3"}), InstanceError);
    EXPECT_THROW(lottery({"3/2", "-1/2"}), InstanceError);
    EXPECT_THROW(IdealLottery(std::vector<Rational>{}), InstanceError);
    EXPECT_EQ(IdealLottery::uniform(4)[2], q("1/4"));
}

TEST(Profile, RequiresSquareInstance) {
    EXPECT_THROW(Profile({lottery({"1/2", "1/2"})}), InstanceError);
    EXPECT_THROW(profile({{"1", "0"}, {"1", "0", "0"}}), InstanceError);
    const Profile c = example1();
    EXPECT_EQ(c.labels().agents, (std::vector<std::string>{"1", "2", "3"}));
    EXPECT_EQ(c.labels().objects, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(c.column_sum(0), q("13/10"));
    EXPECT_EQ(c.with_agent(2, lottery({"1", "0", "0"})).peak(2, 0), Rational(1));
    EXPECT_THROW((void)c.with_agent(3, lottery({"1", "0", "0"})), InstanceError);
}

TEST(Labels, DefaultsPastTheAlphabet) {
    const Labels l = Labels::defaults(28);
    EXPECT_EQ(l.objects[25], "z");
    EXPECT_EQ(l.objects[26], "o27");
    EXPECT_EQ(l.agents[27], "28");
}

TEST(RandomMatching, RequiresBistochastic) {
    EXPECT_NO_THROW(matching({{"1/2", "1/2"}, {"1/2", "1/2"}}));
    EXPECT_THROW(matching({{"1", "0"}, {"1", "0"}}), InstanceError);
    EXPECT_THROW(matching({{"3/2", "-1/2"}, {"-1/2", "3/2"}}), InstanceError);
    EXPECT_EQ(RandomMatching::constant(3).at(1, 2), q("1/3"));
    EXPECT_FALSE(validate_matching(Matrix::from_rows(testing_support::rows({{"1/2", "1/2"}, {"1/2", "1/3"}}))));
}

TEST(Classification, Example1) {
    const auto cls = classify_objects(example1());
    EXPECT_EQ(cls.ed(), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(cls.es(), (std::vector<std::size_t>{1}));
    EXPECT_TRUE(cls.un().empty());
}

TEST(Classification, ExactKnifeEdgeIsUnanimous) {
    const auto cls = classify_objects(profile({{"0.35", "0.65"}, {"0.65", "0.35"}}));
    EXPECT_EQ(cls.un(), (std::vector<std::size_t>{0, 1}));
}

TEST(Classification, PartitionsObjectsOnRandomProfiles) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Profile c = random_profile(2 + s % 4, 7, s);
        const auto cls = classify_objects(c);
        EXPECT_EQ(cls.ed().size() + cls.es().size() + cls.un().size(), c.size());
        // Total peak mass is n, so excess demand and excess supply come together.
        EXPECT_EQ(cls.ed().empty(), cls.es().empty());
    }
}

TEST(SameSided, ExampleOneOutcomeAndDistances) {
    const Profile c = example1();
    const RandomMatching p = matching({{"2/5", "2/5", "1/5"}, {"2/5", "1/2", "1/10"}, {"1/5", "1/10", "7/10"}});
    EXPECT_TRUE(is_same_sided(c, p));
    EXPECT_EQ(distances(c, p), row({"2/5", "1/5", "1/5"}));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(sameside_welfare(c, p, i), l1_distance(c[i].shares(), p.row(i)));
}

TEST(SameSided, EqualDivisionIsNotSameSided) {
    const Profile c = example1();
    EXPECT_FALSE(is_same_sided(c, RandomMatching::constant(3)));
    EXPECT_THROW((void)sameside_welfare(c, RandomMatching::constant(3), 0), PreconditionError);
}

TEST(SameSided, UnanimousPeaksAreTheirOwnOutcome) {
    const Profile c = profile({{"1", "0"}, {"0", "1"}});
    EXPECT_TRUE(is_same_sided(c, matching({{"1", "0"}, {"0", "1"}})));
    EXPECT_FALSE(is_same_sided(c, matching({{"0", "1"}, {"1", "0"}})));
}

TEST(WelfareIdentity, HoldsForMechanismOutcomes) {
    for (std::uint64_t s = 0; s < 150; ++s) {
        const Profile c = random_profile(3 + s % 3, 8, 1000 + s);
        const auto id = Permutation::identity(c.size());
        for (const RandomMatching& p : {urc(c, id, id), sdc(c, id, id), pdc(c, id, id)}) {
            ASSERT_TRUE(is_same_sided(c, p));
            const auto cls = classify_objects(c);
            for (std::size_t i = 0; i < c.size(); ++i) {
                Rational ed(0);
                Rational es(0);
                for (std::size_t a : cls.ed()) ed += c.peak(i, a) - p.at(i, a);
                for (std::size_t a : cls.es()) es += p.at(i, a) - c.peak(i, a);
                const Rational d = l1_distance(c[i].shares(), p.row(i));
                EXPECT_EQ(ed + ed, d);
                EXPECT_EQ(es + es, d);
                EXPECT_EQ(sameside_welfare(c, p, i), d);
            }
        }
    }
}

TEST(Between, CoordinateIntervals) {
    const auto l1 = row({"1/2", "1/2", "0"});
    const auto l2 = row({"0", "1/2", "1/2"});
    EXPECT_TRUE(is_between(row({"1/4", "1/2", "1/4"}), l1, l2));
    EXPECT_TRUE(is_between(l1, l1, l2));
    EXPECT_TRUE(is_between(l2, l1, l2));
    EXPECT_FALSE(is_between(row({"1/4", "1/4", "1/2"}), l1, l2));
}

TEST(Permutation, ValidatesAndInverts) {
    EXPECT_THROW(Permutation({0, 0, 1}), InstanceError);
    EXPECT_THROW(Permutation({0, 3, 1}), InstanceError);
    const Permutation p({2, 0, 1});
    EXPECT_EQ(p.inverse().mapping(), (std::vector<std::size_t>{1, 2, 0}));
    EXPECT_EQ(p.reversed().mapping(), (std::vector<std::size_t>{1, 0, 2}));
    EXPECT_EQ(Permutation::identity(3).mapping(), (std::vector<std::size_t>{0, 1, 2}));
}
