#include <gtest/gtest.h>

#include "chancesplit/errors.hpp"
#include "chancesplit/io.hpp"
#include "support.hpp"

using namespace chancesplit;
using testing_support::matching;
using testing_support::profile;

namespace {

std::string parse_error_of(const std::string& text) {
    try {
        (void)parse_profile(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(ProfileIo, ParsesLabelsAndFractions) {
    const Profile c = parse_profile(R"({"agents": ["ann", "bo"], "objects": ["x", "y"], "rows": [["2/4", "1/2"], [1, 0]]})");
    EXPECT_EQ(c, profile({{"1/2", "1/2"}, {"1", "0"}}));
    EXPECT_EQ(c.labels().agents, (std::vector<std::string>{"ann", "bo"}));
    EXPECT_EQ(c.labels().objects, (std::vector<std::string>{"x", "y"}));
}

TEST(ProfileIo, LabelsDefaultWhenAbsent) {
    const Profile c = parse_profile(R"({"rows": [["0.25", "0.75"], ["1", "0"]]})");
    EXPECT_EQ(c.labels(), Labels::defaults(2));
    EXPECT_EQ(c.peak(0, 0), Rational(1, 4));
}

TEST(ProfileIo, RoundTripIsCanonical) {
    const std::string text = serialize_profile(parse_profile(R"({"rows": [["2/4", "2/4"], ["3/6", "0.5"]]})"));
    EXPECT_NE(text.find("\"1/2\""), std::string::npos);
    EXPECT_EQ(text.find("2/4"), std::string::npos);
    EXPECT_EQ(parse_profile(text), profile({{"1/2", "1/2"}, {"1/2", "1/2"}}));
}

TEST(ProfileIo, ErrorsNameTheField) {
    EXPECT_NE(parse_error_of("{").find("malformed JSON"), std::string::npos);
    EXPECT_NE(parse_error_of(R"({"agents": []})").find("missing \"rows\""), std::string::npos);
    EXPECT_NE(parse_error_of(R"({"rows": [["1/2", "1/3"], ["1/2", "1/2"]]})").find("rows[0] (agent 1): sums to 5/6"),
              std::string::npos);
    EXPECT_NE(parse_error_of(R"({"rows": [["3/2", "-1/2"], ["1/2", "1/2"]]})").find("share for object b is negative"),
              std::string::npos);
    EXPECT_NE(parse_error_of(R"({"rows": [["1", "0", "0"], ["1", "0"]]})").find("rows[0]: 3 entries, expected 2"), std::string::npos);
    EXPECT_NE(parse_error_of(R"({"rows": [["1", "x"], ["1", "0"]]})").find("rows[0][1]"), std::string::npos);
    EXPECT_NE(parse_error_of(R"({"agents": ["1"], "rows": [["1", "0"], ["1", "0"]]})").find("agents"),
              std::string::npos);
}

TEST(MatchingIo, RoundTrip) {
    const RandomMatching p = matching({{"1/3", "2/3"}, {"2/3", "1/3"}});
    const ParsedMatching back = parse_matching(serialize_matching(p, Labels::defaults(2)));
    EXPECT_EQ(back.matching, p);
    EXPECT_EQ(back.labels, Labels::defaults(2));
}

TEST(MatchingIo, RejectsInfeasibleColumns) {
    EXPECT_THROW((void)parse_matching(R"({"rows": [["1", "0"], ["1", "0"]]})"), ParseError);
    EXPECT_THROW((void)parse_matching(R"({"rows": [["1/2", "1/2"], ["1/2", "1/3"]]})"), ParseError);
}

TEST(Json, RationalsAreStrings) {
    EXPECT_EQ(to_json(Rational(2, 4)), nlohmann::json("1/2"));
    EXPECT_EQ(rational_from_json(nlohmann::json(3), "x"), Rational(3));
    EXPECT_THROW((void)rational_from_json(nlohmann::json(0.5), "x"), ParseError);
}
