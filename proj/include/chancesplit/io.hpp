#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "chancesplit/model.hpp"

namespace chancesplit {

// JSON layout shared by profiles and matchings:
//   {"agents": ["1", ...], "objects": ["a", ...], "rows": [["3/5", "1/5", "1/5"], ...]}
// Rows follow the declared agent order, entries the declared object order.
// Entries are "num/den" strings; integers and decimal strings are accepted on
// input and always written back in reduced "num/den" form.

struct ParsedMatching {
    RandomMatching matching;
    Labels labels;
};

/// Throws ParseError naming the offending field.
Profile parse_profile(std::string_view text);
ParsedMatching parse_matching(std::string_view text);

std::string serialize_profile(const Profile& c);
std::string serialize_matching(const RandomMatching& p, const Labels& labels);

nlohmann::json to_json(const Rational& r);
nlohmann::json rows_to_json(const Matrix& m);
nlohmann::json lottery_to_json(Row row);
nlohmann::json profile_to_json(const Profile& c);
nlohmann::json matching_to_json(const RandomMatching& p, const Labels& labels);

/// `where` prefixes error messages, e.g. "witness.profile".
Rational rational_from_json(const nlohmann::json& j, const std::string& where);
std::vector<Rational> rational_row_from_json(const nlohmann::json& j, const std::string& where);
Profile profile_from_json(const nlohmann::json& j, const std::string& where = "profile");
ParsedMatching matching_from_json(const nlohmann::json& j, const std::string& where = "matching");

}  // namespace chancesplit
