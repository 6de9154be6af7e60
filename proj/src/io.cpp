#include "chancesplit/io.hpp"

#include <stdexcept>

#include "chancesplit/errors.hpp"

namespace chancesplit {

using nlohmann::json;

namespace {

json parse_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<std::string> names_from_json(const json& j, const char* key, std::size_t n, const std::string& where) {
    if (!j.contains(key)) {
        const Labels defaults = Labels::defaults(n);
        return std::string_view(key) == "agents" ? defaults.agents : defaults.objects;
    }
    const json& arr = j.at(key);
    if (!arr.is_array()) throw ParseError(where + "." + key + ": expected an array of names");
    std::vector<std::string> names;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        if (!arr[k].is_string()) {
            throw ParseError(where + "." + key + "[" + std::to_string(k) + "]: expected a string");
        }
        names.push_back(arr[k].get<std::string>());
    }
    if (names.size() != n) {
        throw ParseError(where + "." + key + ": " + std::to_string(names.size()) + " names for " + std::to_string(n) +
                         " rows (instance must be square)");
    }
    return names;
}

Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object with a \"rows\" field");
    if (!j.contains("rows")) throw ParseError(where + ": missing \"rows\"");
    const json& rows = j.at("rows");
    if (!rows.is_array() || rows.empty()) throw ParseError(where + ".rows: expected a nonempty array");
    std::vector<std::vector<Rational>> values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto row = rational_row_from_json(rows[i], where + ".rows[" + std::to_string(i) + "]");
        if (row.size() != rows.size()) {
            throw ParseError(where + ".rows[" + std::to_string(i) + "]: " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(rows.size()) + " (instance must be square)");
        }
        values.push_back(std::move(row));
    }
    return Matrix::from_rows(values);
}

Labels labels_from_json(const json& j, std::size_t n, const std::string& where) {
    return Labels{names_from_json(j, "agents", n, where), names_from_json(j, "objects", n, where)};
}

}  // namespace

json to_json(const Rational& r) { return r.str(); }

json lottery_to_json(Row row) {
    json arr = json::array();
    for (const auto& x : row) arr.push_back(x.str());
    return arr;
}

json rows_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) rows.push_back(lottery_to_json(m.row(i)));
    return rows;
}

json profile_to_json(const Profile& c) {
    return json{{"agents", c.labels().agents}, {"objects", c.labels().objects}, {"rows", rows_to_json(c.as_matrix())}};
}

json matching_to_json(const RandomMatching& p, const Labels& labels) {
    return json{{"agents", labels.agents}, {"objects", labels.objects}, {"rows", rows_to_json(p.matrix())}};
}

Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw ParseError(where + ": expected a \"num/den\" string or an integer");
}

std::vector<Rational> rational_row_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array");
    std::vector<Rational> row;
    row.reserve(j.size());
    for (std::size_t a = 0; a < j.size(); ++a) row.push_back(rational_from_json(j[a], where + "[" + std::to_string(a) + "]"));
    return row;
}

Profile profile_from_json(const json& j, const std::string& where) {
    const Matrix m = matrix_from_json(j, where);
    Labels labels = labels_from_json(j, m.size(), where);
    std::vector<IdealLottery> lotteries;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string field = where + ".rows[" + std::to_string(i) + "] (agent " + labels.agents[i] + ")";
        for (std::size_t a = 0; a < m.size(); ++a) {
            if (m.at(i, a).sign() < 0) {
                throw ParseError(field + ": share for object " + labels.objects[a] + " is negative (" +
                                 m.at(i, a).str() + ")");
            }
        }
        if (const Rational total = m.row_sum(i); total != Rational(1)) {
            throw ParseError(field + ": sums to " + total.str() + ", expected 1/1 (agent feasibility)");
        }
        lotteries.push_back(IdealLottery::from_row(m.row(i)));
    }
    return Profile(std::move(lotteries), std::move(labels));
}

ParsedMatching matching_from_json(const json& j, const std::string& where) {
    Matrix m = matrix_from_json(j, where);
    Labels labels = labels_from_json(j, m.size(), where);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t a = 0; a < m.size(); ++a) {
            if (m.at(i, a).sign() < 0) {
                throw ParseError(where + ".rows[" + std::to_string(i) + "][" + std::to_string(a) + "]: negative chance " +
                                 m.at(i, a).str());
            }
        }
        if (const Rational total = m.row_sum(i); total != Rational(1)) {
            throw ParseError(where + ".rows[" + std::to_string(i) + "] (agent " + labels.agents[i] + "): sums to " +
                             total.str() + ", expected 1/1 (agent feasibility)");
        }
    }
    for (std::size_t a = 0; a < m.size(); ++a) {
        if (const Rational total = m.column_sum(a); total != Rational(1)) {
            throw ParseError(where + ": column for object " + labels.objects[a] + " sums to " + total.str() +
                             ", expected 1/1 (object feasibility)");
        }
    }
    return ParsedMatching{RandomMatching(std::move(m)), std::move(labels)};
}

Profile parse_profile(std::string_view text) { return profile_from_json(parse_text(text)); }

ParsedMatching parse_matching(std::string_view text) { return matching_from_json(parse_text(text)); }

std::string serialize_profile(const Profile& c) { return profile_to_json(c).dump(); }

std::string serialize_matching(const RandomMatching& p, const Labels& labels) {
    return matching_to_json(p, labels).dump();
}

}  // namespace chancesplit
