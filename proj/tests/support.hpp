#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "chancesplit/model.hpp"

namespace testing_support {

using chancesplit::Rational;

inline Rational q(const char* text) { return Rational::parse(text); }

inline std::vector<Rational> row(std::initializer_list<const char*> xs) {
    std::vector<Rational> out;
    for (const char* x : xs) out.push_back(q(x));
    return out;
}

inline std::vector<std::vector<Rational>> rows(std::initializer_list<std::initializer_list<const char*>> xs) {
    std::vector<std::vector<Rational>> out;
    for (const auto& r : xs) out.push_back(row(r));
    return out;
}

inline chancesplit::Profile profile(std::initializer_list<std::initializer_list<const char*>> xs) {
    return chancesplit::Profile::from_rows(rows(xs));
}

inline chancesplit::RandomMatching matching(std::initializer_list<std::initializer_list<const char*>> xs) {
    return chancesplit::RandomMatching::from_rows(rows(xs));
}

inline chancesplit::IdealLottery lottery(std::initializer_list<const char*> xs) {
    return chancesplit::IdealLottery(row(xs));
}

inline std::vector<std::vector<Rational>> as_rows(const chancesplit::RandomMatching& p) {
    std::vector<std::vector<Rational>> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i].assign(p.row(i).begin(), p.row(i).end());
    return out;
}

}  // namespace testing_support
