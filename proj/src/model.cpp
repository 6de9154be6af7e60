#include "chancesplit/model.hpp"

#include <algorithm>
#include <string>

#include "chancesplit/errors.hpp"

namespace chancesplit {

namespace {

Rational sum(Row xs) {
    Rational total(0);
    for (const auto& x : xs) total += x;
    return total;
}

}  // namespace

Matrix::Matrix(std::size_t n, const Rational& fill) : n_(n), data_(n * n, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw InstanceError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                " entries; expected " + std::to_string(rows.size()) + " (square instance)");
        }
        std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.n_));
    }
    return m;
}

std::vector<Rational> Matrix::column(std::size_t a) const {
    std::vector<Rational> col;
    col.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) col.push_back(at(i, a));
    return col;
}

Rational Matrix::row_sum(std::size_t i) const { return sum(row(i)); }

Rational Matrix::column_sum(std::size_t a) const {
    Rational total(0);
    for (std::size_t i = 0; i < n_; ++i) total += at(i, a);
    return total;
}

IdealLottery::IdealLottery(std::vector<Rational> shares) : shares_(std::move(shares)) {
    if (shares_.empty()) throw InstanceError("ideal lottery over no objects");
    for (std::size_t a = 0; a < shares_.size(); ++a) {
        if (shares_[a].sign() < 0) {
            throw InstanceError("ideal lottery share " + std::to_string(a) + " is negative (" + shares_[a].str() + ")");
        }
    }
    if (const Rational total = sum(shares_); total != Rational(1)) {
        throw InstanceError("ideal lottery sums to " + total.str() + ", expected 1/1");
    }
}

IdealLottery IdealLottery::uniform(std::size_t n) {
    return IdealLottery(std::vector<Rational>(n, Rational(1, static_cast<std::int64_t>(n))));
}

Labels Labels::defaults(std::size_t n) {
    Labels labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.agents.push_back(std::to_string(i + 1));
        labels.objects.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "o" + std::to_string(i + 1));
    }
    return labels;
}

Profile::Profile(std::vector<IdealLottery> lotteries) : Profile(std::move(lotteries), Labels{}) {}

Profile::Profile(std::vector<IdealLottery> lotteries, Labels labels)
    : lotteries_(std::move(lotteries)), labels_(std::move(labels)) {
    const std::size_t n = lotteries_.size();
    if (n == 0) throw InstanceError("profile with no agents");
    for (std::size_t i = 0; i < n; ++i) {
        if (lotteries_[i].size() != n) {
            throw InstanceError("agent " + std::to_string(i) + " has a lottery over " +
                                std::to_string(lotteries_[i].size()) + " objects; expected " + std::to_string(n) +
                                " (number of agents must equal number of objects)");
        }
    }
    if (labels_.agents.empty() && labels_.objects.empty()) labels_ = Labels::defaults(n);
    if (labels_.agents.size() != n || labels_.objects.size() != n) {
        throw InstanceError("label count does not match instance size " + std::to_string(n));
    }
}

Profile Profile::from_rows(const std::vector<std::vector<Rational>>& rows) {
    std::vector<IdealLottery> lotteries;
    lotteries.reserve(rows.size());
    for (const auto& r : rows) lotteries.emplace_back(r);
    return Profile(std::move(lotteries));
}

std::vector<Rational> Profile::column(std::size_t object) const {
    std::vector<Rational> col;
    col.reserve(size());
    for (const auto& l : lotteries_) col.push_back(l[object]);
    return col;
}

Rational Profile::column_sum(std::size_t object) const {
    Rational total(0);
    for (const auto& l : lotteries_) total += l[object];
    return total;
}

Matrix Profile::as_matrix() const {
    Matrix m(size());
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t a = 0; a < size(); ++a) m.at(i, a) = peak(i, a);
    }
    return m;
}

Profile Profile::with_agent(std::size_t agent, IdealLottery replacement) const {
    if (agent >= size()) throw InstanceError("agent index " + std::to_string(agent) + " out of range");
    if (replacement.size() != size()) throw InstanceError("replacement lottery has wrong length");
    Profile copy = *this;
    copy.lotteries_[agent] = std::move(replacement);
    return copy;
}

RandomMatching::RandomMatching(Matrix chances) : chances_(std::move(chances)) {
    if (!validate_matching(chances_)) {
        throw InstanceError("matrix is not bistochastic (nonnegative with unit row and column sums)");
    }
}

RandomMatching RandomMatching::constant(std::size_t n) {
    return RandomMatching(Matrix(n, Rational(1, static_cast<std::int64_t>(n))));
}

std::vector<std::size_t> ObjectClassification::members(ObjectClass c) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < classes_.size(); ++a) {
        if (classes_[a] == c) out.push_back(a);
    }
    return out;
}

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
    std::vector<bool> seen(mapping_.size(), false);
    for (std::size_t v : mapping_) {
        if (v >= mapping_.size() || seen[v]) throw InstanceError("sequence is not a permutation of 0.." +
                                                                 std::to_string(mapping_.size() - 1));
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return Permutation(std::move(m));
}

Permutation Permutation::reversed() const {
    return Permutation(std::vector<std::size_t>(mapping_.rbegin(), mapping_.rend()));
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> inv(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = i;
    return Permutation(std::move(inv));
}

Rational l1_distance(Row p, Row q) {
    if (p.size() != q.size()) {
        throw InstanceError("l1_distance: length mismatch (" + std::to_string(p.size()) + " vs " +
                            std::to_string(q.size()) + ")");
    }
    Rational total(0);
    for (std::size_t a = 0; a < p.size(); ++a) total += abs(p[a] - q[a]);
    return total;
}

ObjectClassification classify_objects(const Profile& c) {
    std::vector<ObjectClass> classes;
    classes.reserve(c.size());
    const Rational one(1);
    for (std::size_t a = 0; a < c.size(); ++a) {
        const Rational s = c.column_sum(a);
        classes.push_back(s > one ? ObjectClass::ExcessDemand
                                  : (s < one ? ObjectClass::ExcessSupply : ObjectClass::Unanimous));
    }
    return ObjectClassification(std::move(classes));
}

bool is_same_sided(const Profile& c, const RandomMatching& p) {
    if (c.size() != p.size()) throw InstanceError("profile and matching sizes differ");
    const auto cls = classify_objects(c);
    for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Rational& want = c.peak(i, a);
            const Rational& got = p.at(i, a);
            switch (cls.of(a)) {
                case ObjectClass::ExcessDemand:
                    if (got > want) return false;
                    break;
                case ObjectClass::ExcessSupply:
                    if (got < want) return false;
                    break;
                case ObjectClass::Unanimous:
                    if (got != want) return false;
                    break;
            }
        }
    }
    return true;
}

Rational sameside_welfare(const Profile& c, const RandomMatching& p, std::size_t agent) {
    if (!is_same_sided(c, p)) {
        throw PreconditionError("sameside_welfare: matching is not same-sided for this profile");
    }
    if (agent >= c.size()) throw InstanceError("agent index out of range");
    const auto cls = classify_objects(c);
    Rational loss(0);
    for (std::size_t a : cls.ed()) loss += c.peak(agent, a) - p.at(agent, a);
    return Rational(2) * loss;
}

bool validate_matching(const Matrix& p) {
    const std::size_t n = p.size();
    if (n == 0) return false;
    const Rational one(1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            if (p.at(i, a).sign() < 0) return false;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (p.row_sum(k) != one || p.column_sum(k) != one) return false;
    }
    return true;
}

bool is_between(Row l, Row l1, Row l2) {
    if (l.size() != l1.size() || l.size() != l2.size()) throw InstanceError("is_between: length mismatch");
    for (std::size_t a = 0; a < l.size(); ++a) {
        const Rational& lo = min(l1[a], l2[a]);
        const Rational& hi = max(l1[a], l2[a]);
        if (l[a] < lo || l[a] > hi) return false;
    }
    return true;
}

std::vector<Rational> distances(const Profile& c, const RandomMatching& p) {
    std::vector<Rational> out;
    out.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(l1_distance(c[i].shares(), p.row(i)));
    return out;
}

}  // namespace chancesplit
