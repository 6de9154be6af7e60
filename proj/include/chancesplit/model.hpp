#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chancesplit/rational.hpp"

namespace chancesplit {

using Row = std::span<const Rational>;

/// Dense square matrix of rationals, row-major. Rows are agents, columns objects.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, const Rational& fill = Rational(0));
    static Matrix from_rows(const std::vector<std::vector<Rational>>& rows);

    [[nodiscard]] std::size_t size() const { return n_; }
    Rational& at(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
    [[nodiscard]] const Rational& at(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }
    [[nodiscard]] Row row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    [[nodiscard]] std::vector<Rational> column(std::size_t a) const;
    [[nodiscard]] Rational row_sum(std::size_t i) const;
    [[nodiscard]] Rational column_sum(std::size_t a) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Rational> data_;
};

/// An agent's ideal lottery: nonnegative shares over objects summing to exactly 1.
class IdealLottery {
public:
    IdealLottery() = default;
    /// Throws InstanceError if a share is negative or the shares do not sum to 1.
    explicit IdealLottery(std::vector<Rational> shares);
    static IdealLottery uniform(std::size_t n);
    static IdealLottery from_row(Row row) { return IdealLottery(std::vector<Rational>(row.begin(), row.end())); }

    [[nodiscard]] std::size_t size() const { return shares_.size(); }
    [[nodiscard]] const Rational& operator[](std::size_t a) const { return shares_[a]; }
    [[nodiscard]] Row shares() const { return shares_; }

    friend bool operator==(const IdealLottery&, const IdealLottery&) = default;

private:
    std::vector<Rational> shares_;
};

/// Names used when rendering profiles and matchings.
struct Labels {
    std::vector<std::string> agents;
    std::vector<std::string> objects;

    /// Agents "1".."n", objects "a", "b", ... ("o27" onwards past z).
    static Labels defaults(std::size_t n);
    friend bool operator==(const Labels&, const Labels&) = default;
};

/// Square preference profile: one ideal lottery per agent, as many objects as agents.
class Profile {
public:
    Profile() = default;
    explicit Profile(std::vector<IdealLottery> lotteries);
    Profile(std::vector<IdealLottery> lotteries, Labels labels);
    static Profile from_rows(const std::vector<std::vector<Rational>>& rows);

    [[nodiscard]] std::size_t size() const { return lotteries_.size(); }
    [[nodiscard]] const IdealLottery& operator[](std::size_t i) const { return lotteries_[i]; }
    [[nodiscard]] const std::vector<IdealLottery>& lotteries() const { return lotteries_; }
    [[nodiscard]] const Labels& labels() const { return labels_; }
    [[nodiscard]] const Rational& peak(std::size_t agent, std::size_t object) const { return lotteries_[agent][object]; }
    [[nodiscard]] std::vector<Rational> column(std::size_t object) const;
    [[nodiscard]] Rational column_sum(std::size_t object) const;
    [[nodiscard]] Matrix as_matrix() const;

    /// The profile (c'_i, c_{-i}).
    [[nodiscard]] Profile with_agent(std::size_t agent, IdealLottery replacement) const;

    /// Profile equality compares lotteries only; labels are presentation.
    friend bool operator==(const Profile& a, const Profile& b) { return a.lotteries_ == b.lotteries_; }

private:
    std::vector<IdealLottery> lotteries_;
    Labels labels_;
};

/// Bistochastic matrix of chances.
class RandomMatching {
public:
    RandomMatching() = default;
    /// Throws InstanceError unless the matrix is nonnegative with unit row and column sums.
    explicit RandomMatching(Matrix chances);
    static RandomMatching from_rows(const std::vector<std::vector<Rational>>& rows) {
        return RandomMatching(Matrix::from_rows(rows));
    }
    static RandomMatching constant(std::size_t n);

    [[nodiscard]] std::size_t size() const { return chances_.size(); }
    [[nodiscard]] const Rational& at(std::size_t agent, std::size_t object) const { return chances_.at(agent, object); }
    [[nodiscard]] Row row(std::size_t agent) const { return chances_.row(agent); }
    [[nodiscard]] const Matrix& matrix() const { return chances_; }

    friend bool operator==(const RandomMatching&, const RandomMatching&) = default;

private:
    Matrix chances_;
};

enum class ObjectClass { ExcessDemand, ExcessSupply, Unanimous };

/// Partition of objects by the column sums of the peaks.
class ObjectClassification {
public:
    explicit ObjectClassification(std::vector<ObjectClass> classes) : classes_(std::move(classes)) {}

    [[nodiscard]] std::size_t size() const { return classes_.size(); }
    [[nodiscard]] ObjectClass of(std::size_t object) const { return classes_[object]; }
    [[nodiscard]] bool excess_demand(std::size_t object) const { return classes_[object] == ObjectClass::ExcessDemand; }
    [[nodiscard]] bool excess_supply(std::size_t object) const { return classes_[object] == ObjectClass::ExcessSupply; }
    [[nodiscard]] bool unanimous(std::size_t object) const { return classes_[object] == ObjectClass::Unanimous; }

    [[nodiscard]] std::vector<std::size_t> ed() const { return members(ObjectClass::ExcessDemand); }
    [[nodiscard]] std::vector<std::size_t> es() const { return members(ObjectClass::ExcessSupply); }
    [[nodiscard]] std::vector<std::size_t> un() const { return members(ObjectClass::Unanimous); }

    friend bool operator==(const ObjectClassification&, const ObjectClassification&) = default;

private:
    [[nodiscard]] std::vector<std::size_t> members(ObjectClass c) const;
    std::vector<ObjectClass> classes_;
};

/// Bijection on {0, ..., n-1}. Used for agent relabelings and for the
/// agent/object sequences that drive the phase-2 fill.
class Permutation {
public:
    Permutation() = default;
    /// Throws InstanceError unless `mapping` is a bijection on its index range.
    explicit Permutation(std::vector<std::size_t> mapping);
    static Permutation identity(std::size_t n);

    [[nodiscard]] std::size_t size() const { return mapping_.size(); }
    [[nodiscard]] std::size_t operator[](std::size_t i) const { return mapping_[i]; }
    [[nodiscard]] const std::vector<std::size_t>& mapping() const { return mapping_; }
    [[nodiscard]] Permutation reversed() const;
    [[nodiscard]] Permutation inverse() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> mapping_;
};

/// Sum of absolute coordinate differences. Throws InstanceError on length mismatch.
Rational l1_distance(Row p, Row q);

ObjectClassification classify_objects(const Profile& c);

/// True iff P is below the peaks on excess-demand objects, above them on
/// excess-supply objects, and equal to them on unanimous objects.
bool is_same_sided(const Profile& c, const RandomMatching& p);

/// 2 * sum over excess-demand objects of (c_ia - p_ia). Equals l1_distance(c_i, p_i)
/// for same-sided matchings; throws PreconditionError otherwise.
Rational sameside_welfare(const Profile& c, const RandomMatching& p, std::size_t agent);

/// Nonnegative entries with exact unit row and column sums.
bool validate_matching(const Matrix& p);

/// Whether every coordinate of `l` lies in the closed interval spanned by `l1` and `l2`.
bool is_between(Row l, Row l1, Row l2);

/// Per-agent l1 distances from the ideal lotteries.
std::vector<Rational> distances(const Profile& c, const RandomMatching& p);

}  // namespace chancesplit
