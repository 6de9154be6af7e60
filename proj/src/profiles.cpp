#include "chancesplit/profiles.hpp"

#include <algorithm>
#include <limits>

#include "chancesplit/errors.hpp"

namespace chancesplit {

namespace {

constexpr std::uint64_t kFractionSteps = 12;

// Splits `amount` over coordinates with the given capacities (sum >= amount).
// A random first pass takes a random grid fraction of what is left at each
// coordinate; a greedy second pass places the remainder.
std::vector<Rational> random_split(const Rational& amount, const std::vector<Rational>& caps, Rng& rng) {
    std::vector<Rational> take(caps.size(), Rational(0));
    std::vector<std::size_t> order(caps.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);

    Rational left = amount;
    for (std::size_t idx : order) {
        const Rational fraction(static_cast<std::int64_t>(rng.below(kFractionSteps + 1)),
                                static_cast<std::int64_t>(kFractionSteps));
        const Rational t = min(caps[idx], left * fraction);
        take[idx] += t;
        left -= t;
    }
    for (std::size_t idx : order) {
        if (left.is_zero()) break;
        const Rational t = min(caps[idx] - take[idx], left);
        take[idx] += t;
        left -= t;
    }
    return take;
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

IdealLottery random_lottery(std::size_t n, std::uint64_t denominator, Rng& rng) {
    if (n == 0) throw InstanceError("random_lottery: n must be positive");
    if (denominator == 0) throw InstanceError("random_lottery: denominator must be positive");
    // Stars and bars: choose n-1 bar positions among D+n-1 slots (Floyd's algorithm).
    const std::uint64_t slots = denominator + n - 1;
    std::vector<std::uint64_t> bars;
    for (std::uint64_t j = slots - (n - 1); j < slots; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (std::find(bars.begin(), bars.end(), t) == bars.end()) {
            bars.push_back(t);
        } else {
            bars.push_back(j);
        }
    }
    std::sort(bars.begin(), bars.end());
    std::vector<Rational> shares;
    shares.reserve(n);
    std::uint64_t previous = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t end = k + 1 < n ? bars[k] : slots;
        const std::uint64_t start = k == 0 ? 0 : previous + 1;
        shares.emplace_back(static_cast<std::int64_t>(end - start), static_cast<std::int64_t>(denominator));
        previous = end;
    }
    return IdealLottery(std::move(shares));
}

Profile random_profile(std::size_t n, std::uint64_t denominator, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<IdealLottery> lotteries;
    lotteries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) lotteries.push_back(random_lottery(n, denominator, rng));
    return Profile(std::move(lotteries));
}

std::uint64_t grid_size(std::size_t n, std::uint64_t denominator, std::uint64_t cap) {
    // C(D + n - 1, n - 1), computed incrementally; each partial product is an integer.
    unsigned __int128 value = 1;
    for (std::uint64_t k = 1; k < n; ++k) {
        value = value * (denominator + k) / k;
        if (value > cap) return cap;
    }
    return static_cast<std::uint64_t>(value);
}

std::vector<IdealLottery> grid_lotteries(std::size_t n, std::uint64_t denominator) {
    std::vector<IdealLottery> out;
    std::vector<std::uint64_t> parts(n, 0);
    auto recurse = [&](auto&& self, std::size_t k, std::uint64_t left) -> void {
        if (k + 1 == n) {
            parts[k] = left;
            std::vector<Rational> shares;
            shares.reserve(n);
            for (auto p : parts) shares.emplace_back(static_cast<std::int64_t>(p), static_cast<std::int64_t>(denominator));
            out.emplace_back(std::move(shares));
            return;
        }
        for (std::uint64_t v = 0; v <= left; ++v) {
            parts[k] = v;
            self(self, k + 1, left - v);
        }
    };
    if (n > 0 && denominator > 0) recurse(recurse, 0, denominator);
    return out;
}

IdealLottery between_sample(const IdealLottery& ideal, Row allocation, std::uint64_t seed) {
    if (allocation.size() != ideal.size()) throw InstanceError("between_sample: length mismatch");
    std::vector<std::size_t> down;
    std::vector<std::size_t> up;
    std::vector<Rational> down_caps;
    std::vector<Rational> up_caps;
    Rational gap(0);
    for (std::size_t a = 0; a < ideal.size(); ++a) {
        if (allocation[a] < ideal[a]) {
            down.push_back(a);
            down_caps.push_back(ideal[a] - allocation[a]);
            gap += ideal[a] - allocation[a];
        } else if (allocation[a] > ideal[a]) {
            up.push_back(a);
            up_caps.push_back(allocation[a] - ideal[a]);
        }
    }
    if (gap.is_zero()) return ideal;

    Rng rng(seed);
    const Rational amount = gap * Rational(static_cast<std::int64_t>(rng.below(kFractionSteps + 1)),
                                           static_cast<std::int64_t>(kFractionSteps));
    const auto lowered = random_split(amount, down_caps, rng);
    const auto raised = random_split(amount, up_caps, rng);
    std::vector<Rational> shares(ideal.shares().begin(), ideal.shares().end());
    for (std::size_t k = 0; k < down.size(); ++k) shares[down[k]] -= lowered[k];
    for (std::size_t k = 0; k < up.size(); ++k) shares[up[k]] += raised[k];
    IdealLottery sample(std::move(shares));
    if (!is_between(sample.shares(), ideal.shares(), allocation)) return ideal;
    return sample;
}

bool satisfies_rm_preconditions(const Profile& c, std::size_t agent, const IdealLottery& replacement) {
    const auto before = classify_objects(c);
    const auto after = classify_objects(c.with_agent(agent, replacement));
    if (before.ed() != after.ed()) return false;
    for (std::size_t a : before.ed()) {
        if (replacement[a] > c.peak(agent, a)) return false;
    }
    return true;
}

std::optional<IdealLottery> rm_perturbation(const Profile& c, std::size_t agent, std::uint64_t seed) {
    const auto cls = classify_objects(c);
    const auto ed = cls.ed();
    const auto es = cls.es();
    if (ed.empty()) throw PreconditionError("rm_perturbation: profile has no excess-demand object");
    if (agent >= c.size()) throw InstanceError("rm_perturbation: agent index out of range");

    Rng rng(seed);
    const Rational almost(static_cast<std::int64_t>(kFractionSteps - 1), static_cast<std::int64_t>(kFractionSteps));
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<Rational> shares(c[agent].shares().begin(), c[agent].shares().end());
        Rational freed(0);
        for (std::size_t a : ed) {
            // A column above 1 stays above 1 if strictly less than its margin is removed.
            const Rational margin = c.column_sum(a) - Rational(1);
            const Rational cap = c.peak(agent, a) < margin ? c.peak(agent, a) : margin * almost;
            const Rational cut = cap * Rational(static_cast<std::int64_t>(rng.below(kFractionSteps + 1)),
                                                static_cast<std::int64_t>(kFractionSteps));
            shares[a] -= cut;
            freed += cut;
        }
        if (freed.is_zero()) continue;
        // Total excess-supply room equals total excess-demand margin, so a
        // proportional spread keeps every excess-supply column below 1.
        Rational room(0);
        for (std::size_t b : es) room += Rational(1) - c.column_sum(b);
        for (std::size_t b : es) shares[b] += freed * (Rational(1) - c.column_sum(b)) / room;
        IdealLottery candidate(std::move(shares));
        if (satisfies_rm_preconditions(c, agent, candidate)) return candidate;
    }
    return std::nullopt;
}

}  // namespace chancesplit
