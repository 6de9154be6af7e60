#include "chancesplit/mechanisms.hpp"

#include <stdexcept>

#include "chancesplit/errors.hpp"
#include "chancesplit/uniform_rule.hpp"

namespace chancesplit {

namespace {

void require_size(const Profile& c, const Sequence& seq, const char* what) {
    if (seq.size() != c.size()) {
        throw InstanceError(std::string(what) + " sequence has length " + std::to_string(seq.size()) +
                            ", expected " + std::to_string(c.size()));
    }
}

void require_three(const Profile& c, std::string_view mechanism) {
    if (c.size() != 3) {
        throw UnsupportedInstance(std::string(mechanism) + " is defined only for three agents and three objects (got n=" +
                                  std::to_string(c.size()) + ")");
    }
}

// Each agent in `order` takes min(remaining, peak) of every object; remaining
// supplies are reduced by what was actually taken.
void serial_take(const Profile& c, const std::vector<std::size_t>& order, std::vector<Rational>& remaining, Matrix& w) {
    for (std::size_t agent : order) {
        for (std::size_t a = 0; a < c.size(); ++a) {
            const Rational take = min(remaining[a], c.peak(agent, a));
            w.at(agent, a) = take;
            remaining[a] -= take;
        }
    }
}

}  // namespace

PartialFill PartialFill::from_matrix(Matrix w) {
    const std::size_t n = w.size();
    PartialFill state;
    state.tank_remaining.reserve(n);
    state.bucket_free.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            if (w.at(i, a).sign() < 0) throw PreconditionError("partial fill has a negative entry");
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        Rational tank = Rational(1) - w.column_sum(k);
        Rational bucket = Rational(1) - w.row_sum(k);
        if (tank.sign() < 0) throw PreconditionError("object " + std::to_string(k) + " is over-allocated");
        if (bucket.sign() < 0) throw PreconditionError("agent " + std::to_string(k) + " is over-filled");
        state.tank_remaining.push_back(std::move(tank));
        state.bucket_free.push_back(std::move(bucket));
    }
    state.w = std::move(w);
    return state;
}

std::string_view mechanism_name(MechanismKind kind) {
    switch (kind) {
        case MechanismKind::Urc: return "urc";
        case MechanismKind::Sdc: return "sdc";
        case MechanismKind::Pdc: return "pdc";
        case MechanismKind::EqualDivision: return "equal";
        case MechanismKind::Except: return "except";
        case MechanismKind::Me: return "me";
        case MechanismKind::Meu: return "meu";
    }
    return "?";
}

MechanismKind parse_mechanism_kind(std::string_view name) {
    for (auto kind : {MechanismKind::Urc, MechanismKind::Sdc, MechanismKind::Pdc, MechanismKind::EqualDivision,
                      MechanismKind::Except, MechanismKind::Me, MechanismKind::Meu}) {
        if (mechanism_name(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown mechanism '" + std::string(name) +
                                "' (expected urc, sdc, pdc, equal, except, me, meu)");
}

std::string describe(const MechanismId& id) {
    std::string out(mechanism_name(id.kind));
    auto join = [](const Sequence& s) {
        std::string text;
        for (std::size_t k = 0; k < s.size(); ++k) text += (k ? "," : "") + std::to_string(s[k]);
        return text;
    };
    if (id.alpha) out += " alpha=" + join(*id.alpha);
    if (id.beta) out += " beta=" + join(*id.beta);
    return out;
}

PartialFill urc_phase1(const Profile& c) {
    const std::size_t n = c.size();
    const auto cls = classify_objects(c);
    Matrix w = c.as_matrix();
    for (std::size_t a : cls.ed()) {
        const auto shares = uniform_rule(PeakVector{c.column(a), Rational(1)});
        for (std::size_t i = 0; i < n; ++i) w.at(i, a) = shares[i];
    }
    return PartialFill::from_matrix(std::move(w));
}

RandomMatching phase2_fill(PartialFill state, const Sequence& alpha, const Sequence& beta) {
    const std::size_t n = state.w.size();
    if (alpha.size() != n || beta.size() != n) throw InstanceError("phase2_fill: sequence length mismatch");
    if (state.tank_remaining.size() != n || state.bucket_free.size() != n) {
        throw PreconditionError("phase2_fill: slack vectors do not match the matrix size");
    }
    Rational tanks(0);
    Rational buckets(0);
    for (std::size_t k = 0; k < n; ++k) {
        if (state.tank_remaining[k].sign() < 0 || state.bucket_free[k].sign() < 0) {
            throw PreconditionError("phase2_fill: negative slack");
        }
        tanks += state.tank_remaining[k];
        buckets += state.bucket_free[k];
    }
    if (tanks != buckets) {
        throw PreconditionError("phase2_fill: slack imbalance (tanks hold " + tanks.str() + ", buckets can take " +
                                buckets.str() + ")");
    }

    std::size_t t = 0;
    std::size_t s = 0;
    while (t < n) {
        const std::size_t agent = alpha[t];
        if (state.bucket_free[agent].is_zero()) {
            ++t;
            continue;
        }
        // Balanced slack means some tank still holds liquid.
        while (s < n && state.tank_remaining[beta[s]].is_zero()) ++s;
        if (s == n) throw PreconditionError("phase2_fill: tanks exhausted before buckets were full");
        const std::size_t object = beta[s];
        const Rational pour = min(state.bucket_free[agent], state.tank_remaining[object]);
        state.w.at(agent, object) += pour;
        state.bucket_free[agent] -= pour;
        state.tank_remaining[object] -= pour;
    }
    return RandomMatching(std::move(state.w));
}

RandomMatching urc(const Profile& c, const Sequence& alpha, const Sequence& beta) {
    require_size(c, alpha, "agent");
    require_size(c, beta, "object");
    return phase2_fill(urc_phase1(c), alpha, beta);
}

RandomMatching sdc(const Profile& c, const Sequence& alpha, const Sequence& beta) {
    require_size(c, alpha, "agent");
    require_size(c, beta, "object");
    Matrix w(c.size());
    std::vector<Rational> remaining(c.size(), Rational(1));
    serial_take(c, alpha.mapping(), remaining, w);
    return phase2_fill(PartialFill::from_matrix(std::move(w)), alpha, beta);
}

RandomMatching pdc(const Profile& c, const Sequence& alpha, const Sequence& beta) {
    require_size(c, alpha, "agent");
    require_size(c, beta, "object");
    const auto cls = classify_objects(c);
    Matrix w = c.as_matrix();
    for (std::size_t a : cls.ed()) {
        const Rational total = c.column_sum(a);
        for (std::size_t i = 0; i < c.size(); ++i) w.at(i, a) = c.peak(i, a) / total;
    }
    return phase2_fill(PartialFill::from_matrix(std::move(w)), alpha, beta);
}

RandomMatching equal_division(const Profile& c) { return RandomMatching::constant(c.size()); }

RandomMatching except_mech(const Profile& c) {
    require_three(c, "except");
    Matrix w(3);
    std::vector<Rational> remaining(3);
    for (std::size_t a = 0; a < 3; ++a) {
        w.at(0, a) = c.peak(0, a);
        remaining[a] = Rational(1) - c.peak(0, a);
    }
    const bool first_is_uniform = c[0] == IdealLottery::uniform(3);
    const std::vector<std::size_t> order = first_is_uniform ? std::vector<std::size_t>{1, 2}
                                                            : std::vector<std::size_t>{2, 1};
    serial_take(c, order, remaining, w);
    const Sequence alpha({0, order[0], order[1]});
    return phase2_fill(PartialFill::from_matrix(std::move(w)), alpha, Sequence::identity(3));
}

RandomMatching me_mech(const Profile& c) {
    require_three(c, "me");
    const auto ed = classify_objects(c).ed();
    Matrix m(3);
    if (ed == std::vector<std::size_t>{0}) {
        m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = Rational(1);
    } else {
        m.at(0, 1) = m.at(1, 0) = m.at(2, 2) = Rational(1);
    }
    return RandomMatching(std::move(m));
}

const Profile& meu_special_profile() {
    static const Profile e = Profile::from_rows({
        {Rational(2, 3), Rational(1, 3), Rational(0)},
        {Rational(1, 3), Rational(2, 3), Rational(0)},
        {Rational(1, 3), Rational(1, 3), Rational(1, 3)},
    });
    return e;
}

const RandomMatching& meu_special_outcome() {
    static const RandomMatching outcome = RandomMatching::from_rows({
        {Rational(2, 3), Rational(0), Rational(1, 3)},
        {Rational(0), Rational(2, 3), Rational(1, 3)},
        {Rational(1, 3), Rational(1, 3), Rational(1, 3)},
    });
    return outcome;
}

RandomMatching meu_mech(const Profile& c) {
    require_three(c, "meu");
    if (c == meu_special_profile()) return meu_special_outcome();
    return urc(c, Sequence::identity(3), Sequence::identity(3));
}

RandomMatching run_mechanism(const MechanismId& id, const Profile& c) {
    const Sequence alpha = id.alpha.value_or(Sequence::identity(c.size()));
    const Sequence beta = id.beta.value_or(Sequence::identity(c.size()));
    switch (id.kind) {
        case MechanismKind::Urc: return urc(c, alpha, beta);
        case MechanismKind::Sdc: return sdc(c, alpha, beta);
        case MechanismKind::Pdc: return pdc(c, alpha, beta);
        case MechanismKind::EqualDivision: return equal_division(c);
        case MechanismKind::Except: return except_mech(c);
        case MechanismKind::Me: return me_mech(c);
        case MechanismKind::Meu: return meu_mech(c);
    }
    throw std::invalid_argument("unknown mechanism kind");
}

}  // namespace chancesplit
