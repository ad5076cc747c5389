#include "gtp/protocol.hpp"

#include "gtp/errors.hpp"

namespace gtp {

ProtocolSpec::ProtocolSpec(Variant variant, SpacePtr space, std::vector<Cone> cones)
    : variant_(variant), space_(std::move(space)), cones_(std::move(cones)) {
    if (!space_) throw InputError("protocol spec requires an outcome space");
    if (cones_.empty()) throw InputError("protocol spec requires at least one cone");
    for (const auto& cone : cones_) {
        require_same_space(space_, cone.space(), "protocol cone");
        require_coherent(cone);
    }
}

ProtocolSpec ProtocolSpec::identical(SpacePtr space, Cone cone) {
    std::vector<Cone> cones;
    cones.push_back(std::move(cone));
    return ProtocolSpec(Variant::Identical, std::move(space), std::move(cones));
}

ProtocolSpec ProtocolSpec::independent(SpacePtr space, std::vector<Cone> cones) {
    return ProtocolSpec(Variant::IndependentSeq, std::move(space), std::move(cones));
}

ProtocolSpec ProtocolSpec::markov(SpacePtr space, std::map<std::string, Cone> cones) {
    std::vector<Cone> by_index;
    for (std::size_t i = 0; i < space->size(); ++i) {
        auto it = cones.find(space->label(i));
        if (it == cones.end()) {
            throw InputError("markov spec must supply a cone for outcome \"" + space->label(i) +
                             "\"");
        }
        by_index.push_back(it->second);
    }
    if (cones.size() != space->size()) {
        throw InputError("markov spec has a cone for an unknown outcome");
    }
    return ProtocolSpec(Variant::Markov, std::move(space), std::move(by_index));
}

const Cone& ProtocolSpec::cone_at(std::size_t n, std::optional<std::size_t> prev) const {
    if (n == 0) throw InputError("trials are numbered from 1");
    switch (variant_) {
        case Variant::Identical:
            return cones_.front();
        case Variant::IndependentSeq:
            // A finite list stands for itself extended by its last element.
            return cones_[std::min(n - 1, cones_.size() - 1)];
        case Variant::Markov:
            if (!prev) throw InputError("markov cone lookup requires the previous outcome");
            if (*prev >= cones_.size()) throw InputError("previous outcome out of range");
            return cones_[*prev];
    }
    throw InternalError("unreachable protocol variant");
}

ProtocolSpec shifted_spec(const ProtocolSpec& spec, std::size_t n) {
    switch (spec.variant()) {
        case ProtocolSpec::Variant::Identical:
            return spec;
        case ProtocolSpec::Variant::IndependentSeq: {
            const auto& cones = spec.cones();
            std::vector<Cone> rest(cones.begin() + std::min(n, cones.size() - 1), cones.end());
            return ProtocolSpec::independent(spec.space(), std::move(rest));
        }
        case ProtocolSpec::Variant::Markov:
            throw InputError("markov protocols cannot be shifted");
    }
    throw InternalError("unreachable protocol variant");
}

std::optional<std::size_t> GameState::prev_outcome() const {
    if (!history.empty()) return history.back();
    return omega0;
}

GameState GameState::initial(const ProtocolSpec& spec, std::optional<std::size_t> omega0) {
    if (spec.variant() == ProtocolSpec::Variant::Markov) {
        if (!omega0) throw InputError("markov play requires an initial state");
        if (*omega0 >= spec.space()->size()) throw InputError("initial state out of range");
    } else if (omega0) {
        throw InputError("only markov play takes an initial state");
    }
    GameState state;
    state.omega0 = omega0;
    return state;
}

GameState step(const GameState& state, const ProtocolSpec& spec, const Gamble& F,
               std::size_t omega) {
    if (omega >= spec.space()->size()) throw InputError("outcome index out of range");
    const Cone& cone = spec.cone_at(state.next_trial(), state.prev_outcome());
    if (!cone_contains(cone, F)) {
        throw IllegalMoveError("gamble is not a member of the cone for trial " +
                               std::to_string(state.next_trial()));
    }
    GameState next = state;
    next.history.push_back(omega);
    next.capital = state.capital + F.payoff(omega);
    if (next.capital < 0) next.prudence_floor_violated = true;
    return next;
}

std::size_t RealityStrategy::initial_state(const ProtocolSpec&, std::mt19937_64&) const {
    return 0;
}

namespace {

void validate_coefficients(const Cone& cone, const std::vector<Rational>& coefficients) {
    if (coefficients.size() != cone.generators().size()) {
        throw IllegalMoveError("coefficient count does not match the trial cone");
    }
    for (const auto& c : coefficients) {
        if (c < 0) throw IllegalMoveError("strategy emitted a negative coefficient");
    }
}

}  // namespace

Trace run(const SpecPtr& spec, const SkepticStrategy& skeptic, const RealityStrategy& reality,
          std::size_t trials, std::uint64_t seed, const std::optional<Event>& annotate) {
    if (!spec) throw InputError("run requires a protocol spec");
    if (annotate) require_same_space(spec->space(), annotate->space(), "trace annotation");

    std::mt19937_64 rng(seed);
    Trace trace;
    trace.spec = spec;

    std::optional<std::size_t> omega0;
    if (spec->variant() == ProtocolSpec::Variant::Markov) {
        omega0 = reality.initial_state(*spec, rng);
    }
    trace.omega0 = omega0;

    GameState state = GameState::initial(*spec, omega0);
    for (std::size_t n = 1; n <= trials; ++n) {
        TraceStep record;
        record.n = n;
        try {
            const Cone& cone = spec->cone_at(n, state.prev_outcome());
            record.coefficients = skeptic.move(*spec, omega0, state.history, state.capital);
            validate_coefficients(cone, record.coefficients);
            const Gamble F = cone.combine(record.coefficients);
            record.omega = reality.choose(*spec, omega0, state.history, F, rng);
            state = step(state, *spec, F, record.omega);
            record.payoff = F.payoff(record.omega);
            record.capital = state.capital;
            if (annotate) {
                record.membership = membership_prefix(*annotate, state.history);
            }
        } catch (const Error& e) {
            trace.valid = false;
            trace.error = std::string(e.what()) + " (trial " + std::to_string(n) + ")";
            return trace;
        }
        trace.steps.push_back(std::move(record));
    }
    return trace;
}

std::vector<Rational> replay_capitals(const SkepticStrategy& strategy, const ProtocolSpec& spec,
                                      std::optional<std::size_t> omega0,
                                      std::span<const std::size_t> history) {
    std::vector<Rational> capitals;
    capitals.reserve(history.size() + 1);
    capitals.emplace_back(1);
    for (std::size_t k = 0; k < history.size(); ++k) {
        const auto prefix = history.subspan(0, k);
        const auto coefficients = strategy.move(spec, omega0, prefix, capitals.back());
        const std::optional<std::size_t> prev =
            k > 0 ? std::optional<std::size_t>(history[k - 1]) : omega0;
        const Cone& cone = spec.cone_at(k + 1, prev);
        validate_coefficients(cone, coefficients);
        const Gamble F = cone.combine(coefficients);
        capitals.push_back(capitals.back() + F.payoff(history[k]));
    }
    return capitals;
}

}  // namespace gtp
