#include "gtp/strategy.hpp"

#include <algorithm>

#include "gtp/errors.hpp"

namespace gtp {

const Cone& trial_cone(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                       std::span<const std::size_t> history) {
    const std::optional<std::size_t> prev =
        history.empty() ? omega0 : std::optional<std::size_t>(history.back());
    return spec.cone_at(history.size() + 1, prev);
}

namespace {

std::vector<Rational> zeros_for(const Cone& cone) {
    return std::vector<Rational>(cone.generators().size(), Rational(0));
}

void require_generator_count(const Cone& cone, std::size_t got, const char* who) {
    if (cone.generators().size() != got) {
        throw InputError(std::string(who) + ": coefficient count does not match the trial cone");
    }
}

}  // namespace

// --------------------------------------------------------------------------
// Leaves
// --------------------------------------------------------------------------

std::vector<Rational> ZeroStrategy::move(const ProtocolSpec& spec,
                                         std::optional<std::size_t> omega0,
                                         std::span<const std::size_t> history,
                                         const Rational&) const {
    return zeros_for(trial_cone(spec, omega0, history));
}

ConstantCoeffsStrategy::ConstantCoeffsStrategy(std::vector<Rational> coefficients)
    : coefficients_(std::move(coefficients)) {
    for (const auto& c : coefficients_) {
        if (c < 0) throw InputError("constant strategy coefficients must be nonnegative");
    }
}

std::vector<Rational> ConstantCoeffsStrategy::move(const ProtocolSpec& spec,
                                                   std::optional<std::size_t> omega0,
                                                   std::span<const std::size_t> history,
                                                   const Rational&) const {
    require_generator_count(trial_cone(spec, omega0, history), coefficients_.size(), "constant");
    return coefficients_;
}

ProportionalCoeffsStrategy::ProportionalCoeffsStrategy(std::vector<Rational> base)
    : base_(std::move(base)) {
    for (const auto& c : base_) {
        if (c < 0) throw InputError("proportional strategy base must be nonnegative");
    }
}

std::vector<Rational> ProportionalCoeffsStrategy::move(const ProtocolSpec& spec,
                                                       std::optional<std::size_t> omega0,
                                                       std::span<const std::size_t> history,
                                                       const Rational& capital) const {
    require_generator_count(trial_cone(spec, omega0, history), base_.size(), "proportional");
    std::vector<Rational> out(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i) out[i] = base_[i] * capital;
    return out;
}

// --------------------------------------------------------------------------
// Combinators
// --------------------------------------------------------------------------

ScaledSumStrategy::ScaledSumStrategy(StrategyPtr s1, StrategyPtr s2, Rational e1, Rational e2)
    : s1_(std::move(s1)), s2_(std::move(s2)), e1_(std::move(e1)), e2_(std::move(e2)) {
    if (!s1_ || !s2_) throw InputError("scaled_sum requires two strategies");
    if (e1_ <= 0 || e2_ <= 0) throw InputError("scaled_sum weights must be positive");
}

std::vector<Rational> ScaledSumStrategy::move(const ProtocolSpec& spec,
                                              std::optional<std::size_t> omega0,
                                              std::span<const std::size_t> history,
                                              const Rational&) const {
    // Each component is consulted with its own private capital.
    const Rational k1 = replay_capitals(*s1_, spec, omega0, history).back();
    const Rational k2 = replay_capitals(*s2_, spec, omega0, history).back();
    const auto c1 = s1_->move(spec, omega0, history, k1);
    const auto c2 = s2_->move(spec, omega0, history, k2);
    if (c1.size() != c2.size()) {
        throw InputError("scaled_sum components disagree on the trial cone");
    }
    const Rational total = e1_ + e2_;
    std::vector<Rational> out(c1.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (e1_ * c1[i] + e2_ * c2[i]) / total;
    }
    return out;
}

ShiftEmbedStrategy::ShiftEmbedStrategy(StrategyPtr inner, std::size_t shift)
    : inner_(std::move(inner)), shift_(shift) {
    if (!inner_) throw InputError("shift_embed requires a strategy");
}

std::vector<Rational> ShiftEmbedStrategy::move(const ProtocolSpec& spec,
                                               std::optional<std::size_t> omega0,
                                               std::span<const std::size_t> history,
                                               const Rational& capital) const {
    if (spec.variant() == ProtocolSpec::Variant::Markov) {
        throw InputError("shift_embed is not defined for markov protocols");
    }
    if (history.size() < shift_) {
        return zeros_for(trial_cone(spec, omega0, history));
    }
    // The first shift_ moves were zero, so our capital equals the inner
    // strategy's capital in the shifted protocol.
    const ProtocolSpec shifted = shifted_spec(spec, shift_);
    return inner_->move(shifted, std::nullopt, history.subspan(shift_), capital);
}

StopWhenStrategy::StopWhenStrategy(StrategyPtr inner, std::optional<Rational> target)
    : inner_(std::move(inner)), target_(std::move(target)) {
    if (!inner_) throw InputError("stop_when requires a strategy");
}

std::vector<Rational> StopWhenStrategy::move(const ProtocolSpec& spec,
                                             std::optional<std::size_t> omega0,
                                             std::span<const std::size_t> history,
                                             const Rational& capital) const {
    // Once capital has reached the target the move is zero forever, so the
    // capital can never fall back below it: reaching the target and having
    // stopped are the same condition.
    if (target_ && capital >= *target_) {
        return zeros_for(trial_cone(spec, omega0, history));
    }
    return inner_->move(spec, omega0, history, capital);
}

RestartFamily RestartFamily::uniform(StrategyPtr member) {
    if (!member) throw InputError("restart family requires a member strategy");
    RestartFamily family;
    family.uniform_ = std::move(member);
    return family;
}

RestartFamily RestartFamily::per_state(std::map<std::string, StrategyPtr> members) {
    if (members.empty()) throw InputError("restart family requires at least one member");
    for (const auto& [label, member] : members) {
        if (!member) throw InputError("restart family member for \"" + label + "\" is missing");
    }
    RestartFamily family;
    family.per_state_ = std::move(members);
    return family;
}

const StrategyPtr& RestartFamily::uniform_member() const {
    if (!uniform_) throw InputError("restart family is not uniform");
    return uniform_;
}

namespace {

// One pass of the restart bookkeeping along a fixed history. The selector
// maps (epoch index, epoch start) to the member strategy for that epoch;
// members play in the protocol viewed from the epoch start with their own
// unit capital, scaled back by the capital accumulated when the epoch began.
struct RestartWalk {
    std::vector<Rational> next_move;
    std::size_t epochs_completed = 0;
    Rational capital = Rational(1);
};

template <typename Selector>
RestartWalk restart_walk(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                         std::span<const std::size_t> history, const Rational& eps,
                         Selector&& select_member) {
    const bool markov = spec.variant() == ProtocolSpec::Variant::Markov;
    const Rational growth = Rational(1) / eps;

    RestartWalk walk;
    std::size_t epoch_start = 0;
    Rational base(1);
    StrategyPtr member = select_member(walk.epochs_completed, epoch_start);

    for (std::size_t i = 0;; ++i) {
        const ProtocolSpec member_spec = markov ? spec : shifted_spec(spec, epoch_start);
        const std::optional<std::size_t> member_omega0 =
            markov ? (epoch_start == 0 ? omega0
                                       : std::optional<std::size_t>(history[epoch_start - 1]))
                   : std::nullopt;
        const auto member_history = history.subspan(epoch_start, i - epoch_start);
        auto coefficients =
            member->move(member_spec, member_omega0, member_history, walk.capital / base);
        for (auto& c : coefficients) c *= base;

        if (i == history.size()) {
            walk.next_move = std::move(coefficients);
            return walk;
        }

        const Cone& cone = trial_cone(spec, omega0, history.subspan(0, i));
        require_generator_count(cone, coefficients.size(), "restart member");
        const Gamble F = cone.combine(coefficients);
        walk.capital += F.payoff(history[i]);

        // Epoch completion is checked after every trial.
        if (walk.capital / base >= growth) {
            ++walk.epochs_completed;
            epoch_start = i + 1;
            base = walk.capital;
            member = select_member(walk.epochs_completed, epoch_start);
        }
    }
}

void require_eps_in_unit_interval(const Rational& eps) {
    if (eps <= 0 || eps >= 1) throw InputError("eps must lie strictly between 0 and 1");
}

}  // namespace

RestartScaleStrategy::RestartScaleStrategy(RestartFamily family, Rational eps)
    : family_(std::move(family)), eps_(std::move(eps)) {
    require_eps_in_unit_interval(eps_);
}

std::vector<Rational> RestartScaleStrategy::move(const ProtocolSpec& spec,
                                                 std::optional<std::size_t> omega0,
                                                 std::span<const std::size_t> history,
                                                 const Rational&) const {
    const bool markov = spec.variant() == ProtocolSpec::Variant::Markov;
    if (!family_.is_uniform() && !markov) {
        throw InputError("a per-state restart family requires a markov protocol");
    }
    auto select = [&](std::size_t, std::size_t epoch_start) -> StrategyPtr {
        if (family_.is_uniform()) return family_.uniform_member();
        const std::size_t state = epoch_start == 0 ? *omega0 : history[epoch_start - 1];
        const std::string& label = spec.space()->label(state);
        const auto it = family_.state_members().find(label);
        if (it == family_.state_members().end()) {
            throw InputError("restart family has no member for state \"" + label + "\"");
        }
        return it->second;
    };
    return restart_walk(spec, omega0, history, eps_, select).next_move;
}

std::size_t RestartScaleStrategy::epochs_completed(const ProtocolSpec& spec,
                                                   std::optional<std::size_t> omega0,
                                                   std::span<const std::size_t> history) const {
    auto select = [&](std::size_t, std::size_t epoch_start) -> StrategyPtr {
        if (family_.is_uniform()) return family_.uniform_member();
        const std::size_t state = epoch_start == 0 ? *omega0 : history[epoch_start - 1];
        return family_.state_members().at(spec.space()->label(state));
    };
    return restart_walk(spec, omega0, history, eps_, select).epochs_completed;
}

AlternatingRestartStrategy::AlternatingRestartStrategy(StrategyPtr s, StrategyPtr s_prime,
                                                       Event event, Rational eps)
    : s_(std::move(s)), s_prime_(std::move(s_prime)), event_(std::move(event)),
      eps_(std::move(eps)) {
    if (!s_ || !s_prime_) throw InputError("alternating_restart requires two strategies");
    require_eps_in_unit_interval(eps_);
    if (!std::holds_alternative<event_class::GeneratedPermutable>(event_.description())) {
        throw InputError("alternating_restart requires a singly generated permutable event");
    }
}

std::vector<Rational> AlternatingRestartStrategy::move(const ProtocolSpec& spec,
                                                       std::optional<std::size_t> omega0,
                                                       std::span<const std::size_t> history,
                                                       const Rational&) const {
    if (spec.variant() == ProtocolSpec::Variant::Markov) {
        throw InputError("alternating_restart is not defined for markov protocols");
    }
    auto select = [&](std::size_t epoch, std::size_t epoch_start) -> StrategyPtr {
        if (epoch == 0) return s_;
        // The consumed prefix decides whether the rest of the path can still
        // lie in the event.
        return residual_in_generated(event_, history.subspan(0, epoch_start)) ? s_ : s_prime_;
    };
    return restart_walk(spec, omega0, history, eps_, select).next_move;
}

std::size_t AlternatingRestartStrategy::epochs_completed(
    const ProtocolSpec& spec, std::optional<std::size_t> omega0,
    std::span<const std::size_t> history) const {
    auto select = [&](std::size_t epoch, std::size_t epoch_start) -> StrategyPtr {
        if (epoch == 0) return s_;
        return residual_in_generated(event_, history.subspan(0, epoch_start)) ? s_ : s_prime_;
    };
    return restart_walk(spec, omega0, history, eps_, select).epochs_completed;
}

std::vector<bool> AlternatingRestartStrategy::epoch_choices(
    const ProtocolSpec& spec, std::optional<std::size_t> omega0,
    std::span<const std::size_t> history) const {
    std::vector<bool> choices;
    auto select = [&](std::size_t epoch, std::size_t epoch_start) -> StrategyPtr {
        const bool primary =
            epoch == 0 || residual_in_generated(event_, history.subspan(0, epoch_start));
        choices.push_back(primary);
        return primary ? s_ : s_prime_;
    };
    restart_walk(spec, omega0, history, eps_, select);
    return choices;
}

ShiftTransferStrategy::ShiftTransferStrategy(StrategyPtr inner, std::vector<std::size_t> prefix,
                                             SpecPtr original_spec)
    : inner_(std::move(inner)), prefix_(std::move(prefix)),
      original_spec_(std::move(original_spec)) {
    if (!inner_) throw InputError("shift_transfer requires a strategy");
    if (!original_spec_) throw InputError("shift_transfer requires the original protocol spec");
    if (original_spec_->variant() == ProtocolSpec::Variant::Markov) {
        throw InputError("shift_transfer is not defined for markov protocols");
    }
    for (std::size_t w : prefix_) {
        if (w >= original_spec_->space()->size()) {
            throw InputError("shift_transfer prefix outcome out of range");
        }
    }
}

std::vector<Rational> ShiftTransferStrategy::move(const ProtocolSpec&,
                                                  std::optional<std::size_t>,
                                                  std::span<const std::size_t> history,
                                                  const Rational&) const {
    std::vector<std::size_t> full(prefix_);
    full.insert(full.end(), history.begin(), history.end());
    const Rational inner_capital =
        replay_capitals(*inner_, *original_spec_, std::nullopt, full).back();
    return inner_->move(*original_spec_, std::nullopt, full, inner_capital);
}

SuperhedgeStrategy::SuperhedgeStrategy(PriceTree tree, std::optional<Event> source)
    : tree_(std::move(tree)), source_(std::move(source)) {
    if (tree_.root_value() == 0) {
        throw InputError(
            "superhedge strategy undefined at root price 0; use the restart construction for "
            "events priced at zero");
    }
}

std::vector<Rational> SuperhedgeStrategy::move(const ProtocolSpec& spec,
                                               std::optional<std::size_t> omega0,
                                               std::span<const std::size_t> history,
                                               const Rational&) const {
    const Cone& cone = trial_cone(spec, omega0, history);
    if (history.size() >= tree_.horizon) {
        return zeros_for(cone);
    }
    const auto& node = tree_.at(history);
    require_generator_count(cone, node.coefficients.size(), "superhedge");
    std::vector<Rational> out(node.coefficients);
    for (auto& c : out) c /= tree_.root_value();
    return out;
}

StrategyPtr zero_strategy() { return std::make_shared<ZeroStrategy>(); }

StrategyPtr constant_coeffs(std::vector<Rational> coefficients) {
    return std::make_shared<ConstantCoeffsStrategy>(std::move(coefficients));
}

StrategyPtr proportional_coeffs(std::vector<Rational> base) {
    return std::make_shared<ProportionalCoeffsStrategy>(std::move(base));
}

StrategyPtr scaled_sum(StrategyPtr s1, StrategyPtr s2, Rational e1, Rational e2) {
    return std::make_shared<ScaledSumStrategy>(std::move(s1), std::move(s2), std::move(e1),
                                               std::move(e2));
}

StrategyPtr shift_embed(StrategyPtr inner, std::size_t shift) {
    return std::make_shared<ShiftEmbedStrategy>(std::move(inner), shift);
}

StrategyPtr stop_when(StrategyPtr inner, std::optional<Rational> target) {
    return std::make_shared<StopWhenStrategy>(std::move(inner), std::move(target));
}

StrategyPtr restart_scale(RestartFamily family, Rational eps) {
    return std::make_shared<RestartScaleStrategy>(std::move(family), std::move(eps));
}

StrategyPtr alternating_restart(StrategyPtr s, StrategyPtr s_prime, Event event, Rational eps) {
    return std::make_shared<AlternatingRestartStrategy>(std::move(s), std::move(s_prime),
                                                        std::move(event), std::move(eps));
}

StrategyPtr shift_transfer(StrategyPtr inner, std::vector<std::size_t> prefix,
                           SpecPtr original_spec) {
    return std::make_shared<ShiftTransferStrategy>(std::move(inner), std::move(prefix),
                                                   std::move(original_spec));
}

StrategyPtr superhedge_strategy(PriceTree tree, std::optional<Event> source) {
    return std::make_shared<SuperhedgeStrategy>(std::move(tree), std::move(source));
}

std::size_t restart_epochs_completed(const SkepticStrategy& strategy, const ProtocolSpec& spec,
                                     std::optional<std::size_t> omega0,
                                     std::span<const std::size_t> history) {
    if (const auto* r = dynamic_cast<const RestartScaleStrategy*>(&strategy)) {
        return r->epochs_completed(spec, omega0, history);
    }
    if (const auto* a = dynamic_cast<const AlternatingRestartStrategy*>(&strategy)) {
        return a->epochs_completed(spec, omega0, history);
    }
    return 0;
}

// --------------------------------------------------------------------------
// Prudence and evasion machinery
// --------------------------------------------------------------------------

namespace {

constexpr std::size_t kWalkBudget = 1000000;

bool prudence_walk(const SkepticStrategy& strategy, const ProtocolSpec& spec,
                   std::optional<std::size_t> omega0, std::vector<std::size_t>& history,
                   const Rational& capital, std::size_t horizon, PrudenceReport& report) {
    if (capital < 0) {
        report.prudent = false;
        report.omega0 = omega0;
        report.violating_path = history;
        report.violating_step = history.size();
        report.capital = capital;
        return false;
    }
    if (history.size() == horizon) return true;
    const auto coefficients = strategy.move(spec, omega0, history, capital);
    const Cone& cone = trial_cone(spec, omega0, history);
    require_generator_count(cone, coefficients.size(), "prudence check");
    for (const auto& c : coefficients) {
        if (c < 0) throw IllegalMoveError("strategy emitted a negative coefficient");
    }
    const Gamble F = cone.combine(coefficients);
    for (std::size_t w = 0; w < spec.space()->size(); ++w) {
        history.push_back(w);
        const bool ok =
            prudence_walk(strategy, spec, omega0, history, capital + F.payoff(w), horizon, report);
        history.pop_back();
        if (!ok) return false;
    }
    return true;
}

}  // namespace

PrudenceReport prudence_check(const SkepticStrategy& strategy, const ProtocolSpec& spec,
                              std::size_t horizon) {
    const std::size_t m = spec.space()->size();
    std::size_t nodes = 1;
    for (std::size_t i = 0; i < horizon; ++i) {
        nodes *= m;
        if (nodes > kWalkBudget) throw BudgetError("prudence walk exceeds the node budget");
    }

    PrudenceReport report;
    std::vector<std::size_t> history;
    if (spec.variant() == ProtocolSpec::Variant::Markov) {
        for (std::size_t w0 = 0; w0 < m; ++w0) {
            if (!prudence_walk(strategy, spec, w0, history, Rational(1), horizon, report)) {
                return report;
            }
        }
        return report;
    }
    prudence_walk(strategy, spec, std::nullopt, history, Rational(1), horizon, report);
    return report;
}

std::vector<std::size_t> find_no_gain_prefix(const SkepticStrategy& strategy, std::size_t n,
                                             const ProtocolSpec& spec) {
    if (spec.variant() == ProtocolSpec::Variant::Markov) {
        throw InputError("no-gain prefixes are defined for identical and independent protocols");
    }
    std::vector<std::size_t> prefix;
    Rational capital(1);
    for (std::size_t k = 0; k < n; ++k) {
        const auto coefficients = strategy.move(spec, std::nullopt, prefix, capital);
        const Cone& cone = spec.cone_at(k + 1);
        require_generator_count(cone, coefficients.size(), "no-gain prefix");
        const Gamble F = cone.combine(coefficients);
        const std::size_t w = evasion_outcome(cone, F);
        prefix.push_back(w);
        capital += F.payoff(w);
    }
    return prefix;
}

// --------------------------------------------------------------------------
// Reality policies
// --------------------------------------------------------------------------

namespace {

class ScriptedReality final : public RealityStrategy {
  public:
    explicit ScriptedReality(std::vector<std::size_t> outcomes) : outcomes_(std::move(outcomes)) {
        if (outcomes_.empty()) throw InputError("scripted reality requires at least one outcome");
    }

    std::size_t initial_state(const ProtocolSpec&, std::mt19937_64&) const override {
        return outcomes_.front();
    }

    std::size_t choose(const ProtocolSpec& spec, std::optional<std::size_t>,
                       std::span<const std::size_t> history, const Gamble&,
                       std::mt19937_64&) const override {
        std::size_t position = history.size();
        if (spec.variant() == ProtocolSpec::Variant::Markov) ++position;  // slot 0 was omega0
        return outcomes_[std::min(position, outcomes_.size() - 1)];
    }

    std::string kind() const override { return "scripted"; }

    const std::vector<std::size_t>& outcomes() const { return outcomes_; }

  private:
    std::vector<std::size_t> outcomes_;
};

class MinimizerReality final : public RealityStrategy {
  public:
    explicit MinimizerReality(bool require_nonzero) : require_nonzero_(require_nonzero) {}

    std::size_t choose(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                       std::span<const std::size_t> history, const Gamble& announced,
                       std::mt19937_64&) const override {
        const Cone& cone = trial_cone(spec, omega0, history);
        return evasion_outcome(cone, announced, require_nonzero_);
    }

    std::string kind() const override { return require_nonzero_ ? "evader" : "minimizer"; }

  private:
    bool require_nonzero_;
};

class SamplerReality final : public RealityStrategy {
  public:
    SamplerReality(ProbabilityVector measure, std::uint64_t seed)
        : measure_(std::move(measure)), seed_(seed) {}

    std::size_t initial_state(const ProtocolSpec&, std::mt19937_64&) const override {
        return draw(0);
    }

    std::size_t choose(const ProtocolSpec& spec, std::optional<std::size_t>,
                       std::span<const std::size_t> history, const Gamble&,
                       std::mt19937_64&) const override {
        std::size_t position = history.size();
        if (spec.variant() == ProtocolSpec::Variant::Markov) ++position;
        return draw(position);
    }

    std::string kind() const override { return "sampler"; }

    const ProbabilityVector& measure() const { return measure_; }
    std::uint64_t seed() const { return seed_; }

  private:
    // The draw at a fixed position depends only on (seed, position), so
    // traces replay bit-exactly regardless of who consumed the run's rng.
    std::size_t draw(std::size_t position) const {
        std::mt19937_64 engine(seed_);
        engine.discard(position);
        const Rational u = Rational(Integer(engine())) / Rational(Integer(1) << 64);
        Rational acc(0);
        for (std::size_t i = 0; i + 1 < measure_.size(); ++i) {
            acc += measure_.weight(i);
            if (u < acc) return i;
        }
        return measure_.size() - 1;
    }

    ProbabilityVector measure_;
    std::uint64_t seed_;
};

class InteractiveReality final : public RealityStrategy {
  public:
    InteractiveReality(InteractiveChooseFn choose, InteractiveInitialFn initial)
        : choose_(std::move(choose)), initial_(std::move(initial)) {
        if (!choose_) throw InputError("interactive reality requires a callback");
    }

    std::size_t initial_state(const ProtocolSpec& spec, std::mt19937_64& rng) const override {
        if (initial_) return initial_(spec);
        return RealityStrategy::initial_state(spec, rng);
    }

    std::size_t choose(const ProtocolSpec& spec, std::optional<std::size_t>,
                       std::span<const std::size_t> history, const Gamble& announced,
                       std::mt19937_64&) const override {
        return choose_(spec, history, announced);
    }

    std::string kind() const override { return "interactive"; }

  private:
    InteractiveChooseFn choose_;
    InteractiveInitialFn initial_;
};

}  // namespace

RealityPtr scripted_reality(std::vector<std::size_t> outcomes) {
    return std::make_shared<ScriptedReality>(std::move(outcomes));
}

RealityPtr minimizer_reality() { return std::make_shared<MinimizerReality>(false); }

RealityPtr evader_reality() { return std::make_shared<MinimizerReality>(true); }

RealityPtr sampler_reality(ProbabilityVector measure, std::uint64_t seed) {
    return std::make_shared<SamplerReality>(std::move(measure), seed);
}

RealityPtr interactive_reality(InteractiveChooseFn choose, InteractiveInitialFn initial) {
    return std::make_shared<InteractiveReality>(std::move(choose), std::move(initial));
}

}  // namespace gtp
