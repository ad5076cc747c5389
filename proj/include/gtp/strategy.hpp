#pragma once

#include <functional>
#include <map>

#include "gtp/pricing.hpp"
#include "gtp/protocol.hpp"

namespace gtp {

/// The cone Skeptic draws from at the next trial of the given position.
const Cone& trial_cone(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                       std::span<const std::size_t> history);

// ---------------------------------------------------------------------------
// Leaf strategies
// ---------------------------------------------------------------------------

class ZeroStrategy final : public SkepticStrategy {
  public:
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "zero"; }
};

/// Fixed coefficient vector at every trial.
class ConstantCoeffsStrategy final : public SkepticStrategy {
  public:
    explicit ConstantCoeffsStrategy(std::vector<Rational> coefficients);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "constant"; }
    const std::vector<Rational>& coefficients() const { return coefficients_; }

  private:
    std::vector<Rational> coefficients_;
};

/// Coefficients proportional to current capital: base * K. The natural way
/// to express bet-everything and other stake-scaling rules.
class ProportionalCoeffsStrategy final : public SkepticStrategy {
  public:
    explicit ProportionalCoeffsStrategy(std::vector<Rational> base);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "proportional"; }
    const std::vector<Rational>& base() const { return base_; }

  private:
    std::vector<Rational> base_;
};

// ---------------------------------------------------------------------------
// Combinators
// ---------------------------------------------------------------------------

/// Per-trial gamble (e1 F1 + e2 F2) / (e1 + e2), so that on every path
/// K - 1 = (e1 (K1 - 1) + e2 (K2 - 1)) / (e1 + e2) exactly.
class ScaledSumStrategy final : public SkepticStrategy {
  public:
    ScaledSumStrategy(StrategyPtr s1, StrategyPtr s2, Rational e1, Rational e2);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "scaled_sum"; }
    const StrategyPtr& first() const { return s1_; }
    const StrategyPtr& second() const { return s2_; }
    const Rational& weight1() const { return e1_; }
    const Rational& weight2() const { return e2_; }

  private:
    StrategyPtr s1_;
    StrategyPtr s2_;
    Rational e1_;
    Rational e2_;
};

/// Plays the zero gamble for the first n trials, then the inner strategy on
/// the remaining history as if a fresh game had started (capital carries
/// over unchanged, so K_{n+k} here equals the inner K_k in the shifted
/// protocol). Not defined for markov protocols.
class ShiftEmbedStrategy final : public SkepticStrategy {
  public:
    ShiftEmbedStrategy(StrategyPtr inner, std::size_t shift);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "shift_embed"; }
    const StrategyPtr& inner() const { return inner_; }
    std::size_t shift() const { return shift_; }

  private:
    StrategyPtr inner_;
    std::size_t shift_;
};

/// Plays the inner strategy until capital reaches the target, then the zero
/// gamble forever. An absent target disables stopping.
class StopWhenStrategy final : public SkepticStrategy {
  public:
    StopWhenStrategy(StrategyPtr inner, std::optional<Rational> target);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "stop_when"; }
    const StrategyPtr& inner() const { return inner_; }
    const std::optional<Rational>& target() const { return target_; }

  private:
    StrategyPtr inner_;
    std::optional<Rational> target_;
};

/// Which strategy a restart epoch starts with.
/// Uniform families reuse one member at every restart (identical and
/// independent protocols, where the member plays in the shifted protocol);
/// per-state families pick by the outcome preceding the epoch (markov).
class RestartFamily {
  public:
    static RestartFamily uniform(StrategyPtr member);
    static RestartFamily per_state(std::map<std::string, StrategyPtr> members);

    bool is_uniform() const { return uniform_ != nullptr; }
    const StrategyPtr& uniform_member() const;
    const std::map<std::string, StrategyPtr>& state_members() const { return per_state_; }

  private:
    StrategyPtr uniform_;
    std::map<std::string, StrategyPtr> per_state_;
};

/// Epoch ladder: play the current member (scaled by the capital accumulated
/// so far) until the epoch multiplies capital by at least 1/eps, then
/// restart with the next context's member. After k completed epochs the
/// capital is at least (1/eps)^k.
class RestartScaleStrategy final : public SkepticStrategy {
  public:
    RestartScaleStrategy(RestartFamily family, Rational eps);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "restart_scale"; }
    const RestartFamily& family() const { return family_; }
    const Rational& eps() const { return eps_; }

    std::size_t epochs_completed(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                                 std::span<const std::size_t> history) const;

  private:
    RestartFamily family_;
    Rational eps_;
};

/// The restart ladder for a singly generated permutable event: at each epoch
/// boundary the consumed prefix decides (via the residual rule) whether the
/// remaining path can still lie in the event, and the next epoch plays a
/// scaled copy of `s` or of `s_prime` accordingly.
class AlternatingRestartStrategy final : public SkepticStrategy {
  public:
    AlternatingRestartStrategy(StrategyPtr s, StrategyPtr s_prime, Event event, Rational eps);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "alternating_restart"; }
    const StrategyPtr& primary() const { return s_; }
    const StrategyPtr& secondary() const { return s_prime_; }
    const Event& event() const { return event_; }
    const Rational& eps() const { return eps_; }

    std::size_t epochs_completed(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                                 std::span<const std::size_t> history) const;
    /// Per-epoch member selection along a history; true = primary.
    std::vector<bool> epoch_choices(const ProtocolSpec& spec,
                                    std::optional<std::size_t> omega0,
                                    std::span<const std::size_t> history) const;

  private:
    StrategyPtr s_;
    StrategyPtr s_prime_;
    Event event_;
    Rational eps_;
};

/// A strategy for the protocol shifted past `prefix`: it plays the original
/// strategy as if the prefix had already happened. Prudent whenever the
/// original is prudent and its capital after the prefix is at most 1.
class ShiftTransferStrategy final : public SkepticStrategy {
  public:
    ShiftTransferStrategy(StrategyPtr inner, std::vector<std::size_t> prefix,
                          SpecPtr original_spec);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "shift_transfer"; }
    const StrategyPtr& inner() const { return inner_; }
    const std::vector<std::size_t>& prefix() const { return prefix_; }
    const SpecPtr& original_spec() const { return original_spec_; }

  private:
    StrategyPtr inner_;
    std::vector<std::size_t> prefix_;
    SpecPtr original_spec_;
};

/// Plays a price tree's stored hedges scaled by 1/root-price: capital stays
/// at least V(node)/V(root) at every node and reaches at least 1/V(root) on
/// every path the tree's event accepts. Undefined when the root price is 0.
class SuperhedgeStrategy final : public SkepticStrategy {
  public:
    explicit SuperhedgeStrategy(PriceTree tree, std::optional<Event> source = std::nullopt);
    std::vector<Rational> move(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history,
                               const Rational& capital) const override;
    std::string kind() const override { return "superhedge"; }
    const PriceTree& tree() const { return tree_; }
    /// The event the tree was built for, when known (used for serialization).
    const std::optional<Event>& source_event() const { return source_; }

  private:
    PriceTree tree_;
    std::optional<Event> source_;
};

// Factory helpers mirroring the combinator vocabulary.
StrategyPtr zero_strategy();
StrategyPtr constant_coeffs(std::vector<Rational> coefficients);
StrategyPtr proportional_coeffs(std::vector<Rational> base);
StrategyPtr scaled_sum(StrategyPtr s1, StrategyPtr s2, Rational e1, Rational e2);
StrategyPtr shift_embed(StrategyPtr inner, std::size_t shift);
StrategyPtr stop_when(StrategyPtr inner, std::optional<Rational> target);
StrategyPtr restart_scale(RestartFamily family, Rational eps);
StrategyPtr alternating_restart(StrategyPtr s, StrategyPtr s_prime, Event event, Rational eps);
StrategyPtr shift_transfer(StrategyPtr inner, std::vector<std::size_t> prefix,
                           SpecPtr original_spec);
StrategyPtr superhedge_strategy(PriceTree tree, std::optional<Event> source = std::nullopt);

/// Completed epochs of a restart-style strategy along a history (0 for
/// other strategy kinds).
std::size_t restart_epochs_completed(const SkepticStrategy& strategy, const ProtocolSpec& spec,
                                     std::optional<std::size_t> omega0,
                                     std::span<const std::size_t> history);

// ---------------------------------------------------------------------------
// Prudence and evasion machinery
// ---------------------------------------------------------------------------

struct PrudenceReport {
    bool prudent = true;
    std::optional<std::size_t> omega0;      // markov initial state of the violation
    std::vector<std::size_t> violating_path;
    std::size_t violating_step = 0;
    Rational capital;                       // the first negative capital seen
};

/// Exhaustively replays the strategy over every path of the given length
/// (and every initial state, for markov protocols); reports the first
/// violation in depth-first outcome order.
PrudenceReport prudence_check(const SkepticStrategy& strategy, const ProtocolSpec& spec,
                              std::size_t horizon);

/// A length-n prefix along which every single-step payoff of the strategy is
/// <= 0 (built by iterating the evasion outcome), so capital never rises
/// along it. Identical and IndependentSeq protocols only.
std::vector<std::size_t> find_no_gain_prefix(const SkepticStrategy& strategy, std::size_t n,
                                             const ProtocolSpec& spec);

// ---------------------------------------------------------------------------
// Reality policies
// ---------------------------------------------------------------------------

/// Replays the list, then repeats its last outcome. For markov protocols the
/// first element is the initial state and trials continue from the second.
RealityPtr scripted_reality(std::vector<std::size_t> outcomes);
/// Plays the evasion outcome of the announced gamble (lowest-index minimizer).
RealityPtr minimizer_reality();
/// Like the minimizer, restricted to outcomes with a nonzero numeric value.
RealityPtr evader_reality();
/// Draws outcomes from a fixed measure; fully determined by (seed, position).
RealityPtr sampler_reality(ProbabilityVector measure, std::uint64_t seed);

using InteractiveChooseFn =
    std::function<std::size_t(const ProtocolSpec&, std::span<const std::size_t>, const Gamble&)>;
using InteractiveInitialFn = std::function<std::size_t(const ProtocolSpec&)>;

/// Defers every choice to a callback; only used by the play loop.
RealityPtr interactive_reality(InteractiveChooseFn choose, InteractiveInitialFn initial = {});

}  // namespace gtp
