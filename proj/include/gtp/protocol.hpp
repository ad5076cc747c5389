#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gtp/cone.hpp"
#include "gtp/events.hpp"

namespace gtp {

class ProtocolSpec;
using SpecPtr = std::shared_ptr<const ProtocolSpec>;

/// Which cone Skeptic draws from at each trial.
///
/// Identical:      one fixed cone for every trial.
/// IndependentSeq: a cone per trial index, fixed before play; a finite list
///                 is extended by repeating its last element.
/// Markov:         a cone per outcome, selected by the previous outcome
///                 (Reality announces the initial state before trial 1).
///
/// Every referenced cone must be coherent and live over the spec's space.
class ProtocolSpec {
  public:
    enum class Variant { Identical, IndependentSeq, Markov };

    static ProtocolSpec identical(SpacePtr space, Cone cone);
    static ProtocolSpec independent(SpacePtr space, std::vector<Cone> cones);
    static ProtocolSpec markov(SpacePtr space, std::map<std::string, Cone> cones);

    Variant variant() const { return variant_; }
    const SpacePtr& space() const { return space_; }
    const std::vector<Cone>& cones() const { return cones_; }
    std::optional<std::size_t> horizon_hint;

    /// The cone for trial n (n >= 1). `prev` is the outcome preceding the
    /// trial and must be present exactly when the variant is Markov.
    const Cone& cone_at(std::size_t n, std::optional<std::size_t> prev = std::nullopt) const;

  private:
    ProtocolSpec(Variant variant, SpacePtr space, std::vector<Cone> cones);

    Variant variant_;
    SpacePtr space_;
    // Identical: one cone. IndependentSeq: the explicit list. Markov: one
    // cone per outcome, indexed like the space.
    std::vector<Cone> cones_;
};

/// The IndependentSeq (or Identical) protocol viewed from trial n+1 onwards.
ProtocolSpec shifted_spec(const ProtocolSpec& spec, std::size_t n);

/// Immutable game position: history, capital and the prudence flag.
/// Capital starts at 1 and evolves only through step().
struct GameState {
    std::optional<std::size_t> omega0;  // present iff Markov
    std::vector<std::size_t> history;
    Rational capital = Rational(1);
    bool prudence_floor_violated = false;

    std::size_t next_trial() const { return history.size() + 1; }
    std::optional<std::size_t> prev_outcome() const;

    static GameState initial(const ProtocolSpec& spec, std::optional<std::size_t> omega0);
};

/// One accepted trial: K_n = K_{n-1} + F_n(omega_n).
/// Skeptic's move is recorded both as generator coefficients and by its
/// realized payoff.
struct TraceStep {
    std::size_t n = 0;
    std::vector<Rational> coefficients;
    Rational payoff;
    std::size_t omega = 0;
    Rational capital;
    std::optional<Membership> membership;  // annotation against a supplied event
};

struct Trace {
    SpecPtr spec;
    std::optional<std::size_t> omega0;
    std::vector<TraceStep> steps;
    bool valid = true;
    std::string error;  // set when a run aborted

    Rational final_capital() const {
        return steps.empty() ? Rational(1) : steps.back().capital;
    }
};

/// Plays one trial: verifies (by the membership LP) that F belongs to the
/// trial's cone, extends the history and applies the capital update.
/// Throws IllegalMoveError for a gamble outside the cone.
GameState step(const GameState& state, const ProtocolSpec& spec, const Gamble& F,
               std::size_t omega);

/// A Skeptic strategy: a rule mapping the visible information (spec, initial
/// state for Markov, history so far and the strategy's own current capital)
/// to nonnegative coefficients over the current trial's cone generators.
class SkepticStrategy {
  public:
    virtual ~SkepticStrategy() = default;
    virtual std::vector<Rational> move(const ProtocolSpec& spec,
                                       std::optional<std::size_t> omega0,
                                       std::span<const std::size_t> history,
                                       const Rational& capital) const = 0;
    virtual std::string kind() const = 0;
};

using StrategyPtr = std::shared_ptr<const SkepticStrategy>;

/// A Reality policy. Minimizing policies may consult the just-announced
/// gamble; sampling policies draw from the run's seeded generator.
class RealityStrategy {
  public:
    virtual ~RealityStrategy() = default;
    /// The initial state for Markov play. Defaults to the first outcome.
    virtual std::size_t initial_state(const ProtocolSpec& spec, std::mt19937_64& rng) const;
    virtual std::size_t choose(const ProtocolSpec& spec, std::optional<std::size_t> omega0,
                               std::span<const std::size_t> history, const Gamble& announced,
                               std::mt19937_64& rng) const = 0;
    virtual std::string kind() const = 0;
};

using RealityPtr = std::shared_ptr<const RealityStrategy>;

/// Runs N alternating moves (Skeptic announces a gamble, Reality an outcome,
/// each seeing all prior moves). Illegal moves and strategy failures abort
/// with a partial trace flagged invalid rather than throwing.
Trace run(const SpecPtr& spec, const SkepticStrategy& skeptic, const RealityStrategy& reality,
          std::size_t trials, std::uint64_t seed = 0,
          const std::optional<Event>& annotate = std::nullopt);

/// Replays a strategy's own game along a fixed history; returns K_0..K_n.
/// Used by combinators that need a component strategy's private capital.
std::vector<Rational> replay_capitals(const SkepticStrategy& strategy, const ProtocolSpec& spec,
                                      std::optional<std::size_t> omega0,
                                      std::span<const std::size_t> history);

}  // namespace gtp
