#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gtp/gamble.hpp"

namespace gtp {

/// Knowledge about an infinite-path event after seeing a finite prefix.
/// In:  every infinite extension of the prefix lies in the event.
/// Out: no extension does. Otherwise Undetermined.
enum class Membership { In, Out, Undetermined };

enum class ClosureKind { Tail, WeaklyInvariant, Invariant, Permutable };

class Event;

namespace event_class {

/// Paths whose first `horizon` outcomes form a word in `accepted`.
struct Cylinder {
    std::size_t horizon;
    std::set<std::vector<std::size_t>> accepted;
};

/// Every term lies in `allowed`.
struct EveryTermIn {
    std::set<std::size_t> allowed;
};

/// All but finitely many terms equal `constant`.
struct AllButFinitelyEqual {
    std::size_t constant;
};

/// Infinitely many terms lie in `targets`.
struct InfinitelyOften {
    std::set<std::size_t> targets;
};

/// `outcome` occurs exactly `count` times and no term lies in `forbidden`.
struct CountExactly {
    std::size_t outcome;
    std::size_t count;
    std::set<std::size_t> forbidden;
};

/// The permutable event generated by the eventually-constant sequence
/// head . tail_constant^inf: all sequences obtained by permuting finite
/// initial segments of the generator.
struct GeneratedPermutable {
    std::vector<std::size_t> head;
    std::size_t tail_constant;
};

struct Complement {
    std::shared_ptr<const Event> inner;
};

}  // namespace event_class

using EventDescription =
    std::variant<event_class::Cylinder, event_class::EveryTermIn,
                 event_class::AllButFinitelyEqual, event_class::InfinitelyOften,
                 event_class::CountExactly, event_class::GeneratedPermutable,
                 event_class::Complement>;

/// An event (a subset of the space of infinite outcome sequences) drawn from
/// the decidable catalogue above. Immutable after construction.
class Event {
  public:
    Event(SpacePtr space, EventDescription description);

    static Event cylinder(SpacePtr space, std::size_t horizon,
                          const std::vector<std::vector<std::string>>& accepted);
    static Event every_term_in(SpacePtr space, const std::vector<std::string>& allowed);
    static Event all_but_finitely_equal(SpacePtr space, const std::string& constant);
    static Event infinitely_often(SpacePtr space, const std::vector<std::string>& targets);
    static Event count_exactly(SpacePtr space, const std::string& outcome, std::size_t count,
                               const std::vector<std::string>& forbidden);
    static Event generated(SpacePtr space, const std::vector<std::string>& head,
                           const std::string& tail_constant);

    const SpacePtr& space() const { return space_; }
    const EventDescription& description() const { return description_; }

    /// Hand-verified structural flag for this class and parameters; the
    /// closure refuter can independently try to refute it.
    bool claims(ClosureKind kind) const;

  private:
    SpacePtr space_;
    EventDescription description_;
};

std::vector<std::size_t> to_outcome_indices(const OutcomeSpace& space,
                                            std::span<const std::string> labels);

Membership membership_prefix(const Event& event, std::span<const std::size_t> prefix);
Membership membership_prefix(const Event& event, const std::vector<std::string>& prefix);

/// Involution; cylinder complements stay cylinders and double complements
/// normalize away.
Event complement_event(const Event& event);

/// The image of the event under n applications of the shift (drop-first)
/// operator. Supported for Cylinder, EveryTermIn, AllButFinitelyEqual and
/// InfinitelyOften; the remaining classes leave the catalogue.
Event shift_event(const Event& event, std::size_t n);

/// Exact membership of the eventually-constant path head . tail^inf.
bool path_in_event(const Event& event, std::span<const std::size_t> head, std::size_t tail);

/// For a singly generated permutable event and a prefix of a path assumed to
/// lie in the event: does the remaining sequence lie in the event as well?
/// Decided in closed form: yes exactly when the prefix consists entirely of
/// the generator's tail constant. Throws when the prefix already rules the
/// event out.
bool residual_in_generated(const Event& event, std::span<const std::size_t> prefix);
bool residual_in_generated(const Event& event, const std::vector<std::string>& prefix);

struct EventuallyConstantPath {
    std::vector<std::size_t> head;
    std::size_t tail;
};

struct ClosureCounterexample {
    EventuallyConstantPath original;
    EventuallyConstantPath modified;
    bool original_in = false;
    bool modified_in = false;
    std::string note;
};

struct ClosureReport {
    bool pass = true;
    std::optional<ClosureCounterexample> counterexample;
    int samples_checked = 0;
};

/// Randomized refuter for the structural property `kind`: samples
/// eventually-constant paths, applies the property's perturbations (finite
/// modifications, shifts via the two weak checks, or initial-segment
/// permutations) and compares exact memberships. "pass" means no
/// counterexample was found within the sample/depth budget.
ClosureReport check_closure(const Event& event, ClosureKind kind, int samples, int depth,
                            std::uint64_t seed);

std::string to_string(Membership membership);
std::string to_string(ClosureKind kind);

}  // namespace gtp
