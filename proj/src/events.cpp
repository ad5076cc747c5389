#include "gtp/events.hpp"

#include <algorithm>
#include <random>

#include "gtp/errors.hpp"

namespace gtp {

namespace {

using event_class::AllButFinitelyEqual;
using event_class::Complement;
using event_class::CountExactly;
using event_class::Cylinder;
using event_class::EveryTermIn;
using event_class::GeneratedPermutable;
using event_class::InfinitelyOften;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::size_t kWordBudget = 200000;

Integer power(std::size_t base, std::size_t exp) {
    Integer out(1);
    for (std::size_t i = 0; i < exp; ++i) out *= Integer(static_cast<unsigned long>(base));
    return out;
}

std::vector<std::size_t> counts_of(std::span<const std::size_t> word, std::size_t m) {
    std::vector<std::size_t> counts(m, 0);
    for (std::size_t w : word) ++counts.at(w);
    return counts;
}

// Occurrence counts of the generator's first `length` terms (length >= head size).
std::vector<std::size_t> generator_counts(const GeneratedPermutable& g, std::size_t m,
                                          std::size_t length) {
    std::vector<std::size_t> counts(m, 0);
    for (std::size_t w : g.head) ++counts.at(w);
    counts[g.tail_constant] += length - g.head.size();
    return counts;
}

void validate_prefix(const OutcomeSpace& space, std::span<const std::size_t> prefix) {
    for (std::size_t w : prefix) {
        if (w >= space.size()) throw InputError("prefix outcome index out of range");
    }
}

}  // namespace

Event::Event(SpacePtr space, EventDescription description)
    : space_(std::move(space)), description_(std::move(description)) {
    if (!space_) throw InputError("event requires an outcome space");
    const std::size_t m = space_->size();
    std::visit(
        Overloaded{
            [&](const Cylinder& c) {
                for (const auto& word : c.accepted) {
                    if (word.size() != c.horizon) {
                        throw InputError("cylinder word length differs from horizon");
                    }
                    for (std::size_t w : word) {
                        if (w >= m) throw InputError("cylinder word outcome out of range");
                    }
                }
            },
            [&](const EveryTermIn& e) {
                for (std::size_t w : e.allowed) {
                    if (w >= m) throw InputError("allowed outcome out of range");
                }
            },
            [&](const AllButFinitelyEqual& e) {
                if (e.constant >= m) throw InputError("constant outcome out of range");
            },
            [&](const InfinitelyOften& e) {
                for (std::size_t w : e.targets) {
                    if (w >= m) throw InputError("target outcome out of range");
                }
            },
            [&](const CountExactly& e) {
                if (e.outcome >= m) throw InputError("counted outcome out of range");
                for (std::size_t w : e.forbidden) {
                    if (w >= m) throw InputError("forbidden outcome out of range");
                }
            },
            [&](const GeneratedPermutable& e) {
                if (e.tail_constant >= m) throw InputError("tail constant out of range");
                for (std::size_t w : e.head) {
                    if (w >= m) throw InputError("generator head outcome out of range");
                }
            },
            [&](const Complement& e) {
                if (!e.inner) throw InputError("complement requires an inner event");
                require_same_space(space_, e.inner->space(), "complement event");
            },
        },
        description_);
}

std::vector<std::size_t> to_outcome_indices(const OutcomeSpace& space,
                                            std::span<const std::string> labels) {
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(space.index_of(l));
    return out;
}

Event Event::cylinder(SpacePtr space, std::size_t horizon,
                      const std::vector<std::vector<std::string>>& accepted) {
    Cylinder c;
    c.horizon = horizon;
    for (const auto& word : accepted) {
        c.accepted.insert(to_outcome_indices(*space, word));
    }
    return Event(std::move(space), std::move(c));
}

Event Event::every_term_in(SpacePtr space, const std::vector<std::string>& allowed) {
    EveryTermIn e;
    for (const auto& l : allowed) e.allowed.insert(space->index_of(l));
    return Event(std::move(space), std::move(e));
}

Event Event::all_but_finitely_equal(SpacePtr space, const std::string& constant) {
    AllButFinitelyEqual e{space->index_of(constant)};
    return Event(std::move(space), std::move(e));
}

Event Event::infinitely_often(SpacePtr space, const std::vector<std::string>& targets) {
    InfinitelyOften e;
    for (const auto& l : targets) e.targets.insert(space->index_of(l));
    return Event(std::move(space), std::move(e));
}

Event Event::count_exactly(SpacePtr space, const std::string& outcome, std::size_t count,
                           const std::vector<std::string>& forbidden) {
    CountExactly e;
    e.outcome = space->index_of(outcome);
    e.count = count;
    for (const auto& l : forbidden) e.forbidden.insert(space->index_of(l));
    return Event(std::move(space), std::move(e));
}

Event Event::generated(SpacePtr space, const std::vector<std::string>& head,
                       const std::string& tail_constant) {
    GeneratedPermutable e;
    e.head = to_outcome_indices(*space, head);
    e.tail_constant = space->index_of(tail_constant);
    return Event(std::move(space), std::move(e));
}

namespace {

Membership cylinder_membership(const Cylinder& c, std::size_t m,
                               std::span<const std::size_t> prefix) {
    if (prefix.size() >= c.horizon) {
        std::vector<std::size_t> word(prefix.begin(), prefix.begin() + c.horizon);
        return c.accepted.count(word) ? Membership::In : Membership::Out;
    }
    std::size_t matching = 0;
    for (const auto& word : c.accepted) {
        if (std::equal(prefix.begin(), prefix.end(), word.begin())) ++matching;
    }
    if (matching == 0) return Membership::Out;
    if (Integer(static_cast<unsigned long>(matching)) == power(m, c.horizon - prefix.size())) {
        return Membership::In;
    }
    return Membership::Undetermined;
}

Membership count_exactly_membership(const CountExactly& e, std::size_t m,
                                    std::span<const std::size_t> prefix) {
    std::size_t count = 0;
    for (std::size_t w : prefix) {
        if (e.forbidden.count(w)) return Membership::Out;
        if (w == e.outcome) ++count;
    }
    if (count > e.count) return Membership::Out;
    // A member path needs an infinite supply of outcomes that are neither
    // counted nor forbidden; without one the event is empty.
    std::size_t fillers = 0;
    for (std::size_t w = 0; w < m; ++w) {
        if (w != e.outcome && !e.forbidden.count(w)) ++fillers;
    }
    if (fillers == 0) return Membership::Out;
    // The counted outcome can always occur again, so In is out of reach.
    return Membership::Undetermined;
}

Membership generated_membership(const GeneratedPermutable& e, std::size_t m,
                                std::span<const std::size_t> prefix) {
    const auto prefix_counts = counts_of(prefix, m);
    const auto gen_counts = generator_counts(e, m, std::max(prefix.size(), e.head.size()));
    for (std::size_t w = 0; w < m; ++w) {
        if (w == e.tail_constant) continue;  // the generator supplies arbitrarily many
        if (prefix_counts[w] > gen_counts[w]) return Membership::Out;
    }
    if (m == 1) return Membership::In;
    return Membership::Undetermined;
}

}  // namespace

Membership membership_prefix(const Event& event, std::span<const std::size_t> prefix) {
    const std::size_t m = event.space()->size();
    validate_prefix(*event.space(), prefix);
    return std::visit(
        Overloaded{
            [&](const Cylinder& c) { return cylinder_membership(c, m, prefix); },
            [&](const EveryTermIn& e) {
                for (std::size_t w : prefix) {
                    if (!e.allowed.count(w)) return Membership::Out;
                }
                if (e.allowed.size() == m) return Membership::In;
                if (e.allowed.empty()) return Membership::Out;
                return Membership::Undetermined;
            },
            [&](const AllButFinitelyEqual&) {
                return m == 1 ? Membership::In : Membership::Undetermined;
            },
            [&](const InfinitelyOften& e) {
                if (e.targets.empty()) return Membership::Out;
                if (e.targets.size() == m) return Membership::In;
                return Membership::Undetermined;
            },
            [&](const CountExactly& e) { return count_exactly_membership(e, m, prefix); },
            [&](const GeneratedPermutable& e) { return generated_membership(e, m, prefix); },
            [&](const Complement& e) {
                switch (membership_prefix(*e.inner, prefix)) {
                    case Membership::In: return Membership::Out;
                    case Membership::Out: return Membership::In;
                    default: return Membership::Undetermined;
                }
            },
        },
        event.description());
}

Membership membership_prefix(const Event& event, const std::vector<std::string>& prefix) {
    return membership_prefix(event, to_outcome_indices(*event.space(), prefix));
}

Event complement_event(const Event& event) {
    if (const auto* c = std::get_if<Cylinder>(&event.description())) {
        const std::size_t m = event.space()->size();
        if (power(m, c->horizon) > Integer(static_cast<unsigned long>(kWordBudget))) {
            throw BudgetError("cylinder complement exceeds the word budget");
        }
        Cylinder out;
        out.horizon = c->horizon;
        std::vector<std::size_t> word(c->horizon, 0);
        for (;;) {
            if (!c->accepted.count(word)) out.accepted.insert(word);
            std::size_t pos = c->horizon;
            while (pos > 0) {
                if (++word[pos - 1] < m) break;
                word[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
        return Event(event.space(), std::move(out));
    }
    if (const auto* c = std::get_if<Complement>(&event.description())) {
        return *c->inner;
    }
    return Event(event.space(), Complement{std::make_shared<const Event>(event)});
}

Event shift_event(const Event& event, std::size_t n) {
    return std::visit(
        Overloaded{
            [&](const Cylinder& c) {
                const std::size_t drop = std::min(n, c.horizon);
                Cylinder out;
                out.horizon = c.horizon - drop;
                for (const auto& word : c.accepted) {
                    out.accepted.insert(
                        std::vector<std::size_t>(word.begin() + drop, word.end()));
                }
                return Event(event.space(), std::move(out));
            },
            [&](const EveryTermIn&) { return event; },
            [&](const AllButFinitelyEqual&) { return event; },
            [&](const InfinitelyOften&) { return event; },
            [&](const CountExactly&) -> Event {
                throw InputError("shift of a count event leaves the representable catalogue");
            },
            [&](const GeneratedPermutable&) -> Event {
                throw InputError(
                    "shift of a generated permutable event leaves the representable catalogue");
            },
            [&](const Complement&) -> Event {
                throw InputError("shift of a complement event is not representable");
            },
        },
        event.description());
}

bool path_in_event(const Event& event, std::span<const std::size_t> head, std::size_t tail) {
    const std::size_t m = event.space()->size();
    validate_prefix(*event.space(), head);
    if (tail >= m) throw InputError("tail outcome index out of range");
    return std::visit(
        Overloaded{
            [&](const Cylinder& c) {
                std::vector<std::size_t> word(head.begin(), head.end());
                word.resize(c.horizon, tail);
                return c.accepted.count(word) > 0;
            },
            [&](const EveryTermIn& e) {
                for (std::size_t w : head) {
                    if (!e.allowed.count(w)) return false;
                }
                return e.allowed.count(tail) > 0;
            },
            [&](const AllButFinitelyEqual& e) { return tail == e.constant; },
            [&](const InfinitelyOften& e) { return e.targets.count(tail) > 0; },
            [&](const CountExactly& e) {
                if (tail == e.outcome || e.forbidden.count(tail)) return false;
                std::size_t count = 0;
                for (std::size_t w : head) {
                    if (e.forbidden.count(w)) return false;
                    if (w == e.outcome) ++count;
                }
                return count == e.count;
            },
            [&](const GeneratedPermutable& e) {
                if (tail != e.tail_constant) return false;
                const std::size_t length = std::max(head.size(), e.head.size());
                auto path_counts = counts_of(head, m);
                path_counts[tail] += length - head.size();
                return path_counts == generator_counts(e, m, length);
            },
            [&](const Complement& e) { return !path_in_event(*e.inner, head, tail); },
        },
        event.description());
}

bool residual_in_generated(const Event& event, std::span<const std::size_t> prefix) {
    const auto* g = std::get_if<GeneratedPermutable>(&event.description());
    if (!g) throw InputError("residual decision requires a generated permutable event");
    if (membership_prefix(event, prefix) == Membership::Out) {
        throw InputError("residual decision: prefix already contradicts event membership");
    }
    // On a member path, the residual stays in the event exactly when the
    // consumed prefix used up none of the generator's non-constant terms,
    // i.e. the prefix multiset is |prefix| copies of the tail constant.
    return std::all_of(prefix.begin(), prefix.end(),
                       [&](std::size_t w) { return w == g->tail_constant; });
}

bool residual_in_generated(const Event& event, const std::vector<std::string>& prefix) {
    return residual_in_generated(event, to_outcome_indices(*event.space(), prefix));
}

bool Event::claims(ClosureKind kind) const {
    const std::size_t m = space_->size();
    return std::visit(
        Overloaded{
            [&](const Cylinder& c) {
                const Integer all = power(m, c.horizon);
                const bool trivial =
                    c.accepted.empty() || Integer(static_cast<unsigned long>(c.accepted.size())) == all;
                return trivial;
            },
            [&](const EveryTermIn& e) {
                const bool trivial = e.allowed.empty() || e.allowed.size() == m;
                switch (kind) {
                    case ClosureKind::Tail: return trivial;
                    case ClosureKind::WeaklyInvariant: return true;
                    case ClosureKind::Invariant: return trivial;
                    case ClosureKind::Permutable: return true;
                }
                return false;
            },
            [&](const AllButFinitelyEqual&) { return true; },
            [&](const InfinitelyOften&) { return true; },
            [&](const CountExactly& e) {
                std::size_t fillers = 0;
                for (std::size_t w = 0; w < m; ++w) {
                    if (w != e.outcome && !e.forbidden.count(w)) ++fillers;
                }
                const bool empty = fillers == 0;
                switch (kind) {
                    case ClosureKind::Tail: return empty;
                    case ClosureKind::WeaklyInvariant: return empty || e.count == 0;
                    case ClosureKind::Invariant: return empty;
                    case ClosureKind::Permutable: return true;
                }
                return false;
            },
            [&](const GeneratedPermutable& e) {
                const bool constant_generator =
                    std::all_of(e.head.begin(), e.head.end(),
                                [&](std::size_t w) { return w == e.tail_constant; });
                switch (kind) {
                    case ClosureKind::Tail: return m == 1;
                    case ClosureKind::WeaklyInvariant: return m == 1 || constant_generator;
                    case ClosureKind::Invariant: return m == 1;
                    case ClosureKind::Permutable: return true;
                }
                return false;
            },
            [&](const Complement& e) {
                switch (kind) {
                    case ClosureKind::Tail:
                    case ClosureKind::Invariant:
                    case ClosureKind::Permutable: return e.inner->claims(kind);
                    case ClosureKind::WeaklyInvariant:
                        // Invariance of the inner event is the hand-verified
                        // sufficient condition we track for complements.
                        return e.inner->claims(ClosureKind::Invariant);
                }
                return false;
            },
        },
        description_);
}

namespace {

EventuallyConstantPath shift_path(const EventuallyConstantPath& path) {
    if (path.head.empty()) return path;
    return EventuallyConstantPath{
        std::vector<std::size_t>(path.head.begin() + 1, path.head.end()), path.tail};
}

bool member(const Event& event, const EventuallyConstantPath& path) {
    return path_in_event(event, path.head, path.tail);
}

std::optional<ClosureCounterexample> refute_tail(const Event& event,
                                                 const EventuallyConstantPath& path, int depth) {
    const std::size_t m = event.space()->size();
    const bool original_in = member(event, path);
    for (int pos = 0; pos < depth; ++pos) {
        EventuallyConstantPath modified = path;
        if (modified.head.size() <= static_cast<std::size_t>(pos)) {
            modified.head.resize(pos + 1, modified.tail);
        }
        const std::size_t current = modified.head[pos];
        for (std::size_t alt = 0; alt < m; ++alt) {
            if (alt == current) continue;
            modified.head[pos] = alt;
            if (member(event, modified) != original_in) {
                return ClosureCounterexample{path, modified, original_in, !original_in,
                                             "membership changed by a single-coordinate edit"};
            }
        }
    }
    return std::nullopt;
}

}  // namespace

ClosureReport check_closure(const Event& event, ClosureKind kind, int samples, int depth,
                            std::uint64_t seed) {
    const std::size_t m = event.space()->size();
    std::mt19937_64 rng(seed);
    ClosureReport report;

    for (int s = 0; s < samples; ++s) {
        report.samples_checked = s + 1;
        EventuallyConstantPath path;
        const std::size_t head_len = rng() % (static_cast<std::size_t>(depth) + 1);
        path.head.resize(head_len);
        for (auto& w : path.head) w = rng() % m;
        path.tail = rng() % m;

        std::optional<ClosureCounterexample> ce;
        switch (kind) {
            case ClosureKind::Tail:
                ce = refute_tail(event, path, depth);
                break;
            case ClosureKind::WeaklyInvariant: {
                const auto shifted = shift_path(path);
                if (member(event, path) && !member(event, shifted)) {
                    ce = ClosureCounterexample{path, shifted, true, false,
                                               "member whose shift image escapes the event"};
                }
                break;
            }
            case ClosureKind::Invariant: {
                const auto shifted = shift_path(path);
                const bool in = member(event, path);
                const bool shifted_in = member(event, shifted);
                if (in && !shifted_in) {
                    ce = ClosureCounterexample{path, shifted, true, false,
                                               "member whose shift image escapes the event"};
                } else if (!in && shifted_in) {
                    ce = ClosureCounterexample{
                        path, shifted, false, true,
                        "non-member whose shift image lands in the event"};
                }
                break;
            }
            case ClosureKind::Permutable: {
                if (depth < 2) break;
                const std::size_t n = 2 + rng() % (static_cast<std::size_t>(depth) - 1);
                EventuallyConstantPath permuted = path;
                if (permuted.head.size() < n) permuted.head.resize(n, permuted.tail);
                for (std::size_t i = n - 1; i > 0; --i) {
                    const std::size_t j = rng() % (i + 1);
                    std::swap(permuted.head[i], permuted.head[j]);
                }
                const bool in = member(event, path);
                const bool permuted_in = member(event, permuted);
                if (in != permuted_in) {
                    ce = ClosureCounterexample{path, permuted, in, permuted_in,
                                               "membership changed by permuting an initial segment"};
                }
                break;
            }
        }
        if (ce) {
            report.pass = false;
            report.counterexample = std::move(ce);
            return report;
        }
    }
    return report;
}

std::string to_string(Membership membership) {
    switch (membership) {
        case Membership::In: return "in";
        case Membership::Out: return "out";
        default: return "undetermined";
    }
}

std::string to_string(ClosureKind kind) {
    switch (kind) {
        case ClosureKind::Tail: return "tail";
        case ClosureKind::WeaklyInvariant: return "weakly-invariant";
        case ClosureKind::Invariant: return "invariant";
        case ClosureKind::Permutable: return "permutable";
    }
    return "?";
}

}  // namespace gtp
