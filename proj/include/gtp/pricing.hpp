#pragma once

#include <map>
#include <string>

#include "gtp/protocol.hpp"

namespace gtp {

/// The backward-induction certificate for an upper price: per internal node
/// the superhedging value and the optimal hedge coefficients, per leaf the
/// event indicator. Node values always satisfy 0 <= V <= 1 and
/// V(prefix) = one_step_upper_price(cone at the next trial, w -> V(prefix.w)).
class PriceTree {
  public:
    struct Node {
        Rational value;
        std::vector<Rational> coefficients;  // empty at leaves
    };

    std::size_t horizon = 0;
    std::map<std::vector<std::size_t>, Node> nodes;

    const Node& at(std::span<const std::size_t> prefix) const;
    const Rational& root_value() const;
};

enum class Classification {
    None,
    Unsupported,
    FullyPlausible,
    FullyUncertain,
    Impossible,
    Certain,
};

std::string to_string(Classification c);

/// Exact upper/lower probabilities of a cylinder event with certificates.
/// lower = 1 - upper(complement) exactly, and 0 <= lower <= upper <= 1.
struct PricedResult {
    Rational upper;
    Rational lower;
    PriceTree certificate_upper;  // superhedge tree for the event
    PriceTree certificate_lower;  // superhedge tree for the complement
    Classification classification = Classification::None;
};

/// Backward induction over the depth-N protocol tree (Identical or
/// IndependentSeq). The event must be a cylinder with horizon <= N.
PricedResult upper_prob_cylinder(const ProtocolSpec& spec, const Event& event, std::size_t N);

Rational lower_prob_cylinder(const ProtocolSpec& spec, const Event& event, std::size_t N);

/// Upper probability in the protocol whose trial k draws from cone n+k.
/// With n = 0 this is the plain upper probability.
Rational shifted_upper_prob(const ProtocolSpec& spec, const Event& event, std::size_t n);

/// Markov upper probability for a fixed initial state.
Rational markov_upper_prob(const ProtocolSpec& spec, const Event& event,
                           const std::string& omega0);

struct MarkovPriceMap {
    std::map<std::string, Rational> by_state;
    Rational sup;
};

/// Per-state upper probabilities and their maximum over initial states.
MarkovPriceMap markov_upper_prob_all(const ProtocolSpec& spec, const Event& event);

/// Independent verification oracle: one linear program over the whole tree
/// (variables: initial capital and a coefficient vector per internal node;
/// constraints: nonnegative capital at every node and terminal capital at
/// least the event indicator; minimized initial capital). Must equal
/// upper_prob_cylinder exactly. Instances are capped at 10^4 tree nodes.
Rational oracle_price(const ProtocolSpec& spec, const Event& event, std::size_t N);

/// Recomputes every internal node of a certificate tree with a fresh
/// one-step price call; throws InternalError on any mismatch.
void validate_price_tree(const ProtocolSpec& spec, const PriceTree& tree, const Event& event,
                         std::optional<std::size_t> omega0 = std::nullopt);

}  // namespace gtp
