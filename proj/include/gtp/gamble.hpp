#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtp/rational.hpp"

namespace gtp {

/// A finite, ordered outcome space. Labels are distinct and may carry an
/// optional exact numeric value (used by spaces encoding numeric outcomes
/// such as -1, 0, 1). The space is immutable once built.
class OutcomeSpace {
  public:
    struct Outcome {
        std::string label;
        std::optional<Rational> value;

        bool operator==(const Outcome& other) const {
            return label == other.label && value == other.value;
        }
    };

    explicit OutcomeSpace(std::vector<Outcome> outcomes);

    /// Convenience: labels only, no numeric values.
    static OutcomeSpace from_labels(std::vector<std::string> labels);

    std::size_t size() const { return outcomes_.size(); }
    const Outcome& outcome(std::size_t i) const { return outcomes_.at(i); }
    const std::string& label(std::size_t i) const { return outcomes_.at(i).label; }

    std::optional<std::size_t> find(std::string_view label) const;
    /// Like find() but throws InputError for unknown labels.
    std::size_t index_of(std::string_view label) const;

    bool operator==(const OutcomeSpace& other) const { return outcomes_ == other.outcomes_; }

  private:
    std::vector<Outcome> outcomes_;
};

using SpacePtr = std::shared_ptr<const OutcomeSpace>;

SpacePtr make_space(std::vector<OutcomeSpace::Outcome> outcomes);
SpacePtr make_space_from_labels(std::vector<std::string> labels);

/// True when both handles denote the same space (pointer or deep equality).
bool same_space(const SpacePtr& a, const SpacePtr& b);
/// Throws InputError when the spaces differ.
void require_same_space(const SpacePtr& a, const SpacePtr& b, std::string_view what);

/// A payoff vector in Q^m over an outcome space: Skeptic's per-trial move
/// pays payoff(i) when outcome i is realized.
class Gamble {
  public:
    Gamble(SpacePtr space, std::vector<Rational> payoffs);

    static Gamble zero(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return payoffs_.size(); }
    const Rational& payoff(std::size_t i) const { return payoffs_.at(i); }
    const std::vector<Rational>& payoffs() const { return payoffs_; }

    bool is_zero() const;
    Rational min_payoff() const;
    Rational max_payoff() const;
    /// Lowest outcome index attaining min_payoff().
    std::size_t argmin() const;

    Gamble operator+(const Gamble& other) const;
    Gamble operator-(const Gamble& other) const;
    Gamble operator-() const;
    Gamble scaled(const Rational& factor) const;

    bool operator==(const Gamble& other) const;

  private:
    SpacePtr space_;
    std::vector<Rational> payoffs_;
};

/// Exact probability weights over an outcome space: each weight >= 0 and
/// the weights sum to exactly 1.
class ProbabilityVector {
  public:
    ProbabilityVector(SpacePtr space, std::vector<Rational> weights);

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return weights_.size(); }
    const Rational& weight(std::size_t i) const { return weights_.at(i); }
    const std::vector<Rational>& weights() const { return weights_; }

    Rational expectation(const Gamble& g) const;

    bool operator==(const ProbabilityVector& other) const;

  private:
    SpacePtr space_;
    std::vector<Rational> weights_;
};

}  // namespace gtp
