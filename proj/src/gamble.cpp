#include "gtp/gamble.hpp"

#include <algorithm>
#include <unordered_set>

#include "gtp/errors.hpp"

namespace gtp {

OutcomeSpace::OutcomeSpace(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) {
        throw InputError("outcome space must contain at least one outcome");
    }
    std::unordered_set<std::string> seen;
    for (const auto& o : outcomes_) {
        if (o.label.empty()) {
            throw InputError("outcome labels must be nonempty");
        }
        if (!seen.insert(o.label).second) {
            throw InputError("duplicate outcome label: \"" + o.label + "\"");
        }
    }
}

OutcomeSpace OutcomeSpace::from_labels(std::vector<std::string> labels) {
    std::vector<Outcome> outcomes;
    outcomes.reserve(labels.size());
    for (auto& l : labels) outcomes.push_back(Outcome{std::move(l), std::nullopt});
    return OutcomeSpace(std::move(outcomes));
}

std::optional<std::size_t> OutcomeSpace::find(std::string_view label) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i].label == label) return i;
    }
    return std::nullopt;
}

std::size_t OutcomeSpace::index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw InputError("unknown outcome label: \"" + std::string(label) + "\"");
}

SpacePtr make_space(std::vector<OutcomeSpace::Outcome> outcomes) {
    return std::make_shared<const OutcomeSpace>(std::move(outcomes));
}

SpacePtr make_space_from_labels(std::vector<std::string> labels) {
    return std::make_shared<const OutcomeSpace>(OutcomeSpace::from_labels(std::move(labels)));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, std::string_view what) {
    if (!same_space(a, b)) {
        throw InputError(std::string(what) + ": outcome spaces differ");
    }
}

Gamble::Gamble(SpacePtr space, std::vector<Rational> payoffs)
    : space_(std::move(space)), payoffs_(std::move(payoffs)) {
    if (!space_) throw InputError("gamble requires an outcome space");
    if (payoffs_.size() != space_->size()) {
        throw InputError("gamble must assign a payoff to every outcome");
    }
}

Gamble Gamble::zero(SpacePtr space) {
    if (!space) throw InputError("gamble requires an outcome space");
    std::vector<Rational> payoffs(space->size(), Rational(0));
    return Gamble(std::move(space), std::move(payoffs));
}

bool Gamble::is_zero() const {
    return std::all_of(payoffs_.begin(), payoffs_.end(),
                       [](const Rational& p) { return p == 0; });
}

Rational Gamble::min_payoff() const { return *std::min_element(payoffs_.begin(), payoffs_.end()); }

Rational Gamble::max_payoff() const { return *std::max_element(payoffs_.begin(), payoffs_.end()); }

std::size_t Gamble::argmin() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < payoffs_.size(); ++i) {
        if (payoffs_[i] < payoffs_[best]) best = i;
    }
    return best;
}

Gamble Gamble::operator+(const Gamble& other) const {
    require_same_space(space_, other.space_, "gamble addition");
    std::vector<Rational> out(payoffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = payoffs_[i] + other.payoffs_[i];
    return Gamble(space_, std::move(out));
}

Gamble Gamble::operator-(const Gamble& other) const { return *this + (-other); }

Gamble Gamble::operator-() const {
    std::vector<Rational> out(payoffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -payoffs_[i];
    return Gamble(space_, std::move(out));
}

Gamble Gamble::scaled(const Rational& factor) const {
    std::vector<Rational> out(payoffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = payoffs_[i] * factor;
    return Gamble(space_, std::move(out));
}

bool Gamble::operator==(const Gamble& other) const {
    return same_space(space_, other.space_) && payoffs_ == other.payoffs_;
}

ProbabilityVector::ProbabilityVector(SpacePtr space, std::vector<Rational> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (!space_) throw InputError("probability vector requires an outcome space");
    if (weights_.size() != space_->size()) {
        throw InputError("probability vector must weight every outcome");
    }
    Rational sum(0);
    for (const auto& w : weights_) {
        if (w < 0) throw InputError("probability weights must be nonnegative");
        sum += w;
    }
    if (sum != 1) throw InputError("probability weights must sum to exactly 1");
}

Rational ProbabilityVector::expectation(const Gamble& g) const {
    require_same_space(space_, g.space(), "expectation");
    Rational out(0);
    for (std::size_t i = 0; i < weights_.size(); ++i) out += weights_[i] * g.payoff(i);
    return out;
}

bool ProbabilityVector::operator==(const ProbabilityVector& other) const {
    return same_space(space_, other.space_) && weights_ == other.weights_;
}

}  // namespace gtp
