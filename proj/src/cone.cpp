#include "gtp/cone.hpp"

#include <algorithm>

#include "gtp/errors.hpp"
#include "gtp/lp.hpp"

namespace gtp {

namespace {

// Scales a rational vector with at most two nonzero entries (or any vector)
// to a primitive integer vector pointing the same way.
std::vector<Rational> primitive(const std::vector<Rational>& v) {
    Integer lcm_den(1);
    for (const auto& x : v) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(x));
    Integer gcd_num(0);
    std::vector<Rational> scaled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        scaled[i] = v[i] * Rational(lcm_den);
        gcd_num = boost::multiprecision::gcd(gcd_num, numerator(scaled[i]));
    }
    if (gcd_num == 0) return scaled;  // all-zero vector
    for (auto& x : scaled) x /= Rational(gcd_num);
    return scaled;
}

std::vector<Gamble> zero_cone_generators(const ProbabilityVector& p) {
    const SpacePtr& space = p.space();
    const std::size_t m = space->size();
    std::size_t anchor = m;
    for (std::size_t j = 0; j < m; ++j) {
        if (p.weight(j) > 0) {
            anchor = j;
            break;
        }
    }
    std::vector<Gamble> gens;
    gens.reserve(2 * (m - 1));
    for (std::size_t i = 0; i < m; ++i) {
        if (i == anchor) continue;
        std::vector<Rational> v(m, Rational(0));
        v[anchor] = p.weight(i);
        v[i] = -p.weight(anchor);
        Gamble g(space, primitive(v));
        gens.push_back(g);
        gens.push_back(-g);
    }
    return gens;
}

}  // namespace

Cone::Cone(SpacePtr space, ConeKind kind, std::vector<Gamble> generators,
           std::optional<ProbabilityVector> measure)
    : space_(std::move(space)),
      kind_(kind),
      generators_(std::move(generators)),
      measure_(std::move(measure)),
      cache_(std::make_shared<Cache>()) {
    if (!space_) throw InputError("cone requires an outcome space");
    for (const auto& g : generators_) {
        require_same_space(space_, g.space(), "cone generator");
    }
}

Cone Cone::zero_cone(const ProbabilityVector& p) {
    return Cone(p.space(), ConeKind::ZeroCone, zero_cone_generators(p), p);
}

Cone Cone::nonpositive_cone(const ProbabilityVector& p) {
    auto gens = zero_cone_generators(p);
    std::vector<Rational> minus_one(p.space()->size(), Rational(-1));
    gens.emplace_back(p.space(), std::move(minus_one));
    return Cone(p.space(), ConeKind::NonpositiveCone, std::move(gens), p);
}

Cone Cone::raw(SpacePtr space, std::vector<Gamble> generators) {
    return Cone(std::move(space), ConeKind::RawGenerators, std::move(generators), std::nullopt);
}

Cone Cone::span(SpacePtr space, std::vector<Gamble> generators) {
    std::vector<Gamble> doubled;
    doubled.reserve(2 * generators.size());
    for (auto& g : generators) {
        doubled.push_back(g);
        doubled.push_back(-g);
    }
    return Cone(std::move(space), ConeKind::SpanOf, std::move(doubled), std::nullopt);
}

Gamble Cone::combine(const std::vector<Rational>& coefficients) const {
    if (coefficients.size() != generators_.size()) {
        throw InputError("coefficient count does not match generator count");
    }
    std::vector<Rational> payoffs(space_->size(), Rational(0));
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        for (std::size_t w = 0; w < payoffs.size(); ++w) {
            payoffs[w] += coefficients[i] * generators_[i].payoff(w);
        }
    }
    return Gamble(space_, std::move(payoffs));
}

namespace {

CoherenceVerdict compute_coherence(const Cone& cone) {
    const std::size_t m = cone.space()->size();
    const std::size_t k = cone.generators().size();

    // Variables: s+ (0), s- (1), c_1..c_k. Maximize s = s+ - s-.
    LinearProgram lp;
    lp.objective.assign(k + 2, Rational(0));
    lp.objective[0] = Rational(1);
    lp.objective[1] = Rational(-1);
    for (std::size_t w = 0; w < m; ++w) {
        std::vector<Rational> row(k + 2, Rational(0));
        row[0] = Rational(1);
        row[1] = Rational(-1);
        for (std::size_t i = 0; i < k; ++i) row[2 + i] = -cone.generators()[i].payoff(w);
        lp.constraints.push_back(std::move(row));
        lp.bounds.emplace_back(0);
    }
    {
        std::vector<Rational> row(k + 2, Rational(0));
        for (std::size_t i = 0; i < k; ++i) row[2 + i] = Rational(1);
        lp.constraints.push_back(std::move(row));
        lp.bounds.emplace_back(1);
    }

    const LpResult res = solve_lp(lp);
    if (!res.optimal()) {
        throw InternalError("coherence LP must have an optimum");
    }

    CoherenceVerdict verdict;
    if (res.objective > 0) {
        verdict.coherent = false;
        std::vector<Rational> witness(res.primal.begin() + 2, res.primal.end());
        const Rational top = *std::max_element(witness.begin(), witness.end());
        for (auto& c : witness) c /= top;
        verdict.witness = std::move(witness);
        // Re-verify the certificate by direct evaluation.
        const Gamble combo = cone.combine(verdict.witness);
        for (std::size_t w = 0; w < m; ++w) {
            if (combo.payoff(w) <= 0) {
                throw InternalError("incoherence witness is not strictly positive");
            }
        }
    } else {
        verdict.coherent = true;
        std::vector<Rational> weights(res.dual.begin(), res.dual.begin() + m);
        ProbabilityVector calibrating(cone.space(), std::move(weights));
        for (const auto& g : cone.generators()) {
            if (calibrating.expectation(g) > 0) {
                throw InternalError("calibrating measure fails a generator");
            }
        }
        verdict.calibrating = std::move(calibrating);
    }
    return verdict;
}

}  // namespace

const CoherenceVerdict& Cone::coherence() const {
    std::call_once(cache_->flag, [this] { cache_->verdict = compute_coherence(*this); });
    return *cache_->verdict;
}

const CoherenceVerdict& check_coherence(const Cone& cone) { return cone.coherence(); }

void require_coherent(const Cone& cone) {
    const CoherenceVerdict& verdict = cone.coherence();
    if (!verdict.coherent) {
        std::string witness;
        for (const auto& c : verdict.witness) {
            if (!witness.empty()) witness += ", ";
            witness += format_rational(c);
        }
        throw IncoherentConeError(
            "cone is incoherent: the combination with coefficients (" + witness +
            ") is strictly positive at every outcome");
    }
}

PricePoint one_step_upper_price(const Cone& cone, const Gamble& f) {
    require_same_space(cone.space(), f.space(), "one_step_upper_price");
    require_coherent(cone);

    const std::size_t m = cone.space()->size();
    const std::size_t k = cone.generators().size();

    // Variables: a+ (0), a- (1), c_1..c_k; alpha = a+ - a-. Minimizing alpha
    // is maximizing -a+ + a- subject to
    //   -a+ + a- - sum_i c_i G_i(w) <= -f(w)  for every outcome w.
    LinearProgram lp;
    lp.objective.assign(k + 2, Rational(0));
    lp.objective[0] = Rational(-1);
    lp.objective[1] = Rational(1);
    for (std::size_t w = 0; w < m; ++w) {
        std::vector<Rational> row(k + 2, Rational(0));
        row[0] = Rational(-1);
        row[1] = Rational(1);
        for (std::size_t i = 0; i < k; ++i) row[2 + i] = -cone.generators()[i].payoff(w);
        lp.constraints.push_back(std::move(row));
        lp.bounds.push_back(-f.payoff(w));
    }

    const LpResult res = solve_lp(lp);
    if (!res.optimal()) {
        throw InternalError("superhedging LP must have an optimum for a coherent cone");
    }

    std::vector<Rational> coefficients(res.primal.begin() + 2, res.primal.end());
    Gamble hedge = cone.combine(coefficients);
    PricePoint out{-res.objective, std::move(hedge), std::move(coefficients)};
    for (std::size_t w = 0; w < m; ++w) {
        if (out.price + out.hedge.payoff(w) < f.payoff(w)) {
            throw InternalError("superhedge fails to dominate the target payoff");
        }
    }
    return out;
}

Rational one_step_lower_price(const Cone& cone, const Gamble& f) {
    return -one_step_upper_price(cone, -f).price;
}

std::optional<std::vector<Rational>> membership_coefficients(const Cone& cone, const Gamble& f) {
    require_same_space(cone.space(), f.space(), "cone membership");
    const std::size_t m = cone.space()->size();
    const std::size_t k = cone.generators().size();
    if (k == 0) {
        if (f.is_zero()) return std::vector<Rational>{};
        return std::nullopt;
    }

    // Feasibility of sum_i c_i G_i = f over c >= 0, as paired inequalities.
    LinearProgram lp;
    lp.objective.assign(k, Rational(0));
    for (std::size_t w = 0; w < m; ++w) {
        std::vector<Rational> row(k);
        for (std::size_t i = 0; i < k; ++i) row[i] = cone.generators()[i].payoff(w);
        std::vector<Rational> neg(k);
        for (std::size_t i = 0; i < k; ++i) neg[i] = -row[i];
        lp.constraints.push_back(std::move(row));
        lp.bounds.push_back(f.payoff(w));
        lp.constraints.push_back(std::move(neg));
        lp.bounds.push_back(-f.payoff(w));
    }

    const LpResult res = solve_lp(lp);
    if (res.status == LpStatus::Infeasible) return std::nullopt;
    if (res.status != LpStatus::Optimal) {
        throw InternalError("membership LP cannot be unbounded");
    }
    return res.primal;
}

bool cone_contains(const Cone& cone, const Gamble& f) {
    return membership_coefficients(cone, f).has_value();
}

std::size_t evasion_outcome(const Cone& cone, const Gamble& F, bool require_nonzero) {
    require_same_space(cone.space(), F.space(), "evasion_outcome");
    if (!cone_contains(cone, F)) {
        throw InputError("evasion_outcome: gamble is not a member of the cone");
    }

    const auto& space = *cone.space();
    std::size_t best = space.size();
    for (std::size_t w = 0; w < space.size(); ++w) {
        if (require_nonzero) {
            const auto& value = space.outcome(w).value;
            if (!value || *value == 0) continue;
        }
        if (best == space.size() || F.payoff(w) < F.payoff(best)) best = w;
    }
    if (best == space.size()) {
        throw InputError("evasion_outcome: no outcome with a nonzero numeric value");
    }
    if (F.payoff(best) > 0) {
        if (require_nonzero) {
            throw InputError("evasion_outcome: every nonzero outcome has positive payoff");
        }
        throw IncoherentConeError("cone member is strictly positive everywhere");
    }
    return best;
}

}  // namespace gtp
