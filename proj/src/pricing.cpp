#include "gtp/pricing.hpp"

#include "gtp/errors.hpp"
#include "gtp/lp.hpp"

namespace gtp {

namespace {

constexpr std::size_t kTreeBudget = 200000;
constexpr std::size_t kOracleBudget = 10000;

const event_class::Cylinder& require_cylinder(const Event& event) {
    const auto* c = std::get_if<event_class::Cylinder>(&event.description());
    if (!c) throw InputError("pricing requires a cylinder event");
    return *c;
}

std::size_t checked_leaf_count(std::size_t m, std::size_t depth, std::size_t budget) {
    std::size_t leaves = 1;
    for (std::size_t i = 0; i < depth; ++i) {
        leaves *= m;
        if (leaves > budget) {
            throw BudgetError("protocol tree exceeds the node budget");
        }
    }
    return leaves;
}

Rational leaf_indicator(const Event& event, const std::vector<std::size_t>& path) {
    switch (membership_prefix(event, path)) {
        case Membership::In: return Rational(1);
        case Membership::Out: return Rational(0);
        default:
            throw InternalError("cylinder membership undetermined at full depth");
    }
}

PriceTree build_price_tree(const ProtocolSpec& spec, const Event& event, std::size_t N,
                           std::optional<std::size_t> omega0) {
    require_same_space(spec.space(), event.space(), "pricing");
    const auto& cylinder = require_cylinder(event);
    if (cylinder.horizon > N) {
        throw InputError("pricing horizon is shorter than the event's horizon");
    }
    const std::size_t m = spec.space()->size();
    checked_leaf_count(m, N, kTreeBudget);

    PriceTree tree;
    tree.horizon = N;

    std::vector<std::size_t> prefix;
    // Post-order walk: children first, then the node's one-step price.
    auto visit = [&](auto&& self) -> Rational {
        if (prefix.size() == N) {
            const Rational value = leaf_indicator(event, prefix);
            tree.nodes.emplace(prefix, PriceTree::Node{value, {}});
            return value;
        }
        std::vector<Rational> child_values(m);
        for (std::size_t w = 0; w < m; ++w) {
            prefix.push_back(w);
            child_values[w] = self(self);
            prefix.pop_back();
        }
        const std::optional<std::size_t> prev =
            prefix.empty() ? omega0 : std::optional<std::size_t>(prefix.back());
        const Cone& cone = spec.cone_at(prefix.size() + 1, prev);
        const PricePoint point =
            one_step_upper_price(cone, Gamble(spec.space(), std::move(child_values)));
        tree.nodes.emplace(prefix, PriceTree::Node{point.price, point.coefficients});
        return point.price;
    };
    visit(visit);
    return tree;
}

Classification classify(const Rational& upper, const Rational& lower) {
    if (lower == 1) return Classification::Certain;
    if (upper == 0) return Classification::Impossible;
    if (upper == 1 && lower == 0) return Classification::FullyUncertain;
    if (upper == 1) return Classification::FullyPlausible;
    if (lower == 0) return Classification::Unsupported;
    return Classification::None;
}

void require_not_markov(const ProtocolSpec& spec) {
    if (spec.variant() == ProtocolSpec::Variant::Markov) {
        throw InputError("use the markov pricing entry points for markov protocols");
    }
}

}  // namespace

const PriceTree::Node& PriceTree::at(std::span<const std::size_t> prefix) const {
    const auto it = nodes.find(std::vector<std::size_t>(prefix.begin(), prefix.end()));
    if (it == nodes.end()) throw InputError("price tree has no node for this prefix");
    return it->second;
}

const Rational& PriceTree::root_value() const { return at({}).value; }

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Unsupported: return "unsupported";
        case Classification::FullyPlausible: return "fully_plausible";
        case Classification::FullyUncertain: return "fully_uncertain";
        case Classification::Impossible: return "impossible";
        case Classification::Certain: return "certain";
        default: return "none";
    }
}

PricedResult upper_prob_cylinder(const ProtocolSpec& spec, const Event& event, std::size_t N) {
    require_not_markov(spec);
    PricedResult result;
    result.certificate_upper = build_price_tree(spec, event, N, std::nullopt);
    result.certificate_lower = build_price_tree(spec, complement_event(event), N, std::nullopt);
    result.upper = result.certificate_upper.root_value();
    result.lower = Rational(1) - result.certificate_lower.root_value();
    if (result.lower < 0 || result.lower > result.upper || result.upper > 1) {
        throw InternalError("price bounds violated: lower/upper outside [0,1] order");
    }
    result.classification = classify(result.upper, result.lower);
    return result;
}

Rational lower_prob_cylinder(const ProtocolSpec& spec, const Event& event, std::size_t N) {
    return upper_prob_cylinder(spec, event, N).lower;
}

Rational shifted_upper_prob(const ProtocolSpec& spec, const Event& event, std::size_t n) {
    require_not_markov(spec);
    const ProtocolSpec shifted = shifted_spec(spec, n);
    const auto& cylinder = require_cylinder(event);
    return upper_prob_cylinder(shifted, event, cylinder.horizon).upper;
}

Rational markov_upper_prob(const ProtocolSpec& spec, const Event& event,
                           const std::string& omega0) {
    if (spec.variant() != ProtocolSpec::Variant::Markov) {
        throw InputError("markov pricing requires a markov protocol spec");
    }
    const auto& cylinder = require_cylinder(event);
    const std::size_t state = spec.space()->index_of(omega0);
    const PriceTree tree = build_price_tree(spec, event, cylinder.horizon, state);
    return tree.root_value();
}

MarkovPriceMap markov_upper_prob_all(const ProtocolSpec& spec, const Event& event) {
    MarkovPriceMap out;
    out.sup = Rational(0);
    for (std::size_t i = 0; i < spec.space()->size(); ++i) {
        const std::string& label = spec.space()->label(i);
        const Rational value = markov_upper_prob(spec, event, label);
        if (value > out.sup || out.by_state.empty()) out.sup = value;
        out.by_state.emplace(label, value);
    }
    return out;
}

Rational oracle_price(const ProtocolSpec& spec, const Event& event, std::size_t N) {
    require_not_markov(spec);
    require_same_space(spec.space(), event.space(), "oracle pricing");
    const auto& cylinder = require_cylinder(event);
    if (cylinder.horizon > N) {
        throw InputError("pricing horizon is shorter than the event's horizon");
    }
    const std::size_t m = spec.space()->size();
    checked_leaf_count(m, N, kOracleBudget);

    // Variable layout: alpha, then one coefficient block per internal node
    // in depth-then-lexicographic order.
    std::map<std::vector<std::size_t>, std::size_t> offsets;
    std::size_t num_vars = 1;
    {
        std::vector<std::vector<std::size_t>> level{{}};
        for (std::size_t depth = 0; depth < N; ++depth) {
            std::vector<std::vector<std::size_t>> next;
            for (auto& p : level) {
                offsets.emplace(p, num_vars);
                num_vars += spec.cone_at(depth + 1).generators().size();
                for (std::size_t w = 0; w < m; ++w) {
                    auto child = p;
                    child.push_back(w);
                    next.push_back(std::move(child));
                }
            }
            level = std::move(next);
        }
    }

    LinearProgram lp;
    lp.objective.assign(num_vars, Rational(0));
    lp.objective[0] = Rational(-1);  // minimize alpha

    // One row per node at depth 1..N: capital >= 0 inside the tree and
    // capital >= indicator at the leaves, written as -K(q) <= -target.
    auto add_rows = [&](auto&& self, std::vector<std::size_t>& path) -> void {
        if (!path.empty()) {
            std::vector<Rational> row(num_vars, Rational(0));
            row[0] = Rational(-1);
            for (std::size_t j = 0; j < path.size(); ++j) {
                const std::vector<std::size_t> p(path.begin(), path.begin() + j);
                const auto& gens = spec.cone_at(j + 1).generators();
                const std::size_t base = offsets.at(p);
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    row[base + i] = -gens[i].payoff(path[j]);
                }
            }
            const Rational target =
                path.size() == N ? leaf_indicator(event, path) : Rational(0);
            lp.constraints.push_back(std::move(row));
            lp.bounds.push_back(-target);
        }
        if (path.size() == N) return;
        for (std::size_t w = 0; w < m; ++w) {
            path.push_back(w);
            self(self, path);
            path.pop_back();
        }
    };
    std::vector<std::size_t> path;
    add_rows(add_rows, path);

    const LpResult res = solve_lp(lp);
    if (!res.optimal()) {
        throw InternalError("whole-tree superhedging LP must have an optimum");
    }
    return -res.objective;
}

void validate_price_tree(const ProtocolSpec& spec, const PriceTree& tree, const Event& event,
                         std::optional<std::size_t> omega0) {
    const std::size_t m = spec.space()->size();
    for (const auto& [prefix, node] : tree.nodes) {
        if (prefix.size() == tree.horizon) {
            if (node.value != leaf_indicator(event, prefix)) {
                throw InternalError("price tree leaf disagrees with the event indicator");
            }
            continue;
        }
        std::vector<Rational> child_values(m);
        for (std::size_t w = 0; w < m; ++w) {
            auto child = prefix;
            child.push_back(w);
            child_values[w] = tree.at(child).value;
        }
        const std::optional<std::size_t> prev =
            prefix.empty() ? omega0 : std::optional<std::size_t>(prefix.back());
        const Cone& cone = spec.cone_at(prefix.size() + 1, prev);
        const PricePoint fresh =
            one_step_upper_price(cone, Gamble(spec.space(), std::move(child_values)));
        if (fresh.price != node.value) {
            throw InternalError("price tree node fails one-step revalidation");
        }
        if (node.value < 0 || node.value > 1) {
            throw InternalError("price tree node value outside [0,1]");
        }
    }
}

}  // namespace gtp
