#include "gtp/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "gtp/errors.hpp"
#include "gtp/json_io.hpp"
#include "gtp/pricing.hpp"
#include "gtp/strategy.hpp"

namespace gtp::verify {

namespace {

struct CheckFailure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw CheckFailure{message};
}

std::string join_path(const OutcomeSpace& space, std::span<const std::size_t> path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += ",";
        out += space.label(path[i]);
    }
    return out;
}

long rand_range(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

SpacePtr plain_space(std::size_t m) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m; ++i) labels.push_back(std::to_string(i));
    return make_space_from_labels(std::move(labels));
}

/// The three-outcome space -1, 0, 1 with numeric values attached.
SpacePtr signed_space() {
    return make_space({{"-1", Rational(-1)}, {"0", Rational(0)}, {"1", Rational(1)}});
}

Cone random_raw_cone(std::mt19937_64& rng, const SpacePtr& space, std::size_t max_generators) {
    const std::size_t k = 1 + rng() % max_generators;
    std::vector<Gamble> gens;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rational> payoffs(space->size());
        for (auto& p : payoffs) p = Rational(rand_range(rng, -3, 3));
        gens.emplace_back(space, std::move(payoffs));
    }
    return Cone::raw(space, std::move(gens));
}

Cone random_coherent_cone(std::mt19937_64& rng, const SpacePtr& space,
                          std::size_t max_generators) {
    for (;;) {
        Cone cone = random_raw_cone(rng, space, max_generators);
        if (cone.coherence().coherent) return cone;
    }
}

ProbabilityVector random_measure(std::mt19937_64& rng, const SpacePtr& space) {
    std::vector<Rational> weights(space->size());
    Rational sum(0);
    for (auto& w : weights) {
        w = Rational(rand_range(rng, 0, 4));
        sum += w;
    }
    if (sum == 0) {
        weights[rng() % weights.size()] = Rational(1);
        sum = Rational(1);
    }
    for (auto& w : weights) w /= sum;
    return ProbabilityVector(space, std::move(weights));
}

Event random_cylinder(std::mt19937_64& rng, const SpacePtr& space, std::size_t horizon) {
    event_class::Cylinder c;
    c.horizon = horizon;
    std::vector<std::size_t> word(horizon, 0);
    const std::size_t m = space->size();
    for (;;) {
        if (rng() % 2 == 0) c.accepted.insert(word);
        std::size_t pos = horizon;
        while (pos > 0) {
            if (++word[pos - 1] < m) break;
            word[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;
    }
    return Event(space, std::move(c));
}

// ---------------------------------------------------------------------------
// Geometric oracle for two-outcome cones: does the generated cone meet the
// strictly positive quadrant? Decided by exact interval arithmetic on
// pairwise wedges (any conic combination in the plane uses two generators).
// ---------------------------------------------------------------------------

bool strictly_positive(const Gamble& g) {
    return g.payoff(0) > 0 && g.payoff(1) > 0;
}

bool wedge_meets_positive_quadrant(const Gamble& g, const Gamble& h) {
    if (strictly_positive(g) || strictly_positive(h)) return true;
    // Look for c > 0 with c*g + h strictly positive in both coordinates.
    Rational lo(0);
    bool has_hi = false;
    Rational hi(0);
    for (std::size_t k = 0; k < 2; ++k) {
        const Rational& gk = g.payoff(k);
        const Rational& hk = h.payoff(k);
        if (gk > 0) {
            lo = std::max(lo, Rational(-hk / gk));
        } else if (gk == 0) {
            if (hk <= 0) return false;
        } else {
            const Rational bound = -hk / gk;
            hi = has_hi ? std::min(hi, bound) : bound;
            has_hi = true;
        }
    }
    if (has_hi && hi <= lo) return false;
    const Rational candidate = has_hi ? Rational((lo + hi) / 2) : Rational(lo + 1);
    return candidate * g.payoff(0) + h.payoff(0) > 0 &&
           candidate * g.payoff(1) + h.payoff(1) > 0;
}

bool cone_meets_positive_quadrant(const Cone& cone) {
    const auto& gens = cone.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = i; j < gens.size(); ++j) {
            if (wedge_meets_positive_quadrant(gens[i], gens[j])) return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Suite 1: coherence certificates against independent re-evaluation, plus
// the quadrant cross-check in two dimensions.
// ---------------------------------------------------------------------------

void suite_coherence_duality(SuiteResult& result, std::mt19937_64& rng) {
    int coherent = 0;
    int incoherent = 0;
    int quadrant_checked = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 1 + rng() % 4;
        const SpacePtr space = plain_space(m);
        const Cone cone = random_raw_cone(rng, space, 5);
        const CoherenceVerdict& verdict = cone.coherence();

        if (verdict.coherent) {
            ++coherent;
            require(verdict.calibrating.has_value(), "coherent verdict without a measure");
            Rational sum(0);
            for (std::size_t w = 0; w < m; ++w) {
                const Rational& p = verdict.calibrating->weight(w);
                require(p >= 0, "calibrating weight below zero");
                sum += p;
            }
            require(sum == 1, "calibrating weights do not sum to 1");
            for (const auto& g : cone.generators()) {
                Rational e(0);
                for (std::size_t w = 0; w < m; ++w) {
                    e += verdict.calibrating->weight(w) * g.payoff(w);
                }
                require(e <= 0, "calibrating measure gives a generator positive expectation");
            }
        } else {
            ++incoherent;
            require(verdict.witness.size() == cone.generators().size(),
                    "witness length mismatch");
            std::vector<Rational> combo(m, Rational(0));
            for (std::size_t i = 0; i < verdict.witness.size(); ++i) {
                require(verdict.witness[i] >= 0, "negative witness coefficient");
                for (std::size_t w = 0; w < m; ++w) {
                    combo[w] += verdict.witness[i] * cone.generators()[i].payoff(w);
                }
            }
            for (std::size_t w = 0; w < m; ++w) {
                require(combo[w] > 0, "witness combination not strictly positive everywhere");
            }
        }

        if (m == 2) {
            ++quadrant_checked;
            const bool meets = cone_meets_positive_quadrant(cone);
            require(meets == !verdict.coherent,
                    "two-outcome verdict disagrees with the quadrant test on cone #" +
                        std::to_string(t));
        }
    }
    result.lines.push_back("200 random cones: " + std::to_string(coherent) + " coherent, " +
                           std::to_string(incoherent) +
                           " incoherent; every certificate re-verified exactly");
    result.lines.push_back(std::to_string(quadrant_checked) +
                           " two-outcome cones matched the positive-quadrant test");
}

// ---------------------------------------------------------------------------
// Suite 2: zero-cone pricing equals the product measure exactly.
// ---------------------------------------------------------------------------

void suite_zero_cone_pricing(SuiteResult& result, std::mt19937_64& rng) {
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 2 + rng() % 2;
        const std::size_t horizon = 1 + rng() % 4;
        const SpacePtr space = plain_space(m);

        std::vector<ProbabilityVector> measures;
        std::vector<Cone> cones;
        for (std::size_t i = 0; i < horizon; ++i) {
            measures.push_back(random_measure(rng, space));
            cones.push_back(Cone::zero_cone(measures.back()));
        }
        const ProtocolSpec spec = ProtocolSpec::independent(space, cones);
        const Event event = random_cylinder(rng, space, horizon);

        Rational product(0);
        const auto& accepted = std::get<event_class::Cylinder>(event.description()).accepted;
        for (const auto& word : accepted) {
            Rational p(1);
            for (std::size_t i = 0; i < horizon; ++i) p *= measures[i].weight(word[i]);
            product += p;
        }

        const PricedResult priced = upper_prob_cylinder(spec, event, horizon);
        require(priced.upper == product,
                "upper price differs from the product probability on instance #" +
                    std::to_string(t) + ": " + format_rational(priced.upper) + " vs " +
                    format_rational(product));
        require(priced.lower == product,
                "lower price differs from the product probability on instance #" +
                    std::to_string(t));
    }
    result.lines.push_back(
        "100 random product-measure instances priced exactly at the product probability "
        "(upper = lower)");
}

// ---------------------------------------------------------------------------
// Suite 3: 0 <= lower <= upper <= 1 on a corpus of priced instances (the
// pricing code also enforces these bounds internally on every call).
// ---------------------------------------------------------------------------

void suite_price_bounds(SuiteResult& result, std::mt19937_64& rng) {
    int instances = 0;
    auto check = [&](const ProtocolSpec& spec, const Event& event, std::size_t N) {
        const PricedResult priced = upper_prob_cylinder(spec, event, N);
        require(priced.lower >= 0 && priced.lower <= priced.upper && priced.upper <= 1,
                "price bounds violated");
        ++instances;
    };

    for (int t = 0; t < 40; ++t) {
        const std::size_t m = 2 + rng() % 2;
        const SpacePtr space = plain_space(m);
        const std::size_t N = 1 + rng() % 3;
        const ProtocolSpec spec =
            ProtocolSpec::identical(space, random_coherent_cone(rng, space, 4));
        check(spec, random_cylinder(rng, space, N), N);
    }

    // Fixed instances over the catalogue of cone kinds.
    {
        const SpacePtr space = signed_space();
        const ProtocolSpec raw = ProtocolSpec::identical(
            space, Cone::raw(space, {Gamble(space, {Rational(-1), Rational(0), Rational(1)})}));
        check(raw, Event::cylinder(space, 1, {{"1"}}), 1);

        const ProtocolSpec span = ProtocolSpec::identical(
            space, Cone::span(space, {Gamble(space, {Rational(-1), Rational(0), Rational(1)})}));
        check(span, Event::cylinder(space, 2, {{"1", "1"}}), 2);

        const SpacePtr coin = plain_space(2);
        const ProbabilityVector biased(coin, {Rational(1, 3), Rational(2, 3)});
        check(ProtocolSpec::identical(coin, Cone::nonpositive_cone(biased)),
              Event::cylinder(coin, 1, {{"1"}}), 1);
    }

    // Markov prices stay inside [0, 1] as well.
    {
        const SpacePtr coin = make_space_from_labels({"a", "b"});
        std::map<std::string, Cone> cones;
        cones.emplace("a",
                      Cone::zero_cone(ProbabilityVector(coin, {Rational(1, 2), Rational(1, 2)})));
        cones.emplace("b", Cone::zero_cone(ProbabilityVector(coin, {Rational(1), Rational(0)})));
        const ProtocolSpec spec = ProtocolSpec::markov(coin, std::move(cones));
        const Event event = Event::cylinder(coin, 2, {{"b", "a"}});
        const MarkovPriceMap prices = markov_upper_prob_all(spec, event);
        for (const auto& [state, value] : prices.by_state) {
            require(value >= 0 && value <= 1, "markov price outside [0,1] from state " + state);
            ++instances;
        }
    }

    result.lines.push_back(std::to_string(instances) +
                           " priced instances satisfied 0 <= lower <= upper <= 1 exactly");
}

// ---------------------------------------------------------------------------
// Suite 4: backward induction equals the whole-tree LP oracle exactly.
// ---------------------------------------------------------------------------

void suite_oracle_equivalence(SuiteResult& result, std::mt19937_64& rng) {
    int matched = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t m = 2 + rng() % 2;
        const SpacePtr space = plain_space(m);
        const std::size_t N = 1 + rng() % 3;

        ProtocolSpec spec = [&] {
            if (t % 2 == 0) {
                return ProtocolSpec::identical(space, random_coherent_cone(rng, space, 4));
            }
            std::vector<Cone> cones;
            for (std::size_t i = 0; i < N; ++i) {
                cones.push_back(random_coherent_cone(rng, space, 4));
            }
            return ProtocolSpec::independent(space, std::move(cones));
        }();

        const std::size_t horizon = 1 + rng() % N;
        const Event event = random_cylinder(rng, space, horizon);

        const Rational bi = upper_prob_cylinder(spec, event, N).upper;
        const Rational oracle = oracle_price(spec, event, N);
        require(bi == oracle, "backward induction " + format_rational(bi) +
                                  " differs from the LP oracle " + format_rational(oracle) +
                                  " on instance #" + std::to_string(t));
        ++matched;
    }
    result.lines.push_back(std::to_string(matched) +
                           "/50 instances: backward induction == whole-tree LP, exactly");
}

// ---------------------------------------------------------------------------
// Suite 5: the one-sided three-outcome cone. Upper price of {first outcome
// 1} is 1/2, lower is 0; the doubling strategy caps at exactly 2; and no
// prudent constant strategy on the coefficient grid guarantees more.
// ---------------------------------------------------------------------------

void suite_single_generator(SuiteResult& result, std::mt19937_64&) {
    const SpacePtr space = signed_space();
    const Cone cone =
        Cone::raw(space, {Gamble(space, {Rational(-1), Rational(0), Rational(1)})});
    const auto spec = std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(space, cone));
    const Event first_is_one = Event::cylinder(space, 1, {{"1"}});
    const Event target = Event::count_exactly(space, "1", 1, {"-1"});

    const PricedResult priced = upper_prob_cylinder(*spec, first_is_one, 1);
    require(priced.upper == Rational(1, 2),
            "upper price of {first outcome 1} is " + format_rational(priced.upper) +
                ", expected 1/2");
    require(priced.lower == 0, "lower price of {first outcome 1} is not 0");
    result.lines.push_back("upper({first outcome 1}) = 1/2, lower = 0");

    // The doubling strategy: bet one unit while waiting, stop at capital 2.
    const StrategyPtr doubling = stop_when(constant_coeffs({Rational(1)}), Rational(2));
    for (std::size_t hit = 0; hit < 8; ++hit) {
        std::vector<std::size_t> script(10, space->index_of("0"));
        script[hit] = space->index_of("1");
        const Trace trace = run(spec, *doubling, *scripted_reality(script), 10, 0, target);
        require(trace.valid, "doubling run aborted");
        require(trace.final_capital() == 2, "doubling missed capital 2 with the 1 at step " +
                                                std::to_string(hit + 1));
        for (const auto& step : trace.steps) {
            require(step.capital <= 2, "doubling exceeded capital 2");
        }
    }
    result.lines.push_back(
        "doubling reaches exactly 2 on every path with the 1 by step 8 and never exceeds 2");

    // Exhaustive grid search over prudent constant strategies at horizon 4.
    const std::size_t horizon = 4;
    std::vector<Rational> prudent_grid;
    Rational best_guarantee(-1);
    for (int i = 0; i <= 8; ++i) {
        const Rational t = Rational(i, 4);
        const auto strategy = constant_coeffs({t});
        if (!prudence_check(*strategy, *spec, horizon).prudent) continue;
        prudent_grid.push_back(t);

        // Minimum terminal capital over length-4 paths still consistent
        // with the target event.
        Rational worst;
        bool first = true;
        std::vector<std::size_t> path(horizon);
        const std::size_t m = space->size();
        for (std::size_t code = 0; code < 81; ++code) {
            std::size_t rest = code;
            for (std::size_t k = 0; k < horizon; ++k) {
                path[k] = rest % m;
                rest /= m;
            }
            if (membership_prefix(target, path) == Membership::Out) continue;
            const auto capitals = replay_capitals(*strategy, *spec, std::nullopt, path);
            if (first || capitals.back() < worst) {
                worst = capitals.back();
                first = false;
            }
        }
        require(!first, "no event-consistent paths found");
        require(worst <= 2, "a prudent constant strategy guarantees more than 2");
        if (worst > best_guarantee) best_guarantee = worst;
    }
    std::string grid_line = "prudent constant coefficients on the grid:";
    for (const auto& t : prudent_grid) grid_line += " " + format_rational(t);
    grid_line += "; best guaranteed capital on event-consistent paths = " +
                 format_rational(best_guarantee) + " (never > 2)";
    result.lines.push_back(grid_line);
}

// ---------------------------------------------------------------------------
// Suite 6: the linear-span cone over {-1, 0, 1}. Against the evading
// Reality every strategy in the corpus stays at capital <= 1 while all
// outcomes are nonzero; against the all-zero script capital is constant 1.
// Together these witness that both the event "eventually always 0" and its
// complement carry upper probability 1.
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, StrategyPtr>> span_corpus(const SpecPtr& spec) {
    const SpacePtr& space = spec->space();
    const Event generated = Event::generated(space, {"1"}, "0");
    const Event cyl1 = Event::cylinder(space, 1, {{"1"}});
    const Event cyl2 = Event::cylinder(space, 2, {{"1", "1"}});

    const StrategyPtr bet_up = constant_coeffs({Rational(1), Rational(0)});
    const StrategyPtr bet_down = constant_coeffs({Rational(0), Rational(1)});
    const StrategyPtr prop_up = proportional_coeffs({Rational(1), Rational(0)});
    const StrategyPtr prop_down = proportional_coeffs({Rational(0), Rational(1, 2)});

    std::vector<std::pair<std::string, StrategyPtr>> corpus;
    corpus.emplace_back("zero", zero_strategy());
    corpus.emplace_back("constant-up", bet_up);
    corpus.emplace_back("constant-down", bet_down);
    corpus.emplace_back("constant-balanced",
                        constant_coeffs({Rational(1, 2), Rational(1, 2)}));
    corpus.emplace_back("constant-up-2x", constant_coeffs({Rational(2), Rational(0)}));
    corpus.emplace_back("proportional-up", prop_up);
    corpus.emplace_back("proportional-down", prop_down);
    corpus.emplace_back("stop-when-2", stop_when(bet_up, Rational(2)));
    corpus.emplace_back("stop-when-3-prop",
                        stop_when(proportional_coeffs({Rational(0), Rational(1)}), Rational(3)));
    corpus.emplace_back("stop-disabled", stop_when(bet_down, std::nullopt));
    corpus.emplace_back("scaled-sum-cancel",
                        scaled_sum(bet_up, bet_down, Rational(1), Rational(1)));
    corpus.emplace_back("scaled-sum-mixed",
                        scaled_sum(prop_up, stop_when(bet_up, Rational(2)), Rational(1, 2),
                                   Rational(3, 2)));
    corpus.emplace_back("shift-embed-2", shift_embed(bet_up, 2));
    corpus.emplace_back("shift-embed-1-prop", shift_embed(prop_up, 1));
    corpus.emplace_back("restart-prop", restart_scale(RestartFamily::uniform(prop_up),
                                                      Rational(1, 2)));
    corpus.emplace_back(
        "restart-stop",
        restart_scale(RestartFamily::uniform(stop_when(bet_up, Rational(2))), Rational(1, 3)));
    corpus.emplace_back("alternating",
                        alternating_restart(prop_up, prop_down, generated, Rational(1, 2)));
    corpus.emplace_back("shift-transfer-1",
                        shift_transfer(bet_up, {space->index_of("0")}, spec));
    corpus.emplace_back(
        "shift-transfer-2",
        shift_transfer(stop_when(bet_up, Rational(2)),
                       {space->index_of("0"), space->index_of("0")}, spec));
    corpus.emplace_back(
        "superhedge-1",
        superhedge_strategy(upper_prob_cylinder(*spec, cyl1, 1).certificate_upper, cyl1));
    corpus.emplace_back(
        "superhedge-2",
        superhedge_strategy(upper_prob_cylinder(*spec, cyl2, 2).certificate_upper, cyl2));
    return corpus;
}

void suite_span_uncertain(SuiteResult& result, std::mt19937_64&) {
    const SpacePtr space = signed_space();
    const Cone cone =
        Cone::span(space, {Gamble(space, {Rational(-1), Rational(0), Rational(1)})});
    const auto spec = std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(space, cone));
    const Event eventually_zero = Event::all_but_finitely_equal(space, "0");

    const auto corpus = span_corpus(spec);
    require(corpus.size() >= 20, "strategy corpus is smaller than 20");

    const std::size_t trials = 50;
    for (const auto& [name, strategy] : corpus) {
        const Trace evaded = run(spec, *strategy, *evader_reality(), trials, 0);
        require(evaded.valid, "evader run aborted for " + name + ": " + evaded.error);
        require(evaded.steps.size() == trials, "evader run too short for " + name);
        for (const auto& step : evaded.steps) {
            const auto& value = space->outcome(step.omega).value;
            require(value && *value != 0, "evader played a zero outcome against " + name);
            require(step.capital <= 1, "capital exceeded 1 against the evader for " + name);
        }
        std::vector<std::size_t> history;
        for (const auto& step : evaded.steps) history.push_back(step.omega);
        require(!path_in_event(eventually_zero, history, history.back()),
                "evader path is not evidence for the complement for " + name);

        const Trace zeros =
            run(spec, *strategy, *scripted_reality({space->index_of("0")}), trials, 0);
        require(zeros.valid, "all-zero run aborted for " + name + ": " + zeros.error);
        for (const auto& step : zeros.steps) {
            require(step.capital == 1, "capital moved on the all-zero path for " + name);
        }
        std::vector<std::size_t> zero_history(trials, space->index_of("0"));
        require(path_in_event(eventually_zero, zero_history, space->index_of("0")),
                "all-zero path is not evidence for the event");
    }
    result.lines.push_back(
        std::to_string(corpus.size()) +
        " strategies: evader keeps every outcome nonzero with capital <= 1 for 50 trials");
    result.lines.push_back(
        "all-zero script keeps capital constant at 1; both one-sided upper probabilities "
        "behave as 1");
}

// ---------------------------------------------------------------------------
// Suite 7: the restart ladder multiplies capital by 2 per epoch: exactly 32
// after 5 epochs on the all-favorable coin path, prudently (exhaustive
// depth-6 replay).
// ---------------------------------------------------------------------------

void suite_restart_capital(SuiteResult& result, std::mt19937_64& rng) {
    const SpacePtr coin = plain_space(2);
    const ProbabilityVector fair(coin, {Rational(1, 2), Rational(1, 2)});
    const auto spec =
        std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(coin, Cone::zero_cone(fair)));

    // Bet the full capital on outcome 1 (the generator paying +1 at 1).
    const StrategyPtr bet_all = proportional_coeffs({Rational(0), Rational(1)});
    const auto ladder = std::make_shared<RestartScaleStrategy>(RestartFamily::uniform(bet_all),
                                                               Rational(1, 2));

    const Trace favorable = run(spec, *ladder, *scripted_reality({1}), 5, 0);
    require(favorable.valid, "favorable run aborted: " + favorable.error);
    require(favorable.final_capital() == 32, "capital after 5 favorable trials is " +
                                                 format_rational(favorable.final_capital()) +
                                                 ", expected exactly 32");
    std::vector<std::size_t> favorable_history(5, 1);
    require(ladder->epochs_completed(*spec, std::nullopt, favorable_history) == 5,
            "favorable path did not complete 5 epochs");
    result.lines.push_back("all-favorable path: 5 epochs, capital exactly 32 = 2^5");

    for (std::size_t k = 0; k <= 5; ++k) {
        std::vector<std::size_t> h(favorable_history.begin(), favorable_history.begin() + k);
        const auto capitals = replay_capitals(*ladder, *spec, std::nullopt, h);
        require(capitals.back() == Rational(Integer(1) << k), "epoch ladder off at step " +
                                                                  std::to_string(k));
    }

    const PrudenceReport prudence = prudence_check(*ladder, *spec, 6);
    require(prudence.prudent,
            "restart ladder imprudent on path " +
                join_path(*coin, prudence.violating_path));
    result.lines.push_back("prudence verified on the exhaustive depth-6 walk (64 paths)");

    // Whenever the k-th epoch completes, capital at that moment is >= 2^k.
    for (int t = 0; t < 20; ++t) {
        std::vector<std::size_t> history(8);
        for (auto& w : history) w = rng() % 2;
        const auto capitals = replay_capitals(*ladder, *spec, std::nullopt, history);
        std::size_t prev_epochs = 0;
        for (std::size_t i = 1; i <= history.size(); ++i) {
            const std::span<const std::size_t> prefix(history.data(), i);
            const std::size_t epochs = ladder->epochs_completed(*spec, std::nullopt, prefix);
            if (epochs > prev_epochs) {
                require(capitals[i] >= Rational(Integer(1) << epochs),
                        "capital below 2^epochs at an epoch boundary on " +
                            join_path(*coin, history));
                prev_epochs = epochs;
            }
        }
    }
    result.lines.push_back("capital >= 2^k at every k-th epoch completion on 20 sampled paths");
}

// ---------------------------------------------------------------------------
// Suite 8: no-gain prefixes and transfer. For every prudent strategy in the
// corpus and n <= 3 the evasion prefix has only nonpositive payoffs, and the
// transferred strategy is prudent on an exhaustive depth-3 walk of the
// shifted protocol.
// ---------------------------------------------------------------------------

void suite_no_gain_transfer(SuiteResult& result, std::mt19937_64&) {
    const SpacePtr coin = plain_space(2);
    const ProbabilityVector fair(coin, {Rational(1, 2), Rational(1, 2)});
    const auto fair_spec =
        std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(coin, Cone::zero_cone(fair)));

    const SpacePtr three = signed_space();
    const auto one_sided = std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(
        three, Cone::raw(three, {Gamble(three, {Rational(-1), Rational(0), Rational(1)})})));

    const Event coin_cyl = Event::cylinder(coin, 2, {{"1", "1"}});

    std::vector<std::tuple<std::string, SpecPtr, StrategyPtr>> corpus;
    corpus.emplace_back("zero", fair_spec, zero_strategy());
    corpus.emplace_back("proportional-coin", fair_spec,
                        proportional_coeffs({Rational(0), Rational(1, 2)}));
    corpus.emplace_back("stop-proportional", fair_spec,
                        stop_when(proportional_coeffs({Rational(0), Rational(1)}), Rational(4)));
    corpus.emplace_back(
        "superhedge-coin", fair_spec,
        superhedge_strategy(upper_prob_cylinder(*fair_spec, coin_cyl, 2).certificate_upper,
                            coin_cyl));
    corpus.emplace_back("scaled-sum", fair_spec,
                        scaled_sum(zero_strategy(),
                                   proportional_coeffs({Rational(0), Rational(1)}), Rational(1),
                                   Rational(1)));
    corpus.emplace_back("shift-embed", fair_spec,
                        shift_embed(proportional_coeffs({Rational(0), Rational(1)}), 1));
    corpus.emplace_back(
        "restart", fair_spec,
        restart_scale(RestartFamily::uniform(proportional_coeffs({Rational(0), Rational(1)})),
                      Rational(1, 2)));
    // Bet the full capital while waiting for the favorable outcome; absorbs
    // at 0 after an adverse one, so it stays prudent.
    corpus.emplace_back("proportional-one-sided", one_sided,
                        proportional_coeffs({Rational(1)}));

    int checked = 0;
    for (const auto& [name, spec, strategy] : corpus) {
        require(prudence_check(*strategy, *spec, 4).prudent,
                "corpus strategy is not prudent: " + name);
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto prefix = find_no_gain_prefix(*strategy, n, *spec);
            require(prefix.size() == n, "no-gain prefix has the wrong length for " + name);
            const auto capitals = replay_capitals(*strategy, *spec, std::nullopt, prefix);
            for (std::size_t k = 1; k < capitals.size(); ++k) {
                require(capitals[k] <= capitals[k - 1],
                        "a no-gain prefix step has positive payoff for " + name + " at n=" +
                            std::to_string(n));
            }
            require(capitals.back() <= 1, "capital after the no-gain prefix exceeds 1");

            const auto transferred = shift_transfer(strategy, prefix, spec);
            const ProtocolSpec shifted = shifted_spec(*spec, n);
            const PrudenceReport report = prudence_check(*transferred, shifted, 3);
            require(report.prudent, "transferred strategy imprudent for " + name + " (prefix " +
                                        join_path(*spec->space(), prefix) + ", path " +
                                        join_path(*spec->space(), report.violating_path) + ")");
            ++checked;
        }
    }
    result.lines.push_back(std::to_string(checked) +
                           " (strategy, n) pairs: nonpositive payoffs along the evasion prefix "
                           "and prudent transfer on the exhaustive depth-3 walk");
}

// ---------------------------------------------------------------------------
// Suite 9: the residual rule against brute-force permutation enumeration,
// and the alternating restart ladder reaching 2^3 on a constructed path.
// ---------------------------------------------------------------------------

// Brute-force witness oracle: enumerate every completion of the prefix that
// permutes an initial segment of the generator (padding length varied), and
// evaluate the residual of each completion directly. All completions must
// agree on whether their residual lies in the event.
std::optional<bool> residual_oracle(const Event& event, const std::vector<std::size_t>& prefix,
                                    std::size_t m) {
    const auto& g = std::get<event_class::GeneratedPermutable>(event.description());
    const std::size_t base = std::max(prefix.size(), g.head.size());
    // The prefix may consume only tail constants while the whole head still
    // has to fit behind it, so completions can need length |p| + |head|.
    const std::size_t limit = prefix.size() + g.head.size() + 1;
    std::optional<bool> answer;
    for (std::size_t length = base; length <= limit; ++length) {
        // Outcome counts of the generator's first `length` terms, minus the
        // prefix. Any shortfall means no completion exists at this length.
        std::vector<long> leftover(m, 0);
        for (std::size_t w : g.head) ++leftover[w];
        leftover[g.tail_constant] += static_cast<long>(length - g.head.size());
        bool feasible = true;
        for (std::size_t w : prefix) {
            if (--leftover[w] < 0) feasible = false;
        }
        if (!feasible) continue;

        std::vector<std::size_t> remaining;
        for (std::size_t w = 0; w < m; ++w) {
            remaining.insert(remaining.end(), static_cast<std::size_t>(leftover[w]), w);
        }
        do {
            // prefix . remaining . tail^inf permutes an initial segment of
            // the generator; its residual after the prefix is `remaining`.
            const bool in = path_in_event(event, remaining, g.tail_constant);
            if (answer && *answer != in) {
                throw CheckFailure{"residual oracle found disagreeing completions"};
            }
            answer = in;
        } while (std::next_permutation(remaining.begin(), remaining.end()));
    }
    return answer;
}

void suite_residual_restart(SuiteResult& result, std::mt19937_64&) {
    int agreements = 0;
    for (std::size_t m = 1; m <= 3; ++m) {
        const SpacePtr space = plain_space(m);
        // All generator heads of length <= 3.
        std::vector<std::vector<std::size_t>> heads{{}};
        for (std::size_t len = 1; len <= 3; ++len) {
            std::size_t count = 1;
            for (std::size_t i = 0; i < len; ++i) count *= m;
            for (std::size_t code = 0; code < count; ++code) {
                std::vector<std::size_t> head(len);
                std::size_t rest = code;
                for (auto& h : head) {
                    h = rest % m;
                    rest /= m;
                }
                heads.push_back(std::move(head));
            }
        }
        for (const auto& head : heads) {
            for (std::size_t tail = 0; tail < m; ++tail) {
                event_class::GeneratedPermutable desc{head, tail};
                const Event event(space, desc);
                // All prefixes of length <= 5.
                for (std::size_t len = 0; len <= 5; ++len) {
                    std::size_t count = 1;
                    for (std::size_t i = 0; i < len; ++i) count *= m;
                    for (std::size_t code = 0; code < count; ++code) {
                        std::vector<std::size_t> prefix(len);
                        std::size_t rest = code;
                        for (auto& p : prefix) {
                            p = rest % m;
                            rest /= m;
                        }
                        if (membership_prefix(event, prefix) == Membership::Out) continue;
                        const auto expected = residual_oracle(event, prefix, m);
                        require(expected.has_value(),
                                "no completion found for a prefix not ruled out");
                        const bool got = residual_in_generated(event, prefix);
                        require(got == *expected,
                                "residual rule disagrees with the oracle (head " +
                                    join_path(*space, head) + ", prefix " +
                                    join_path(*space, prefix) + ")");
                        ++agreements;
                    }
                }
            }
        }
    }
    result.lines.push_back(std::to_string(agreements) +
                           " (generator, prefix) pairs: closed-form residual == "
                           "permutation-witness oracle");

    // The alternating ladder on a constructed member path.
    const SpacePtr space = signed_space();
    const ProbabilityVector uniform(
        space, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    const auto spec = std::make_shared<const ProtocolSpec>(
        ProtocolSpec::identical(space, Cone::zero_cone(uniform)));
    const Event target = Event::generated(space, {"1"}, "0");

    // Bet everything on outcome 0 each trial: triples on a 0 (fair odds 3).
    const StrategyPtr on_zero =
        proportional_coeffs({Rational(0), Rational(2), Rational(1), Rational(0)});
    const auto ladder = std::make_shared<AlternatingRestartStrategy>(on_zero, on_zero, target,
                                                                     Rational(1, 2));

    const std::size_t zero = space->index_of("0");
    const std::vector<std::size_t> history{zero, zero, zero};
    const Trace trace = run(spec, *ladder, *scripted_reality({zero}), 3, 0);
    require(trace.valid, "alternating run aborted: " + trace.error);
    require(ladder->epochs_completed(*spec, std::nullopt, history) == 3,
            "constructed path did not complete 3 epochs");
    require(trace.final_capital() >= 8, "capital after 3 epochs is " +
                                            format_rational(trace.final_capital()) +
                                            ", expected at least 8");
    result.lines.push_back("alternating ladder: 3 epochs on 0,0,0 (extends to a member path), "
                           "capital " +
                           format_rational(trace.final_capital()) + " >= 8");

    // Epoch member selection: a first epoch that closes after consuming 0,1
    // must hand the second epoch to the complement's strategy.
    const Event second_is_one =
        Event::cylinder(space, 2, {{"-1", "1"}, {"0", "1"}, {"1", "1"}});
    const StrategyPtr wait_then_bet = superhedge_strategy(
        upper_prob_cylinder(*spec, second_is_one, 2).certificate_upper, second_is_one);
    const AlternatingRestartStrategy chooser(wait_then_bet, on_zero, target, Rational(1, 2));
    const std::vector<std::size_t> mixed{zero, space->index_of("1")};
    const auto choices = chooser.epoch_choices(*spec, std::nullopt, mixed);
    require(choices.size() == 2 && choices[0] && !choices[1],
            "epoch selection after consuming 0,1 should switch to the complement member");
    result.lines.push_back(
        "epoch member selection follows the residual rule (0,1 consumed -> switch)");
}

// ---------------------------------------------------------------------------
// Suite 10: the closure refuter confirms the catalogue's structural flags
// and produces explicit counterexamples for the negative cases.
// ---------------------------------------------------------------------------

void suite_event_closure(SuiteResult& result, std::mt19937_64& rng) {
    const SpacePtr space = signed_space();
    const int samples = 500;
    const int depth = 6;

    const Event eventually_zero = Event::all_but_finitely_equal(space, "0");
    const Event all_ones = Event::every_term_in(space, {"1"});
    const Event one_once = Event::count_exactly(space, "1", 1, {"-1"});

    auto describe = [&](const ClosureCounterexample& ce) {
        std::ostringstream os;
        os << "path " << join_path(*space, ce.original.head) << ",("
           << space->label(ce.original.tail) << ")... "
           << (ce.original_in ? "in" : "out") << " vs "
           << join_path(*space, ce.modified.head) << ",(" << space->label(ce.modified.tail)
           << ")... " << (ce.modified_in ? "in" : "out") << " [" << ce.note << "]";
        return os.str();
    };

    struct Case {
        const Event* event;
        std::string name;
        ClosureKind kind;
        bool expect_pass;
    };
    const std::vector<Case> cases{
        {&eventually_zero, "eventually-always-0", ClosureKind::Tail, true},
        {&eventually_zero, "eventually-always-0", ClosureKind::Invariant, true},
        {&all_ones, "every-term-1", ClosureKind::WeaklyInvariant, true},
        {&all_ones, "every-term-1", ClosureKind::Invariant, false},
        {&one_once, "exactly-one-1-no--1", ClosureKind::Permutable, true},
        {&one_once, "exactly-one-1-no--1", ClosureKind::Tail, false},
    };

    for (const auto& c : cases) {
        require(c.event->claims(c.kind) == c.expect_pass,
                "catalogue flag for " + c.name + " / " + to_string(c.kind) + " is wrong");
        const std::uint64_t case_seed = rng();
        const ClosureReport report = check_closure(*c.event, c.kind, samples, depth, case_seed);
        if (c.expect_pass) {
            require(report.pass, "refuter found a counterexample for " + c.name + " / " +
                                     to_string(c.kind) + ": " +
                                     describe(*report.counterexample));
            result.lines.push_back(c.name + " / " + to_string(c.kind) + ": pass (" +
                                   std::to_string(samples) + " samples)");
        } else {
            require(!report.pass, "refuter failed to refute " + c.name + " / " +
                                      to_string(c.kind) + " within " + std::to_string(samples) +
                                      " samples");
            result.lines.push_back(c.name + " / " + to_string(c.kind) +
                                   ": counterexample " + describe(*report.counterexample));
        }
    }

    // Complement duality of the tail property on the same sample budget.
    const Event not_eventually_zero = complement_event(eventually_zero);
    require(check_closure(not_eventually_zero, ClosureKind::Tail, samples, depth, rng()).pass,
            "complement of a tail event failed the tail refuter");
    const Event not_one_once = complement_event(one_once);
    require(!check_closure(not_one_once, ClosureKind::Tail, samples, depth, rng()).pass,
            "complement of a non-tail event passed the tail refuter");
    result.lines.push_back("tail refutation commutes with complement on both test events");
}

using SuiteFn = std::function<void(SuiteResult&, std::mt19937_64&)>;

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table{
        {"coherence-duality", suite_coherence_duality},
        {"zero-cone-pricing", suite_zero_cone_pricing},
        {"price-bounds", suite_price_bounds},
        {"oracle-equivalence", suite_oracle_equivalence},
        {"single-generator", suite_single_generator},
        {"span-uncertain", suite_span_uncertain},
        {"restart-capital", suite_restart_capital},
        {"no-gain-transfer", suite_no_gain_transfer},
        {"residual-restart", suite_residual_restart},
        {"event-closure", suite_event_closure},
    };
    return table;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : suite_table()) names.push_back(name);
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
    for (const auto& [candidate, fn] : suite_table()) {
        if (candidate != name) continue;
        SuiteResult result;
        result.name = name;
        result.seed = seed;
        std::mt19937_64 rng(seed);
        try {
            fn(result, rng);
        } catch (const CheckFailure& failure) {
            result.pass = false;
            result.failure = failure.message;
        } catch (const Error& error) {
            result.pass = false;
            result.failure = std::string("unexpected error: ") + error.what();
        }
        return result;
    }
    throw InputError("unknown verify suite: \"" + name + "\"");
}

std::vector<SuiteResult> run_all(std::uint64_t seed) {
    std::vector<SuiteResult> results;
    for (const auto& name : suite_names()) results.push_back(run_suite(name, seed));
    return results;
}

}  // namespace gtp::verify
