#include <doctest.h>

#include <random>

#include "gtp/errors.hpp"
#include "gtp/pricing.hpp"
#include "gtp/strategy.hpp"
#include "test_helpers.hpp"

using namespace gtp;
using gtp::testing::gamble;
using gtp::testing::rat;

namespace {

SpacePtr coin() { return make_space_from_labels({"0", "1"}); }

SpecPtr fair_spec() {
    const auto space = coin();
    return std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(
        space, Cone::zero_cone(ProbabilityVector(space, {rat(1, 2), rat(1, 2)}))));
}

SpacePtr signed3() {
    return make_space({{"-1", rat(-1)}, {"0", rat(0)}, {"1", rat(1)}});
}

SpecPtr one_sided_spec() {
    const auto space = signed3();
    return std::make_shared<const ProtocolSpec>(
        ProtocolSpec::identical(space, Cone::raw(space, {gamble(space, {-1, 0, 1})})));
}

// Exhaustively enumerate all histories up to `depth`, comparing capitals of
// the combined strategy against the stated identity.
template <typename Check>
void walk_histories(const SpecPtr& spec, std::size_t depth, const Check& check) {
    const std::size_t m = spec->space()->size();
    std::vector<std::size_t> history;
    auto rec = [&](auto&& self) -> void {
        check(history);
        if (history.size() == depth) return;
        for (std::size_t w = 0; w < m; ++w) {
            history.push_back(w);
            self(self);
            history.pop_back();
        }
    };
    rec(rec);
}

}  // namespace

TEST_CASE("scaled sum keeps the exact capital identity") {
    const auto spec = fair_spec();
    const auto s1 = proportional_coeffs({rat(0), rat(1)});
    const auto s2 = stop_when(constant_coeffs({rat(0), rat(1)}), rat(3));
    const Rational e1(1, 2);
    const Rational e2(3, 2);
    const auto combined = scaled_sum(s1, s2, e1, e2);

    walk_histories(spec, 4, [&](const std::vector<std::size_t>& h) {
        const Rational k1 = replay_capitals(*s1, *spec, std::nullopt, h).back();
        const Rational k2 = replay_capitals(*s2, *spec, std::nullopt, h).back();
        const Rational k = replay_capitals(*combined, *spec, std::nullopt, h).back();
        CHECK(k - 1 == (e1 * (k1 - 1) + e2 * (k2 - 1)) / (e1 + e2));
    });
}

TEST_CASE("scaled sum of opposite bets is the zero gamble") {
    const auto spec = fair_spec();
    const auto s1 = constant_coeffs({rat(1), rat(0)});
    const auto s2 = constant_coeffs({rat(0), rat(1)});
    const auto combined = scaled_sum(s1, s2, rat(1), rat(1));
    const auto coeffs = combined->move(*spec, std::nullopt, {}, rat(1));
    const Gamble F = spec->cones().front().combine(coeffs);
    CHECK(F.is_zero());

    const Trace trace = run(spec, *combined, *scripted_reality({1, 0, 1}), 3, 0);
    REQUIRE(trace.valid);
    for (const auto& s : trace.steps) CHECK(s.capital == 1);
}

TEST_CASE("scaled sum preserves prudence") {
    const auto spec = fair_spec();
    const auto s1 = proportional_coeffs({rat(0), rat(1)});
    const auto s2 = proportional_coeffs({rat(1, 2), rat(0)});
    REQUIRE(prudence_check(*s1, *spec, 4).prudent);
    REQUIRE(prudence_check(*s2, *spec, 4).prudent);
    CHECK(prudence_check(*scaled_sum(s1, s2, rat(2), rat(1)), *spec, 4).prudent);
}

TEST_CASE("scaled sums of random prudent pairs stay prudent with exact capitals") {
    const auto spec = fair_spec();
    std::mt19937_64 rng(31);
    // A pool of prudent building blocks to draw random pairs from.
    const std::vector<StrategyPtr> pool{
        zero_strategy(),
        proportional_coeffs({rat(0), rat(1)}),
        proportional_coeffs({rat(1, 3), rat(0)}),
        stop_when(proportional_coeffs({rat(0), rat(1)}), rat(2)),
        shift_embed(proportional_coeffs({rat(0), rat(1, 2)}), 1),
    };
    for (int t = 0; t < 6; ++t) {
        const auto& s1 = pool[rng() % pool.size()];
        const auto& s2 = pool[rng() % pool.size()];
        const Rational e1(1 + static_cast<long>(rng() % 4), 2);
        const Rational e2(1 + static_cast<long>(rng() % 4), 3);
        const auto combined = scaled_sum(s1, s2, e1, e2);
        CHECK(prudence_check(*combined, *spec, 4).prudent);
        walk_histories(spec, 4, [&](const std::vector<std::size_t>& h) {
            const Rational k1 = replay_capitals(*s1, *spec, std::nullopt, h).back();
            const Rational k2 = replay_capitals(*s2, *spec, std::nullopt, h).back();
            const Rational k = replay_capitals(*combined, *spec, std::nullopt, h).back();
            CHECK(k - 1 == (e1 * (k1 - 1) + e2 * (k2 - 1)) / (e1 + e2));
        });
    }
}

TEST_CASE("shift embed waits and then replays the inner strategy") {
    const auto spec = fair_spec();
    const auto inner = constant_coeffs({rat(0), rat(1)});

    const auto unshifted = shift_embed(inner, 0);
    CHECK(unshifted->move(*spec, std::nullopt, {}, rat(1)) ==
          inner->move(*spec, std::nullopt, {}, rat(1)));

    const auto embedded = shift_embed(inner, 2);
    const Trace trace = run(spec, *embedded, *scripted_reality({0, 0, 1}), 3, 0);
    REQUIRE(trace.valid);
    CHECK(trace.steps[0].capital == 1);
    CHECK(trace.steps[1].capital == 1);
    CHECK(trace.steps[2].capital == 2);

    // Capital after n + k trials equals the inner capital after k shifted
    // trials on the matching history.
    walk_histories(spec, 4, [&](const std::vector<std::size_t>& h) {
        if (h.size() < 2) return;
        const Rational embedded_k = replay_capitals(*embedded, *spec, std::nullopt, h).back();
        const std::vector<std::size_t> tail_hist(h.begin() + 2, h.end());
        const Rational inner_k = replay_capitals(*inner, *spec, std::nullopt, tail_hist).back();
        CHECK(embedded_k == inner_k);
    });

    const auto prudent_inner = proportional_coeffs({rat(0), rat(1)});
    CHECK(prudence_check(*shift_embed(prudent_inner, 2), *spec, 4).prudent);
}

TEST_CASE("shift embed hands the shifted cone sequence to the inner strategy") {
    const auto space = coin();
    const std::vector<Cone> cones{
        Cone::zero_cone(ProbabilityVector(space, {rat(1, 2), rat(1, 2)})),
        Cone::zero_cone(ProbabilityVector(space, {rat(2, 3), rat(1, 3)})),
    };
    const auto spec = std::make_shared<const ProtocolSpec>(
        ProtocolSpec::independent(space, cones));
    const auto inner = proportional_coeffs({rat(0), rat(1)});
    const auto embedded = shift_embed(inner, 1);
    const ProtocolSpec shifted = shifted_spec(*spec, 1);

    walk_histories(spec, 3, [&](const std::vector<std::size_t>& h) {
        if (h.empty()) return;
        const std::vector<std::size_t> tail_hist(h.begin() + 1, h.end());
        CHECK(replay_capitals(*embedded, *spec, std::nullopt, h).back() ==
              replay_capitals(*inner, shifted, std::nullopt, tail_hist).back());
    });

    // The payoffs beyond the embedding really come from the later cones:
    // the second trial's generators price outcome 1 at 2-to-1.
    const auto caps = replay_capitals(*embedded, *spec, std::nullopt,
                                      std::vector<std::size_t>{0, 1});
    CHECK(caps.back() == 3);  // +2 on the biased cone's favorable outcome
}

TEST_CASE("stop when a target is reached") {
    const auto spec = fair_spec();
    const auto bet = constant_coeffs({rat(0), rat(1)});

    // Target 1 stops immediately (capital already starts there).
    const auto stopped = stop_when(bet, rat(1));
    const Trace idle = run(spec, *stopped, *scripted_reality({1, 1}), 2, 0);
    REQUIRE(idle.valid);
    for (const auto& s : idle.steps) CHECK(s.capital == 1);

    // The doubling lock: capital freezes at 2 once reached.
    const auto doubling = stop_when(bet, rat(2));
    const Trace locked = run(spec, *doubling, *scripted_reality({1, 1, 0}), 3, 0);
    REQUIRE(locked.valid);
    CHECK(locked.steps[0].capital == 2);
    CHECK(locked.steps[1].capital == 2);
    CHECK(locked.steps[2].capital == 2);

    // A disabled stop behaves exactly like the inner strategy.
    const auto disabled = stop_when(bet, std::nullopt);
    walk_histories(spec, 3, [&](const std::vector<std::size_t>& h) {
        CHECK(replay_capitals(*disabled, *spec, std::nullopt, h) ==
              replay_capitals(*bet, *spec, std::nullopt, h));
    });
}

TEST_CASE("restart ladder doubles per epoch") {
    const auto spec = fair_spec();
    const auto bet_all = proportional_coeffs({rat(0), rat(1)});
    const RestartScaleStrategy ladder(RestartFamily::uniform(bet_all), rat(1, 2));

    const std::vector<std::size_t> favorable(5, 1);
    const auto capitals = replay_capitals(ladder, *spec, std::nullopt, favorable);
    CHECK(capitals.back() == 32);
    CHECK(ladder.epochs_completed(*spec, std::nullopt, favorable) == 5);

    // A path whose first epoch never completes keeps the member's range.
    const std::vector<std::size_t> hopeless{0, 0, 0, 0};
    CHECK(replay_capitals(ladder, *spec, std::nullopt, hopeless).back() == 0);
    CHECK(ladder.epochs_completed(*spec, std::nullopt, hopeless) == 0);

    CHECK(prudence_check(ladder, *spec, 5).prudent);
    CHECK_THROWS_AS(RestartScaleStrategy(RestartFamily::uniform(bet_all), rat(3, 2)),
                    InputError);
}

TEST_CASE("markov restart ladder with per-state members") {
    const auto space = make_space_from_labels({"a", "b"});
    std::map<std::string, Cone> cones;
    cones.emplace("a", Cone::zero_cone(ProbabilityVector(space, {rat(1, 2), rat(1, 2)})));
    cones.emplace("b", Cone::zero_cone(ProbabilityVector(space, {rat(1, 2), rat(1, 2)})));
    const auto spec = std::make_shared<const ProtocolSpec>(
        ProtocolSpec::markov(space, std::move(cones)));

    std::map<std::string, StrategyPtr> members;
    members.emplace("a", proportional_coeffs({rat(0), rat(1)}));  // doubles on b
    members.emplace("b", proportional_coeffs({rat(0), rat(1)}));
    const RestartScaleStrategy ladder(RestartFamily::per_state(std::move(members)), rat(1, 2));

    // From state a, the favorable outcome is always b: each trial doubles
    // and completes an epoch.
    const std::vector<std::size_t> favorable(4, 1);
    const auto capitals =
        replay_capitals(ladder, *spec, space->index_of("a"), favorable);
    CHECK(capitals.back() == 16);
    CHECK(ladder.epochs_completed(*spec, space->index_of("a"), favorable) == 4);
}

TEST_CASE("alternating restart consults the residual rule") {
    const auto space = signed3();
    const auto spec = std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(
        space,
        Cone::zero_cone(ProbabilityVector(space, {rat(1, 3), rat(1, 3), rat(1, 3)}))));
    const Event target = Event::generated(space, {"1"}, "0");

    // Waits one trial, then bets on the second outcome being 1.
    const Event second_one = Event::cylinder(space, 2, {{"-1", "1"}, {"0", "1"}, {"1", "1"}});
    const auto wait_then_bet = superhedge_strategy(
        upper_prob_cylinder(*spec, second_one, 2).certificate_upper, second_one);
    // Triples on every 0.
    const auto on_zero = proportional_coeffs({rat(0), rat(2), rat(1), rat(0)});

    const AlternatingRestartStrategy strategy(wait_then_bet, on_zero, target, rat(1, 2));
    const std::size_t zero = space->index_of("0");
    const std::size_t one = space->index_of("1");

    const std::vector<std::size_t> history{zero, one};
    const auto choices = strategy.epoch_choices(*spec, std::nullopt, history);
    REQUIRE(choices.size() == 2);
    CHECK(choices[0]);        // the ladder begins with the primary member
    CHECK_FALSE(choices[1]);  // residual after 0,1 has left the event

    CHECK(strategy.epochs_completed(*spec, std::nullopt, history) == 1);
    CHECK(replay_capitals(strategy, *spec, std::nullopt, history).back() == 3);

    // Without epoch completions the ladder never queries the residual.
    const std::vector<std::size_t> flat{one, zero, zero};
    CHECK(strategy.epochs_completed(*spec, std::nullopt, flat) == 0);

    // A completed epoch whose consumed prefix already rules the event out
    // surfaces the residual error.
    const std::vector<std::size_t> ruled_out{one, one, zero};
    CHECK_THROWS_AS(strategy.epochs_completed(*spec, std::nullopt, ruled_out), InputError);

    CHECK_THROWS_AS(AlternatingRestartStrategy(
                        wait_then_bet, on_zero,
                        Event::count_exactly(space, "1", 1, {"-1"}), rat(1, 2)),
                    InputError);
}

TEST_CASE("shift transfer replays behind a prefix") {
    const auto spec = fair_spec();
    const auto zero = zero_strategy();
    CHECK(shift_transfer(zero, {0, 0}, spec)
              ->move(*spec, std::nullopt, {}, rat(1))
              .size() == 2);

    const auto bet = proportional_coeffs({rat(0), rat(1)});
    const auto transferred = shift_transfer(bet, {}, spec);
    walk_histories(spec, 3, [&](const std::vector<std::size_t>& h) {
        CHECK(replay_capitals(*transferred, *spec, std::nullopt, h) ==
              replay_capitals(*bet, *spec, std::nullopt, h));
    });

    // After a no-gain prefix the transferred strategy stays prudent.
    const auto prefix = find_no_gain_prefix(*bet, 3, *spec);
    const auto behind = shift_transfer(bet, prefix, spec);
    CHECK(prudence_check(*behind, shifted_spec(*spec, 3), 3).prudent);
}

TEST_CASE("no-gain prefixes have nonpositive payoffs even for imprudent bets") {
    const auto spec = fair_spec();
    const auto bet = constant_coeffs({rat(0), rat(1)});  // keeps betting 1
    const auto prefix = find_no_gain_prefix(*bet, 3, *spec);
    CHECK(prefix == std::vector<std::size_t>{0, 0, 0});
    const auto capitals = replay_capitals(*bet, *spec, std::nullopt, prefix);
    CHECK(capitals.back() == -2);  // valid prefix, imprudent strategy

    const auto zero = zero_strategy();
    const auto idle_prefix = find_no_gain_prefix(*zero, 2, *spec);
    CHECK(replay_capitals(*zero, *spec, std::nullopt, idle_prefix).back() == 1);

    const auto doubling = stop_when(bet, rat(2));
    const auto stop_prefix = find_no_gain_prefix(*doubling, 2, *spec);
    const auto stop_capitals = replay_capitals(*doubling, *spec, std::nullopt, stop_prefix);
    for (std::size_t i = 1; i < stop_capitals.size(); ++i) {
        CHECK(stop_capitals[i] <= stop_capitals[i - 1]);
    }
}

TEST_CASE("superhedge strategies replay their certificates") {
    const auto spec = fair_spec();
    const Event both_ones = Event::cylinder(spec->space(), 2, {{"1", "1"}});
    const PricedResult priced = upper_prob_cylinder(*spec, both_ones, 2);
    REQUIRE(priced.upper == rat(1, 4));
    const auto hedger = superhedge_strategy(priced.certificate_upper, both_ones);

    const Trace winner = run(spec, *hedger, *scripted_reality({1, 1}), 2, 0);
    REQUIRE(winner.valid);
    CHECK(winner.final_capital() == 4);

    const Trace loser = run(spec, *hedger, *scripted_reality({1, 0}), 2, 0);
    REQUIRE(loser.valid);
    CHECK(loser.final_capital() == 0);

    CHECK(prudence_check(*hedger, *spec, 3).prudent);

    // Full space: price 1, and the strategy never moves the capital.
    const Event everything = Event::cylinder(spec->space(), 1, {{"0"}, {"1"}});
    const PricedResult trivial = upper_prob_cylinder(*spec, everything, 1);
    REQUIRE(trivial.upper == 1);
    const auto idle = superhedge_strategy(trivial.certificate_upper, everything);
    const Trace flat = run(spec, *idle, *scripted_reality({0, 1}), 2, 0);
    REQUIRE(flat.valid);
    for (const auto& s : flat.steps) CHECK(s.capital == 1);

    // An impossible event has price 0 and no superhedge strategy.
    const Event nothing = Event::cylinder(spec->space(), 1, {});
    const PricedResult impossible = upper_prob_cylinder(*spec, nothing, 1);
    REQUIRE(impossible.upper == 0);
    CHECK_THROWS_AS(superhedge_strategy(impossible.certificate_upper, nothing), InputError);
}

TEST_CASE("superhedge on the one-sided cone doubles at the favorable outcome") {
    const auto spec = one_sided_spec();
    const Event first_one = Event::cylinder(spec->space(), 1, {{"1"}});
    const PricedResult priced = upper_prob_cylinder(*spec, first_one, 1);
    REQUIRE(priced.upper == rat(1, 2));
    const auto hedger = superhedge_strategy(priced.certificate_upper, first_one);
    const Trace trace = run(spec, *hedger, *scripted_reality({spec->space()->index_of("1")}),
                            1, 0);
    REQUIRE(trace.valid);
    CHECK(trace.final_capital() == 2);
}

TEST_CASE("prudence checks replay exhaustively") {
    const auto spec = fair_spec();
    CHECK(prudence_check(*zero_strategy(), *spec, 4).prudent);

    const auto bet = constant_coeffs({rat(0), rat(1)});
    CHECK(prudence_check(*bet, *spec, 1).prudent);
    const PrudenceReport depth2 = prudence_check(*bet, *spec, 2);
    REQUIRE_FALSE(depth2.prudent);
    CHECK(depth2.violating_path == std::vector<std::size_t>{0, 0});
    CHECK(depth2.capital == -1);

    const auto doubling = stop_when(bet, rat(2));
    const PrudenceReport depth3 = prudence_check(*doubling, *spec, 3);
    REQUIRE_FALSE(depth3.prudent);
    CHECK(depth3.violating_path == std::vector<std::size_t>{0, 0});
}

TEST_CASE("reality policies") {
    const auto spec = one_sided_spec();
    std::mt19937_64 rng(1);

    const auto minimizer = minimizer_reality();
    CHECK(minimizer->choose(*spec, std::nullopt, {}, gamble(spec->space(), {-1, 0, 1}), rng) ==
          0);

    // The evader on the span cone always finds a nonzero outcome with a
    // nonpositive payoff, whichever side the bet takes.
    const auto space = spec->space();
    const auto span = std::make_shared<const ProtocolSpec>(ProtocolSpec::identical(
        space, Cone::span(space, {gamble(space, {-1, 0, 1})})));
    const auto evader = evader_reality();
    CHECK(evader->choose(*span, std::nullopt, {}, gamble(space, {-1, 0, 1}), rng) == 0);
    CHECK(evader->choose(*span, std::nullopt, {}, gamble(space, {1, 0, -1}), rng) == 2);
    CHECK(evader->choose(*span, std::nullopt, {}, gamble(space, {0, 0, 0}), rng) == 0);

    // Scripted policies repeat their last outcome.
    const auto scripted = scripted_reality({2, 1});
    CHECK(scripted->choose(*spec, std::nullopt, std::vector<std::size_t>{2, 1, 0},
                           gamble(space, {0, 0, 0}), rng) == 1);

    // Samplers are deterministic in (seed, position).
    const auto sampler =
        sampler_reality(ProbabilityVector(space, {rat(1, 3), rat(1, 3), rat(1, 3)}), 7);
    std::vector<std::size_t> history;
    std::vector<std::size_t> draws1;
    for (int i = 0; i < 6; ++i) {
        draws1.push_back(sampler->choose(*spec, std::nullopt, history, gamble(space, {0, 0, 0}),
                                         rng));
        history.push_back(draws1.back());
    }
    const auto sampler2 =
        sampler_reality(ProbabilityVector(space, {rat(1, 3), rat(1, 3), rat(1, 3)}), 7);
    std::vector<std::size_t> history2;
    for (int i = 0; i < 6; ++i) {
        const auto draw = sampler2->choose(*spec, std::nullopt, history2,
                                           gamble(space, {0, 0, 0}), rng);
        CHECK(draw == draws1[static_cast<std::size_t>(i)]);
        history2.push_back(draw);
    }
}
