#include <doctest.h>

#include <random>

#include "gtp/errors.hpp"
#include "gtp/events.hpp"
#include "test_helpers.hpp"

using namespace gtp;
using gtp::testing::rat;

namespace {

SpacePtr signed3() {
    return make_space({{"-1", rat(-1)}, {"0", rat(0)}, {"1", rat(1)}});
}

std::vector<std::size_t> idx(const SpacePtr& space, const std::vector<std::string>& labels) {
    return to_outcome_indices(*space, labels);
}

}  // namespace

TEST_CASE("count event membership over prefixes") {
    const auto space = signed3();
    const Event e = Event::count_exactly(space, "1", 1, {"-1"});
    CHECK(membership_prefix(e, idx(space, {"0", "1"})) == Membership::Undetermined);
    CHECK(membership_prefix(e, idx(space, {"-1"})) == Membership::Out);
    CHECK(membership_prefix(e, idx(space, {"1", "1"})) == Membership::Out);
    CHECK(membership_prefix(e, idx(space, {})) == Membership::Undetermined);
    CHECK(membership_prefix(e, idx(space, {"0", "0", "0"})) == Membership::Undetermined);
}

TEST_CASE("cylinder membership is decided at its horizon") {
    const auto space = signed3();
    const Event e = Event::cylinder(space, 2, {{"1", "1"}});
    CHECK(membership_prefix(e, idx(space, {"1", "1", "0"})) == Membership::In);
    CHECK(membership_prefix(e, idx(space, {"1"})) == Membership::Undetermined);
    CHECK(membership_prefix(e, idx(space, {"0"})) == Membership::Out);

    const Event full = Event::cylinder(
        space, 1, {{"-1"}, {"0"}, {"1"}});
    CHECK(membership_prefix(full, idx(space, {})) == Membership::In);
}

TEST_CASE("complement swaps membership and normalizes") {
    const auto space = signed3();
    const Event e = Event::count_exactly(space, "1", 1, {"-1"});
    const Event ec = complement_event(e);
    CHECK(membership_prefix(ec, idx(space, {"-1"})) == Membership::In);
    CHECK(membership_prefix(ec, idx(space, {"0", "1"})) == Membership::Undetermined);

    // Double complement normalizes back to the original description.
    const Event ecc = complement_event(ec);
    CHECK(std::holds_alternative<event_class::CountExactly>(ecc.description()));

    // Cylinder complements stay cylinders with the complementary word set.
    const Event cyl = Event::cylinder(space, 1, {{"1"}});
    const Event cylc = complement_event(cyl);
    const auto& desc = std::get<event_class::Cylinder>(cylc.description());
    CHECK(desc.accepted.size() == 2);
    CHECK(membership_prefix(cylc, idx(space, {"0"})) == Membership::In);
    CHECK(membership_prefix(cylc, idx(space, {"1"})) == Membership::Out);
}

TEST_CASE("shift images") {
    const auto space = signed3();
    const Event tail = Event::all_but_finitely_equal(space, "0");
    CHECK(std::holds_alternative<event_class::AllButFinitelyEqual>(
        shift_event(tail, 3).description()));

    const Event cyl = Event::cylinder(space, 2, {{"1", "0"}});
    const Event shifted = shift_event(cyl, 1);
    const auto& desc = std::get<event_class::Cylinder>(shifted.description());
    CHECK(desc.horizon == 1);
    CHECK(desc.accepted == std::set<std::vector<std::size_t>>{idx(space, {"0"})});

    CHECK_THROWS_AS(shift_event(Event::generated(space, {"1"}, "0"), 1), InputError);
    CHECK_THROWS_AS(shift_event(Event::count_exactly(space, "1", 1, {}), 1), InputError);
}

TEST_CASE("eventually-constant path membership") {
    const auto space = signed3();
    const std::size_t zero = space->index_of("0");
    const std::size_t one = space->index_of("1");

    const Event tail = Event::all_but_finitely_equal(space, "0");
    CHECK(path_in_event(tail, idx(space, {"1", "-1"}), zero));
    CHECK_FALSE(path_in_event(tail, idx(space, {"0", "0"}), one));

    const Event count = Event::count_exactly(space, "1", 1, {"-1"});
    CHECK(path_in_event(count, idx(space, {"0", "1"}), zero));
    CHECK_FALSE(path_in_event(count, idx(space, {"0", "1", "1"}), zero));
    CHECK_FALSE(path_in_event(count, idx(space, {"-1", "1"}), zero));
    CHECK_FALSE(path_in_event(count, idx(space, {"1"}), one));

    const Event gen = Event::generated(space, {"1"}, "0");
    CHECK(path_in_event(gen, idx(space, {"0", "0", "1"}), zero));
    CHECK_FALSE(path_in_event(gen, idx(space, {"0", "0"}), zero));
    CHECK_FALSE(path_in_event(gen, idx(space, {"1", "1"}), zero));

    const Event io = Event::infinitely_often(space, {"1"});
    CHECK(path_in_event(io, idx(space, {"0"}), one));
    CHECK_FALSE(path_in_event(io, idx(space, {"1", "1", "1"}), zero));
}

TEST_CASE("residual membership in a generated event") {
    const auto space = signed3();
    const Event gen = Event::generated(space, {"1"}, "0");
    CHECK(residual_in_generated(gen, idx(space, {"0", "0"})));
    CHECK_FALSE(residual_in_generated(gen, idx(space, {"0", "1", "0"})));
    CHECK(residual_in_generated(gen, idx(space, {})));
    CHECK_THROWS_AS(residual_in_generated(gen, idx(space, {"-1"})), InputError);

    const Event not_generated = Event::count_exactly(space, "1", 1, {"-1"});
    CHECK_THROWS_AS(residual_in_generated(not_generated, idx(space, {})), InputError);
}

TEST_CASE("generated membership rules out excess non-constant outcomes") {
    const auto space = signed3();
    const Event gen = Event::generated(space, {"1"}, "0");
    CHECK(membership_prefix(gen, idx(space, {"0", "1"})) == Membership::Undetermined);
    CHECK(membership_prefix(gen, idx(space, {"1", "1"})) == Membership::Out);
    CHECK(membership_prefix(gen, idx(space, {"-1"})) == Membership::Out);
}

TEST_CASE("closure refuter on the catalogue") {
    const auto space = signed3();
    const int samples = 300;
    const int depth = 6;

    const Event tail = Event::all_but_finitely_equal(space, "0");
    CHECK(check_closure(tail, ClosureKind::Tail, samples, depth, 7).pass);
    CHECK(check_closure(tail, ClosureKind::Invariant, samples, depth, 7).pass);
    CHECK(check_closure(tail, ClosureKind::Permutable, samples, depth, 7).pass);

    const Event ones = Event::every_term_in(space, {"1"});
    CHECK(check_closure(ones, ClosureKind::WeaklyInvariant, samples, depth, 7).pass);
    const auto invariant_report = check_closure(ones, ClosureKind::Invariant, samples, depth, 7);
    REQUIRE_FALSE(invariant_report.pass);
    // The counterexample shows a non-member whose shift image is a member.
    CHECK_FALSE(invariant_report.counterexample->original_in);
    CHECK(invariant_report.counterexample->modified_in);

    const Event count = Event::count_exactly(space, "1", 1, {"-1"});
    CHECK(check_closure(count, ClosureKind::Permutable, samples, depth, 7).pass);
    CHECK_FALSE(check_closure(count, ClosureKind::Tail, samples, depth, 7).pass);

    const Event gen = Event::generated(space, {"1"}, "0");
    CHECK(check_closure(gen, ClosureKind::Permutable, samples, depth, 7).pass);
    CHECK_FALSE(check_closure(gen, ClosureKind::Tail, samples, depth, 7).pass);
}

TEST_CASE("closure refuter is seed-reproducible") {
    const auto space = signed3();
    const Event count = Event::count_exactly(space, "1", 1, {"-1"});
    const auto a = check_closure(count, ClosureKind::Tail, 200, 6, 99);
    const auto b = check_closure(count, ClosureKind::Tail, 200, 6, 99);
    REQUIRE_FALSE(a.pass);
    REQUIRE_FALSE(b.pass);
    CHECK(a.samples_checked == b.samples_checked);
    CHECK(a.counterexample->original.head == b.counterexample->original.head);
    CHECK(a.counterexample->modified.head == b.counterexample->modified.head);
}

TEST_CASE("invariance equals both weak checks across the catalogue") {
    const auto space = signed3();
    const std::vector<Event> catalogue{
        Event::all_but_finitely_equal(space, "0"),
        Event::infinitely_often(space, {"1"}),
        Event::every_term_in(space, {"1"}),
        Event::every_term_in(space, {"-1", "0", "1"}),
        Event::count_exactly(space, "1", 1, {"-1"}),
        Event::count_exactly(space, "1", 0, {}),
        Event::generated(space, {"1"}, "0"),
        Event::cylinder(space, 1, {{"1"}}),
    };
    for (const auto& event : catalogue) {
        const bool invariant_pass =
            check_closure(event, ClosureKind::Invariant, 300, 5, 21).pass;
        const bool weak_e = check_closure(event, ClosureKind::WeaklyInvariant, 300, 5, 21).pass;
        const bool weak_ec = check_closure(complement_event(event), ClosureKind::WeaklyInvariant,
                                           300, 5, 21).pass;
        CHECK(invariant_pass == (weak_e && weak_ec));

        // Tail refutation commutes with complement.
        const bool tail_e = check_closure(event, ClosureKind::Tail, 300, 5, 22).pass;
        const bool tail_ec =
            check_closure(complement_event(event), ClosureKind::Tail, 300, 5, 22).pass;
        CHECK(tail_e == tail_ec);
    }
}

TEST_CASE("tri-state prefix knowledge is sound on sampled extensions") {
    std::mt19937_64 rng(5150);
    const auto space = signed3();
    const std::vector<Event> catalogue{
        Event::cylinder(space, 2, {{"1", "1"}, {"0", "1"}}),
        Event::every_term_in(space, {"0", "1"}),
        Event::all_but_finitely_equal(space, "0"),
        Event::infinitely_often(space, {"-1"}),
        Event::count_exactly(space, "1", 1, {"-1"}),
        Event::generated(space, {"1"}, "0"),
        complement_event(Event::count_exactly(space, "1", 1, {"-1"})),
    };
    for (const auto& event : catalogue) {
        for (int t = 0; t < 60; ++t) {
            std::vector<std::size_t> prefix(rng() % 4);
            for (auto& w : prefix) w = rng() % 3;
            const Membership knowledge = membership_prefix(event, prefix);
            if (knowledge == Membership::Undetermined) continue;
            for (int s = 0; s < 12; ++s) {
                std::vector<std::size_t> head = prefix;
                const std::size_t extra = rng() % 3;
                for (std::size_t i = 0; i < extra; ++i) head.push_back(rng() % 3);
                const bool in = path_in_event(event, head, rng() % 3);
                CHECK(in == (knowledge == Membership::In));
            }
        }
    }
}
