#include <doctest.h>

#include "gtp/errors.hpp"
#include "gtp/json_io.hpp"
#include "test_helpers.hpp"

using namespace gtp;
using gtp::testing::rat;

namespace {

Json one_sided_doc() {
    return Json::parse(R"({
        "outcomes": [
            {"label": "-1", "value": "-1"},
            {"label": "0", "value": "0"},
            {"label": "1", "value": "1"}
        ],
        "cone": {"kind": "raw", "generators": [["-1", "0", "1"]]}
    })");
}

Json fair_doc() {
    return Json::parse(R"({
        "outcomes": [{"label": "0"}, {"label": "1"}],
        "variant": "identical",
        "cone": {"kind": "zero", "measure": ["1/2", "1/2"]}
    })");
}

}  // namespace

TEST_CASE("spec documents round-trip through JSON") {
    const SpecPtr spec = parse_spec(one_sided_doc());
    CHECK(spec->variant() == ProtocolSpec::Variant::Identical);
    CHECK(spec->space()->size() == 3);
    CHECK(spec->space()->outcome(0).value == rat(-1));

    const SpecPtr again = parse_spec(spec_to_json(*spec));
    CHECK(again->space()->size() == spec->space()->size());
    CHECK(again->cones().front().generators().size() ==
          spec->cones().front().generators().size());

    const Json markov = Json::parse(R"({
        "outcomes": [{"label": "a"}, {"label": "b"}],
        "variant": "markov",
        "cones": {
            "a": {"kind": "zero", "measure": ["1/2", "1/2"]},
            "b": {"kind": "zero", "measure": ["1", "0"]}
        }
    })");
    const SpecPtr mspec = parse_spec(markov);
    CHECK(mspec->variant() == ProtocolSpec::Variant::Markov);
    const SpecPtr mspec2 = parse_spec(spec_to_json(*mspec));
    CHECK(mspec2->variant() == ProtocolSpec::Variant::Markov);
}

TEST_CASE("span cones keep their defining generators in JSON") {
    const Json doc = Json::parse(R"({
        "outcomes": [{"label":"-1","value":"-1"},{"label":"0","value":"0"},{"label":"1","value":"1"}],
        "cone": {"kind": "span", "generators": [["-1", "0", "1"]]}
    })");
    const SpecPtr spec = parse_spec(doc);
    CHECK(spec->cones().front().generators().size() == 2);
    const Json out = spec_to_json(*spec);
    CHECK(out["cone"]["kind"] == "span");
    CHECK(out["cone"]["generators"].size() == 1);
}

TEST_CASE("incoherent documents still load for checking") {
    const Json doc = Json::parse(R"({
        "outcomes": [{"label": "0"}, {"label": "1"}],
        "cone": {"kind": "raw", "generators": [["1", "1"]]}
    })");
    const auto cones = parse_document_cones(doc);
    REQUIRE(cones.size() == 1);
    CHECK_FALSE(check_coherence(cones.front().second).coherent);
    CHECK_THROWS_AS(parse_spec(doc), IncoherentConeError);
}

TEST_CASE("event documents round-trip") {
    const SpecPtr spec = parse_spec(one_sided_doc());
    const std::vector<std::string> docs{
        R"({"class":"cylinder","horizon":2,"accepted":[["1","1"],["0","1"]]})",
        R"({"class":"every_term_in","set":["0","1"]})",
        R"({"class":"all_but_finitely_equal","outcome":"0"})",
        R"({"class":"infinitely_often","set":["1"]})",
        R"({"class":"count_exactly","outcome":"1","k":1,"forbidden":["-1"]})",
        R"({"class":"generated","head":["1"],"tail":"0"})",
        R"({"class":"complement","inner":{"class":"count_exactly","outcome":"1","k":1,"forbidden":["-1"]}})",
    };
    for (const auto& text : docs) {
        const Event event = parse_event(spec->space(), Json::parse(text));
        const Event again = parse_event(spec->space(), event_to_json(event));
        // Same behavior on a few prefixes.
        const std::vector<std::vector<std::string>> prefixes{
            {}, {"0"}, {"1", "0"}, {"-1", "1"}};
        for (const auto& prefix : prefixes) {
            CHECK(membership_prefix(event, prefix) == membership_prefix(again, prefix));
        }
    }
    CHECK_THROWS_AS(parse_event(spec->space(), Json::parse(R"({"class":"nope"})")), InputError);
}

TEST_CASE("strategy documents build and serialize combinator trees") {
    const SpecPtr spec = parse_spec(one_sided_doc());
    const Json doc = Json::parse(R"({
        "kind": "scaled_sum",
        "e1": "1", "e2": "3",
        "s1": {"kind": "stop_when", "target": "2",
               "inner": {"kind": "constant", "coeffs": ["1"]}},
        "s2": {"kind": "restart_scale", "eps": "1/2",
               "inner": {"kind": "proportional", "coeffs": ["1"]}}
    })");
    const StrategyPtr strategy = parse_skeptic(spec, doc);
    const Json serialized = skeptic_to_json(*strategy);
    const StrategyPtr again = parse_skeptic(spec, serialized);

    // Identical moves along a handful of histories.
    const std::vector<std::vector<std::size_t>> histories{
        {}, {1}, {0, 0}, {0, 1, 0}, {2, 0, 0}};
    for (const auto& h : histories) {
        CHECK(replay_capitals(*strategy, *spec, std::nullopt, h) ==
              replay_capitals(*again, *spec, std::nullopt, h));
    }

    // The superhedge form stores its defining event and horizon.
    const Json hedge_doc = Json::parse(
        R"({"kind":"superhedge","horizon":1,"event":{"class":"cylinder","horizon":1,"accepted":[["1"]]}})");
    const StrategyPtr hedger = parse_skeptic(spec, hedge_doc);
    const Json hedge_serialized = skeptic_to_json(*hedger);
    CHECK(hedge_serialized["kind"] == "superhedge");
    CHECK(hedge_serialized["horizon"] == 1);
    const StrategyPtr hedger2 = parse_skeptic(spec, hedge_serialized);
    const std::vector<std::size_t> short_history{2};
    CHECK(replay_capitals(*hedger2, *spec, std::nullopt, short_history) ==
          replay_capitals(*hedger, *spec, std::nullopt, short_history));

    CHECK_THROWS_AS(parse_skeptic(spec, Json::parse(R"({"kind":"wat"})")), InputError);
}

TEST_CASE("reality documents") {
    const SpecPtr spec = parse_spec(fair_doc());
    const RealityPtr scripted =
        parse_reality(spec, Json::parse(R"({"kind":"scripted","outcomes":["1","0"]})"), 1);
    CHECK(scripted->kind() == "scripted");
    const RealityPtr sampler = parse_reality(
        spec, Json::parse(R"({"kind":"sampler","measure":["1/2","1/2"],"seed":9})"), 1);
    CHECK(sampler->kind() == "sampler");
    CHECK_THROWS_AS(parse_reality(spec, Json::parse(R"({"kind":"interactive"})"), 1),
                    InputError);
}

TEST_CASE("priced results serialize with rational strings") {
    const SpecPtr spec = parse_spec(fair_doc());
    const Event event = Event::cylinder(spec->space(), 2, {{"1", "1"}});
    const PricedResult res = upper_prob_cylinder(*spec, event, 2);
    const Json out = priced_result_to_json(*spec->space(), res, true);
    CHECK(out["upper"] == "1/4");
    CHECK(out["lower"] == "1/4");
    CHECK(out.contains("certificate_upper"));
    CHECK(out["certificate_upper"]["horizon"] == 2);

    const Json bare = priced_result_to_json(*spec->space(), res, false);
    CHECK_FALSE(bare.contains("certificate_upper"));
}

TEST_CASE("coherence verdicts serialize both branches") {
    const SpacePtr space = make_space_from_labels({"0", "1"});
    const Cone good = Cone::raw(space, {Gamble(space, {rat(-1), rat(1)})});
    const Json coherent = coherence_to_json(check_coherence(good));
    CHECK(coherent["coherent"] == true);
    CHECK(coherent.contains("calibrating"));

    const Cone bad = Cone::raw(space, {Gamble(space, {rat(1), rat(1)})});
    const Json incoherent = coherence_to_json(check_coherence(bad));
    CHECK(incoherent["coherent"] == false);
    CHECK(incoherent["witness"] == Json::array({"1"}));
}
