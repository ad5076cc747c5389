#include "gtp/json_io.hpp"

#include <fstream>
#include <sstream>

#include "gtp/errors.hpp"

namespace gtp {

namespace {

const Json& field(const Json& doc, const char* name) {
    const auto it = doc.find(name);
    if (it == doc.end()) {
        throw InputError(std::string("missing field \"") + name + "\"");
    }
    return *it;
}

std::string string_field(const Json& doc, const char* name) {
    const Json& f = field(doc, name);
    if (!f.is_string()) throw InputError(std::string("field \"") + name + "\" must be a string");
    return f.get<std::string>();
}

Rational rational_field(const Json& doc, const char* name) {
    return parse_rational(string_field(doc, name));
}

std::vector<Rational> rational_array(const Json& arr, const char* what) {
    if (!arr.is_array()) throw InputError(std::string(what) + " must be an array");
    std::vector<Rational> out;
    out.reserve(arr.size());
    for (const auto& item : arr) {
        if (!item.is_string()) throw InputError(std::string(what) + " entries must be strings");
        out.push_back(parse_rational(item.get<std::string>()));
    }
    return out;
}

std::vector<std::string> string_array(const Json& arr, const char* what) {
    if (!arr.is_array()) throw InputError(std::string(what) + " must be an array");
    std::vector<std::string> out;
    out.reserve(arr.size());
    for (const auto& item : arr) {
        if (!item.is_string()) throw InputError(std::string(what) + " entries must be strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

Json rationals_to_json(const std::vector<Rational>& values) {
    Json arr = Json::array();
    for (const auto& v : values) arr.push_back(format_rational(v));
    return arr;
}

Json labels_to_json(const OutcomeSpace& space, std::span<const std::size_t> indices) {
    Json arr = Json::array();
    for (std::size_t w : indices) arr.push_back(space.label(w));
    return arr;
}

}  // namespace

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const Json::parse_error& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return doc;
}

SpacePtr parse_space(const Json& doc) {
    const Json& outcomes = field(doc, "outcomes");
    if (!outcomes.is_array() || outcomes.empty()) {
        throw InputError("\"outcomes\" must be a nonempty array");
    }
    std::vector<OutcomeSpace::Outcome> parsed;
    for (const auto& o : outcomes) {
        OutcomeSpace::Outcome outcome;
        outcome.label = string_field(o, "label");
        if (o.contains("value") && !o["value"].is_null()) {
            outcome.value = parse_rational(o["value"].get<std::string>());
        }
        parsed.push_back(std::move(outcome));
    }
    return make_space(std::move(parsed));
}

Json space_to_json(const OutcomeSpace& space) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        Json o;
        o["label"] = space.outcome(i).label;
        if (space.outcome(i).value) o["value"] = format_rational(*space.outcome(i).value);
        arr.push_back(std::move(o));
    }
    return arr;
}

Cone parse_cone(const SpacePtr& space, const Json& doc) {
    const std::string kind = string_field(doc, "kind");
    if (kind == "zero" || kind == "nonpositive") {
        ProbabilityVector measure(space, rational_array(field(doc, "measure"), "\"measure\""));
        return kind == "zero" ? Cone::zero_cone(measure) : Cone::nonpositive_cone(measure);
    }
    if (kind == "raw" || kind == "span") {
        const Json& gens = field(doc, "generators");
        if (!gens.is_array()) throw InputError("\"generators\" must be an array");
        std::vector<Gamble> gambles;
        for (const auto& g : gens) {
            gambles.emplace_back(space, rational_array(g, "generator"));
        }
        return kind == "raw" ? Cone::raw(space, std::move(gambles))
                             : Cone::span(space, std::move(gambles));
    }
    throw InputError("unknown cone kind: \"" + kind + "\"");
}

Json cone_to_json(const Cone& cone) {
    Json out;
    switch (cone.kind()) {
        case ConeKind::ZeroCone:
            out["kind"] = "zero";
            out["measure"] = rationals_to_json(cone.measure()->weights());
            return out;
        case ConeKind::NonpositiveCone:
            out["kind"] = "nonpositive";
            out["measure"] = rationals_to_json(cone.measure()->weights());
            return out;
        case ConeKind::SpanOf: {
            out["kind"] = "span";
            Json gens = Json::array();
            // Span cones store generator/negation pairs; emit the originals.
            for (std::size_t i = 0; i < cone.generators().size(); i += 2) {
                gens.push_back(rationals_to_json(cone.generators()[i].payoffs()));
            }
            out["generators"] = gens;
            return out;
        }
        case ConeKind::RawGenerators: {
            out["kind"] = "raw";
            Json gens = Json::array();
            for (const auto& g : cone.generators()) {
                gens.push_back(rationals_to_json(g.payoffs()));
            }
            out["generators"] = gens;
            return out;
        }
    }
    throw InternalError("unreachable cone kind");
}

std::vector<std::pair<std::string, Cone>> parse_document_cones(const Json& doc) {
    const SpacePtr space = parse_space(doc);
    std::vector<std::pair<std::string, Cone>> out;
    const std::string variant =
        doc.contains("variant") ? doc["variant"].get<std::string>() : "identical";
    if (variant == "identical" || doc.contains("cone")) {
        out.emplace_back("cone", parse_cone(space, field(doc, "cone")));
        return out;
    }
    const Json& cones = field(doc, "cones");
    if (cones.is_array()) {
        std::size_t i = 1;
        for (const auto& c : cones) {
            out.emplace_back("cone " + std::to_string(i++), parse_cone(space, c));
        }
        return out;
    }
    if (cones.is_object()) {
        for (const auto& [label, c] : cones.items()) {
            space->index_of(label);
            out.emplace_back("cone(" + label + ")", parse_cone(space, c));
        }
        return out;
    }
    throw InputError("\"cones\" must be an array or an object");
}

SpecPtr parse_spec(const Json& doc) {
    const SpacePtr space = parse_space(doc);
    const std::string variant =
        doc.contains("variant") ? doc["variant"].get<std::string>() : "identical";

    ProtocolSpec spec = [&] {
        if (variant == "identical") {
            return ProtocolSpec::identical(space, parse_cone(space, field(doc, "cone")));
        }
        if (variant == "independent") {
            if (doc.contains("extension") && doc["extension"] != "repeat-last") {
                throw InputError("only the repeat-last extension rule is supported");
            }
            const Json& cones = field(doc, "cones");
            if (!cones.is_array() || cones.empty()) {
                throw InputError("independent spec requires a nonempty cone array");
            }
            std::vector<Cone> parsed;
            for (const auto& c : cones) parsed.push_back(parse_cone(space, c));
            return ProtocolSpec::independent(space, std::move(parsed));
        }
        if (variant == "markov") {
            const Json& cones = field(doc, "cones");
            if (!cones.is_object()) throw InputError("markov spec requires a cone object");
            std::map<std::string, Cone> parsed;
            for (const auto& [label, c] : cones.items()) {
                parsed.emplace(label, parse_cone(space, c));
            }
            return ProtocolSpec::markov(space, std::move(parsed));
        }
        throw InputError("unknown protocol variant: \"" + variant + "\"");
    }();

    if (doc.contains("horizon_hint")) {
        spec.horizon_hint = doc["horizon_hint"].get<std::size_t>();
    }
    return std::make_shared<const ProtocolSpec>(std::move(spec));
}

Json spec_to_json(const ProtocolSpec& spec) {
    Json out;
    out["outcomes"] = space_to_json(*spec.space());
    switch (spec.variant()) {
        case ProtocolSpec::Variant::Identical:
            out["variant"] = "identical";
            out["cone"] = cone_to_json(spec.cones().front());
            break;
        case ProtocolSpec::Variant::IndependentSeq: {
            out["variant"] = "independent";
            out["extension"] = "repeat-last";
            Json cones = Json::array();
            for (const auto& c : spec.cones()) cones.push_back(cone_to_json(c));
            out["cones"] = std::move(cones);
            break;
        }
        case ProtocolSpec::Variant::Markov: {
            out["variant"] = "markov";
            Json cones;
            for (std::size_t i = 0; i < spec.space()->size(); ++i) {
                cones[spec.space()->label(i)] = cone_to_json(spec.cones()[i]);
            }
            out["cones"] = std::move(cones);
            break;
        }
    }
    if (spec.horizon_hint) out["horizon_hint"] = *spec.horizon_hint;
    return out;
}

Event parse_event(const SpacePtr& space, const Json& doc) {
    const std::string cls = string_field(doc, "class");
    if (cls == "cylinder") {
        const Json& accepted = field(doc, "accepted");
        std::vector<std::vector<std::string>> words;
        for (const auto& w : accepted) words.push_back(string_array(w, "accepted word"));
        return Event::cylinder(space, field(doc, "horizon").get<std::size_t>(), words);
    }
    if (cls == "every_term_in") {
        return Event::every_term_in(space, string_array(field(doc, "set"), "\"set\""));
    }
    if (cls == "all_but_finitely_equal") {
        return Event::all_but_finitely_equal(space, string_field(doc, "outcome"));
    }
    if (cls == "infinitely_often") {
        return Event::infinitely_often(space, string_array(field(doc, "set"), "\"set\""));
    }
    if (cls == "count_exactly") {
        return Event::count_exactly(space, string_field(doc, "outcome"),
                                    field(doc, "k").get<std::size_t>(),
                                    string_array(field(doc, "forbidden"), "\"forbidden\""));
    }
    if (cls == "generated") {
        return Event::generated(space, string_array(field(doc, "head"), "\"head\""),
                                string_field(doc, "tail"));
    }
    if (cls == "complement") {
        return complement_event(parse_event(space, field(doc, "inner")));
    }
    throw InputError("unknown event class: \"" + cls + "\"");
}

Json event_to_json(const Event& event) {
    const OutcomeSpace& space = *event.space();
    Json out;
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, event_class::Cylinder>) {
                out["class"] = "cylinder";
                out["horizon"] = e.horizon;
                Json accepted = Json::array();
                for (const auto& w : e.accepted) accepted.push_back(labels_to_json(space, w));
                out["accepted"] = std::move(accepted);
            } else if constexpr (std::is_same_v<T, event_class::EveryTermIn>) {
                out["class"] = "every_term_in";
                Json set = Json::array();
                for (std::size_t w : e.allowed) set.push_back(space.label(w));
                out["set"] = std::move(set);
            } else if constexpr (std::is_same_v<T, event_class::AllButFinitelyEqual>) {
                out["class"] = "all_but_finitely_equal";
                out["outcome"] = space.label(e.constant);
            } else if constexpr (std::is_same_v<T, event_class::InfinitelyOften>) {
                out["class"] = "infinitely_often";
                Json set = Json::array();
                for (std::size_t w : e.targets) set.push_back(space.label(w));
                out["set"] = std::move(set);
            } else if constexpr (std::is_same_v<T, event_class::CountExactly>) {
                out["class"] = "count_exactly";
                out["outcome"] = space.label(e.outcome);
                out["k"] = e.count;
                Json forbidden = Json::array();
                for (std::size_t w : e.forbidden) forbidden.push_back(space.label(w));
                out["forbidden"] = std::move(forbidden);
            } else if constexpr (std::is_same_v<T, event_class::GeneratedPermutable>) {
                out["class"] = "generated";
                out["head"] = labels_to_json(space, e.head);
                out["tail"] = space.label(e.tail_constant);
            } else if constexpr (std::is_same_v<T, event_class::Complement>) {
                out["class"] = "complement";
                out["inner"] = event_to_json(*e.inner);
            }
        },
        event.description());
    return out;
}

StrategyPtr parse_skeptic(const SpecPtr& spec, const Json& doc) {
    const std::string kind = string_field(doc, "kind");
    if (kind == "zero") return zero_strategy();
    if (kind == "constant") {
        return constant_coeffs(rational_array(field(doc, "coeffs"), "\"coeffs\""));
    }
    if (kind == "proportional") {
        return proportional_coeffs(rational_array(field(doc, "coeffs"), "\"coeffs\""));
    }
    if (kind == "scaled_sum") {
        return scaled_sum(parse_skeptic(spec, field(doc, "s1")),
                          parse_skeptic(spec, field(doc, "s2")), rational_field(doc, "e1"),
                          rational_field(doc, "e2"));
    }
    if (kind == "shift_embed") {
        return shift_embed(parse_skeptic(spec, field(doc, "inner")),
                           field(doc, "n").get<std::size_t>());
    }
    if (kind == "stop_when") {
        std::optional<Rational> target;
        if (doc.contains("target") && !doc["target"].is_null()) {
            const std::string text = doc["target"].get<std::string>();
            if (text != "inf") target = parse_rational(text);
        }
        return stop_when(parse_skeptic(spec, field(doc, "inner")), std::move(target));
    }
    if (kind == "restart_scale") {
        const Rational eps = rational_field(doc, "eps");
        if (doc.contains("per_state")) {
            std::map<std::string, StrategyPtr> members;
            for (const auto& [label, inner] : doc["per_state"].items()) {
                members.emplace(label, parse_skeptic(spec, inner));
            }
            return restart_scale(RestartFamily::per_state(std::move(members)), eps);
        }
        return restart_scale(RestartFamily::uniform(parse_skeptic(spec, field(doc, "inner"))),
                             eps);
    }
    if (kind == "alternating_restart") {
        return alternating_restart(parse_skeptic(spec, field(doc, "s")),
                                   parse_skeptic(spec, field(doc, "s_prime")),
                                   parse_event(spec->space(), field(doc, "event")),
                                   rational_field(doc, "eps"));
    }
    if (kind == "shift_transfer") {
        SpecPtr original = spec;
        if (doc.contains("original_spec")) original = parse_spec(doc["original_spec"]);
        const auto prefix_labels = string_array(field(doc, "prefix"), "\"prefix\"");
        return shift_transfer(parse_skeptic(original, field(doc, "inner")),
                              to_outcome_indices(*original->space(), prefix_labels), original);
    }
    if (kind == "superhedge") {
        const Event event = parse_event(spec->space(), field(doc, "event"));
        const std::size_t horizon = field(doc, "horizon").get<std::size_t>();
        return superhedge_strategy(upper_prob_cylinder(*spec, event, horizon).certificate_upper,
                                   event);
    }
    throw InputError("unknown strategy kind: \"" + kind + "\"");
}

Json skeptic_to_json(const SkepticStrategy& strategy) {
    Json out;
    out["kind"] = strategy.kind();
    if (const auto* s = dynamic_cast<const ConstantCoeffsStrategy*>(&strategy)) {
        out["coeffs"] = rationals_to_json(s->coefficients());
    } else if (const auto* s = dynamic_cast<const ProportionalCoeffsStrategy*>(&strategy)) {
        out["coeffs"] = rationals_to_json(s->base());
    } else if (const auto* s = dynamic_cast<const ScaledSumStrategy*>(&strategy)) {
        out["e1"] = format_rational(s->weight1());
        out["e2"] = format_rational(s->weight2());
        out["s1"] = skeptic_to_json(*s->first());
        out["s2"] = skeptic_to_json(*s->second());
    } else if (const auto* s = dynamic_cast<const ShiftEmbedStrategy*>(&strategy)) {
        out["n"] = s->shift();
        out["inner"] = skeptic_to_json(*s->inner());
    } else if (const auto* s = dynamic_cast<const StopWhenStrategy*>(&strategy)) {
        out["target"] = s->target() ? Json(format_rational(*s->target())) : Json("inf");
        out["inner"] = skeptic_to_json(*s->inner());
    } else if (const auto* s = dynamic_cast<const RestartScaleStrategy*>(&strategy)) {
        out["eps"] = format_rational(s->eps());
        if (s->family().is_uniform()) {
            out["inner"] = skeptic_to_json(*s->family().uniform_member());
        } else {
            Json members;
            for (const auto& [label, member] : s->family().state_members()) {
                members[label] = skeptic_to_json(*member);
            }
            out["per_state"] = std::move(members);
        }
    } else if (const auto* s = dynamic_cast<const AlternatingRestartStrategy*>(&strategy)) {
        out["eps"] = format_rational(s->eps());
        out["event"] = event_to_json(s->event());
        out["s"] = skeptic_to_json(*s->primary());
        out["s_prime"] = skeptic_to_json(*s->secondary());
    } else if (const auto* s = dynamic_cast<const ShiftTransferStrategy*>(&strategy)) {
        out["prefix"] = labels_to_json(*s->original_spec()->space(), s->prefix());
        out["inner"] = skeptic_to_json(*s->inner());
        out["original_spec"] = spec_to_json(*s->original_spec());
    } else if (const auto* s = dynamic_cast<const SuperhedgeStrategy*>(&strategy)) {
        if (!s->source_event()) {
            throw InputError("a superhedge built from a bare tree cannot be serialized");
        }
        out["event"] = event_to_json(*s->source_event());
        out["horizon"] = s->tree().horizon;
    }
    return out;
}

RealityPtr parse_reality(const SpecPtr& spec, const Json& doc, std::uint64_t default_seed) {
    const std::string kind = string_field(doc, "kind");
    if (kind == "scripted") {
        const auto labels = string_array(field(doc, "outcomes"), "\"outcomes\"");
        return scripted_reality(to_outcome_indices(*spec->space(), labels));
    }
    if (kind == "minimizer") return minimizer_reality();
    if (kind == "evader") return evader_reality();
    if (kind == "sampler") {
        ProbabilityVector measure(spec->space(),
                                  rational_array(field(doc, "measure"), "\"measure\""));
        const std::uint64_t seed =
            doc.contains("seed") ? doc["seed"].get<std::uint64_t>() : default_seed;
        return sampler_reality(std::move(measure), seed);
    }
    if (kind == "interactive") {
        throw InputError("interactive reality is only available inside the play loop");
    }
    throw InputError("unknown reality kind: \"" + kind + "\"");
}

Json coherence_to_json(const CoherenceVerdict& verdict) {
    Json out;
    out["coherent"] = verdict.coherent;
    if (verdict.coherent) {
        out["calibrating"] = rationals_to_json(verdict.calibrating->weights());
    } else {
        out["witness"] = rationals_to_json(verdict.witness);
    }
    return out;
}

Json price_tree_to_json(const OutcomeSpace& space, const PriceTree& tree) {
    Json out;
    out["horizon"] = tree.horizon;
    Json nodes = Json::array();
    for (const auto& [prefix, node] : tree.nodes) {
        Json n;
        n["prefix"] = labels_to_json(space, prefix);
        n["value"] = format_rational(node.value);
        if (prefix.size() < tree.horizon) n["coeffs"] = rationals_to_json(node.coefficients);
        nodes.push_back(std::move(n));
    }
    out["nodes"] = std::move(nodes);
    return out;
}

Json priced_result_to_json(const OutcomeSpace& space, const PricedResult& result,
                           bool with_certificates) {
    Json out;
    out["upper"] = format_rational(result.upper);
    out["lower"] = format_rational(result.lower);
    out["classification"] = to_string(result.classification);
    if (with_certificates) {
        out["certificate_upper"] = price_tree_to_json(space, result.certificate_upper);
        out["certificate_lower"] = price_tree_to_json(space, result.certificate_lower);
    }
    return out;
}

std::vector<std::string> trace_to_lines(const Trace& trace) {
    const OutcomeSpace& space = *trace.spec->space();
    std::vector<std::string> lines;
    if (trace.omega0) {
        Json head;
        head["n"] = 0;
        head["omega"] = space.label(*trace.omega0);
        head["capital"] = "1";
        lines.push_back(head.dump());
    }
    for (const auto& s : trace.steps) {
        Json line;
        line["n"] = s.n;
        line["coeffs"] = rationals_to_json(s.coefficients);
        line["payoff"] = format_rational(s.payoff);
        line["omega"] = space.label(s.omega);
        line["capital"] = format_rational(s.capital);
        if (s.membership) line["membership"] = to_string(*s.membership);
        lines.push_back(line.dump());
    }
    if (!trace.valid) {
        Json err;
        err["error"] = trace.error;
        lines.push_back(err.dump());
    }
    return lines;
}

void write_trace(std::ostream& out, const Trace& trace) {
    for (const auto& line : trace_to_lines(trace)) out << line << "\n";
}

Trace load_trace(const SpecPtr& spec, const std::vector<std::string>& lines) {
    Trace trace;
    trace.spec = spec;
    Rational capital(1);
    for (const auto& text : lines) {
        if (text.empty()) continue;
        Json line;
        try {
            line = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw InputError(std::string("invalid trace line: ") + e.what());
        }
        if (line.contains("error")) {
            trace.valid = false;
            trace.error = line["error"].get<std::string>();
            continue;
        }
        const std::size_t n = field(line, "n").get<std::size_t>();
        if (n == 0) {
            trace.omega0 = spec->space()->index_of(string_field(line, "omega"));
            continue;
        }
        TraceStep step;
        step.n = n;
        step.coefficients = rational_array(field(line, "coeffs"), "\"coeffs\"");
        step.payoff = rational_field(line, "payoff");
        step.omega = spec->space()->index_of(string_field(line, "omega"));
        step.capital = rational_field(line, "capital");
        if (step.capital != capital + step.payoff) {
            throw InputError("trace capital does not recompute from payoffs at trial " +
                             std::to_string(n));
        }
        // Re-check move legality offline: the recorded coefficients must
        // rebuild a cone member whose realized payoff matches the record.
        const std::optional<std::size_t> prev =
            trace.steps.empty() ? trace.omega0
                                : std::optional<std::size_t>(trace.steps.back().omega);
        const Cone& cone = spec->cone_at(trace.steps.size() + 1, prev);
        const Gamble F = cone.combine(step.coefficients);
        if (F.payoff(step.omega) != step.payoff || !cone_contains(cone, F)) {
            throw InputError("trace move fails the offline legality check at trial " +
                             std::to_string(n));
        }
        capital = step.capital;
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

}  // namespace gtp
