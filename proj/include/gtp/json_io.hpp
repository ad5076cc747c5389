#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gtp/pricing.hpp"
#include "gtp/protocol.hpp"
#include "gtp/strategy.hpp"

namespace gtp {

using Json = nlohmann::json;

// All rationals cross the JSON boundary as strings "p/q" (or integer
// strings); outcome references go by label. Numbers appear only for counts.

Json load_json_file(const std::string& path);

SpacePtr parse_space(const Json& doc);
Json space_to_json(const OutcomeSpace& space);

Cone parse_cone(const SpacePtr& space, const Json& doc);
Json cone_to_json(const Cone& cone);

/// Full protocol document: outcomes plus an identical / independent / markov
/// cone assignment. A document with a bare "cone" defaults to identical.
SpecPtr parse_spec(const Json& doc);
Json spec_to_json(const ProtocolSpec& spec);

/// Cones of a document without protocol validation (so deliberately
/// incoherent cones can still be loaded and checked). Returns labeled cones.
std::vector<std::pair<std::string, Cone>> parse_document_cones(const Json& doc);

Event parse_event(const SpacePtr& space, const Json& doc);
Json event_to_json(const Event& event);

StrategyPtr parse_skeptic(const SpecPtr& spec, const Json& doc);
Json skeptic_to_json(const SkepticStrategy& strategy);

/// `default_seed` feeds samplers whose document omits a seed. Interactive
/// reality documents are rejected here; only the play loop builds those.
RealityPtr parse_reality(const SpecPtr& spec, const Json& doc, std::uint64_t default_seed);

Json coherence_to_json(const CoherenceVerdict& verdict);
Json price_tree_to_json(const OutcomeSpace& space, const PriceTree& tree);
Json priced_result_to_json(const OutcomeSpace& space, const PricedResult& result,
                           bool with_certificates);

/// One JSON object per line: an optional trial-0 line carrying the markov
/// initial state, one line per accepted trial, and a final error line when a
/// run aborted.
std::vector<std::string> trace_to_lines(const Trace& trace);
void write_trace(std::ostream& out, const Trace& trace);

/// Parses a trace back and re-validates it: consecutive capitals must differ
/// exactly by the recorded payoffs.
Trace load_trace(const SpecPtr& spec, const std::vector<std::string>& lines);

}  // namespace gtp
