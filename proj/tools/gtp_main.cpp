#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gtp/errors.hpp"
#include "gtp/json_io.hpp"
#include "gtp/verify.hpp"

namespace {

using namespace gtp;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitIncoherent = 3;
constexpr int kExitIllegalMove = 4;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write to " + out_path);
    out << text << "\n";
}

struct Options {
    std::string spec_path;
    std::string event_path;
    std::string skeptic_path;
    std::string reality_path;
    std::string out_path;
    std::string suite = "all";
    std::string side = "reality";
    std::string eps;
    std::size_t horizon = 0;
    std::size_t shift = 0;
    std::size_t epochs = 0;
    std::uint64_t seed = 1;
    bool certificate = false;
};

int cmd_cone_check(const Options& opt) {
    const Json doc = load_json_file(opt.spec_path);
    const auto cones = parse_document_cones(doc);
    Json report = Json::array();
    bool all_coherent = true;
    for (const auto& [name, cone] : cones) {
        const CoherenceVerdict& verdict = check_coherence(cone);
        Json entry = coherence_to_json(verdict);
        entry["name"] = name;
        report.push_back(std::move(entry));
        all_coherent = all_coherent && verdict.coherent;
    }
    emit(report.size() == 1 ? report.front().dump(2) : report.dump(2), opt.out_path);
    return all_coherent ? kExitOk : kExitIncoherent;
}

int cmd_price(const Options& opt) {
    const SpecPtr spec = parse_spec(load_json_file(opt.spec_path));
    const Event event = parse_event(spec->space(), load_json_file(opt.event_path));

    if (spec->variant() == ProtocolSpec::Variant::Markov) {
        const MarkovPriceMap upper = markov_upper_prob_all(*spec, event);
        const Event complement = complement_event(event);
        Json out;
        for (const auto& [state, value] : upper.by_state) {
            out["upper"][state] = format_rational(value);
            out["lower"][state] =
                format_rational(Rational(1) - markov_upper_prob(*spec, complement, state));
        }
        out["sup_upper"] = format_rational(upper.sup);
        emit(out.dump(2), opt.out_path);
        return kExitOk;
    }

    const auto* cylinder = std::get_if<event_class::Cylinder>(&event.description());
    if (!cylinder) throw InputError("price requires a cylinder event");
    const std::size_t horizon = opt.horizon ? opt.horizon : cylinder->horizon;

    const ProtocolSpec shifted = shifted_spec(*spec, opt.shift);
    const PricedResult result = upper_prob_cylinder(shifted, event, horizon);
    Json out = priced_result_to_json(*spec->space(), result, opt.certificate);
    out["seed"] = opt.seed;
    if (opt.shift) out["shift"] = opt.shift;
    emit(out.dump(2), opt.out_path);
    return kExitOk;
}

int cmd_simulate(const Options& opt) {
    const SpecPtr spec = parse_spec(load_json_file(opt.spec_path));
    Json skeptic_doc = load_json_file(opt.skeptic_path);
    if (!opt.eps.empty() && !skeptic_doc.contains("eps")) skeptic_doc["eps"] = opt.eps;
    const StrategyPtr skeptic = parse_skeptic(spec, skeptic_doc);
    const RealityPtr reality =
        parse_reality(spec, load_json_file(opt.reality_path), opt.seed);

    std::optional<Event> annotate;
    if (!opt.event_path.empty()) {
        annotate = parse_event(spec->space(), load_json_file(opt.event_path));
    }

    const std::size_t trials = opt.horizon ? opt.horizon : 10;
    Trace trace = run(spec, *skeptic, *reality, trials, opt.seed, annotate);

    if (opt.epochs > 0) {
        // Cut the trace at the trial completing the requested epoch count.
        std::vector<std::size_t> history;
        std::size_t keep = trace.steps.size();
        for (std::size_t i = 0; i < trace.steps.size(); ++i) {
            history.push_back(trace.steps[i].omega);
            if (restart_epochs_completed(*skeptic, *spec, trace.omega0, history) >= opt.epochs) {
                keep = i + 1;
                break;
            }
        }
        trace.steps.resize(keep);
    }

    std::ostringstream lines;
    write_trace(lines, trace);
    std::string text = lines.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    emit(text, opt.out_path);

    std::cerr << "final capital " << format_rational(trace.final_capital()) << " after "
              << trace.steps.size() << " trials (seed " << opt.seed << ")\n";
    return trace.valid ? kExitOk : kExitIllegalMove;
}

int cmd_verify(const Options& opt) {
    std::vector<verify::SuiteResult> results;
    if (opt.suite == "all") {
        results = verify::run_all(opt.seed);
    } else {
        results.push_back(verify::run_suite(opt.suite, opt.seed));
    }
    bool all_pass = true;
    std::ostringstream report;
    for (const auto& r : results) {
        report << (r.pass ? "PASS" : "FAIL") << " " << r.name << " (seed " << r.seed << ")\n";
        for (const auto& line : r.lines) report << "  " << line << "\n";
        if (!r.pass) report << "  counterexample: " << r.failure << "\n";
        all_pass = all_pass && r.pass;
    }
    std::string text = report.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    emit(text, opt.out_path);
    return all_pass ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// play: a line-oriented loop where the human takes one side.
// ---------------------------------------------------------------------------

void print_generators(const ProtocolSpec& spec, const Cone& cone) {
    std::cout << "generators over {";
    for (std::size_t i = 0; i < spec.space()->size(); ++i) {
        std::cout << (i ? ", " : "") << spec.space()->label(i);
    }
    std::cout << "}:\n";
    for (std::size_t i = 0; i < cone.generators().size(); ++i) {
        std::cout << "  g" << i + 1 << " = (";
        const auto& g = cone.generators()[i];
        for (std::size_t w = 0; w < g.size(); ++w) {
            std::cout << (w ? ", " : "") << format_rational(g.payoff(w));
        }
        std::cout << ")\n";
    }
}

std::optional<std::string> read_line(const std::string& prompt) {
    std::cout << prompt << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) return std::nullopt;
    return line;
}

std::vector<Rational> parse_rational_list(const std::string& line) {
    std::istringstream in(line);
    std::vector<Rational> out;
    std::string token;
    while (in >> token) out.push_back(parse_rational(token));
    return out;
}

void echo_capital_update(const GameState& before, const GameState& after, const Gamble& F,
                         std::size_t omega) {
    const std::size_t n = after.history.size();
    std::cout << "K_" << n << " := K_" << n - 1 << " + F_" << n << "("
              << F.space()->label(omega) << ") = " << format_rational(before.capital) << " + "
              << format_rational(F.payoff(omega)) << " = " << format_rational(after.capital)
              << "\n";
}

int cmd_play(const Options& opt) {
    const SpecPtr spec = parse_spec(load_json_file(opt.spec_path));
    const bool human_is_reality = opt.side != "skeptic";

    StrategyPtr skeptic;
    if (human_is_reality) {
        skeptic = opt.skeptic_path.empty()
                      ? zero_strategy()
                      : parse_skeptic(spec, load_json_file(opt.skeptic_path));
    }
    RealityPtr reality;
    if (!human_is_reality) {
        reality = opt.reality_path.empty()
                      ? minimizer_reality()
                      : parse_reality(spec, load_json_file(opt.reality_path), opt.seed);
    }

    std::mt19937_64 rng(opt.seed);
    std::optional<std::size_t> omega0;
    if (spec->variant() == ProtocolSpec::Variant::Markov) {
        if (human_is_reality) {
            for (;;) {
                const auto line = read_line("initial state> ");
                if (!line) return kExitOk;
                if (const auto i = spec->space()->find(*line)) {
                    omega0 = *i;
                    break;
                }
                std::cout << "unknown outcome \"" << *line << "\"; try again\n";
            }
        } else {
            omega0 = reality->initial_state(*spec, rng);
            std::cout << "Reality announces initial state "
                      << spec->space()->label(*omega0) << "\n";
        }
    }

    Trace trace;
    trace.spec = spec;
    trace.omega0 = omega0;
    GameState state = GameState::initial(*spec, omega0);
    std::cout << "K_0 := 1; enter \"quit\" to stop.\n";

    for (;;) {
        const Cone& cone = spec->cone_at(state.next_trial(), state.prev_outcome());
        TraceStep record;
        record.n = state.next_trial();

        Gamble F = Gamble::zero(spec->space());
        if (human_is_reality) {
            record.coefficients = skeptic->move(*spec, omega0, state.history, state.capital);
            F = cone.combine(record.coefficients);
            std::cout << "Skeptic announces F_" << record.n << " = (";
            for (std::size_t w = 0; w < F.size(); ++w) {
                std::cout << (w ? ", " : "") << format_rational(F.payoff(w));
            }
            std::cout << ")\n";
        } else {
            print_generators(*spec, cone);
            bool have_move = false;
            while (!have_move) {
                const auto line = read_line("coefficients (or: gamble p1 p2 ...)> ");
                if (!line || *line == "quit") goto done;
                try {
                    std::istringstream in(*line);
                    std::string first;
                    in >> first;
                    if (first == "gamble") {
                        std::string rest;
                        std::getline(in, rest);
                        const auto payoffs = parse_rational_list(rest);
                        const Gamble candidate(spec->space(), payoffs);
                        const auto coeffs = membership_coefficients(cone, candidate);
                        if (!coeffs) {
                            std::cout << "rejected: the membership LP found no nonnegative "
                                         "combination of the generators equal to this gamble\n";
                            continue;
                        }
                        record.coefficients = *coeffs;
                        F = candidate;
                    } else {
                        const auto coeffs = parse_rational_list(*line);
                        if (coeffs.size() != cone.generators().size()) {
                            std::cout << "rejected: expected " << cone.generators().size()
                                      << " coefficients\n";
                            continue;
                        }
                        bool nonneg = true;
                        for (const auto& c : coeffs) nonneg = nonneg && c >= 0;
                        if (!nonneg) {
                            std::cout << "rejected: coefficients must be nonnegative\n";
                            continue;
                        }
                        record.coefficients = coeffs;
                        F = cone.combine(coeffs);
                    }
                    have_move = true;
                } catch (const Error& e) {
                    std::cout << "rejected: " << e.what() << "\n";
                }
            }
        }

        std::size_t omega = 0;
        if (human_is_reality) {
            bool have_outcome = false;
            while (!have_outcome) {
                const auto line = read_line("omega> ");
                if (!line || *line == "quit") goto done;
                if (const auto i = spec->space()->find(*line)) {
                    omega = *i;
                    have_outcome = true;
                } else {
                    std::cout << "unknown outcome \"" << *line << "\"; try again\n";
                }
            }
        } else {
            omega = reality->choose(*spec, omega0, state.history, F, rng);
            std::cout << "Reality announces " << spec->space()->label(omega) << "\n";
        }

        {
            const GameState before = state;
            state = step(state, *spec, F, omega);
            echo_capital_update(before, state, F, omega);
            record.payoff = F.payoff(omega);
            record.omega = omega;
            record.capital = state.capital;
            trace.steps.push_back(std::move(record));
        }
    }

done:
    std::cout << "final capital " << format_rational(state.capital) << " after "
              << trace.steps.size() << " trials\n";
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw InputError("cannot write to " + opt.out_path);
        write_trace(out, trace);
        std::cout << "trace saved to " << opt.out_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact engine for game-theoretic betting protocols"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opt.seed, "seed for randomized pieces (default 1)");
        cmd->add_option("--out", opt.out_path, "write the report to a file instead of stdout");
    };

    auto* cone_cmd = app.add_subcommand("cone", "cone utilities");
    cone_cmd->require_subcommand(1);
    auto* cone_check = cone_cmd->add_subcommand(
        "check", "decide coherence; prints a calibrating measure or a positive-combination "
                 "witness");
    cone_check->add_option("--spec", opt.spec_path, "protocol or cone document")->required();
    add_common(cone_check);

    auto* price = app.add_subcommand("price", "exact upper/lower probability of a cylinder event");
    price->add_option("--spec", opt.spec_path)->required();
    price->add_option("--event", opt.event_path)->required();
    price->add_option("--horizon", opt.horizon, "tree depth (defaults to the event horizon)");
    price->add_option("--shift", opt.shift, "price in the protocol shifted by n trials");
    price->add_flag("--certificate", opt.certificate, "embed the superhedge trees");
    add_common(price);

    auto* simulate = app.add_subcommand("simulate", "run Skeptic against Reality");
    simulate->add_option("--spec", opt.spec_path)->required();
    simulate->add_option("--skeptic", opt.skeptic_path, "skeptic strategy document")->required();
    simulate->add_option("--reality", opt.reality_path, "reality policy document")->required();
    simulate->add_option("--event", opt.event_path, "annotate steps with event membership");
    simulate->add_option("--horizon", opt.horizon, "number of trials (default 10)");
    simulate->add_option("--eps", opt.eps, "fills a restart strategy's missing eps");
    simulate->add_option("--epochs", opt.epochs, "stop once this many epochs complete");
    add_common(simulate);

    auto* verify_cmd = app.add_subcommand("verify", "run a named verification suite");
    verify_cmd->add_option("suite", opt.suite,
                           "suite name or \"all\"; names: " + [] {
                               std::string names;
                               for (const auto& n : gtp::verify::suite_names()) {
                                   if (!names.empty()) names += ", ";
                                   names += n;
                               }
                               return names;
                           }());
    add_common(verify_cmd);

    auto* play = app.add_subcommand("play", "interactive session against a configured opponent");
    play->add_option("--spec", opt.spec_path)->required();
    play->add_option("--side", opt.side, "which side the human plays: reality (default) or skeptic");
    play->add_option("--skeptic", opt.skeptic_path, "opponent strategy when playing reality");
    play->add_option("--reality", opt.reality_path, "opponent policy when playing skeptic");
    add_common(play);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cone_check->parsed()) return cmd_cone_check(opt);
        if (price->parsed()) return cmd_price(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (verify_cmd->parsed()) return cmd_verify(opt);
        if (play->parsed()) return cmd_play(opt);
    } catch (const IncoherentConeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIncoherent;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitInvalidInput;
}
