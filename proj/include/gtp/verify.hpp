#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gtp::verify {

struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    bool pass = true;
    std::vector<std::string> lines;  // informative detail, one per checkpoint
    std::string failure;             // first failure with a minimal counterexample
};

/// All suite names, in acceptance order:
///   coherence-duality  zero-cone-pricing  price-bounds  oracle-equivalence
///   single-generator   span-uncertain     restart-capital
///   no-gain-transfer   residual-restart   event-closure
std::vector<std::string> suite_names();

/// Runs one named suite; throws InputError for an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

std::vector<SuiteResult> run_all(std::uint64_t seed);

}  // namespace gtp::verify
