// Acceptance suite: runs every named verification suite once with a fixed
// seed and prints one pass/fail line per criterion. Exit status is nonzero
// if any criterion fails.

#include <cstdint>
#include <iostream>

#include "gtp/verify.hpp"

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? static_cast<std::uint64_t>(std::stoull(argv[1])) : 1;

    const auto names = gtp::verify::suite_names();
    bool all_pass = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto result = gtp::verify::run_suite(names[i], seed);
        std::cout << (result.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " ["
                  << result.name << "]";
        if (result.pass) {
            if (!result.lines.empty()) std::cout << " — " << result.lines.front();
        } else {
            std::cout << " — " << result.failure;
        }
        std::cout << "\n";
        for (std::size_t j = 1; j < result.lines.size(); ++j) {
            std::cout << "       " << result.lines[j] << "\n";
        }
        all_pass = all_pass && result.pass;
    }
    std::cout << (all_pass ? "all criteria passed" : "FAILURES PRESENT") << " (seed " << seed
              << ")\n";
    return all_pass ? 0 : 1;
}
