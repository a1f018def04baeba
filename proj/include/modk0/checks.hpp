#ifndef MODK0_CHECKS_HPP
#define MODK0_CHECKS_HPP

#include "modk0/ppcalc.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace modk0::checks {

struct SuiteConfig {
    std::uint64_t seed = 20260809;
    std::size_t cases = 300;
    std::size_t budget = 1;
};

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> failure_dumps;  // failing instances in input format
    bool passed() const { return failures == 0; }
};

/// Registered property suites, in reporting order.
std::vector<std::string> suite_names();

SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg);
std::vector<SuiteResult> run_all(const SuiteConfig& cfg);

}  // namespace modk0::checks

#endif
