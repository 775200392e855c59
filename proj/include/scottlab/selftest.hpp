#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace scottlab {

struct SuiteResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t mismatches = 0;
};

// Oracle-agreement suites at tiny budgets; deterministic for a given seed.
std::vector<SuiteResult> runSelftest(std::uint64_t seed = 1);

}  // namespace scottlab
