#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace loewner {

struct PropertyResult {
  std::string name;
  bool passed = false;
  int trials = 0;
  double worst = 0.0;  // largest observed error, or violation count
  std::string detail;
};

// Runs the invariant suite with samplers seeded from `seed`. Expensive
// properties (generator recovery) use min(trials, 20) instances. `on_result`
// is called once per property, in order.
std::vector<PropertyResult> run_selftest(std::uint64_t seed, int trials,
                                         const std::function<void(const PropertyResult&)>& on_result = {});

}  // namespace loewner
