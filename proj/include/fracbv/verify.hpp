#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracbv {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant checks over every module: adjointness of both calculi,
/// a certified denoising solve per variant, the seminorm identity with its
/// mollified bracket, both density pipelines and the star-shaped domain facts.
std::vector<CheckOutcome> run_invariant_suite(std::uint64_t seed = 12345);

}  // namespace fracbv
