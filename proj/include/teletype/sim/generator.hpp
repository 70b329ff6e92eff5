#pragma once

#include <array>
#include <cstdint>

#include "teletype/sim/scenario.hpp"

namespace teletype::sim {

struct GeneratorParams {
  int n_modules = 4;
  int n_actions = 500;
  // Probability of nocheck, nonstrict and strict for each module's pragma and
  // for each set_mode action.
  std::array<double, 3> mode_mix{0.90, 0.095, 0.005};
  // Probability that a typed line contains a mistake: an unbound name, a
  // missing property, arithmetic on a table or a syntax error.
  double typo_rate = 0.05;
};

/// Deterministic for a given seed and parameters. Every generated identifier
/// and literal is absent from the record wire vocabulary, so a leak shows up
/// in a privacy audit. With typo_rate 0 the code never references an unbound
/// name. Throws std::invalid_argument for invalid parameters.
Scenario gen_random_scenario(std::uint64_t seed, const GeneratorParams& params = {});

}  // namespace teletype::sim
