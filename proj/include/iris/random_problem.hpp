// random_problem.hpp - seeded random instances for sweeps and property tests
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "iris/problem.hpp"

namespace iris {

struct RandomProblemParams {
  std::vector<std::int64_t> bus_widths{32, 64, 128, 256};
  std::int64_t min_arrays = 1;
  std::int64_t max_arrays = 8;
  std::int64_t max_width = 64;  // also limited by the chosen bus width
  std::int64_t max_depth = 64;
  double cap_probability = 0.0;  // chance an array gets a random delta_cap
};

/// Due dates are drawn from [0, 2 * ceil(p_tot / m)].
Problem random_problem(std::mt19937_64& rng, const RandomProblemParams& params = {});
Problem random_problem(std::uint64_t seed, const RandomProblemParams& params = {});

}  // namespace iris
