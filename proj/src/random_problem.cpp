#include "iris/random_problem.hpp"

#include <algorithm>

namespace iris {

Problem random_problem(std::mt19937_64& rng, const RandomProblemParams& params) {
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  Problem p;
  p.bus_width = params.bus_widths.at(
      static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(params.bus_widths.size()) - 1)));
  const std::int64_t n = pick(params.min_arrays, params.max_arrays);
  const std::int64_t max_w = std::min(params.max_width, p.bus_width);
  std::bernoulli_distribution capped(params.cap_probability);
  for (std::int64_t j = 0; j < n; ++j) {
    ArraySpec a;
    a.name = "a" + std::to_string(j);
    a.width = pick(1, max_w);
    a.depth = pick(1, params.max_depth);
    if (capped(rng)) a.delta_cap = pick(1, std::max<std::int64_t>(1, p.bus_width / a.width));
    p.arrays.push_back(std::move(a));
  }
  const std::int64_t horizon = (total_processing_time(p) + p.bus_width - 1) / p.bus_width;
  for (auto& a : p.arrays) a.due_date = pick(0, 2 * horizon);
  return p;
}

Problem random_problem(std::uint64_t seed, const RandomProblemParams& params) {
  std::mt19937_64 rng(seed);
  return random_problem(rng, params);
}

}  // namespace iris
