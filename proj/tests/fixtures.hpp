// fixtures.hpp - problem instances shared by the tests
#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "iris/bitsim.hpp"
#include "iris/problem.hpp"

namespace fixtures {

// m = 8, five small arrays; p_tot = 69.
inline iris::Problem example() {
  return {8, 64, {{"A", 2, 5, 2, {}}, {"B", 3, 5, 6, {}}, {"C", 4, 3, 3, {}},
                  {"D", 5, 4, 6, {}}, {"E", 6, 2, 3, {}}}};
}

// Inverse Helmholtz operator inputs on a 256-bit bus.
inline iris::Problem helmholtz(std::optional<std::int64_t> cap = std::nullopt,
                               std::int64_t depth_div = 1) {
  return {256, 64, {{"u", 64, 1331 / depth_div, 333, cap},
                    {"S", 64, 121 / depth_div, 31, cap},
                    {"D", 64, 1331 / depth_div, 363, cap}}};
}

// Matrix multiply inputs with custom element widths.
inline iris::Problem matmul(std::int64_t wa = 64, std::int64_t wb = 64) {
  return {256, 64, {{"A", wa, 625, 157, {}}, {"B", wb, 625, 157, {}}}};
}

inline iris::ValueSet random_values(const iris::Problem& p, std::mt19937_64& rng) {
  iris::ValueSet v(p.arrays.size());
  for (std::size_t j = 0; j < p.arrays.size(); ++j) {
    const auto w = p.arrays[j].width;
    const std::uint64_t mask = w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
    for (std::int64_t e = 0; e < p.arrays[j].depth; ++e) v[j].push_back(rng() & mask);
  }
  return v;
}

}  // namespace fixtures
