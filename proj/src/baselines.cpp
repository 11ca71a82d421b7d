#include "iris/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace iris {

namespace {

std::vector<std::uint32_t> due_date_order(const Problem& p) {
  std::vector<std::uint32_t> order(p.arrays.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return p.arrays[a].due_date < p.arrays[b].due_date;
  });
  return order;
}

std::vector<std::string> names_of(const Problem& p) {
  std::vector<std::string> names;
  for (const auto& a : p.arrays) names.push_back(a.name);
  return names;
}

}  // namespace

Layout naive_layout(const Problem& p) {
  require_valid(p);
  std::vector<Cycle> cycles;
  for (auto j : due_date_order(p))
    for (std::int64_t e = 0; e < p.arrays[j].depth; ++e)
      cycles.push_back({Placement{j, e, 0, p.arrays[j].width}});
  return make_layout(p.bus_width, names_of(p), std::move(cycles));
}

Layout packed_layout(const Problem& p) {
  require_valid(p);
  std::vector<Cycle> cycles;
  for (auto j : due_date_order(p)) {
    const auto& a = p.arrays[j];
    const std::int64_t per_cycle = elements_per_cycle(a, p.bus_width);
    for (std::int64_t e = 0; e < a.depth; e += per_cycle) {
      Cycle c;
      for (std::int64_t k = 0; k < per_cycle && e + k < a.depth; ++k)
        c.push_back({j, e + k, k * a.width, a.width});
      cycles.push_back(std::move(c));
    }
  }
  return make_layout(p.bus_width, names_of(p), std::move(cycles));
}

}  // namespace iris
