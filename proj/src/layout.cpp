#include "iris/layout.hpp"

namespace iris {

void update_completion(Layout& layout) {
  layout.completion.assign(layout.array_names.size(), 0);
  for (std::size_t c = 0; c < layout.cycles.size(); ++c)
    for (const auto& pl : layout.cycles[c])
      if (pl.array < layout.completion.size())
        layout.completion[pl.array] = static_cast<std::int64_t>(c) + 1;
}

Layout make_layout(std::int64_t bus_width, std::vector<std::string> names,
                   std::vector<Cycle> cycles) {
  Layout l;
  l.bus_width = bus_width;
  l.array_names = std::move(names);
  l.cycles = std::move(cycles);
  update_completion(l);
  return l;
}

std::int64_t occupied_bits(const Cycle& c) {
  std::int64_t bits = 0;
  for (const auto& p : c) bits += p.width;
  return bits;
}

}  // namespace iris
