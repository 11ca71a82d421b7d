// layout.hpp - concrete per-cycle placement of array elements on the bus
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iris {

struct Placement {
  std::uint32_t array = 0;   // index into Layout::array_names
  std::int64_t element = 0;  // element index within that array
  std::int64_t offset = 0;   // lowest bus bit occupied
  std::int64_t width = 0;

  bool operator==(const Placement&) const = default;
};

using Cycle = std::vector<Placement>;

struct Layout {
  std::int64_t bus_width = 0;
  std::vector<std::string> array_names;
  std::vector<Cycle> cycles;
  // C_j: 1-based index of the last cycle holding an element of array j,
  // 0 if the array never appears.
  std::vector<std::int64_t> completion;

  std::int64_t c_max() const { return static_cast<std::int64_t>(cycles.size()); }
  bool operator==(const Layout&) const = default;
};

/// Recomputes Layout::completion from the cycle list.
void update_completion(Layout& layout);

/// Builds a layout and fills in completion times.
Layout make_layout(std::int64_t bus_width, std::vector<std::string> names,
                   std::vector<Cycle> cycles);

/// Bits occupied in one cycle.
std::int64_t occupied_bits(const Cycle& c);

}  // namespace iris
