// render.hpp - text diagram of a layout: bit lanes by cycles
#pragma once

#include <cstdint>
#include <string>

#include "iris/layout.hpp"

namespace iris {

struct RenderOptions {
  // Lanes folded into one text row; 0 picks 1 for buses up to 64 bits and
  // enough to keep 64 rows otherwise.
  std::int64_t lanes_per_row = 0;
  bool color = false;
};

/// One row per lane (or band of lanes), highest bit on top, one column per
/// cycle. Cells show the array's label, '.' for unused bits and '+' for a
/// band shared by several arrays. A legend follows the grid.
std::string render_layout(const Layout& layout, const RenderOptions& opts = {});

}  // namespace iris
