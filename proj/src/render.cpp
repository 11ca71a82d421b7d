#include "iris/render.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace iris {

namespace {

std::vector<char> labels_for(const std::vector<std::string>& names) {
  std::set<char> firsts;
  bool unique = true;
  for (const auto& n : names)
    unique = unique && !n.empty() && n[0] > ' ' && n[0] != '.' && n[0] != '+' &&
             firsts.insert(n[0]).second;
  std::vector<char> labels;
  static const std::string pool =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  for (std::size_t j = 0; j < names.size(); ++j)
    labels.push_back(unique ? names[j][0] : (j < pool.size() ? pool[j] : '#'));
  return labels;
}

}  // namespace

std::string render_layout(const Layout& layout, const RenderOptions& opts) {
  if (layout.bus_width < 1 || layout.cycles.empty())
    throw std::invalid_argument("render: empty layout");
  const std::int64_t m = layout.bus_width;
  std::int64_t band = opts.lanes_per_row;
  if (band <= 0) band = m <= 64 ? 1 : (m + 63) / 64;
  const std::int64_t rows = (m + band - 1) / band;
  const auto labels = labels_for(layout.array_names);

  // owner[row][cycle]: -1 empty, -2 mixed, else array index
  std::vector<std::vector<long>> owner(rows, std::vector<long>(layout.cycles.size(), -1));
  for (std::size_t t = 0; t < layout.cycles.size(); ++t)
    for (const auto& pl : layout.cycles[t])
      for (std::int64_t bit = pl.offset; bit < pl.offset + pl.width && bit < m; ++bit) {
        if (bit < 0) continue;
        long& cell = owner[bit / band][t];
        if (cell == -1)
          cell = pl.array;
        else if (cell != static_cast<long>(pl.array))
          cell = -2;
      }

  std::ostringstream out;
  const int label_width = static_cast<int>(std::to_string(m - 1).size()) + 1;
  auto pad = [&](const std::string& s) {
    return std::string(static_cast<std::size_t>(std::max<int>(0, label_width - static_cast<int>(s.size()))), ' ') + s;
  };

  out << pad("") << " ";
  for (std::size_t t = 0; t < layout.cycles.size(); ++t) out << (t + 1) % 10;
  out << "\n";
  for (std::int64_t r = rows - 1; r >= 0; --r) {
    const std::int64_t lo = r * band;
    out << pad("b" + std::to_string(lo)) << " ";
    for (std::size_t t = 0; t < layout.cycles.size(); ++t) {
      const long cell = owner[r][t];
      if (cell == -1) {
        out << '.';
      } else if (cell == -2) {
        out << '+';
      } else if (opts.color) {
        out << "\x1b[" << 31 + cell % 6 << "m" << labels[cell] << "\x1b[0m";
      } else {
        out << labels[cell];
      }
    }
    out << "\n";
  }
  out << "legend:";
  for (std::size_t j = 0; j < labels.size(); ++j)
    out << " " << labels[j] << "=" << layout.array_names[j];
  out << "  .=unused";
  if (band > 1) out << "  +=shared  (" << band << " lanes per row)";
  out << "\n";
  return out.str();
}

}  // namespace iris
