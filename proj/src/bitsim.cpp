#include "iris/bitsim.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace iris {

namespace {

std::uint64_t low_mask(std::int64_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

std::vector<std::int64_t> element_counts(const Layout& layout) {
  std::vector<std::int64_t> counts(layout.array_names.size(), 0);
  for (const auto& c : layout.cycles)
    for (const auto& pl : c) ++counts.at(pl.array);
  return counts;
}

// Everything that could make packing fail, checked up front so the
// parallel kernels never throw.
void check_values(const Layout& layout, const ValueSet& values) {
  if (values.size() != layout.array_names.size())
    throw PackError("value set has " + std::to_string(values.size()) +
                    " arrays, layout has " + std::to_string(layout.array_names.size()));
  const auto counts = element_counts(layout);
  for (std::size_t j = 0; j < values.size(); ++j)
    if (static_cast<std::int64_t>(values[j].size()) != counts[j])
      throw PackError("array '" + layout.array_names[j] + "': " +
                      std::to_string(values[j].size()) + " values for " +
                      std::to_string(counts[j]) + " placed elements");
  for (const auto& c : layout.cycles)
    for (const auto& pl : c) {
      const auto& name = layout.array_names[pl.array];
      if (pl.width > 64)
        throw PackError("array '" + name + "': widths above 64 bits are not supported");
      if (pl.element < 0 || pl.element >= static_cast<std::int64_t>(values[pl.array].size()))
        throw PackError("array '" + name + "': element " + std::to_string(pl.element) +
                        " out of range");
      if (pl.offset < 0 || pl.offset + pl.width > layout.bus_width)
        throw PackError("array '" + name + "': placement outside the bus word");
      const std::uint64_t v = values[pl.array][pl.element];
      if (v & ~low_mask(pl.width))
        throw PackError("array '" + name + "' index " + std::to_string(pl.element) +
                        ": value " + std::to_string(v) + " does not fit in " +
                        std::to_string(pl.width) + " bits");
    }
}

MemoryImage blank_image(const Layout& layout) {
  MemoryImage img;
  img.bus_width = layout.bus_width;
  img.c_max = layout.c_max();
  img.bytes.assign(static_cast<std::size_t>(img.c_max * img.stride_bytes()), 0);
  return img;
}

void check_image(const MemoryImage& image, const Layout& layout) {
  if (image.bus_width != layout.bus_width || image.c_max != layout.c_max() ||
      static_cast<std::int64_t>(image.bytes.size()) != image.c_max * image.stride_bytes())
    throw PackError("memory image does not match layout (" +
                    std::to_string(image.c_max) + " words vs " +
                    std::to_string(layout.c_max()) + " cycles)");
  for (const auto& c : layout.cycles)
    for (const auto& pl : c)
      if (pl.width > 64 || pl.offset < 0 || pl.offset + pl.width > layout.bus_width)
        throw PackError("layout placement cannot be extracted");
}

Unpacked empty_result(const Layout& layout) {
  Unpacked out;
  const auto counts = element_counts(layout);
  for (auto n : counts) {
    out.values.emplace_back(static_cast<std::size_t>(n), 0);
    out.arrival.emplace_back(static_cast<std::size_t>(n), 0);
  }
  return out;
}

void store_bits(std::uint8_t* word, std::int64_t offset, std::int64_t width,
                std::uint64_t v) {
  std::int64_t done = 0;
  while (done < width) {
    const std::int64_t pos = offset + done;
    const int shift = static_cast<int>(pos % 8);
    const std::int64_t n = std::min<std::int64_t>(8 - shift, width - done);
    word[pos / 8] |= static_cast<std::uint8_t>(((v >> done) & low_mask(n)) << shift);
    done += n;
  }
}

std::uint64_t load_bits(const std::uint8_t* word, std::int64_t offset,
                        std::int64_t width) {
  std::uint64_t v = 0;
  std::int64_t done = 0;
  while (done < width) {
    const std::int64_t pos = offset + done;
    const int shift = static_cast<int>(pos % 8);
    const std::int64_t n = std::min<std::int64_t>(8 - shift, width - done);
    v |= static_cast<std::uint64_t>((word[pos / 8] >> shift) & low_mask(n)) << done;
    done += n;
  }
  return v;
}

}  // namespace

std::uint64_t MemoryImage::host_word(std::int64_t cycle, std::int64_t k,
                                     int host_word) const {
  const auto w = word(cycle);
  std::uint64_t v = 0;
  for (int i = 0; i < host_word; ++i) {
    const std::int64_t bit = k * host_word + i;
    if (bit >= bus_width) break;
    v |= static_cast<std::uint64_t>((w[bit / 8] >> (bit % 8)) & 1) << i;
  }
  return v;
}

MemoryImage pack_reference(const Layout& layout, const ValueSet& values) {
  check_values(layout, values);
  MemoryImage img = blank_image(layout);
  const std::int64_t stride = img.stride_bytes();
  for (std::int64_t t = 0; t < layout.c_max(); ++t) {
    for (const auto& pl : layout.cycles[t]) {
      const std::uint64_t v = values[pl.array][pl.element];
      for (std::int64_t i = 0; i < pl.width; ++i) {
        const std::int64_t bit = pl.offset + i;
        img.bytes[t * stride + bit / 8] |=
            static_cast<std::uint8_t>(((v >> i) & 1) << (bit % 8));
      }
    }
  }
  return img;
}

Unpacked unpack_reference(const MemoryImage& image, const Layout& layout) {
  check_image(image, layout);
  Unpacked out = empty_result(layout);
  const std::int64_t stride = image.stride_bytes();
  for (std::int64_t t = 0; t < layout.c_max(); ++t) {
    for (const auto& pl : layout.cycles[t]) {
      std::uint64_t v = 0;
      for (std::int64_t i = 0; i < pl.width; ++i) {
        const std::int64_t bit = pl.offset + i;
        v |= static_cast<std::uint64_t>((image.bytes[t * stride + bit / 8] >> (bit % 8)) & 1) << i;
      }
      out.values.at(pl.array).at(pl.element) = v;
      out.arrival.at(pl.array).at(pl.element) = t + 1;
    }
  }
  return out;
}

MemoryImage pack(const Layout& layout, const ValueSet& values) {
  check_values(layout, values);
  MemoryImage img = blank_image(layout);
  const std::int64_t stride = img.stride_bytes();
  const std::int64_t cycles = layout.c_max();
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < cycles; ++t) {
    std::uint8_t* word = img.bytes.data() + t * stride;
    for (const auto& pl : layout.cycles[t])
      store_bits(word, pl.offset, pl.width, values[pl.array][pl.element]);
  }
  return img;
}

Unpacked unpack(const MemoryImage& image, const Layout& layout) {
  check_image(image, layout);
  Unpacked out = empty_result(layout);
  for (const auto& c : layout.cycles)
    for (const auto& pl : c)
      if (pl.element < 0 || pl.element >= static_cast<std::int64_t>(out.values[pl.array].size()))
        throw PackError("layout element index out of range");
  const std::int64_t stride = image.stride_bytes();
  const std::int64_t cycles = layout.c_max();
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < cycles; ++t) {
    const std::uint8_t* word = image.bytes.data() + t * stride;
    for (const auto& pl : layout.cycles[t]) {
      out.values[pl.array][pl.element] = load_bits(word, pl.offset, pl.width);
      out.arrival[pl.array][pl.element] = t + 1;
    }
  }
  return out;
}

bool AuditReport::has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string AuditReport::summary() const {
  if (ok()) return "audit: pass";
  std::ostringstream out;
  out << "audit: " << violations.size() << " violation(s)";
  for (const auto& v : violations) out << "\n  [" << v.kind << "] " << v.message;
  return out.str();
}

AuditReport audit_layout(const Layout& layout, const Problem& p) {
  AuditReport rep;
  auto add = [&](std::string kind, std::string msg) {
    rep.violations.push_back({std::move(kind), std::move(msg)});
  };
  if (layout.bus_width != p.bus_width)
    add("bus", "layout bus width " + std::to_string(layout.bus_width) +
                   " differs from problem bus width " + std::to_string(p.bus_width));
  const std::size_t n = p.arrays.size();
  if (layout.array_names.size() != n)
    add("arrays", "layout names " + std::to_string(layout.array_names.size()) +
                      " arrays, problem has " + std::to_string(n));

  std::vector<std::vector<int>> seen(n);
  for (std::size_t j = 0; j < n; ++j)
    seen[j].assign(static_cast<std::size_t>(std::max<std::int64_t>(0, p.arrays[j].depth)), 0);
  std::vector<std::int64_t> last_element(n, -1);

  for (std::size_t t = 0; t < layout.cycles.size(); ++t) {
    const std::string at = "cycle " + std::to_string(t + 1) + ": ";
    std::vector<Placement> cycle = layout.cycles[t];
    std::sort(cycle.begin(), cycle.end(), [](const Placement& a, const Placement& b) {
      return a.offset < b.offset;
    });
    std::int64_t occupied = 0;
    std::map<std::uint32_t, std::int64_t> per_array_bits;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const auto& pl = cycle[k];
      if (pl.array >= n) {
        add("array", at + "unknown array index " + std::to_string(pl.array));
        continue;
      }
      const auto& spec = p.arrays[pl.array];
      const std::string who = at + "'" + spec.name + "'[" + std::to_string(pl.element) + "] ";
      occupied += pl.width;
      per_array_bits[pl.array] += pl.width;
      if (pl.width != spec.width)
        add("width", who + "has width " + std::to_string(pl.width) + ", expected " +
                         std::to_string(spec.width));
      if (pl.offset < 0 || pl.offset + pl.width > p.bus_width)
        add("capacity", who + "extends outside the bus word");
      if (k > 0 && cycle[k - 1].offset + cycle[k - 1].width > pl.offset)
        add("overlap", who + "overlaps the previous placement");
      if (pl.element < 0 || pl.element >= spec.depth) {
        add("element", who + "index out of range");
      } else {
        if (++seen[pl.array][pl.element] == 2) add("duplicate", who + "placed twice");
        if (pl.element <= last_element[pl.array])
          add("order", who + "arrives after element " +
                           std::to_string(last_element[pl.array]));
        last_element[pl.array] = std::max(last_element[pl.array], pl.element);
      }
    }
    if (occupied > p.bus_width)
      add("capacity", at + std::to_string(occupied) + " bits occupied on a " +
                          std::to_string(p.bus_width) + "-bit bus");
    for (const auto& [j, bits] : per_array_bits)
      if (j < n && p.arrays[j].width <= p.bus_width &&
          bits > delta_of(p.arrays[j].width, p.bus_width, p.arrays[j].delta_cap))
        add("quantization", at + "'" + p.arrays[j].name + "' uses " + std::to_string(bits) +
                                " bits, above its per-cycle limit");
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t missing = std::count(seen[j].begin(), seen[j].end(), 0);
    if (missing > 0)
      add("incomplete", "'" + p.arrays[j].name + "' is missing " + std::to_string(missing) +
                            " element(s)");
  }
  return rep;
}

std::string image_sidecar_json(const MemoryImage& image) {
  nlohmann::json j;
  j["bus_width"] = image.bus_width;
  j["c_max"] = image.c_max;
  j["bytes_per_word"] = image.stride_bytes();
  j["bit_order"] = "lsb-first";
  return j.dump(2) + "\n";
}

}  // namespace iris
