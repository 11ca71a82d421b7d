// bitsim.hpp - bit-exact model of the packed memory image
//
// Wire format: each cycle is one m-bit word stored in ceil(m/8) bytes.
// Bit i of a word is bit (i % 8) of byte (i / 8); an element placed at
// offset o with width w occupies word bits [o, o + w), least significant
// bit first. Unoccupied bits are zero.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iris/layout.hpp"
#include "iris/problem.hpp"

namespace iris {

/// Element values per array, in element-index order. Widths up to 64 bits.
using ValueSet = std::vector<std::vector<std::uint64_t>>;

struct MemoryImage {
  std::int64_t bus_width = 0;
  std::int64_t c_max = 0;
  std::vector<std::uint8_t> bytes;

  std::int64_t stride_bytes() const { return (bus_width + 7) / 8; }
  std::span<const std::uint8_t> word(std::int64_t cycle) const {
    return {bytes.data() + cycle * stride_bytes(), static_cast<std::size_t>(stride_bytes())};
  }
  /// Bits [k*host_word, (k+1)*host_word) of a cycle's word.
  std::uint64_t host_word(std::int64_t cycle, std::int64_t k, int host_word) const;

  bool operator==(const MemoryImage&) const = default;
};

struct Unpacked {
  ValueSet values;
  std::vector<std::vector<std::int64_t>> arrival;  // 1-based cycle per element
};

/// Value out of range for its width, or the value set does not fit the layout.
class PackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serial bit-by-bit packer; the golden model.
MemoryImage pack_reference(const Layout& layout, const ValueSet& values);
/// Serial bit-by-bit extraction.
Unpacked unpack_reference(const MemoryImage& image, const Layout& layout);

/// Word-level packer, parallel over cycles. Same output as pack_reference.
MemoryImage pack(const Layout& layout, const ValueSet& values);
/// Word-level extraction, parallel over cycles.
Unpacked unpack(const MemoryImage& image, const Layout& layout);

struct Violation {
  std::string kind;  // capacity, overlap, incomplete, duplicate, order, width, ...
  std::string message;
};

struct AuditReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& kind) const;
  std::string summary() const;
};

/// Structural check of a layout against its problem. Violations are
/// reported, never thrown.
AuditReport audit_layout(const Layout& layout, const Problem& p);

/// Binary dump: the image bytes as-is. Sidecar JSON carries m and c_max.
std::string image_sidecar_json(const MemoryImage& image);

}  // namespace iris
