// codegen.hpp - host packing function and accelerator decode module
//
// Both generated sources embed the same slice table: the layout collapsed
// into segments of identical consecutive cycles, each a list of
// (array, offset, width) slices in bus order. The table is plain C
// constants so the layout can be recovered from either file.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iris/bitsim.hpp"
#include "iris/layout.hpp"
#include "iris/problem.hpp"

namespace iris {

struct CodegenConfig {
  int host_word = 64;
  std::string name = "layout";  // function suffix: pack_<name>, decode_<name>
  bool hls_pragmas = true;
  bool comments = true;
};

class CodegenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Slice {
  std::uint32_t array = 0;
  std::int64_t offset = 0;
  std::int64_t width = 0;
  bool operator==(const Slice&) const = default;
};

struct Segment {
  std::int64_t repeat = 0;
  std::vector<Slice> slices;
  bool operator==(const Segment&) const = default;
};

struct SliceTable {
  std::int64_t bus_width = 0;
  std::vector<std::string> names;
  std::vector<Segment> segments;
  std::vector<std::int64_t> depths;  // decoder only; empty in host sources
};

/// Collapses runs of cycles with identical slice patterns.
std::vector<Segment> segment_layout(const Layout& layout);

/// Rebuilds a layout from a slice table; element indices follow stream order.
Layout layout_from_slices(const SliceTable& table);

/// C99 function `void pack_<name>(word_t *dst, const uint64_t *X, ...)`
/// writing the layout buffer of LAYOUT_DST_WORDS host words.
std::string emit_host_packer(const Layout& layout, const Problem& p,
                             const CodegenConfig& cfg);

/// HLS C++ read module consuming one bus word per iteration and feeding one
/// stream per array. `depths` must equal fifo_depths(layout, p).
std::string emit_decoder(const Layout& layout, const Problem& p,
                         const CodegenConfig& cfg,
                         std::span<const std::int64_t> depths);

/// Extracts the slice table embedded in a generated source.
SliceTable parse_slice_table(std::string_view source);

struct DecoderRun {
  ValueSet streams;                  // values written per array, in order
  std::vector<std::int64_t> writes;  // write count per array
  std::int64_t drain_cycles = 0;     // iterations after the last bus word
};

/// Executes the decode module's semantics over a memory image, using the
/// slice table and register depths it was generated with. Throws
/// CodegenError if a shift register would overflow its declared depth.
DecoderRun simulate_decoder(const SliceTable& table, const MemoryImage& image);

}  // namespace iris
