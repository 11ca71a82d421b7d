#include "iris/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <regex>
#include <set>
#include <sstream>

#include "iris/metrics.hpp"

namespace iris {

namespace {

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "auto", "bool", "break", "case", "char", "class", "const", "continue",
      "default", "do", "double", "else", "enum", "extern", "float", "for",
      "goto", "if", "inline", "int", "long", "namespace", "new", "operator",
      "private", "public", "register", "restrict", "return", "short", "signed",
      "sizeof", "static", "struct", "switch", "template", "this", "typedef",
      "union", "unsigned", "void", "volatile", "while", "dst", "bus", "x",
      "word_t", "hls", "ap_uint"};
  return words;
}

// C identifiers for each array such that no derived name collides.
std::vector<std::string> array_identifiers(const std::vector<std::string>& names) {
  std::vector<std::string> ids;
  for (const auto& n : names) {
    std::string id;
    for (unsigned char c : n) id += std::isalnum(c) ? static_cast<char>(c) : '_';
    if (id.empty() || std::isdigit(static_cast<unsigned char>(id[0]))) id = "a_" + id;
    if (reserved_words().count(id) || id.rfind("LAYOUT", 0) == 0 || id.rfind("iris", 0) == 0)
      id += "_";
    ids.push_back(id);
  }
  static const char* const suffixes[] = {"", "_WIDTH", "_MASK", "_DEPTH", "_reg"};
  for (bool clash = true; clash;) {
    clash = false;
    std::set<std::string> used;
    for (std::size_t j = 0; j < ids.size() && !clash; ++j) {
      for (const char* s : suffixes) {
        if (!used.insert(ids[j] + s).second) {
          ids[j] += "_" + std::to_string(j);
          clash = true;
          break;
        }
      }
    }
  }
  return ids;
}

std::string c_string_literal(const std::string& s) {
  std::ostringstream out;
  out << '"';
  for (unsigned char c : s) {
    if (c == '"' || c == '\\') {
      out << '\\' << c;
    } else if (c < 0x20 || c >= 0x7f) {
      const char digits[] = {'\\', static_cast<char>('0' + ((c >> 6) & 7)),
                             static_cast<char>('0' + ((c >> 3) & 7)),
                             static_cast<char>('0' + (c & 7)), 0};
      out << digits;
    } else {
      out << c;
    }
  }
  out << '"';
  return out.str();
}

std::string hex_mask(std::int64_t width) {
  const std::uint64_t m = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  std::ostringstream out;
  out << "UINT64_C(0x" << std::hex << m << ")";
  return out.str();
}

void require_emittable(const Layout& layout, const Problem& p) {
  const auto audit = audit_layout(layout, p);
  if (!audit.ok()) throw CodegenError("refusing to emit code for a layout that fails audit:\n" +
                                      audit.summary());
  for (const auto& a : p.arrays)
    if (a.width > 64)
      throw CodegenError("array '" + a.name + "': element widths above 64 bits are not supported");
}

void check_host_word(std::int64_t m, int host_word) {
  if (host_word != 8 && host_word != 16 && host_word != 32 && host_word != 64)
    throw CodegenError("host word must be 8, 16, 32 or 64 bits");
  if (m % host_word != 0 && host_word % m != 0)
    throw CodegenError("host word of " + std::to_string(host_word) +
                       " bits is incompatible with a " + std::to_string(m) + "-bit bus");
}

std::string cycle_range_comment(std::int64_t first, std::int64_t repeat) {
  if (repeat == 1) return "/* cycle " + std::to_string(first) + " */";
  return "/* cycles " + std::to_string(first) + "-" + std::to_string(first + repeat - 1) + " */";
}

void emit_slice_table(std::ostringstream& out, const Layout& layout,
                      const std::vector<Segment>& segments,
                      std::span<const std::int64_t> depths, bool comments) {
  std::size_t n_slices = 0;
  for (const auto& s : segments) n_slices += s.slices.size();

  out << "#define LAYOUT_BUS_WIDTH " << layout.bus_width << "\n";
  out << "#define LAYOUT_CYCLES " << layout.c_max() << "\n";
  out << "#define LAYOUT_NUM_ARRAYS " << layout.array_names.size() << "\n";
  out << "#define LAYOUT_NUM_SEGMENTS " << segments.size() << "\n";
  out << "#define LAYOUT_NUM_SLICES " << n_slices << "\n\n";

  out << "static const char *const LAYOUT_ARRAY_NAMES[LAYOUT_NUM_ARRAYS] = {";
  for (std::size_t j = 0; j < layout.array_names.size(); ++j)
    out << (j ? ", " : "") << c_string_literal(layout.array_names[j]);
  out << "};\n";
  if (!depths.empty()) {
    out << "static const unsigned long LAYOUT_FIFO_DEPTHS[LAYOUT_NUM_ARRAYS] = {";
    for (std::size_t j = 0; j < depths.size(); ++j) out << (j ? ", " : "") << depths[j];
    out << "};\n";
  }
  if (comments) out << "/* repeat, first slice, slice count */\n";
  out << "static const unsigned long LAYOUT_SEGMENTS[LAYOUT_NUM_SEGMENTS][3] = {";
  std::size_t first = 0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    out << (k ? "," : "") << "\n    {" << segments[k].repeat << ", " << first << ", "
        << segments[k].slices.size() << "}";
    first += segments[k].slices.size();
  }
  out << "};\n";
  if (comments) out << "/* array, offset, width */\n";
  out << "static const unsigned long LAYOUT_SLICES[LAYOUT_NUM_SLICES][3] = {";
  std::size_t k = 0;
  for (const auto& s : segments)
    for (const auto& sl : s.slices)
      out << (k++ ? "," : "") << "\n    {" << sl.array << ", " << sl.offset << ", " << sl.width << "}";
  out << "};\n\n";
}

const char* word_type(int host_word) {
  switch (host_word) {
    case 8: return "uint8_t";
    case 16: return "uint16_t";
    case 32: return "uint32_t";
    default: return "uint64_t";
  }
}

}  // namespace

std::vector<Segment> segment_layout(const Layout& layout) {
  std::vector<Segment> segments;
  for (const auto& cycle : layout.cycles) {
    std::vector<Slice> slices;
    for (const auto& pl : cycle) slices.push_back({pl.array, pl.offset, pl.width});
    std::stable_sort(slices.begin(), slices.end(),
                     [](const Slice& a, const Slice& b) { return a.offset < b.offset; });
    if (!segments.empty() && segments.back().slices == slices)
      ++segments.back().repeat;
    else
      segments.push_back({1, std::move(slices)});
  }
  return segments;
}

Layout layout_from_slices(const SliceTable& table) {
  std::vector<std::int64_t> next(table.names.size(), 0);
  std::vector<Cycle> cycles;
  for (const auto& seg : table.segments)
    for (std::int64_t r = 0; r < seg.repeat; ++r) {
      Cycle c;
      for (const auto& sl : seg.slices)
        c.push_back({sl.array, next.at(sl.array)++, sl.offset, sl.width});
      cycles.push_back(std::move(c));
    }
  return make_layout(table.bus_width, table.names, std::move(cycles));
}

std::string emit_host_packer(const Layout& layout, const Problem& p,
                             const CodegenConfig& cfg) {
  check_host_word(layout.bus_width, cfg.host_word);
  require_emittable(layout, p);

  const std::int64_t m = layout.bus_width;
  const int host = cfg.host_word;
  const auto segments = segment_layout(layout);
  const auto ids = array_identifiers(layout.array_names);
  // bits per cycle in the buffer: whole bytes, at least one
  const std::int64_t stride = std::max<std::int64_t>(8, (m + 7) / 8 * 8);
  const std::int64_t dst_words = (layout.c_max() * stride + host - 1) / host;

  std::ostringstream out;
  if (cfg.comments)
    out << "/* Host-side packing for a " << m << "-bit bus, " << layout.c_max()
        << " cycles, " << host << "-bit host words. Generated; do not edit. */\n";
  out << "#include <stdint.h>\n\n";
  emit_slice_table(out, layout, segments, {}, cfg.comments);
  out << "#define LAYOUT_HOST_WORD " << host << "\n";
  out << "#define LAYOUT_DST_WORDS " << dst_words << "\n";
  for (std::size_t j = 0; j < ids.size(); ++j) {
    out << "#define " << ids[j] << "_WIDTH " << p.arrays[j].width << "\n";
    out << "#define " << ids[j] << "_MASK " << hex_mask(p.arrays[j].width) << "\n";
  }
  out << "\ntypedef " << word_type(host) << " word_t;\n\n";

  out << "void pack_" << cfg.name << "(word_t *dst";
  for (const auto& id : ids) out << ", const uint64_t *" << id;
  out << ") {\n";
  out << "  uint64_t x;\n  long i;\n";
  out << "  (void)LAYOUT_ARRAY_NAMES; (void)LAYOUT_SEGMENTS; (void)LAYOUT_SLICES;\n";

  std::int64_t first_cycle = 1;
  if (m >= host) {
    const std::int64_t words = m / host;
    for (const auto& seg : segments) {
      if (cfg.comments) out << "  " << cycle_range_comment(first_cycle, seg.repeat) << "\n";
      out << "  for (i = 0; i < " << seg.repeat << "; ++i) {\n";
      out << "    word_t";
      for (std::int64_t k = 0; k < words; ++k) out << (k ? ", " : " ") << "w" << k << " = 0";
      out << ";\n";
      for (const auto& sl : seg.slices) {
        const auto& id = ids[sl.array];
        out << "    x = (*" << id << "++) & " << id << "_MASK;\n";
        for (std::int64_t k = sl.offset / host; k <= (sl.offset + sl.width - 1) / host; ++k) {
          const std::int64_t lo = std::max(sl.offset, k * host);
          const std::int64_t consumed = lo - sl.offset;  // bits already placed
          const std::int64_t shift = lo - k * host;
          std::string expr = "x";
          if (consumed) expr = "(" + expr + " >> " + std::to_string(consumed) + ")";
          if (shift) expr += " << " + std::to_string(shift);
          out << "    w" << k << " |= (word_t)(" << expr << ");\n";
        }
      }
      for (std::int64_t k = 0; k < words; ++k) out << "    dst[" << k << "] = w" << k << ";\n";
      out << "    dst += " << words << ";\n  }\n";
      first_cycle += seg.repeat;
    }
  } else {
    // Several cycles share one host word; each cycle occupies `stride` bits.
    out << "  word_t acc = 0;\n  unsigned sh = 0;\n";
    for (const auto& seg : segments) {
      if (cfg.comments) out << "  " << cycle_range_comment(first_cycle, seg.repeat) << "\n";
      out << "  for (i = 0; i < " << seg.repeat << "; ++i) {\n";
      for (const auto& sl : seg.slices) {
        const auto& id = ids[sl.array];
        out << "    x = (*" << id << "++) & " << id << "_MASK;\n";
        out << "    acc |= (word_t)(x << (sh + " << sl.offset << "));\n";
      }
      out << "    sh += " << stride << ";\n";
      out << "    if (sh == " << host << ") { *dst++ = acc; acc = 0; sh = 0; }\n  }\n";
      first_cycle += seg.repeat;
    }
    out << "  if (sh) *dst++ = acc;\n";
  }
  out << "}\n";
  return out.str();
}

std::string emit_decoder(const Layout& layout, const Problem& p,
                         const CodegenConfig& cfg,
                         std::span<const std::int64_t> depths) {
  require_emittable(layout, p);
  const auto expected = fifo_depths(layout, p);
  if (!std::equal(expected.begin(), expected.end(), depths.begin(), depths.end()))
    throw CodegenError("register depths do not match the layout's FIFO requirements");

  const auto segments = segment_layout(layout);
  const auto ids = array_identifiers(layout.array_names);
  const std::size_t n = ids.size();

  std::ostringstream out;
  if (cfg.comments)
    out << "// Accelerator-side read module for a " << layout.bus_width << "-bit bus, "
        << layout.c_max() << " cycles. Generated; do not edit.\n"
        << "// Each iteration reads one bus word and writes one element per array.\n"
        << "// Extra same-cycle elements wait in a per-array shift register.\n";
  out << "#include <ap_int.h>\n#include <hls_stream.h>\n\n";
  emit_slice_table(out, layout, segments, depths, cfg.comments);
  for (std::size_t j = 0; j < n; ++j) {
    out << "#define " << ids[j] << "_WIDTH " << p.arrays[j].width << "\n";
    out << "#define " << ids[j] << "_DEPTH " << depths[j] << "\n";
  }
  out << "\n";

  out << "template <int W, int N>\nstruct iris_shift_reg {\n"
      << "  ap_uint<W> r[N];\n  int n;\n"
      << "  void step(hls::stream<ap_uint<W> > &out, const ap_uint<W> *in, int k) {\n";
  if (cfg.hls_pragmas) out << "#pragma HLS INLINE\n";
  out << "    int first = 0;\n"
      << "    if (n > 0) {\n"
      << "      out.write(r[0]);\n"
      << "      for (int s = 0; s + 1 < N; ++s) r[s] = r[s + 1];\n"
      << "      --n;\n"
      << "    } else if (k > 0) {\n"
      << "      out.write(in[0]);\n"
      << "      first = 1;\n"
      << "    }\n"
      << "    for (int e = first; e < k; ++e) r[n++] = in[e];\n"
      << "  }\n};\n\n";

  out << "void decode_" << cfg.name << "(hls::stream<ap_uint<LAYOUT_BUS_WIDTH> > &bus";
  for (const auto& id : ids) out << ",\n    hls::stream<ap_uint<" << id << "_WIDTH> > &" << id;
  out << ") {\n";
  for (std::size_t j = 0; j < n; ++j) {
    if (depths[j] == 0) continue;
    out << "  iris_shift_reg<" << ids[j] << "_WIDTH, " << ids[j] << "_DEPTH> " << ids[j]
        << "_reg;\n";
    if (cfg.hls_pragmas)
      out << "#pragma HLS ARRAY_PARTITION variable=" << ids[j] << "_reg.r complete\n";
    out << "  " << ids[j] << "_reg.n = 0;\n";
  }

  std::int64_t first_cycle = 1;
  for (const auto& seg : segments) {
    if (cfg.comments) out << "  " << cycle_range_comment(first_cycle, seg.repeat) << "\n";
    out << "  for (int iris_i = 0; iris_i < " << seg.repeat << "; ++iris_i) {\n";
    if (cfg.hls_pragmas) out << "#pragma HLS PIPELINE II=1\n";
    out << "    ap_uint<LAYOUT_BUS_WIDTH> iris_w = bus.read();\n";
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<const Slice*> mine;
      for (const auto& sl : seg.slices)
        if (sl.array == j) mine.push_back(&sl);
      auto range = [](const Slice* s) {
        return "iris_w.range(" + std::to_string(s->offset + s->width - 1) + ", " +
               std::to_string(s->offset) + ")";
      };
      if (depths[j] == 0) {
        if (!mine.empty()) out << "    " << ids[j] << ".write(" << range(mine[0]) << ");\n";
        continue;
      }
      if (mine.empty()) {
        out << "    " << ids[j] << "_reg.step(" << ids[j] << ", 0, 0);\n";
        continue;
      }
      out << "    {\n      const ap_uint<" << ids[j] << "_WIDTH> in[" << mine.size() << "] = {";
      for (std::size_t e = 0; e < mine.size(); ++e) out << (e ? ", " : "") << range(mine[e]);
      out << "};\n      " << ids[j] << "_reg.step(" << ids[j] << ", in, " << mine.size()
          << ");\n    }\n";
    }
    out << "  }\n";
    first_cycle += seg.repeat;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (depths[j] > 0)
      out << "  while (" << ids[j] << "_reg.n > 0) " << ids[j] << "_reg.step(" << ids[j]
          << ", 0, 0);\n";
  out << "}\n";
  return out.str();
}

namespace {

std::vector<std::int64_t> integers_in_initializer(std::string_view src, const std::string& symbol) {
  const auto at = src.find(symbol);
  if (at == std::string_view::npos) return {};
  const auto open = src.find('{', at);
  const auto close = src.find("};", at);
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw CodegenError("malformed initializer for " + symbol);
  std::vector<std::int64_t> nums;
  const std::string body(src.substr(open, close - open));
  static const std::regex number(R"(\d+)");
  for (auto it = std::sregex_iterator(body.begin(), body.end(), number);
       it != std::sregex_iterator(); ++it)
    nums.push_back(std::stoll(it->str()));
  return nums;
}

std::int64_t define_value(std::string_view src, const std::string& name) {
  const std::string text(src);
  const std::regex re("#define " + name + " (\\d+)");
  std::smatch m;
  if (!std::regex_search(text, m, re)) throw CodegenError("missing #define " + name);
  return std::stoll(m[1].str());
}

std::vector<std::string> string_literals(std::string_view src, const std::string& symbol) {
  const auto at = src.find(symbol);
  if (at == std::string_view::npos) throw CodegenError("missing " + symbol);
  const auto open = src.find('{', at);
  const auto close = src.find("};", at);
  if (open == std::string_view::npos || close == std::string_view::npos)
    throw CodegenError("malformed initializer for " + symbol);
  std::vector<std::string> out;
  for (std::size_t i = open; i < close; ++i) {
    if (src[i] != '"') continue;
    std::string s;
    for (++i; i < close && src[i] != '"'; ++i) {
      if (src[i] != '\\') {
        s += src[i];
        continue;
      }
      ++i;
      if (i < close && src[i] >= '0' && src[i] <= '7') {
        int v = 0;
        for (int d = 0; d < 3 && i < close && src[i] >= '0' && src[i] <= '7'; ++d, ++i)
          v = v * 8 + (src[i] - '0');
        --i;
        s += static_cast<char>(v);
      } else if (i < close) {
        s += src[i];
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

SliceTable parse_slice_table(std::string_view source) {
  SliceTable t;
  t.bus_width = define_value(source, "LAYOUT_BUS_WIDTH");
  t.names = string_literals(source, "LAYOUT_ARRAY_NAMES[");
  const auto seg = integers_in_initializer(source, "LAYOUT_SEGMENTS[");
  const auto sl = integers_in_initializer(source, "LAYOUT_SLICES[");
  if (seg.size() % 3 || sl.size() % 3) throw CodegenError("slice table is not a list of triples");
  for (std::size_t k = 0; k < seg.size(); k += 3) {
    Segment s;
    s.repeat = seg[k];
    const auto first = static_cast<std::size_t>(seg[k + 1]);
    const auto count = static_cast<std::size_t>(seg[k + 2]);
    if ((first + count) * 3 > sl.size()) throw CodegenError("segment refers past the slice list");
    for (std::size_t i = first; i < first + count; ++i) {
      const auto array = static_cast<std::uint32_t>(sl[3 * i]);
      if (array >= t.names.size()) throw CodegenError("slice refers to an unknown array");
      s.slices.push_back({array, sl[3 * i + 1], sl[3 * i + 2]});
    }
    t.segments.push_back(std::move(s));
  }
  if (define_value(source, "LAYOUT_CYCLES") != layout_from_slices(t).c_max())
    throw CodegenError("LAYOUT_CYCLES disagrees with the segment table");
  t.depths = integers_in_initializer(source, "LAYOUT_FIFO_DEPTHS[");
  if (!t.depths.empty() && t.depths.size() != t.names.size())
    throw CodegenError("LAYOUT_FIFO_DEPTHS has the wrong length");
  return t;
}

DecoderRun simulate_decoder(const SliceTable& table, const MemoryImage& image) {
  const Layout layout = layout_from_slices(table);
  if (image.bus_width != table.bus_width || image.c_max != layout.c_max())
    throw CodegenError("memory image does not match the slice table");
  const std::size_t n = table.names.size();
  std::vector<std::int64_t> capacity = table.depths;
  if (capacity.empty()) capacity.assign(n, 0);

  DecoderRun run;
  run.streams.assign(n, {});
  run.writes.assign(n, 0);
  std::vector<std::deque<std::uint64_t>> reg(n);

  auto step = [&](std::size_t j, const std::vector<std::uint64_t>& in) {
    std::size_t first = 0;
    if (!reg[j].empty()) {
      run.streams[j].push_back(reg[j].front());
      reg[j].pop_front();
    } else if (!in.empty()) {
      run.streams[j].push_back(in[0]);
      first = 1;
    } else {
      return;
    }
    ++run.writes[j];
    for (std::size_t e = first; e < in.size(); ++e) reg[j].push_back(in[e]);
    if (static_cast<std::int64_t>(reg[j].size()) > capacity[j])
      throw CodegenError("shift register for '" + table.names[j] + "' overflows depth " +
                         std::to_string(capacity[j]));
  };

  // slices are extracted exactly as the generated code does
  std::vector<std::vector<std::uint64_t>> in(n);
  for (std::int64_t t = 0; t < layout.c_max(); ++t) {
    for (auto& v : in) v.clear();
    const auto word = image.word(t);
    for (const auto& pl : layout.cycles[t]) {
      std::uint64_t v = 0;
      for (std::int64_t i = 0; i < pl.width; ++i) {
        const std::int64_t bit = pl.offset + i;
        v |= static_cast<std::uint64_t>((word[bit / 8] >> (bit % 8)) & 1) << i;
      }
      in[pl.array].push_back(v);
    }
    for (std::size_t j = 0; j < n; ++j) step(j, in[j]);
  }
  const std::vector<std::uint64_t> none;
  bool pending = true;
  while (pending) {
    pending = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (reg[j].empty()) continue;
      step(j, none);
      pending = true;
    }
    if (pending) ++run.drain_cycles;
  }
  return run;
}

}  // namespace iris
