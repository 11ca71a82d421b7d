#include "iris/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace iris {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size() + 1);
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) +
                         ", column " + std::to_string(col) + ": " + e.what(),
                     line, col);
  }
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(where + key, "unknown key");
  }
}

std::int64_t get_int(const json& obj, const std::string& where,
                     const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + key, "missing required field");
  if (!it->is_number_integer())
    throw SchemaError(where + key, "expected an integer");
  return it->get<std::int64_t>();
}

std::optional<std::int64_t> get_opt_int(const json& obj,
                                        const std::string& where,
                                        const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return get_int(obj, where, key);
}

const json& get_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where.empty() ? "<root>" : where,
                                        "expected an object");
  return j;
}

}  // namespace

Problem parse_problem(std::string_view text) {
  const json root = parse_json(text);
  get_object(root, "");
  reject_unknown_keys(root, "", {"bus_width", "host_word", "arrays"});

  Problem p;
  p.bus_width = get_int(root, "", "bus_width");
  if (auto hw = get_opt_int(root, "", "host_word"))
    p.host_word = static_cast<int>(*hw);

  auto arrays = root.find("arrays");
  if (arrays == root.end()) throw SchemaError("arrays", "missing required field");
  if (!arrays->is_array()) throw SchemaError("arrays", "expected a list");

  for (std::size_t i = 0; i < arrays->size(); ++i) {
    const std::string where = "arrays[" + std::to_string(i) + "].";
    const json& a = get_object((*arrays)[i], where);
    reject_unknown_keys(a, where,
                        {"name", "width", "depth", "due_date", "delta_cap"});
    ArraySpec spec;
    auto name = a.find("name");
    if (name == a.end()) throw SchemaError(where + "name", "missing required field");
    if (!name->is_string()) throw SchemaError(where + "name", "expected a string");
    spec.name = name->get<std::string>();
    spec.width = get_int(a, where, "width");
    spec.depth = get_int(a, where, "depth");
    spec.due_date = get_int(a, where, "due_date");
    spec.delta_cap = get_opt_int(a, where, "delta_cap");
    p.arrays.push_back(std::move(spec));
  }
  require_valid(p);
  return p;
}

std::string serialize_problem(const Problem& p) {
  json root;
  root["bus_width"] = p.bus_width;
  root["host_word"] = p.host_word;
  json arrays = json::array();
  for (const auto& a : p.arrays) {
    json ja = {{"name", a.name},
               {"width", a.width},
               {"depth", a.depth},
               {"due_date", a.due_date}};
    if (a.delta_cap) ja["delta_cap"] = *a.delta_cap;
    arrays.push_back(std::move(ja));
  }
  root["arrays"] = std::move(arrays);
  return root.dump(2) + "\n";
}

std::string serialize_layout(const Layout& layout) {
  json root;
  root["bus_width"] = layout.bus_width;
  root["c_max"] = layout.c_max();
  root["arrays"] = layout.array_names;
  json cycles = json::array();
  for (const auto& c : layout.cycles) {
    json jc = json::array();
    for (const auto& pl : c)
      jc.push_back({{"array", layout.array_names.at(pl.array)},
                    {"element", pl.element},
                    {"offset", pl.offset},
                    {"width", pl.width}});
    cycles.push_back(std::move(jc));
  }
  root["cycles"] = std::move(cycles);
  return root.dump() + "\n";
}

namespace {

Layout parse_layout_impl(std::string_view text, const Problem* p) {
  const json root = parse_json(text);
  get_object(root, "");
  reject_unknown_keys(root, "", {"bus_width", "c_max", "arrays", "cycles"});

  Layout layout;
  std::map<std::string, std::uint32_t> index;
  bool fixed_names = false;
  if (p) {
    for (const auto& a : p->arrays) {
      index.emplace(a.name, static_cast<std::uint32_t>(layout.array_names.size()));
      layout.array_names.push_back(a.name);
    }
    fixed_names = true;
  } else if (auto names = root.find("arrays"); names != root.end()) {
    if (!names->is_array()) throw SchemaError("arrays", "expected a list of names");
    for (const auto& n : *names) {
      if (!n.is_string()) throw SchemaError("arrays", "expected a list of names");
      auto name = n.get<std::string>();
      if (!index.emplace(name, static_cast<std::uint32_t>(layout.array_names.size())).second)
        throw SchemaError("arrays", "duplicate name '" + name + "'");
      layout.array_names.push_back(std::move(name));
    }
    fixed_names = true;
  }

  auto bw = get_opt_int(root, "", "bus_width");
  if (p) {
    if (bw && *bw != p->bus_width)
      throw SchemaError("bus_width", "does not match the problem's bus width");
    layout.bus_width = p->bus_width;
  } else {
    if (!bw) throw SchemaError("bus_width", "missing required field");
    layout.bus_width = *bw;
  }

  auto cycles = root.find("cycles");
  if (cycles == root.end()) throw SchemaError("cycles", "missing required field");
  if (!cycles->is_array()) throw SchemaError("cycles", "expected a list");
  for (std::size_t c = 0; c < cycles->size(); ++c) {
    const json& jc = (*cycles)[c];
    const std::string cw = "cycles[" + std::to_string(c) + "]";
    if (!jc.is_array()) throw SchemaError(cw, "expected a list");
    Cycle cycle;
    for (std::size_t k = 0; k < jc.size(); ++k) {
      const std::string where = cw + "[" + std::to_string(k) + "].";
      const json& jp = get_object(jc[k], where);
      reject_unknown_keys(jp, where, {"array", "element", "offset", "width"});
      auto name = jp.find("array");
      if (name == jp.end() || !name->is_string())
        throw SchemaError(where + "array", "expected an array name");
      const auto key = name->get<std::string>();
      auto it = index.find(key);
      if (it == index.end()) {
        if (fixed_names) throw SchemaError(where + "array", "unknown array '" + key + "'");
        it = index.emplace(key, static_cast<std::uint32_t>(layout.array_names.size())).first;
        layout.array_names.push_back(key);
      }
      cycle.push_back(Placement{it->second, get_int(jp, where, "element"),
                                get_int(jp, where, "offset"),
                                get_int(jp, where, "width")});
    }
    layout.cycles.push_back(std::move(cycle));
  }
  if (auto cm = get_opt_int(root, "", "c_max"); cm && *cm != layout.c_max())
    throw SchemaError("c_max", "does not match the number of cycles");
  update_completion(layout);
  return layout;
}

}  // namespace

Layout parse_layout(std::string_view text) { return parse_layout_impl(text, nullptr); }

Layout parse_layout(std::string_view text, const Problem& p) {
  return parse_layout_impl(text, &p);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::ios_base::failure("write failed for '" + path + "'");
}

}  // namespace iris
