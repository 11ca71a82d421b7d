// iris - data layout optimizer for wide memory buses
//
// Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 a generated
// layout failed its own audit.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "iris/bitsim.hpp"
#include "iris/codegen.hpp"
#include "iris/io.hpp"
#include "iris/metrics.hpp"
#include "iris/render.hpp"
#include "iris/sweep.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace iris;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

struct AuditFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::vector<std::int64_t>> parse_width_tuples(const std::vector<std::string>& items) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& item : items) {
    std::vector<std::int64_t> tuple;
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, 'x')) {
      std::size_t used = 0;
      std::int64_t w = 0;
      try {
        w = std::stoll(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (part.empty() || used != part.size())
        throw std::invalid_argument("bad width tuple '" + item + "' (expected e.g. 33x31)");
      tuple.push_back(w);
    }
    out.push_back(std::move(tuple));
  }
  return out;
}

Layout checked_layout(Strategy s, const Problem& p) {
  Layout layout = run_strategy(s, p);
  const auto audit = audit_layout(layout, p);
  if (!audit.ok()) throw AuditFailure(to_string(s) + " produced an invalid layout\n" + audit.summary());
  return layout;
}

void emit_output(const std::string& out_dir, const std::string& file, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / file).string(), text);
}

Problem load_problem(const std::string& path, int host_word) {
  Problem p = parse_problem(read_file(path));
  if (host_word) {
    p.host_word = host_word;
    require_valid(p);
  }
  return p;
}

bool use_color() { return std::getenv("IRIS_NO_COLOR") == nullptr && isatty(STDOUT_FILENO); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iris: bandwidth-efficient data layouts for wide memory buses"};
  app.require_subcommand(1);

  std::string problem_path, layout_path, out_dir, strategy_name = "iris", format = "table";
  std::string name = "layout", values_path;
  std::vector<std::int64_t> caps;
  std::vector<std::string> width_items;
  int host_word = 0;
  std::int64_t lanes_per_row = 0, points = 100;
  std::optional<std::uint64_t> seed;
  bool no_pragmas = false, no_comments = false;

  auto add_common = [&](CLI::App* sub, bool needs_problem) {
    auto* opt = sub->add_option("problem", problem_path, "problem JSON file");
    if (needs_problem) opt->required();
    sub->add_option("--strategy", strategy_name, "iris, naive or packed")
        ->check(CLI::IsMember({"iris", "naive", "packed"}));
    sub->add_option("--delta-cap", caps, "max elements per cycle, comma separated")->delimiter(',');
    sub->add_option("--widths", width_items, "width tuples like 33x31, comma separated")
        ->delimiter(',');
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "json, table or csv")
        ->check(CLI::IsMember({"json", "table", "csv"}));
    sub->add_option("--host-word", host_word, "host machine word in bits");
  };

  auto* solve = app.add_subcommand("solve", "compute a layout and report its metrics");
  add_common(solve, true);
  out_dir = ".";
  auto* compare = app.add_subcommand("compare", "metrics of every strategy side by side");
  add_common(compare, true);
  auto* sweep = app.add_subcommand("sweep", "evaluate a grid of caps/widths or random instances");
  add_common(sweep, false);
  sweep->add_option("--seed", seed, "generate random problems from this seed");
  sweep->add_option("--points", points, "number of random problems (with --seed)");
  auto* emit = app.add_subcommand("emit", "generate host packer and accelerator decoder sources");
  add_common(emit, true);
  emit->add_option("--name", name, "suffix for generated function names");
  emit->add_option("--values", values_path, "JSON object of array values; also dumps the memory image");
  emit->add_option("--seed", seed, "random array values; also dumps the memory image");
  emit->add_flag("--no-pragmas", no_pragmas, "omit HLS pragmas from the decoder");
  emit->add_flag("--no-comments", no_comments, "omit comments from generated code");
  auto* render = app.add_subcommand("render", "draw a layout file as a text grid");
  render->add_option("layout", layout_path, "layout JSON file")->required();
  render->add_option("--problem", problem_path, "problem file to bind array names");
  render->add_option("--lanes-per-row", lanes_per_row, "bus lanes folded into one row");

  // solve writes files to the working directory unless told otherwise; the
  // other commands print to standard output by default.
  for (auto* sub : {compare, sweep, emit}) sub->preparse_callback([&](std::size_t) { out_dir.clear(); });
  solve->preparse_callback([&](std::size_t) { out_dir = "."; });

  CLI11_PARSE(app, argc, argv);

  try {
    const Strategy strategy = parse_strategy(strategy_name);
    const auto widths = parse_width_tuples(width_items);

    if (solve->parsed()) {
      Problem p = load_problem(problem_path, host_word);
      if (caps.size() > 1) throw std::invalid_argument("solve takes a single --delta-cap");
      if (widths.size() > 1) throw std::invalid_argument("solve takes a single --widths tuple");
      if (!widths.empty()) p = with_widths(p, widths.front());
      if (!caps.empty()) p = with_delta_cap(p, caps.front());
      require_valid(p);
      const Layout layout = checked_layout(strategy, p);
      const auto report = compute_metrics(layout, p);
      fs::create_directories(out_dir);
      write_file((fs::path(out_dir) / (to_string(strategy) + "_layout.json")).string(),
                 serialize_layout(layout));
      write_file((fs::path(out_dir) / (to_string(strategy) + "_metrics.json")).string(),
                 metrics_json(report));
      const MetricsColumns cols{{to_string(strategy), report}};
      if (format == "json")
        std::cout << metrics_json(report);
      else if (format == "csv")
        std::cout << metrics_csv(cols);
      else
        std::cout << metrics_table(cols);
    } else if (compare->parsed()) {
      const Problem base = load_problem(problem_path, host_word);
      std::vector<std::vector<std::int64_t>> width_axis = widths;
      if (width_axis.empty()) width_axis.push_back({});
      MetricsColumns cols;
      for (const auto& w : width_axis) {
        const Problem p = w.empty() ? base : with_widths(base, w);
        require_valid(p);
        std::string suffix;
        for (std::size_t k = 0; k < w.size(); ++k) suffix += (k ? "x" : " ") + std::to_string(w[k]);
        for (Strategy s : {Strategy::naive, Strategy::packed}) {
          cols.emplace_back(to_string(s) + suffix, compute_metrics(checked_layout(s, p), p));
        }
        if (caps.empty()) {
          cols.emplace_back("iris" + suffix, compute_metrics(checked_layout(Strategy::iris, p), p));
        }
        for (auto cap : caps) {
          const Problem pc = with_delta_cap(p, cap);
          require_valid(pc);
          cols.emplace_back("iris" + suffix + " d/W=" + std::to_string(cap),
                            compute_metrics(checked_layout(Strategy::iris, pc), pc));
        }
      }
      if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& [label, r] : cols)
          j.push_back({{"label", label}, {"metrics", nlohmann::json::parse(metrics_json(r))}});
        emit_output(out_dir, "compare.json", j.dump(2) + "\n");
      } else if (format == "csv") {
        emit_output(out_dir, "compare.csv", metrics_csv(cols));
      } else {
        emit_output(out_dir, "compare.txt", metrics_table(cols));
      }
    } else if (sweep->parsed()) {
      std::vector<SweepPoint> pts;
      if (seed) {
        pts = random_sweep_points(*seed, points);
      } else {
        if (problem_path.empty())
          throw std::invalid_argument("sweep needs a problem file or --seed");
        pts = sweep_points(load_problem(problem_path, host_word), caps, widths);
      }
      const auto rows = evaluate_sweep(pts, strategy);
      emit_output(out_dir, "sweep.csv", sweep_csv(rows));
      for (const auto& r : rows)
        if (r.error.empty() && !r.audit_ok)
          throw AuditFailure("sweep point " + std::to_string(r.point) + " failed audit");
    } else if (emit->parsed()) {
      Problem p = load_problem(problem_path, host_word);
      if (!caps.empty()) p = with_delta_cap(p, caps.front());
      if (!widths.empty()) p = with_widths(p, widths.front());
      require_valid(p);
      const Layout layout = checked_layout(strategy, p);
      CodegenConfig cfg;
      cfg.host_word = p.host_word;
      cfg.name = name;
      cfg.hls_pragmas = !no_pragmas;
      cfg.comments = !no_comments;
      const auto depths = fifo_depths(layout, p);
      emit_output(out_dir, "pack_" + name + ".c", emit_host_packer(layout, p, cfg));
      emit_output(out_dir, "decode_" + name + ".cpp", emit_decoder(layout, p, cfg, depths));

      if (!values_path.empty() || seed) {
        if (out_dir.empty()) throw std::invalid_argument("memory image dump needs --out");
        ValueSet values(p.arrays.size());
        if (!values_path.empty()) {
          const auto j = nlohmann::json::parse(read_file(values_path));
          for (std::size_t k = 0; k < p.arrays.size(); ++k)
            values[k] = j.at(p.arrays[k].name).get<std::vector<std::uint64_t>>();
        } else {
          std::mt19937_64 rng(*seed);
          for (std::size_t k = 0; k < p.arrays.size(); ++k)
            for (std::int64_t e = 0; e < p.arrays[k].depth; ++e)
              values[k].push_back(p.arrays[k].width >= 64
                                      ? rng()
                                      : rng() & ((std::uint64_t{1} << p.arrays[k].width) - 1));
        }
        const MemoryImage img = pack(layout, values);
        emit_output(out_dir, "image.bin",
                    std::string(img.bytes.begin(), img.bytes.end()));
        emit_output(out_dir, "image.json", image_sidecar_json(img));
      }
    } else if (render->parsed()) {
      const std::string text = read_file(layout_path);
      const Layout layout = problem_path.empty()
                                ? parse_layout(text)
                                : parse_layout(text, parse_problem(read_file(problem_path)));
      RenderOptions opts;
      opts.lanes_per_row = lanes_per_row;
      opts.color = use_color();
      std::cout << render_layout(layout, opts);
    }
  } catch (const AuditFailure& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ProblemError& e) {
    for (const auto& v : e.violations()) std::cerr << "error: " << v << "\n";
    return kExitInvalid;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
