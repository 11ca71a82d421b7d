// acceptance - one PASS/FAIL line per acceptance criterion.
//
// Exit status is nonzero if any criterion fails. A criterion that depends
// on a host C compiler reports SKIP when none is available.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "iris/baselines.hpp"
#include "iris/bitsim.hpp"
#include "iris/codegen.hpp"
#include "iris/io.hpp"
#include "iris/metrics.hpp"
#include "iris/random_problem.hpp"
#include "iris/scheduler.hpp"
#include "json.hpp"
#include "packer_harness.hpp"

using namespace iris;
using Clock = std::chrono::steady_clock;

namespace {

enum class Verdict { pass, fail, skip };

struct Result {
  Verdict verdict = Verdict::pass;
  std::vector<std::string> notes;   // measured values
  std::vector<std::string> failed;  // unmet conditions

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      failed.push_back(what);
      verdict = Verdict::fail;
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Best of several runs, in milliseconds.
template <class F>
double time_ms(F&& f, int reps = 5) {
  double best = 1e300;
  for (int k = 0; k < reps; ++k) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << std::fixed << v;
  return s.str();
}

std::string triple(const MetricsReport& r) {
  return std::to_string(r.c_max) + "/" + r.b_eff.percent() + "/" + std::to_string(r.l_max);
}

std::string depths(const std::vector<std::int64_t>& d) {
  std::string s = "(";
  for (std::size_t k = 0; k < d.size(); ++k) s += (k ? "," : "") + std::to_string(d[k]);
  return s + ")";
}

Result criterion_example_baselines() {
  Result r;
  const auto p = fixtures::example();
  const auto naive = compute_metrics(naive_layout(p), p);
  const auto packed = compute_metrics(packed_layout(p), p);
  r.note("naive " + triple(naive) + ", packed " + triple(packed));
  r.expect(naive.c_max == 19 && naive.b_eff.percent() == "45.4%" && naive.l_max == 13,
           "naive = 19/45.4%/13");
  r.expect(packed.c_max == 13 && packed.b_eff.percent() == "66.3%" && packed.l_max == 7,
           "packed = 13/66.3%/7");
  const double tn = time_ms([&] { naive_layout(p); }, 20);
  const double tp = time_ms([&] { packed_layout(p); }, 20);
  r.note("runtime " + fmt(tn) + " ms / " + fmt(tp) + " ms");
  r.expect(tn < 1.0 && tp < 1.0, "each runs in < 1 ms");
  return r;
}

Result criterion_example_iris() {
  Result r;
  const auto p = fixtures::example();
  const auto iris = compute_metrics(iris_layout(p), p);
  const auto packed = compute_metrics(packed_layout(p), p);
  r.note("iris " + triple(iris));
  r.expect(iris.c_max >= 9 && iris.c_max <= 10, "9 <= c_max <= 10");
  r.expect(iris.b_eff.at_least(86, 100), "B_eff >= 86%");
  r.expect(iris.l_max <= 4, "L_max <= 4");
  r.expect(iris.c_max < packed.c_max && iris.l_max < packed.l_max,
           "strictly better than packed on c_max and L_max");
  const auto golden = nlohmann::json::parse(read_file(IRIS_GOLDEN_DIR "/example_iris.json"));
  r.expect(golden.at("c_max") == iris.c_max && golden.at("b_eff_percent") == iris.b_eff.percent() &&
               golden.at("l_max") == iris.l_max,
           "matches pinned golden triple " + golden.dump());
  return r;
}

Result criterion_helmholtz() {
  Result r;
  const auto base = fixtures::helmholtz();
  const auto packed = compute_metrics(packed_layout(base), base);
  r.note("packed " + std::to_string(packed.c_max) + "/" + packed.b_eff.percent() + " fifo " +
         depths(packed.fifo_depth));
  r.expect(packed.c_max == 697 && packed.b_eff.percent() == "99.8%" &&
               packed.fifo_depth == std::vector<std::int64_t>{998, 90, 998},
           "packed = 697/99.8%/(998,90,998)");

  const auto p4 = fixtures::helmholtz(4);
  const auto c4 = compute_metrics(iris_layout(p4), p4);
  r.note("cap4 " + triple(c4) + " fifo " + depths(c4.fifo_depth));
  r.expect(c4.c_max <= 697, "cap4 c_max <= 697");
  r.expect(c4.b_eff.at_least(998, 1000), "cap4 B_eff >= 99.8%");
  r.expect(c4.l_max <= 334, "cap4 L_max <= 334");
  const std::vector<double> reference{666, 30, 636};
  for (std::size_t j = 0; j < 3; ++j) {
    r.expect(c4.fifo_depth[j] < packed.fifo_depth[j], "cap4 FIFO " + base.arrays[j].name + " below packed");
    r.expect(std::abs(c4.fifo_depth[j] - reference[j]) <= 0.10 * reference[j],
             "cap4 FIFO " + base.arrays[j].name + " within 10% of " + fmt(reference[j], 0));
  }

  for (auto [cap, target] : {std::pair{3, 704}, std::pair{2, 711}}) {
    const auto pc = fixtures::helmholtz(cap);
    const auto m = compute_metrics(iris_layout(pc), pc);
    r.note("cap" + std::to_string(cap) + " c_max " + std::to_string(m.c_max));
    r.expect(m.c_max <= target + 2, "cap" + std::to_string(cap) + " c_max <= " + std::to_string(target + 2));
  }

  const auto p1 = fixtures::helmholtz(1);
  const auto c1 = compute_metrics(iris_layout(p1), p1);
  r.note("cap1 " + triple(c1) + " fifo " + depths(c1.fifo_depth));
  r.expect(c1.c_max == 1361 && c1.b_eff.percent() == "51.1%" && c1.l_max == 998 &&
               c1.fifo_depth == std::vector<std::int64_t>{0, 0, 0},
           "cap1 = 1361/51.1%/998, FIFOs 0");
  return r;
}

Result criterion_matmul() {
  Result r;
  const auto p = fixtures::matmul();
  const auto m = compute_metrics(iris_layout(p), p);
  r.note("(64,64) c_max " + std::to_string(m.c_max) + " fifo " + depths(m.fifo_depth));
  r.expect(m.c_max == 313, "(64,64) c_max = 313");
  r.expect(m.fifo_depth[0] == m.fifo_depth[1] && m.fifo_depth[0] <= 312, "(64,64) FIFOs equal and <= 312");
  for (auto [wa, wb] : {std::pair{33, 31}, std::pair{30, 19}}) {
    const auto q = fixtures::matmul(wa, wb);
    const auto iris = compute_metrics(iris_layout(q), q);
    const auto packed = compute_metrics(packed_layout(q), q);
    const std::string tag = "(" + std::to_string(wa) + "," + std::to_string(wb) + ")";
    r.note(tag + " B_eff " + iris.b_eff.percent() + " vs " + packed.b_eff.percent() + ", fifo " +
           depths(iris.fifo_depth) + " vs " + depths(packed.fifo_depth));
    r.expect(iris.b_eff.useful_bits * packed.b_eff.capacity_bits >
                 packed.b_eff.useful_bits * iris.b_eff.capacity_bits,
             tag + " iris B_eff > packed B_eff");
    for (std::size_t j = 0; j < 2; ++j)
      r.expect(iris.fifo_depth[j] <= packed.fifo_depth[j], tag + " FIFO " + q.arrays[j].name + " <= packed");
  }
  return r;
}

Result criterion_properties() {
  Result r;
  constexpr int kProblems = 250;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  int audited = 0, bad = 0;
  for (int k = 0; k < kProblems; ++k) {
    const auto p = random_problem(rng);
    const auto iris = iris_layout(p);
    const auto packed = packed_layout(p);
    const auto naive = naive_layout(p);
    auto fail = [&](const std::string& what) {
      if (bad++ < 5) r.expect(false, "problem " + std::to_string(k) + ": " + what);
    };
    for (const Layout* l : {&iris, &packed, &naive}) {
      const auto a = audit_layout(*l, p);
      ++audited;
      if (!a.ok()) fail(a.summary());
    }
    if (!(iris.c_max() <= packed.c_max() && packed.c_max() <= naive.c_max()))
      fail("c_max order iris <= packed <= naive");
    const auto m = p.bus_width;
    if (iris.c_max() < (total_processing_time(p) + m - 1) / m) fail("c_max below ceil(p_tot/m)");
    const auto v = fixtures::random_values(p, rng);
    const auto u = unpack(pack(iris, v), iris);
    if (u.values != v) fail("unpack(pack(v)) != v");
    const auto lt = completion_and_lateness(iris, p);
    for (std::size_t j = 0; j < p.arrays.size(); ++j)
      if (u.arrival[j].back() != lt.completion[j]) fail("arrival/completion mismatch");
  }
  const double secs = ms_since(t0) / 1000.0;
  r.note(std::to_string(kProblems) + " problems, " + std::to_string(audited) + " audits, " +
         fmt(secs, 2) + " s");
  r.expect(bad == 0, "no property violations (" + std::to_string(bad) + " found)");
  r.expect(secs < 60.0, "runtime < 60 s");
  return r;
}

Result criterion_codegen() {
  Result r;
  const auto p = fixtures::example();
  const auto layout = iris_layout(p);
  const auto depths_expected = fifo_depths(layout, p);
  const auto table = parse_slice_table(emit_decoder(layout, p, {}, depths_expected));
  r.expect(layout_from_slices(table) == layout, "decoder slice table re-parses to the layout");
  r.expect(table.depths == depths_expected, "decoder depth constants equal fifo_depths");
  const auto host_table = parse_slice_table(emit_host_packer(layout, p, {}));
  r.expect(layout_from_slices(host_table) == layout, "host slice table re-parses to the layout");

  const auto o = harness::run_compiled_packer(p, 64, 100, 2026);
  if (!o.ran) {
    r.note("no host C compiler found; compile-and-run step skipped");
    if (r.verdict == Verdict::pass) r.verdict = Verdict::skip;
    return r;
  }
  r.note(std::to_string(o.sets_matched) + "/" + std::to_string(o.sets) +
         " compiled-packer buffers identical to pack_reference");
  r.expect(o.problem.empty() && o.sets_matched == o.sets, o.problem.empty() ? "all buffers identical" : o.problem);
  return r;
}

Result criterion_performance() {
  Result r;
  RandomProblemParams params;
  params.bus_widths = {256};
  params.min_arrays = params.max_arrays = 1000;
  const auto big = random_problem(std::uint64_t{1000}, params);
  const double t_big = time_ms([&] { iris_layout(big); }, 1);
  const auto h = fixtures::helmholtz();
  const double t_h = time_ms([&] { iris_layout(h); }, 5);
  r.note("1000 arrays " + fmt(t_big, 1) + " ms, helmholtz " + fmt(t_h, 2) + " ms");
  r.expect(t_big < 5000.0, "1000-array instance < 5 s");
  r.expect(t_h < 100.0, "helmholtz < 100 ms");
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"1 example naive/packed exact", criterion_example_baselines},
      {"2 example iris band", criterion_example_iris},
      {"3 inverse helmholtz", criterion_helmholtz},
      {"4 matrix multiply", criterion_matmul},
      {"5 property suite", criterion_properties},
      {"6 codegen integration", criterion_codegen},
      {"7 performance", criterion_performance},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Result res;
    try {
      res = run();
    } catch (const std::exception& e) {
      res.expect(false, std::string("exception: ") + e.what());
    }
    const char* tag = res.verdict == Verdict::pass ? "PASS" : res.verdict == Verdict::skip ? "SKIP" : "FAIL";
    std::string line = std::string(tag) + "  " + name;
    std::string sep = " -- ";
    for (const auto& n : res.notes) line += sep + n, sep = "; ";
    for (const auto& f : res.failed) line += " [unmet: " + f + "]";
    std::cout << line << std::endl;
    failures += res.verdict == Verdict::fail;
  }
  return failures ? 1 : 0;
}
