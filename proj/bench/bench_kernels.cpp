// bench_kernels - serial reference kernels vs their OpenMP counterparts
//
// Each row times both versions on the same input (best of --reps runs) and
// checks that they agree before reporting a speedup.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "iris/bitsim.hpp"
#include "iris/metrics.hpp"
#include "iris/random_problem.hpp"
#include "iris/scheduler.hpp"
#include "iris/sweep.hpp"

using namespace iris;

namespace {

double best_ms(const std::function<void()>& f, int reps) {
  double best = 1e300;
  for (int k = 0; k < reps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, std::chrono::duration<double, std::milli>(dt).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-22s %12.3f %12.3f %8.2fx  %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, agree ? "ok" : "MISMATCH");
}

ValueSet random_values(const Problem& p, std::mt19937_64& rng) {
  ValueSet v(p.arrays.size());
  for (std::size_t j = 0; j < p.arrays.size(); ++j) {
    const auto w = p.arrays[j].width;
    const std::uint64_t mask = w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
    for (std::int64_t e = 0; e < p.arrays[j].depth; ++e) v[j].push_back(rng() & mask);
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel kernel timings"};
  int reps = 5;
  std::int64_t arrays = 64, depth = 4096, points = 400;
  std::uint64_t seed = 1;
  app.add_option("--reps", reps, "timed runs per kernel (best is reported)");
  app.add_option("--arrays", arrays, "arrays in the large instance");
  app.add_option("--depth", depth, "max elements per array in the large instance");
  app.add_option("--points", points, "random problems in the sweep");
  app.add_option("--seed", seed, "instance seed");
  CLI11_PARSE(app, argc, argv);

  RandomProblemParams params;
  params.bus_widths = {512};
  params.min_arrays = params.max_arrays = arrays;
  params.max_depth = depth;
  const Problem p = random_problem(seed, params);
  const Layout layout = iris_layout(p);
  std::mt19937_64 rng(seed);
  const ValueSet values = random_values(p, rng);

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("instance: m=%lld, %lld arrays, %lld cycles, %d thread(s)\n\n",
              static_cast<long long>(p.bus_width), static_cast<long long>(p.arrays.size()),
              static_cast<long long>(layout.c_max()), threads);
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

  MemoryImage a, b;
  const double ps = best_ms([&] { a = pack_reference(layout, values); }, reps);
  const double pp = best_ms([&] { b = pack(layout, values); }, reps);
  row("pack", ps, pp, a == b);

  Unpacked ua, ub;
  const double us = best_ms([&] { ua = unpack_reference(a, layout); }, reps);
  const double up = best_ms([&] { ub = unpack(a, layout); }, reps);
  row("unpack", us, up, ua.values == ub.values && ua.arrival == ub.arrival);

  std::vector<std::int64_t> fa, fb;
  const double fs = best_ms([&] { fa = fifo_depths_reference(layout, p); }, reps);
  const double fp = best_ms([&] { fb = fifo_depths(layout, p); }, reps);
  row("fifo_depths", fs, fp, fa == fb);

  const auto pts = random_sweep_points(seed, points);
  std::string ca, cb;
  const double ss = best_ms([&] { ca = sweep_csv(evaluate_sweep_serial(pts, Strategy::iris)); }, reps);
  const double sp = best_ms([&] { cb = sweep_csv(evaluate_sweep(pts, Strategy::iris)); }, reps);
  row("sweep", ss, sp, ca == cb);
  return 0;
}
