#include <deque>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "iris/baselines.hpp"
#include "iris/metrics.hpp"
#include "iris/random_problem.hpp"
#include "iris/scheduler.hpp"
#include "json.hpp"

using namespace iris;

namespace {

// Queue simulation: every cycle the arriving elements join the queue and
// the decoder emits one.
std::vector<std::int64_t> fifo_oracle(const Layout& l, std::size_t n) {
  std::vector<std::int64_t> depth(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::deque<std::int64_t> q;
    for (const auto& cyc : l.cycles) {
      for (const auto& pl : cyc)
        if (pl.array == j) q.push_back(pl.element);
      if (!q.empty()) q.pop_front();
      depth[j] = std::max<std::int64_t>(depth[j], static_cast<std::int64_t>(q.size()));
    }
  }
  return depth;
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("naive on the example") {
    const auto p = fixtures::example();
    const auto r = compute_metrics(naive_layout(p), p);
    CHECK(r.c_max == 19);
    CHECK(r.b_eff.percent() == "45.4%");
    CHECK(r.l_max == 13);
  }

  TEST_CASE("naive is one element per word") {
    const Problem one{32, 64, {{"x", 7, 11, 3, {}}}};
    CHECK(naive_layout(one).c_max() == 11);
    const auto l = naive_layout(fixtures::helmholtz());
    CHECK(l.c_max() == 2783);
    for (const auto& c : l.cycles) CHECK(c.size() == 1);
  }

  TEST_CASE("packed on the example") {
    const auto p = fixtures::example();
    const auto r = compute_metrics(packed_layout(p), p);
    CHECK(r.c_max == 13);
    CHECK(r.b_eff.percent() == "66.3%");
    CHECK(r.l_max == 7);
    // A, B, C, D, E
    CHECK(r.lateness == std::vector<std::int64_t>{0, 3, 1, 7, 3});
  }

  TEST_CASE("packed on helmholtz") {
    const auto p = fixtures::helmholtz();
    const auto r = compute_metrics(packed_layout(p), p);
    CHECK(r.c_max == 697);
    CHECK(r.b_eff.percent() == "99.8%");
    CHECK(r.fifo_depth == std::vector<std::int64_t>{998, 90, 998});
  }

  TEST_CASE("packed equals naive when one element fills the delta") {
    const Problem p{8, 64, {{"x", 5, 6, 2, {}}}};
    CHECK(packed_layout(p) == naive_layout(p));
  }

  TEST_CASE("packed honours delta_cap") {
    const auto p = fixtures::helmholtz(2);
    for (const auto& c : packed_layout(p).cycles) CHECK(c.size() <= 2);
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("efficiency") {
    CHECK(Efficiency{69, 19 * 8}.percent() == "45.4%");
    CHECK(Efficiency{69, 9 * 8}.percent() == "95.8%");
    CHECK(Efficiency{64, 64}.percent() == "100.0%");
    CHECK(Efficiency{1225, 10000}.percent() == "12.3%");  // half-up, not half-even
    CHECK(Efficiency{0, 0}.value() == 0.0);
    CHECK(Efficiency{998, 1000}.at_least(998, 1000));
    CHECK_FALSE(Efficiency{997, 1000}.at_least(998, 1000));
  }

  TEST_CASE("a full bus is 100%") {
    const Problem p{16, 64, {{"a", 8, 4, 2, {}}, {"b", 8, 4, 2, {}}}};
    const auto l = iris_layout(p);
    CHECK(l.c_max() == 4);
    CHECK(bandwidth_efficiency(l, p).percent() == "100.0%");
  }

  TEST_CASE("lateness") {
    const Problem p{8, 64, {{"a", 8, 3, 3, {}}}};
    const auto lt = completion_and_lateness(naive_layout(p), p);
    CHECK(lt.completion == std::vector<std::int64_t>{3});
    CHECK(lt.l_max == 0);
    CHECK(completion_and_lateness(iris_layout(fixtures::helmholtz(1)), fixtures::helmholtz(1)).l_max == 998);
  }

  TEST_CASE("fifo recurrence unrolled by hand") {
    // four elements arrive in cycle 1, nothing after: backlog 3, 2, 1
    const Problem p{4, 64, {{"a", 1, 4, 1, {}}}};
    const Layout l = make_layout(4, {"a"}, {{{0, 0, 0, 1}, {0, 1, 1, 1}, {0, 2, 2, 1}, {0, 3, 3, 1}}, {}, {}});
    CHECK(fifo_depths(l, p) == std::vector<std::int64_t>{3});
    CHECK(fifo_depths_reference(l, p) == std::vector<std::int64_t>{3});
  }

  TEST_CASE("one element per cycle needs no fifo") {
    const auto p = fixtures::helmholtz(1);
    CHECK(fifo_depths(iris_layout(p), p) == std::vector<std::int64_t>{0, 0, 0});
  }

  TEST_CASE("parallel fifo kernel matches the reference and the queue oracle") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 100; ++k) {
      const auto p = random_problem(rng);
      for (const auto& l : {iris_layout(p), packed_layout(p)}) {
        const auto d = fifo_depths(l, p);
        CHECK(d == fifo_depths_reference(l, p));
        CHECK(d == fifo_oracle(l, p.arrays.size()));
      }
    }
  }

  TEST_CASE("report rendering") {
    const auto p = fixtures::example();
    const auto r = compute_metrics(iris_layout(p), p);
    const auto j = nlohmann::json::parse(metrics_json(r));
    CHECK(j.at("c_max") == r.c_max);
    CHECK(j.at("l_max") == r.l_max);

    const MetricsColumns cols{{"packed", compute_metrics(packed_layout(p), p)}, {"iris", r}};
    const auto table = metrics_table(cols);
    CHECK(table.find("Efficiency") != std::string::npos);
    CHECK(table.find("FIFO E") != std::string::npos);
    const auto csv = metrics_csv(cols);
    CHECK(csv.rfind("metric,packed,iris\n", 0) == 0);
    CHECK(csv.find("C_max,13,") != std::string::npos);
  }
}
