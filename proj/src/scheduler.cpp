#include "iris/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <boost/rational.hpp>

namespace iris {

using Rational = boost::rational<std::int64_t>;

std::vector<std::int64_t> to_release_times(std::span<const std::int64_t> due_dates) {
  if (due_dates.empty())
    throw std::invalid_argument("to_release_times: no due dates");
  const std::int64_t d_max = *std::max_element(due_dates.begin(), due_dates.end());
  std::vector<std::int64_t> r;
  r.reserve(due_dates.size());
  for (auto d : due_dates) r.push_back(d_max - d);
  return r;
}

std::int64_t height_of(std::int64_t remaining, std::int64_t width,
                       std::int64_t delta) {
  return (remaining * width + delta - 1) / delta;
}

HeightState initial_heights(std::span<const DerivedTask> tasks) {
  HeightState hs;
  for (const auto& t : tasks) {
    hs.remaining.push_back(t.remaining_elements);
    hs.height.push_back(height_of(t.remaining_elements, t.width, t.delta));
  }
  return hs;
}

std::vector<std::int64_t> lrm_allocation(std::span<const ReadyTask> tied,
                                         std::int64_t avail) {
  std::vector<std::int64_t> beta(tied.size(), 0);
  if (tied.empty() || avail <= 0) return beta;

  std::int64_t total = 0;
  for (const auto& t : tied) total += t.cap;

  // v_j = cap_j / quota with quota = total / avail; beta_j is v_j rounded
  // down to whole elements.
  const std::int64_t share = avail;
  std::vector<Rational> rem(tied.size());
  for (std::size_t k = 0; k < tied.size(); ++k) {
    const Rational v(tied[k].cap * share, total);
    const std::int64_t elems = boost::rational_cast<std::int64_t>(v / tied[k].width);
    beta[k] = std::min(elems * tied[k].width, tied[k].cap);
    rem[k] = v - beta[k];
    avail -= beta[k];
  }

  std::vector<std::size_t> order(tied.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });

  for (std::size_t k : order) {
    if (avail == 0) break;
    if (avail >= tied[k].width && beta[k] + tied[k].width <= tied[k].cap) {
      beta[k] += tied[k].width;
      avail -= tied[k].width;
    }
  }
  return beta;
}

std::vector<Allocation> find_capabilities(std::span<const ReadyTask> ready,
                                          std::int64_t bus_width) {
  std::vector<Allocation> out;
  std::int64_t avail = bus_width;
  std::size_t i = 0;
  while (avail > 0 && i < ready.size()) {
    if (ready[i].height <= 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::int64_t sum = 0;
    while (j < ready.size() && ready[j].height == ready[i].height) sum += ready[j++].cap;

    const auto tied = ready.subspan(i, j - i);
    if (sum > avail) {
      const auto beta = lrm_allocation(tied, avail);
      for (std::size_t k = 0; k < tied.size(); ++k)
        if (beta[k] > 0) out.push_back({tied[k].id, beta[k]});
      avail = 0;
    } else {
      for (const auto& t : tied)
        if (t.cap > 0) out.push_back({t.id, t.cap});
      avail -= sum;
    }
    i = j;
  }
  return out;
}

void backfill(std::vector<Allocation>& alloc, std::span<const ReadyTask> ready,
              std::span<const std::int64_t> remaining_bits,
              std::int64_t bus_width) {
  std::int64_t used = 0;
  for (const auto& a : alloc) used += a.bits;

  auto granted = [&](std::uint32_t id) -> Allocation* {
    for (auto& a : alloc)
      if (a.task == id) return &a;
    return nullptr;
  };

  while (true) {
    const std::int64_t free_bits = bus_width - used;
    std::optional<std::size_t> best;
    std::int64_t best_work = -1;
    for (std::size_t k = 0; k < ready.size(); ++k) {
      const auto& t = ready[k];
      if (t.width > free_bits) continue;
      const Allocation* a = granted(t.id);
      const std::int64_t bits = a ? a->bits : 0;
      if (bits + t.width > t.cap) continue;
      const std::int64_t work = remaining_bits[k] - bits;
      if (work > best_work) {
        best_work = work;
        best = k;
      }
    }
    if (!best) return;
    const auto& t = ready[*best];
    if (Allocation* a = granted(t.id))
      a->bits += t.width;
    else
      alloc.push_back({t.id, t.width});
    used += t.width;
  }
}

namespace {

struct LiveTask {
  ReadyTask view;
  std::int64_t delta = 0;
  std::int64_t remaining = 0;  // elements
  std::int64_t beta = 0;
};

// Length of the next interval: until two heights meet, a task completes,
// or the next release, floored to whole cycles with a one-cycle minimum.
std::int64_t interval_length(const std::vector<LiveTask>& live,
                             std::optional<std::int64_t> until_release) {
  std::optional<Rational> tau;
  auto consider = [&](const Rational& c) {
    if (!tau || c < *tau) tau = c;
  };
  if (until_release) consider(Rational(*until_release));

  // Heights of tasks that get no lanes, tallest first.
  std::vector<std::int64_t> idle_heights;
  std::vector<const LiveTask*> busy;
  for (const auto& t : live) {
    if (t.beta > 0)
      busy.push_back(&t);
    else
      idle_heights.push_back(t.view.height);
  }
  std::sort(idle_heights.begin(), idle_heights.end(), std::greater<>());

  const Rational one(1);
  for (const LiveTask* i : busy) {
    consider(Rational(i->remaining * i->view.width, i->beta));

    const Rational rate_i(i->beta, i->delta);
    // Idle tasks descend at rate 0; only the tallest one not above i matters.
    auto it = std::lower_bound(idle_heights.begin(), idle_heights.end(),
                               i->view.height, std::greater<>());
    if (it != idle_heights.end()) consider(Rational(i->view.height - *it) / rate_i);

    for (const LiveTask* j : busy) {
      if (i == j || j->view.height > i->view.height) continue;
      const Rational rate_j(j->beta, j->delta);
      if (rate_i <= rate_j) continue;
      consider(Rational(i->view.height - j->view.height) / (rate_i - rate_j));
    }
    if (tau && *tau < one) break;
  }
  const std::int64_t whole = tau ? boost::rational_cast<std::int64_t>(*tau) : 1;
  return std::max<std::int64_t>(1, whole);
}

}  // namespace

ForwardSchedule iris_schedule(const Problem& p) {
  require_valid(p);
  const auto tasks = derive_tasks(p);
  std::vector<std::int64_t> due;
  for (const auto& a : p.arrays) due.push_back(a.due_date);
  const auto release = to_release_times(due);

  std::vector<std::int64_t> release_points(release);
  std::sort(release_points.begin(), release_points.end());
  release_points.erase(std::unique(release_points.begin(), release_points.end()),
                       release_points.end());

  std::vector<std::int64_t> remaining;
  for (const auto& t : tasks) remaining.push_back(t.remaining_elements);
  std::size_t unfinished = tasks.size();

  ForwardSchedule fs;
  std::int64_t clock = 0;  // release clock; idle gaps are skipped, not emitted
  std::vector<LiveTask> live;
  while (unfinished > 0) {
    auto next_release = std::upper_bound(release_points.begin(),
                                         release_points.end(), clock);
    live.clear();
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      if (release[j] > clock || remaining[j] == 0) continue;
      const auto& t = tasks[j];
      LiveTask lt;
      lt.view = {static_cast<std::uint32_t>(j), t.width,
                 std::min(t.delta, remaining[j] * t.width),
                 height_of(remaining[j], t.width, t.delta)};
      lt.delta = t.delta;
      lt.remaining = remaining[j];
      live.push_back(lt);
    }
    if (live.empty()) {
      clock = *next_release;
      continue;
    }

    std::stable_sort(live.begin(), live.end(), [](const LiveTask& a, const LiveTask& b) {
      if (a.view.height != b.view.height) return a.view.height > b.view.height;
      if (a.view.width != b.view.width) return a.view.width > b.view.width;
      return a.view.id < b.view.id;
    });

    std::vector<ReadyTask> ready;
    std::vector<std::int64_t> remaining_bits;
    for (const auto& lt : live) {
      ready.push_back(lt.view);
      remaining_bits.push_back(lt.remaining * lt.view.width);
    }
    auto alloc = find_capabilities(ready, p.bus_width);
    backfill(alloc, ready, remaining_bits, p.bus_width);
    if (alloc.empty()) throw std::logic_error("iris_schedule: empty allocation");

    for (auto& lt : live)
      for (const auto& a : alloc)
        if (a.task == lt.view.id) lt.beta = a.bits;

    std::optional<std::int64_t> until_release;
    if (next_release != release_points.end()) until_release = *next_release - clock;
    const std::int64_t tau = interval_length(live, until_release);

    fs.intervals.push_back({fs.horizon, tau, alloc});
    for (const auto& a : alloc) {
      remaining[a.task] -= tau * a.bits / p.arrays[a.task].width;
      if (remaining[a.task] == 0) --unfinished;
    }
    clock += tau;
    fs.horizon += tau;
  }
  return fs;
}

Layout reverse_and_materialize(const ForwardSchedule& fs, const Problem& p) {
  std::vector<const Interval*> per_cycle;
  per_cycle.reserve(static_cast<std::size_t>(fs.horizon));
  for (const auto& iv : fs.intervals)
    for (std::int64_t k = 0; k < iv.length; ++k) per_cycle.push_back(&iv);

  std::vector<std::string> names;
  for (const auto& a : p.arrays) names.push_back(a.name);

  std::vector<std::int64_t> next(p.arrays.size(), 0);
  std::vector<Cycle> cycles;
  cycles.reserve(per_cycle.size());
  for (auto it = per_cycle.rbegin(); it != per_cycle.rend(); ++it) {
    Cycle c;
    std::int64_t offset = 0;
    for (const auto& a : (*it)->allocation) {
      const auto& spec = p.arrays[a.task];
      // Surplus slots past the last element stay empty.
      for (std::int64_t e = 0; e < a.bits / spec.width; ++e) {
        if (next[a.task] < spec.depth)
          c.push_back({a.task, next[a.task]++, offset, spec.width});
        offset += spec.width;
      }
    }
    cycles.push_back(std::move(c));
  }
  return make_layout(p.bus_width, std::move(names), std::move(cycles));
}

Layout iris_layout(const Problem& p) {
  return reverse_and_materialize(iris_schedule(p), p);
}

}  // namespace iris
