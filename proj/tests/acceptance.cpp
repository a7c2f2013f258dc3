// Acceptance checks. Prints one PASS/FAIL line per criterion; exits non-zero
// if any criterion fails. `acceptance N` runs criterion N only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "lolasched/parser.hpp"
#include "lolasched/sim.hpp"
#include "lolasched/translator.hpp"
#include "support/random_spec.hpp"
#include "support/sources.hpp"

using namespace lola;

namespace {

constexpr TimeUs kSec = kMicrosPerSecond;

// Tolerances and limits.
constexpr double kC1Seconds = 1.0;
constexpr double kC2Seconds = 30.0;
constexpr double kC3Seconds = 120.0;
constexpr double kC4Seconds = 10.0;
constexpr double kC5Seconds = 5.0;
constexpr double kC6Seconds = 60.0;
constexpr double kC9Seconds = 60.0;
constexpr std::size_t kC5ValueSlack = 2;
constexpr double kRateEps = 1e-9;
constexpr double kEventPeriod = 0.5;  // seconds at 2 Hz
constexpr double kStarvationLimit = 3.0 + kEventPeriod;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string data(const std::string& rel) { return std::string(LOLA_DATA_DIR) + "/" + rel; }

std::string squash(const std::string& s) {
  return std::regex_replace(std::regex_replace(s, std::regex("\\s+"), " "), std::regex("^ | $"), "");
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome c1_translation_golden() {
  auto spec = parse_spec_file(data("specs/geofence_priorities.lola"));
  auto t = translate(spec, ScheduleMode::Priority);
  std::string helpers;
  for (std::size_t i = spec.outputs.size(); i < t.plain_spec.outputs.size(); ++i) {
    helpers += print_output(t.plain_spec.outputs[i]);
  }
  const std::string expected = R"(
    output schedule_lat_lon
        eval |@lat&&lon| when distance_to_bound < 12.0 with 10
        eval |@lat&&lon| when distance_to_bound >= 12.0 with 1
    output last_lat_lon eval |@lat&&lon| with now
    output schedule_alt eval |@alt| with 5
    output last_alt eval |@alt| with now
  )";
  bool ok = squash(helpers) == squash(expected);
  return {ok, ok ? "four helper streams match" : "got:\n" + helpers};
}

Outcome c2_semantic_preservation() {
  std::mt19937_64 rng(20240601);
  const std::pair<test::AnnotationStyle, ScheduleMode> styles[] = {
      {test::AnnotationStyle::Priority, ScheduleMode::Priority},
      {test::AnnotationStyle::Deadline, ScheduleMode::Deadline},
      {test::AnnotationStyle::DeadlinePriority, ScheduleMode::DeadlinePriority}};
  std::size_t traces = 0, cells = 0, mismatches = 0;
  for (int n = 0; n < 50; ++n) {
    auto [style, mode] = styles[n % 3];
    test::GenOptions opts;
    opts.style = style;
    auto spec = test::random_spec(rng, opts);
    auto plain = translate(spec, mode).plain_spec;
    for (int k = 0; k < 10; ++k) {
      auto trace = test::random_trace(rng, spec, 1 + rng() % 200);
      auto original = run_monitor(spec, trace);
      auto translated = run_monitor(plain, trace);
      ++traces;
      for (std::size_t s = 0; s < original.streams.size(); ++s) {
        if (translated.streams[s] != original.streams[s]) {
          ++mismatches;
          continue;
        }
        for (std::size_t i = 0; i < original.steps(); ++i) {
          ++cells;
          if (!identical(translated.cells[s][i], original.cells[s][i])) ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(traces) + " traces, " + std::to_string(cells) + " cells, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome c3_scheduler_validity() {
  std::mt19937_64 rng(777);
  const std::pair<test::AnnotationStyle, ScheduleMode> styles[] = {
      {test::AnnotationStyle::Priority, ScheduleMode::Priority},
      {test::AnnotationStyle::Deadline, ScheduleMode::Deadline},
      {test::AnnotationStyle::DeadlinePriority, ScheduleMode::DeadlinePriority}};
  const Frequency freqs[] = {{1, 1}, {2, 1}, {5, 1}, {10, 1}};
  std::size_t accepted = 0, rejected = 0, violations = 0, scheduled_tasks = 0;
  std::size_t per_mode[3] = {0, 0, 0};
  for (std::size_t attempt = 0; accepted < 100 && attempt < 5000; ++attempt) {
    std::size_t m = accepted % 3;
    auto [style, mode] = styles[m];
    test::GenOptions opts;
    opts.style = style;
    opts.max_inputs = 4;
    auto spec = test::random_spec(rng, opts);
    auto u = build_task_universe(spec);
    if (u.empty()) {
      ++rejected;
      continue;
    }
    SchedulerConfig cfg;
    cfg.mode = mode;
    cfg.bound = u.max_size() + rng() % 2;
    cfg.frequency = freqs[rng() % 4];
    Scheduler s(spec, cfg);
    // Deadline instances must clear dl > n/f_e; the scheduler warns otherwise.
    if (mode == ScheduleMode::Deadline && !s.warnings().empty()) {
      ++rejected;
      continue;
    }
    auto run = run_scheduled(s, test::hashed_source(spec, rng()), 30 * kSec);
    auto v = check_scheduled_model(s.translation().plain_spec, s.schedule(), *cfg.bound, run.model);
    violations += v.size();
    scheduled_tasks += s.schedule().entries.size();
    if (!v.empty()) std::cerr << "  C3 instance " << accepted << ": " << to_json_line(v.front()) << "\n";
    ++accepted;
    ++per_mode[m];
  }
  bool ok = accepted == 100 && violations == 0;
  return {ok, std::to_string(accepted) + " instances (" + std::to_string(per_mode[0]) + " priority, " +
                  std::to_string(per_mode[1]) + " deadline, " + std::to_string(per_mode[2]) + " dp; " +
                  std::to_string(rejected) + " regenerated), " + std::to_string(scheduled_tasks) +
                  " scheduled tasks, " + std::to_string(violations) + " violations"};
}

// Event splits of one task order, transcribed directly.
std::size_t brute_splits(const std::vector<InputSet>& order, std::size_t i, InputSet cur, std::uint64_t b) {
  if (i == order.size()) return 1;
  if (static_cast<std::uint64_t>((cur | order[i]).size()) > b) return 1 + brute_splits(order, i, InputSet{}, b);
  return brute_splits(order, i + 1, cur | order[i], b);
}

void each_order(std::vector<InputSet>& rest, std::vector<InputSet>& prefix,
                const std::function<void(const std::vector<InputSet>&)>& f) {
  if (rest.empty()) {
    f(prefix);
    return;
  }
  for (std::size_t i = 0; i < rest.size(); ++i) {
    InputSet t = rest[i];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    prefix.push_back(t);
    each_order(rest, prefix, f);
    prefix.pop_back();
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(i), t);
  }
}

Outcome c4_split_bound() {
  // Every non-empty subset of three inputs is a candidate task.
  std::vector<InputSet> candidates;
  for (std::uint64_t bits = 1; bits < 8; ++bits) candidates.emplace_back(bits);
  std::size_t universes = 0, compared = 0, disagreements = 0;
  for (std::uint32_t pick = 1; pick < (1u << candidates.size()); ++pick) {
    std::vector<InputSet> tasks;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (pick & (1u << i)) tasks.push_back(candidates[i]);
    }
    if (tasks.size() > 4) continue;
    ++universes;
    std::sort(tasks.begin(), tasks.end(), task_order);
    TaskUniverse u{tasks, tasks};
    for (std::uint64_t b = 1; b <= 3; ++b) {
      bool fits = true;
      for (auto t : tasks) fits = fits && static_cast<std::uint64_t>(t.size()) <= b;
      if (!fits) {
        bool refused = false;
        try {
          compute_split_bound(u, b);
        } catch (const Error& e) {
          refused = e.kind() == ErrorKind::Precondition;
        }
        if (!refused) ++disagreements;
        continue;
      }
      std::size_t mx = 0, mn = SIZE_MAX;
      std::vector<InputSet> rest = tasks, prefix;
      each_order(rest, prefix, [&](const std::vector<InputSet>& order) {
        std::size_t s = brute_splits(order, 0, InputSet{}, b);
        mx = std::max(mx, s);
        mn = std::min(mn, s);
      });
      auto got = compute_split_bound(u, b);
      ++compared;
      if (got.max != mx || got.min != mn) ++disagreements;
    }
  }
  // The two listed examples.
  const InputSet a = InputSet::single(0), bb = InputSet::single(1);
  TaskUniverse ab{{a, bb}, {a, bb}};
  if (compute_split_bound(ab, 1).max != 2) ++disagreements;
  if (compute_split_bound(ab, 2).max != 1) ++disagreements;
  return {disagreements == 0, std::to_string(universes) + " universes, " + std::to_string(compared) +
                                  " (universe, b) pairs compared, " + std::to_string(disagreements) + " disagreements"};
}

Outcome c5_bandwidth() {
  auto spec = parse_spec_file(data("specs/drone.lola"));
  Flight f = generate_flight(load_scenario(data("scenarios/s01.json")));
  SchedulerConfig cfg;
  cfg.mode = ScheduleMode::DeadlinePriority;
  cfg.frequency = Frequency{2, 1};
  cfg.bound = 2;
  cfg.force = true;
  auto sched = run_scheduled(spec, cfg, trace_source(f.trace), 60 * kSec);
  auto ms = measure(sched.model, 60 * kSec);
  auto m1 = measure(run_fixed(spec, f.trace, Frequency{1, 1}, 60 * kSec).model, 60 * kSec);
  auto m2 = measure(run_fixed(spec, f.trace, Frequency{2, 1}, 60 * kSec).model, 60 * kSec);
  std::size_t v = ms.total_values;
  bool count_ok = v + kC5ValueSlack >= 240 && v <= 240 + kC5ValueSlack;
  bool rate_ok = std::abs(ms.total_rate - m1.total_rate) < kRateEps && std::abs(2 * ms.total_rate - m2.total_rate) < kRateEps &&
                 std::abs(ms.total_rate - 4.0) < kRateEps;
  return {count_ok && rate_ok, std::to_string(v) + " values, " + fmt("%.3f", ms.total_rate) + "/s vs fixed 1 Hz " +
                                   fmt("%.3f", m1.total_rate) + "/s and 2 Hz " + fmt("%.3f", m2.total_rate) + "/s"};
}

const ExperimentResult& experiment() {
  static const ExperimentResult r = run_experiment(load_experiment(data("experiment.json")));
  return r;
}

Outcome c6_detection_order() {
  const auto& r = experiment();
  std::size_t geo = 0, alt = 0;
  bool every_scenario_crosses = true;
  for (const auto& sc : r.scenarios) {
    std::size_t g = 0, a = 0;
    for (const auto& c : sc.crossings) (c.bound == "geofence" ? g : a) += 1;
    every_scenario_crosses = every_scenario_crosses && g > 0 && a > 0;
    geo += g;
    alt += a;
  }
  const auto& d = r.report.delays;
  double s = d.at("scheduled").median, f1 = d.at("fixed_1hz").median, f2 = d.at("fixed_2hz").median;
  bool near_2hz = s <= f2 + kEventPeriod + 1e-9;
  bool beats_1hz = s < f1;
  std::string detail = std::to_string(r.scenarios.size()) + " scenarios, " + std::to_string(geo) + " geofence and " +
                       std::to_string(alt) + " altitude crossings; median delay scheduled " + fmt("%.3f", s) +
                       " s, fixed 2 Hz " + fmt("%.3f", f2) + " s, fixed 1 Hz " + fmt("%.3f", f1) + " s";
  if (!near_2hz) detail += "; scheduled exceeds fixed 2 Hz + one period";
  if (!beats_1hz) detail += "; scheduled not below fixed 1 Hz";
  return {every_scenario_crosses && near_2hz && beats_1hz, detail};
}

Outcome c7_starvation() {
  const auto& r = experiment();
  auto spec = parse_spec_file(data("specs/drone.lola"));
  double worst = 0;
  std::string where;
  for (const auto& sc : r.scenarios) {
    for (const auto& run : sc.runs) {
      if (run.name != "scheduled") continue;
      for (const std::string name : {"gps_lat_long", "gps_altitude"}) {
        std::size_t idx = 0;
        while (spec.inputs[idx].name != name) ++idx;
        InputSet task = InputSet::single(idx);
        std::optional<TimeUs> last;
        for (const auto& p : run.plans) {
          if (!task.subset_of(p.inputs)) continue;
          if (last) {
            double gap = to_seconds(p.time - *last);
            if (gap > worst) {
              worst = gap;
              where = sc.scenario + " " + name + " at " + fmt("%.1f", to_seconds(p.time)) + " s";
            }
          }
          last = p.time;
        }
      }
    }
  }
  return {worst <= kStarvationLimit + 1e-9, "longest gap " + fmt("%.2f", worst) + " s (" + where + "), limit " +
                                                fmt("%.2f", kStarvationLimit) + " s"};
}

Outcome c8_conflict() {
  auto spec = parse_spec_file(data("specs/conflict.lola"));
  SchedulerConfig cfg;
  cfg.mode = ScheduleMode::Priority;
  cfg.frequency = Frequency{1, 1};
  cfg.bound = 2;
  Scheduler s(spec, cfg);
  const InputSet ab = InputSet::single(0) | InputSet::single(1);
  auto run = run_scheduled(s, test::hashed_source(spec, 5), 20 * kSec);
  bool union_selected = !run.plans.empty();
  for (const auto& p : run.plans) {
    union_selected = union_selected && std::find(p.selected.begin(), p.selected.end(), ab) != p.selected.end();
  }
  auto v = check_scheduled_model(s.translation().plain_spec, s.schedule(), 2, run.model);

  cfg.bound = 1;
  std::string refusal;
  try {
    Scheduler tight(spec, cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Precondition) refusal = e.what();
  }
  bool ok = union_selected && v.empty() && !refusal.empty();
  std::string detail = std::string("b=2: {a,b} ") + (union_selected ? "selected every event" : "not always selected") +
                       ", " + std::to_string(v.size()) + " violations; b=1: " +
                       (refusal.empty() ? "no precondition error" : "refused (" + refusal + ")");
  return {ok, detail};
}

Outcome c9_eval_oracle() {
  std::mt19937_64 rng(9001);
  std::size_t flagged = 0;
  std::vector<std::pair<Specification, EvaluationModel>> pool;
  for (int n = 0; n < 1000; ++n) {
    test::GenOptions opts;
    auto spec = test::random_spec(rng, opts);
    auto model = run_monitor(spec, test::random_trace(rng, spec, 1 + rng() % 60));
    if (!verify_model(spec, model).empty()) ++flagged;
    if (pool.size() < 200) pool.emplace_back(std::move(spec), std::move(model));
  }
  std::size_t trials = 0, caught = 0;
  for (std::size_t attempt = 0; trials < 100 && attempt < 10000; ++attempt) {
    auto& [spec, model] = pool[rng() % pool.size()];
    std::size_t outputs = model.streams.size() - model.input_count;
    if (outputs == 0 || model.steps() == 0) continue;
    std::size_t s = model.input_count + rng() % outputs;
    std::size_t k = rng() % model.steps();
    EvaluationModel mutated = model;
    Cell& cell = mutated.cells[s][k];
    if (cell && rng() % 2 == 0) {
      cell.reset();
    } else {
      // A different value of the stream's type; reuse another present cell's type.
      const Cell* sample = nullptr;
      for (const auto& c : model.cells[s]) {
        if (c) {
          sample = &c;
          break;
        }
      }
      if (!sample) continue;
      Cell replacement;
      for (int tries = 0; tries < 20; ++tries) {
        Value v = **sample;
        std::visit(
            [&](auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, bool>) {
                x = !x;
              } else if constexpr (std::is_same_v<T, Tuple>) {
                // Tuple outputs are rare; perturb the first field if numeric.
              } else {
                x = static_cast<T>(x + static_cast<T>(1 + rng() % 7));
              }
            },
            v.data);
        if (!cell || !identical(*cell, v)) {
          replacement = v;
          break;
        }
      }
      if (!replacement) continue;
      cell = replacement;
    }
    if (identical(cell, model.cells[s][k])) continue;
    ++trials;
    if (!verify_model(spec, mutated).empty()) ++caught;
  }
  bool ok = flagged == 0 && trials == 100 && caught == trials;
  return {ok, "1000 runs, " + std::to_string(flagged) + " flagged; " + std::to_string(caught) + "/" +
                  std::to_string(trials) + " mutations caught"};
}

struct Criterion {
  int id;
  const char* name;
  double limit;  // seconds
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "translation golden", kC1Seconds, c1_translation_golden},
    {2, "semantic preservation", kC2Seconds, c2_semantic_preservation},
    {3, "scheduler validity", kC3Seconds, c3_scheduler_validity},
    {4, "split-bound oracle", kC4Seconds, c4_split_bound},
    {5, "bandwidth", kC5Seconds, c5_bandwidth},
    {6, "detection ordering", kC6Seconds, c6_detection_order},
    {7, "starvation freedom", 0, c7_starvation},
    {8, "conflict regression", 0, c8_conflict},
    {9, "eval-engine oracle", kC9Seconds, c9_eval_oracle},
};

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only && c.id != only) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.limit == 0 || secs < c.limit;
    if (!in_time) o.detail += "; over the " + fmt("%.0f", c.limit) + " s limit";
    bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::cout << "criterion " << c.id << " [" << c.name << "]: " << (pass ? "PASS" : "FAIL") << " (" << fmt("%.2f", secs)
              << " s) " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
