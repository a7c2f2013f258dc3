#include <doctest.h>

#include <cmath>
#include <random>

#include "lolasched/monitor.hpp"
#include "lolasched/parser.hpp"
#include "support/fixtures.hpp"
#include "support/random_spec.hpp"

using namespace lola;
using lola::test::bundled_spec;

namespace {

EventInput event(double seconds, std::vector<Cell> values) {
  return {static_cast<TimeUs>(std::llround(seconds * 1e6)), std::move(values)};
}

double num(const Cell& c) {
  REQUIRE(c.has_value());
  return c->as_double();
}

}  // namespace

TEST_CASE("alt_diff over two events") {
  auto spec = bundled_spec("alt_diff.lola");
  std::vector<TriggerReport> reports;
  auto model = run_monitor(spec, {event(1, {Value(5.0)}), event(2, {Value(20.0)})}, &reports);
  // Independent recurrence: d_k = |alt_k - alt_{k-1}| with alt_0 = 0.
  std::vector<double> alts{5.0, 20.0};
  double prev = 0.0;
  for (std::size_t k = 0; k < alts.size(); ++k) {
    CHECK(num(model.column("alt_diff")[k]) == std::fabs(alts[k] - prev));
    prev = alts[k];
  }
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].trigger == "trigger_0");
  CHECK(reports[0].step == 1);
  CHECK(reports[0].time == 2 * kMicrosPerSecond);
}

TEST_CASE("when-filter blocks a step") {
  auto spec = bundled_spec("alt_diff.lola");
  auto model = run_monitor(spec, {event(1, {Value(25.0)}), event(2, {Value(10.0)}), event(3, {Value(30.0)})});
  const auto& col = model.column("num_high_alt");
  REQUIRE(col[0]);
  CHECK(std::get<std::int64_t>(col[0]->data) == 1);
  CHECK_FALSE(col[1]);
  REQUIRE(col[2]);
  CHECK(std::get<std::int64_t>(col[2]->data) == 2);
}

TEST_CASE("pacing not met yields absent") {
  auto spec = bundled_spec("geofence_priorities.lola");
  Monitor m(spec);
  auto r = m.eval_event(event(0.5, {std::nullopt, std::nullopt, Value(60.0)}));
  const auto& c = m.compiled();
  auto idx = [&](const std::string& name) {
    for (std::size_t i = 0; i < c.stream_count(); ++i) {
      if (c.stream_name(i) == name) return i;
    }
    FAIL("no stream");
    return std::size_t{0};
  };
  CHECK_FALSE(r.cells[idx("bound_violation")]);
  CHECK_FALSE(r.cells[idx("distance_to_bound")]);
  REQUIRE(r.cells[idx("altitude_violation")]);
  CHECK(r.cells[idx("altitude_violation")]->as_bool());

  r = m.eval_event(event(1.0, {Value(10.0), Value(20.0), std::nullopt}));
  // min(10-3, 40-10, 20-5, 50-20) = 7 < 12, so the first clause fires.
  CHECK(num(r.cells[idx("distance_to_bound")]) == 7.0);
  REQUIRE(r.cells[idx("bound_violation")]);
  CHECK_FALSE(r.cells[idx("bound_violation")]->as_bool());
}

TEST_CASE("empty event list gives an empty model") {
  auto model = run_monitor(bundled_spec("drone.lola"), {});
  CHECK(model.steps() == 0);
  CHECK(model.streams.size() == 15);
  CHECK(verify_model(bundled_spec("drone.lola"), model).empty());
}

TEST_CASE("drone start position is latched") {
  auto spec = bundled_spec("drone.lola");
  auto gps = [](double a, double b) { return Value(Tuple{Value(a), Value(b)}); };
  std::vector<EventInput> events{
      event(0.5, {gps(49.1, 7.2), Value(3.0), std::nullopt, std::nullopt}),
      event(1.0, {gps(49.2, 7.3), std::nullopt, Value(1000.0), std::nullopt}),
      event(1.5, {gps(49.3, 7.1), Value(9.0), std::nullopt, std::nullopt}),
  };
  auto model = run_monitor(spec, events);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(num(model.column("start_lat")[t]) == 49.1);
    CHECK(num(model.column("start_long")[t]) == 7.2);
  }
  CHECK(num(model.column("altitude_above_ground")[2]) == 6.0);
  CHECK_FALSE(model.column("altitude_above_ground")[1]);
  double d = std::sqrt((49.3 - 49.1) * (49.3 - 49.1) + (7.1 - 7.2) * (7.1 - 7.2)) * 10000.0;
  CHECK(num(model.column("distance_to_start")[2]) == d);
  CHECK(verify_model(spec, model).empty());
}

TEST_CASE("event errors") {
  auto spec = bundled_spec("alt_diff.lola");
  Monitor m(spec);
  m.eval_event(event(1, {Value(1.0)}));
  try {
    m.eval_event(event(1, {Value(2.0)}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotonicTime);
  }
  try {
    m.eval_event(event(2, {std::nullopt}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyEvent);
  }
  Monitor div(parse_spec("input a : Int64\noutput x := 10 / a"));
  CHECK(std::get<std::int64_t>(div.eval_event(event(1, {Value(std::int64_t{3})})).cells[1]->data) == 3);
  try {
    div.eval_event(event(2, {Value(std::int64_t{0})}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Evaluation);
  }
}

TEST_CASE("integer literals take the type of their context") {
  auto spec = parse_spec("input a : Float64\ninput u : UInt64\noutput x := a - 3\noutput y := u + 1\noutput z := min(a, 4)");
  auto model = run_monitor(spec, {event(1, {Value(10.0), Value(std::uint64_t{7})})});
  CHECK(std::get<double>(model.column("x")[0]->data) == 7.0);
  CHECK(std::get<std::uint64_t>(model.column("y")[0]->data) == 8u);
  CHECK(std::get<double>(model.column("z")[0]->data) == 4.0);
}

TEST_CASE("hold reads the latest value including the current step") {
  auto spec = parse_spec("input a, b : Float64\noutput h |@b| := a.hold(or: -1.0) + b");
  auto model = run_monitor(spec, {event(1, {std::nullopt, Value(1.0)}), event(2, {Value(5.0), std::nullopt}),
                                  event(3, {std::nullopt, Value(1.0)}), event(4, {Value(7.0), Value(2.0)})});
  const auto& h = model.column("h");
  CHECK(num(h[0]) == 0.0);
  CHECK_FALSE(h[1]);
  CHECK(num(h[2]) == 6.0);
  CHECK(num(h[3]) == 9.0);
}

TEST_CASE("verify_model detects perturbations and time errors") {
  auto spec = bundled_spec("alt_diff.lola");
  auto model = run_monitor(spec, {event(1, {Value(25.0)}), event(2, {Value(10.0)}), event(3, {Value(30.0)})});
  CHECK(verify_model(spec, model).empty());

  auto perturbed = model;
  int s = perturbed.index_of("alt_diff");
  perturbed.cells[static_cast<std::size_t>(s)][1] = Value(99.0);
  auto v = verify_model(spec, perturbed);
  REQUIRE(v.size() == 1);
  CHECK(v[0].stream == "alt_diff");
  CHECK(v[0].step == 1);

  auto stalled = model;
  stalled.times[2] = stalled.times[1];
  v = verify_model(spec, stalled);
  REQUIRE(v.size() == 1);
  CHECK(v[0].stream.empty());
  CHECK(v[0].step == 2);
}

TEST_CASE("offset law on random traces") {
  auto spec = parse_spec("input a, b : Float64\noutput p |@a| := a.offset(by: -1).defaults(to: -1.0)\n"
                         "output q |@b| := a.offset(by: -2).defaults(to: -2.0)");
  std::mt19937_64 rng(11);
  auto events = test::random_trace(rng, spec, 150);
  auto model = run_monitor(spec, events);
  std::vector<double> seen;  // non-absent values of a, in order
  for (std::size_t t = 0; t < model.steps(); ++t) {
    const auto& a = model.column("a")[t];
    if (a) {
      CHECK(num(model.column("p")[t]) == (seen.empty() ? -1.0 : seen.back()));
    }
    if (model.column("b")[t]) {
      CHECK(num(model.column("q")[t]) == (seen.size() < 2 ? -2.0 : seen[seen.size() - 2]));
    }
    if (a) seen.push_back(a->as_double());
  }
}

TEST_CASE("random specs: determinism and oracle agreement") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 150; ++i) {
    auto spec = test::random_spec(rng, {});
    auto events = test::random_trace(rng, spec, 60);
    CAPTURE(print_spec(spec));
    std::vector<TriggerReport> r1, r2;
    auto m1 = run_monitor(spec, events, &r1);
    auto m2 = run_monitor(spec, events, &r2);
    REQUIRE(m1.steps() == m2.steps());
    for (std::size_t s = 0; s < m1.cells.size(); ++s) {
      for (std::size_t t = 0; t < m1.steps(); ++t) CHECK(identical(m1.cells[s][t], m2.cells[s][t]));
    }
    CHECK(r1.size() == r2.size());
    auto v = verify_model(spec, m1);
    CHECK(v.empty());
  }
}
