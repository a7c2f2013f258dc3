#include <doctest.h>

#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "lolasched/translator.hpp"
#include "support/fixtures.hpp"
#include "support/random_spec.hpp"

using namespace lola;
using lola::test::bundled_spec;

namespace {

std::string squash(const std::string& s) {
  return std::regex_replace(std::regex_replace(s, std::regex("\\s+"), " "), std::regex("^ | $"), "");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Text of the outputs appended after the user's streams.
std::string helper_text(const TranslationOutput& t, std::size_t user_outputs) {
  std::string out;
  for (std::size_t i = user_outputs; i < t.plain_spec.outputs.size(); ++i) out += print_output(t.plain_spec.outputs[i]);
  return out;
}

}  // namespace

TEST_CASE("geofence translation adds the four listed helper streams") {
  auto spec = bundled_spec("geofence_priorities.lola");
  auto t = translate(spec, ScheduleMode::Priority);
  const char* expected = R"(
    output schedule_lat_lon
        eval |@lat&&lon| when distance_to_bound < 12.0 with 10
        eval |@lat&&lon| when distance_to_bound >= 12.0 with 1
    output last_lat_lon eval |@lat&&lon| with now
    output schedule_alt eval |@alt| with 5
    output last_alt eval |@alt| with now
  )";
  CHECK(squash(helper_text(t, spec.outputs.size())) == squash(expected));
  REQUIRE(t.task_table.size() == 2);
  CHECK(t.task_table[0].schedule == "schedule_lat_lon");
  CHECK(t.task_table[1].last == "last_alt");
  CHECK_FALSE(t.task_table[0].overdue);
}

TEST_CASE("unannotated specification is unchanged") {
  auto spec = bundled_spec("alt_diff.lola");
  auto t = translate(spec, ScheduleMode::DeadlinePriority);
  CHECK(t.task_table.empty());
  CHECK(t.text() == print_spec(spec));
}

TEST_CASE("drone translation matches the golden file") {
  auto t = translate(bundled_spec("drone.lola"), ScheduleMode::DeadlinePriority);
  CHECK(t.text() == read_file(test::data_path("golden/drone_dp.lola")));
  CHECK(t.task_table.size() == 4);
  for (const auto& ts : t.task_table) {
    CHECK(ts.schedule);
    CHECK(ts.overdue);
    CHECK(ts.deadline == 3 * kMicrosPerSecond);
  }
  auto reparsed = parse_spec(t.text());
  CHECK(print_spec(reparsed) == t.text());
}

TEST_CASE("deadline mode emits seconds") {
  auto spec = parse_spec("#[deadline=\"250ms\"]\ninput x : Float64\ninput y : Float64\noutput z\n"
                         "  #[deadline=\"2s\"]\n  eval |@x&&y| when x > y with x\n");
  auto t = translate(spec, ScheduleMode::Deadline);
  const char* expected = R"(
    output schedule_x eval |@x| with 0.25
    output last_x eval |@x| with now
    output schedule_x_y
        eval |@x&&y| with 0.25
    output last_x_y eval |@x&&y| with now
  )";
  CHECK(squash(helper_text(t, 1)) == squash(expected));
}

TEST_CASE("helper names avoid user streams") {
  auto spec = parse_spec("#[priority=\"high\"]\ninput a : Float64\noutput schedule_a := a\noutput schedule_a_1 := a\n"
                         "output last_a := a\n");
  auto t = translate(spec, ScheduleMode::Priority);
  REQUIRE(t.task_table.size() == 1);
  CHECK(t.task_table[0].schedule == "schedule_a_2");
  CHECK(t.task_table[0].last == "last_a_1");
}

TEST_CASE("overdue streams combine the subsets' last evaluations") {
  auto spec = parse_spec("#[priority=\"high\",deadline=\"1s\"]\ninput a : Float64\n#[deadline=\"2s\"]\n"
                         "input b : Float64\noutput c := a + b\n");
  auto t = translate(spec, ScheduleMode::DeadlinePriority);
  REQUIRE(t.task_table.size() == 3);
  const auto* ab = t.find(InputSet(0b11));
  REQUIRE(ab);
  CHECK(ab->last == "last_a_b");
  CHECK(ab->schedule == "schedule_a_b");  // carries a's priority
  CHECK(ab->deadline == kMicrosPerSecond);
  const OutputDecl* od_ab = nullptr;
  for (const auto& o : t.plain_spec.outputs) {
    if (o.name == "overdue_a_b") od_ab = &o;
  }
  REQUIRE(od_ab);
  CHECK(squash(print_output(*od_ab)) ==
        "output overdue_a_b eval |@any| with now - max(last_a.hold(or: -1e+300), last_a_b.hold(or: -1e+300), "
        "last_b.hold(or: -1e+300)) > 1.0");

  // overdue_a at each event against a direct scan of a's presence.
  std::vector<EventInput> evs;
  std::vector<bool> has_a{true, false, false, true, false};
  for (std::size_t k = 0; k < has_a.size(); ++k) {
    evs.push_back({static_cast<TimeUs>(k) * 600'000, {has_a[k] ? Cell(Value(1.0)) : Cell(), Cell(Value(2.0))}});
  }
  auto model = run_monitor(t.plain_spec, evs);
  const auto& od = model.column("overdue_a");
  std::optional<TimeUs> last;
  for (std::size_t k = 0; k < has_a.size(); ++k) {
    if (has_a[k]) last = model.times[k];
    bool expected = !last || model.times[k] - *last > kMicrosPerSecond;
    REQUIRE(od[k]);
    CHECK(std::get<bool>(od[k]->data) == expected);
  }
}

TEST_CASE("translation preserves semantics and tracks last evaluations") {
  std::mt19937_64 rng(2024);
  for (auto [style, mode] : {std::pair{test::AnnotationStyle::Priority, ScheduleMode::Priority},
                             {test::AnnotationStyle::Deadline, ScheduleMode::Deadline},
                             {test::AnnotationStyle::DeadlinePriority, ScheduleMode::DeadlinePriority}}) {
    for (int n = 0; n < 25; ++n) {
      test::GenOptions opts;
      opts.style = style;
      auto spec = test::random_spec(rng, opts);
      auto t = translate(spec, mode);
      CHECK(print_spec(parse_spec(t.text())) == t.text());
      auto trace = test::random_trace(rng, spec, 60);
      auto original = run_monitor(spec, trace);
      auto translated = run_monitor(t.plain_spec, trace);
      for (std::size_t s = 0; s < original.streams.size(); ++s) {
        REQUIRE(translated.streams[s] == original.streams[s]);
        for (std::size_t k = 0; k < original.steps(); ++k) {
          CHECK(identical(translated.cells[s][k], original.cells[s][k]));
        }
      }
      for (const auto& ts : t.task_table) {
        if (!ts.last) continue;
        const auto& col = translated.column(*ts.last);
        std::optional<TimeUs> last;
        for (std::size_t k = 0; k < translated.steps(); ++k) {
          bool sat = true;
          for (auto i : ts.task.indices()) sat = sat && translated.cells[i][k].has_value();
          if (sat) last = translated.times[k];
          if (sat) {
            REQUIRE(col[k]);
            CHECK(col[k]->as_double() == to_seconds(*last));
          } else {
            CHECK_FALSE(col[k]);
          }
        }
      }
    }
  }
}
