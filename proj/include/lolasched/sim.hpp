#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lolasched/scheduler.hpp"

namespace lola {

/// Sampled sensor signals. Queries use zero-order hold.
struct SensorTrace {
  std::string id;  // identifies the flight; runs compared together must share it
  std::map<std::string, std::vector<std::pair<TimeUs, Value>>> samples;  // times strictly increasing

  TimeUs end() const;  // latest sample time over all sensors
};

/// Value of the latest sample at or before `time`. Throws SensorUnavailable
/// for unknown sensors and OutOfRange outside the sampled span.
Value query_sensor(const SensorTrace& trace, const std::string& sensor, TimeUs time);
SensorSource trace_source(const SensorTrace& trace);

/// Piecewise-linear flight relative to the start point: horizontal offsets
/// in 1e-4 degrees, altitude in metres.
struct FlightScenario {
  std::string name;
  std::uint64_t seed = 0;
  double duration = 60.0;  // seconds
  double sample_rate = 10.0;
  double start_lat = 48.0;
  double start_lon = 11.0;
  double start_alt = 500.0;
  double geofence_radius = 8.0;
  double altitude_ceiling = 10.0;
  std::vector<std::array<double, 3>> track;     // (t, x, y); generated from the seed when empty
  std::vector<std::array<double, 2>> altitude;  // (t, z); generated from the seed when empty
};

FlightScenario parse_scenario(const std::string& json_text);
FlightScenario load_scenario(const std::string& path);

/// A threshold crossing from inside to outside a bound.
struct Crossing {
  std::string bound;  // "geofence" or "altitude"
  double time = 0;    // seconds
};

struct Flight {
  FlightScenario scenario;  // with track and altitude filled in
  SensorTrace trace;
  std::vector<Crossing> crossings;  // closed-form ground truth, in time order
};

/// Deterministic under the scenario seed. Sensors: gps_lat_long (tuple),
/// gps_altitude, barometer_pressure and barometer_altitude.
Flight generate_flight(const FlightScenario& scenario);

struct RunMetrics {
  double horizon = 0;                         // seconds
  std::map<std::string, std::size_t> values;  // per sensor
  std::map<std::string, double> rate;         // per sensor, values per second
  std::map<std::string, double> group_rate;   // per sensor group, values per second
  std::size_t total_values = 0;
  double total_rate = 0;
};

RunMetrics measure(const EvaluationModel& model, TimeUs horizon,
                   const std::map<std::string, std::vector<std::string>>& groups = {});

struct MonitorRun {
  std::string name;
  std::string trace_id;
  EvaluationModel model;
  std::vector<TriggerReport> triggers;
  std::vector<EventPlan> plans;  // empty for fixed-frequency runs
  RunMetrics metrics;
};

/// Baseline: one event with every input every 1/f seconds before `horizon`.
MonitorRun run_fixed(const Specification& spec, const SensorTrace& trace, Frequency f, TimeUs horizon);

/// One violation as seen by one run.
struct Detection {
  std::string scenario;
  std::string trigger;
  std::string bound;
  double crossing = 0;
  std::string run;
  std::optional<double> detected;  // seconds
  std::optional<double> delay;     // relative to the earliest run that detected it
};

struct DelayStats {
  std::size_t count = 0;
  std::size_t missed = 0;
  double median = 0;
  double q1 = 0;
  double q3 = 0;
};

struct ComparisonReport {
  std::vector<std::string> runs;  // in the order given
  std::vector<Detection> detections;
  std::map<std::string, DelayStats> delays;
  std::map<std::string, RunMetrics> bandwidth;  // averaged over scenarios

  std::string csv() const;            // one row per detection
  std::string bandwidth_csv() const;  // one row per run and sensor
  std::string json() const;
};

/// Runs over one trace, compared against its ground truth.
struct ScenarioRuns {
  std::string scenario;
  std::vector<Crossing> crossings;
  std::vector<MonitorRun> runs;
};

/// Matches each ground-truth crossing with the first report of the mapped
/// trigger within `window` after it, per run, and computes relative delays.
/// Throws MismatchedTraces if the runs of a scenario observed different traces.
ComparisonReport compare_runs(const std::vector<ScenarioRuns>& scenarios,
                              const std::map<std::string, std::string>& trigger_bounds, double window);

/// Linear-interpolation quantile of a sorted sample.
double quantile(const std::vector<double>& sorted, double q);

struct RunSpec {
  std::string name;
  bool scheduled = false;
  Frequency frequency;
  SchedulerConfig config;  // scheduled runs only
};

struct ExperimentConfig {
  std::string spec_path;
  std::vector<std::string> scenario_paths;
  double horizon = 60.0;
  double window = 5.0;
  std::map<std::string, std::string> trigger_bounds;
  std::map<std::string, std::vector<std::string>> groups;
  std::vector<RunSpec> runs;
};

/// Relative paths are resolved against the configuration file's directory.
ExperimentConfig load_experiment(const std::string& path);

struct ExperimentResult {
  std::vector<ScenarioRuns> scenarios;
  ComparisonReport report;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace lola
