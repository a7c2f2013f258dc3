// Command-line front end: translate, run, baseline, compare, check.

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "lolasched/analysis.hpp"
#include "lolasched/model_io.hpp"
#include "lolasched/parser.hpp"
#include "lolasched/sim.hpp"
#include "lolasched/translator.hpp"

using namespace lola;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return in;
}

Frequency frequency_arg(const std::string& text) {
  bool bare = std::none_of(text.begin(), text.end(), [](unsigned char c) { return std::isalpha(c); });
  return parse_frequency(bare ? text + "Hz" : text);
}

// Per-sensor samples from the present cells of a trace CSV.
SensorTrace trace_from_csv(const std::string& path, const Specification& spec) {
  auto in = open_in(path);
  auto events = read_trace_csv(in, spec);
  SensorTrace trace;
  trace.id = path;
  for (const auto& ev : events) {
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
      if (ev.values[i]) trace.samples[spec.inputs[i].name].push_back({ev.time, *ev.values[i]});
    }
  }
  return trace;
}

struct Source {
  SensorTrace trace;
  TimeUs default_horizon = 0;
};

Source load_source(const std::string& trace_path, const std::string& scenario_path, const Specification& spec) {
  if (!scenario_path.empty()) {
    Flight f = generate_flight(load_scenario(scenario_path));
    return {std::move(f.trace), std::llround(f.scenario.duration * 1e6)};
  }
  Source s{trace_from_csv(trace_path, spec), 0};
  // Include an event at the last sample.
  s.default_horizon = s.trace.end() + 1;
  return s;
}

TimeUs horizon_of(const std::optional<double>& horizon, const Source& src) {
  return horizon ? std::llround(*horizon * 1e6) : src.default_horizon;
}

void write_outputs(const EvaluationModel& model, const std::vector<TriggerReport>& triggers, TimeUs horizon,
                   const std::string& model_out, const std::string& metrics_out) {
  for (const auto& t : triggers) std::cout << trigger_json_line(t) << "\n";
  if (!model_out.empty()) {
    auto out = open_out(model_out);
    write_model_csv(out, model);
  }
  RunMetrics m = measure(model, horizon);
  nlohmann::json j{{"horizon", m.horizon},
                   {"total_values", m.total_values},
                   {"values_per_second", m.total_rate},
                   {"per_sensor", m.rate}};
  if (metrics_out.empty()) {
    std::cerr << j.dump(2) << "\n";
  } else {
    open_out(metrics_out) << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandwidth-constrained scheduling for stream-based monitors"};
  app.require_subcommand(1);

  std::string spec_path, out_path, table_path, trace_path, scenario_path, mode_text = "dp", freq_text;
  std::string model_out, metrics_out, plans_out, config_path, csv_out, json_out, bw_out, model_path;
  std::optional<double> horizon;
  std::optional<std::uint64_t> bound;
  bool force = false;

  auto* translate_cmd = app.add_subcommand("translate", "Translate an annotated specification");
  translate_cmd->add_option("spec", spec_path)->required();
  translate_cmd->add_option("--mode", mode_text, "deadline, priority or dp")->capture_default_str();
  translate_cmd->add_option("-o,--output", out_path, "translated specification (default: stdout)");
  translate_cmd->add_option("--task-table", table_path, "task table JSON");

  auto* run_cmd = app.add_subcommand("run", "Run the scheduled monitor");
  run_cmd->add_option("spec", spec_path)->required();
  auto* run_trace = run_cmd->add_option("--trace", trace_path, "input trace CSV");
  run_cmd->add_option("--scenario", scenario_path, "flight scenario JSON")->excludes(run_trace);
  run_cmd->add_option("--mode", mode_text)->capture_default_str();
  run_cmd->add_option("--horizon", horizon, "seconds");
  run_cmd->add_option("--bound", bound, "inputs per event");
  run_cmd->add_option("--freq", freq_text, "event frequency, e.g. 2Hz");
  run_cmd->add_flag("--force", force, "schedule the tasks that fit when the bound is too small");
  run_cmd->add_option("--model-out", model_out, "model CSV");
  run_cmd->add_option("--metrics", metrics_out, "metrics JSON (default: stderr)");
  run_cmd->add_option("--plans", plans_out, "plan log JSONL");

  auto* base_cmd = app.add_subcommand("baseline", "Run a fixed-frequency monitor");
  base_cmd->add_option("spec", spec_path)->required();
  auto* base_trace = base_cmd->add_option("--trace", trace_path, "input trace CSV");
  base_cmd->add_option("--scenario", scenario_path, "flight scenario JSON")->excludes(base_trace);
  base_cmd->add_option("--freq", freq_text, "event frequency, e.g. 1Hz")->required();
  base_cmd->add_option("--horizon", horizon, "seconds");
  base_cmd->add_option("--model-out", model_out, "model CSV");
  base_cmd->add_option("--metrics", metrics_out, "metrics JSON (default: stderr)");

  auto* compare_cmd = app.add_subcommand("compare", "Run an experiment and compare monitors");
  compare_cmd->add_option("--config", config_path)->required();
  compare_cmd->add_option("--csv", csv_out, "per-detection CSV (default: stdout)");
  compare_cmd->add_option("--json", json_out, "summary JSON (default: stdout)");
  compare_cmd->add_option("--bandwidth-csv", bw_out, "per-sensor bandwidth CSV");

  auto* check_cmd = app.add_subcommand("check", "Check a scheduled model against the oracle");
  check_cmd->add_option("spec", spec_path)->required();
  check_cmd->add_option("--model", model_path)->required();
  check_cmd->add_option("--mode", mode_text)->capture_default_str();
  check_cmd->add_option("--bound", bound, "inputs per event");
  check_cmd->add_flag("--force", force, "check against the tasks that fit the bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*translate_cmd) {
      auto result = translate(parse_spec_file(spec_path), parse_mode(mode_text));
      if (out_path.empty()) {
        std::cout << result.text();
      } else {
        open_out(out_path) << result.text();
      }
      if (!table_path.empty()) open_out(table_path) << result.task_table_json();
      return kOk;
    }

    if (*run_cmd || *base_cmd) {
      if (trace_path.empty() && scenario_path.empty()) throw Error(ErrorKind::Io, "one of --trace or --scenario is required");
      Specification spec = parse_spec_file(spec_path);
      Source src = load_source(trace_path, scenario_path, spec);
      TimeUs h = horizon_of(horizon, src);
      if (*base_cmd) {
        MonitorRun run = run_fixed(spec, src.trace, frequency_arg(freq_text), h);
        write_outputs(run.model, run.triggers, h, model_out, metrics_out);
        return kOk;
      }
      SchedulerConfig cfg;
      cfg.mode = parse_mode(mode_text);
      cfg.bound = bound;
      if (!freq_text.empty()) cfg.frequency = frequency_arg(freq_text);
      cfg.force = force;
      Scheduler scheduler(spec, cfg);
      for (const auto& w : scheduler.warnings()) std::cerr << "warning: " << w << "\n";
      ScheduledRun run = run_scheduled(scheduler, trace_source(src.trace), h);
      if (!plans_out.empty()) {
        auto out = open_out(plans_out);
        for (const auto& p : run.plans) out << plan_json_line(p, spec, scheduler.mode()) << "\n";
      }
      write_outputs(run.model, run.triggers, h, model_out, metrics_out);
      return kOk;
    }

    if (*compare_cmd) {
      ExperimentResult r = run_experiment(load_experiment(config_path));
      if (csv_out.empty()) {
        std::cout << r.report.csv();
      } else {
        open_out(csv_out) << r.report.csv();
      }
      if (json_out.empty()) {
        std::cout << r.report.json();
      } else {
        open_out(json_out) << r.report.json();
      }
      if (!bw_out.empty()) open_out(bw_out) << r.report.bandwidth_csv();
      return kOk;
    }

    if (*check_cmd) {
      Specification spec = parse_spec_file(spec_path);
      SchedulerConfig cfg;
      cfg.mode = parse_mode(mode_text);
      cfg.bound = bound;
      cfg.force = force;
      // The frequency plays no part in checking.
      if (!spec.config.event_frequency) cfg.frequency = Frequency{1, 1};
      if (!cfg.bound && !spec.config.bandwidth) {
        cfg.bound = static_schedule_for(spec, cfg.mode).universe.max_size();
      }
      Scheduler scheduler(spec, cfg);
      const Specification& model_spec = scheduler.translation().plain_spec;
      auto in = open_in(model_path);
      std::stringstream text;
      text << in.rdbuf();
      EvaluationModel model;
      try {
        model = read_model_csv(text, model_spec);
      } catch (const Error&) {
        // A model of the original specification carries no helper streams.
        text.clear();
        text.seekg(0);
        model = read_model_csv(text, analyze(spec));
        auto violations = verify_model(analyze(spec), model);
        for (const auto& v : violations) {
          std::cout << nlohmann::json{{"kind", "semantic"}, {"stream", v.stream}, {"step", v.step},
                                      {"time", to_seconds(v.time)}, {"detail", v.detail}}
                           .dump()
                    << "\n";
        }
        std::cerr << "model has no helper streams; only semantic conformance was checked\n";
        return violations.empty() ? kOk : kViolation;
      }
      auto violations = check_scheduled_model(model_spec, scheduler.schedule(), scheduler.bound(), model);
      for (const auto& v : violations) std::cout << to_json_line(v) << "\n";
      if (violations.empty()) std::cerr << "ok: " << model.steps() << " steps\n";
      return violations.empty() ? kOk : kViolation;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
