#include "lolasched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lolasched/error.hpp"
#include "lolasched/parser.hpp"

namespace lola {

TimeUs SensorTrace::end() const {
  TimeUs e = 0;
  for (const auto& [name, s] : samples) {
    if (!s.empty()) e = std::max(e, s.back().first);
  }
  return e;
}

Value query_sensor(const SensorTrace& trace, const std::string& sensor, TimeUs time) {
  auto it = trace.samples.find(sensor);
  if (it == trace.samples.end()) throw Error(ErrorKind::SensorUnavailable, "no sensor '" + sensor + "'");
  const auto& s = it->second;
  if (s.empty() || time < s.front().first || time > s.back().first) {
    throw Error(ErrorKind::OutOfRange, "sensor '" + sensor + "' has no sample for time " + format_seconds(time) + "s");
  }
  auto pos = std::upper_bound(s.begin(), s.end(), time, [](TimeUs t, const auto& p) { return t < p.first; });
  return std::prev(pos)->second;
}

SensorSource trace_source(const SensorTrace& trace) {
  return [&trace](const std::string& sensor, TimeUs time) { return query_sensor(trace, sensor, time); };
}

namespace {

FlightScenario parse_scenario_json(const nlohmann::json& j) {
  FlightScenario s;
  s.name = j.at("name").get<std::string>();
  s.seed = j.value("seed", std::uint64_t{0});
  s.duration = j.value("duration", s.duration);
  s.sample_rate = j.value("sample_rate", s.sample_rate);
  if (j.contains("start")) {
    const auto& st = j["start"];
    s.start_lat = st.value("lat", s.start_lat);
    s.start_lon = st.value("lon", s.start_lon);
    s.start_alt = st.value("alt", s.start_alt);
  }
  s.geofence_radius = j.value("geofence_radius", s.geofence_radius);
  s.altitude_ceiling = j.value("altitude_ceiling", s.altitude_ceiling);
  if (j.contains("track")) s.track = j["track"].get<std::vector<std::array<double, 3>>>();
  if (j.contains("altitude")) s.altitude = j["altitude"].get<std::vector<std::array<double, 2>>>();
  if (s.sample_rate <= 0 || s.duration < 0) throw Error(ErrorKind::Io, "scenario '" + s.name + "' has invalid timing");
  return s;
}

}  // namespace

FlightScenario parse_scenario(const std::string& json_text) {
  try {
    return parse_scenario_json(nlohmann::json::parse(json_text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("scenario: ") + e.what());
  }
}

FlightScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

void generate_track(FlightScenario& s, std::mt19937_64& rng) {
  double t = uniform(rng, 3.0, 5.0);
  double x = 0, y = 0;
  s.track = {{0, 0, 0}, {t, 0, 0}};
  double heading = uniform(rng, 0, 2 * std::numbers::pi);
  while (t < s.duration) {
    double speed = uniform(rng, 0.5, 1.0);
    double r = uniform(rng, 10.0, 13.0);
    double nx = r * std::cos(heading), ny = r * std::sin(heading);
    t += std::hypot(nx - x, ny - y) / speed;
    x = nx;
    y = ny;
    s.track.push_back({t, x, y});
    t += uniform(rng, 1.0, 3.0);
    s.track.push_back({t, x, y});
    heading += uniform(rng, -0.5, 0.5);
    r = uniform(rng, 1.0, 3.0);
    nx = r * std::cos(heading);
    ny = r * std::sin(heading);
    t += std::hypot(nx - x, ny - y) / speed;
    x = nx;
    y = ny;
    s.track.push_back({t, x, y});
    t += uniform(rng, 1.0, 3.0);
    s.track.push_back({t, x, y});
    heading = uniform(rng, 0, 2 * std::numbers::pi);
  }
}

void generate_altitude(FlightScenario& s, std::mt19937_64& rng) {
  double t = uniform(rng, 3.0, 6.0);
  double z = 0;
  s.altitude = {{0, 0}, {t, 0}};
  bool up = true;
  while (t < s.duration) {
    double target = up ? uniform(rng, 12.0, 15.0) : uniform(rng, 2.0, 5.0);
    t += std::fabs(target - z) / uniform(rng, 0.5, 1.0);
    z = target;
    s.altitude.push_back({t, z});
    t += uniform(rng, 2.0, 4.0);
    s.altitude.push_back({t, z});
    up = !up;
  }
}

template <std::size_t N>
std::array<double, N - 1> interpolate(const std::vector<std::array<double, N>>& pts, double t) {
  std::array<double, N - 1> out{};
  if (pts.empty()) return out;
  if (t <= pts.front()[0]) {
    std::copy(pts.front().begin() + 1, pts.front().end(), out.begin());
    return out;
  }
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (t <= pts[k][0]) {
      double span = pts[k][0] - pts[k - 1][0];
      double a = span > 0 ? (t - pts[k - 1][0]) / span : 1.0;
      for (std::size_t d = 1; d < N; ++d) out[d - 1] = pts[k - 1][d] + a * (pts[k][d] - pts[k - 1][d]);
      return out;
    }
  }
  std::copy(pts.back().begin() + 1, pts.back().end(), out.begin());
  return out;
}

/// Smooth pseudo-random signal: a sum of three sinusoids.
struct SmoothNoise {
  std::array<double, 3> amp{}, freq{}, phase{};
  SmoothNoise(std::mt19937_64& rng, double scale) {
    for (std::size_t k = 0; k < 3; ++k) {
      amp[k] = scale * uniform(rng, 0.3, 1.0);
      freq[k] = uniform(rng, 0.05, 0.5);
      phase[k] = uniform(rng, 0, 2 * std::numbers::pi);
    }
  }
  double operator()(double t) const {
    double v = 0;
    for (std::size_t k = 0; k < 3; ++k) v += amp[k] * std::sin(2 * std::numbers::pi * freq[k] * t + phase[k]);
    return v;
  }
};

void add_crossings(const FlightScenario& s, std::vector<Crossing>& out) {
  const double r = s.geofence_radius;
  for (std::size_t k = 1; k < s.track.size(); ++k) {
    const auto& p = s.track[k - 1];
    const auto& q = s.track[k];
    double dx = q[1] - p[1], dy = q[2] - p[2];
    double a = dx * dx + dy * dy;
    if (a == 0) continue;
    double b = 2 * (p[1] * dx + p[2] * dy);
    double c = p[1] * p[1] + p[2] * p[2] - r * r;
    double disc = b * b - 4 * a * c;
    if (disc < 0) continue;
    // Outward crossing is the larger root; it counts when it lies in the segment and the start is inside.
    double u = (-b + std::sqrt(disc)) / (2 * a);
    if (c < 0 && u > 0 && u <= 1) out.push_back({"geofence", p[0] + u * (q[0] - p[0])});
  }
  const double ceiling = s.altitude_ceiling;
  for (std::size_t k = 1; k < s.altitude.size(); ++k) {
    const auto& p = s.altitude[k - 1];
    const auto& q = s.altitude[k];
    if (p[1] < ceiling && q[1] >= ceiling) out.push_back({"altitude", p[0] + (ceiling - p[1]) / (q[1] - p[1]) * (q[0] - p[0])});
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.time < y.time; });
}

}  // namespace

Flight generate_flight(const FlightScenario& input) {
  Flight f;
  f.scenario = input;
  FlightScenario& s = f.scenario;
  std::mt19937_64 rng(s.seed);
  if (s.track.empty()) generate_track(s, rng);
  if (s.altitude.empty()) generate_altitude(s, rng);
  SmoothNoise baro_alt(rng, 0.3), baro_press(rng, 0.05);

  f.trace.id = s.name + "#" + std::to_string(s.seed);
  auto& smp = f.trace.samples;
  const auto n = static_cast<std::size_t>(std::floor(s.duration * s.sample_rate + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) {
    double t = static_cast<double>(k) / s.sample_rate;
    TimeUs tu = std::llround(t * 1e6);
    auto xy = interpolate(s.track, t);
    double z = interpolate(s.altitude, t)[0];
    double alt = s.start_alt + z;
    smp["gps_lat_long"].push_back({tu, Value(Tuple{Value(s.start_lat + xy[0] / 1e4), Value(s.start_lon + xy[1] / 1e4)})});
    smp["gps_altitude"].push_back({tu, Value(alt)});
    smp["barometer_altitude"].push_back({tu, Value(alt + baro_alt(t))});
    smp["barometer_pressure"].push_back({tu, Value(1013.25 * std::pow(1 - 2.25577e-5 * alt, 5.25588) + baro_press(t))});
  }
  add_crossings(s, f.crossings);
  std::erase_if(f.crossings, [&](const Crossing& c) { return c.time > s.duration; });
  return f;
}

RunMetrics measure(const EvaluationModel& model, TimeUs horizon,
                   const std::map<std::string, std::vector<std::string>>& groups) {
  RunMetrics m;
  m.horizon = to_seconds(horizon);
  for (std::size_t i = 0; i < model.input_count; ++i) {
    std::size_t n = 0;
    for (const auto& c : model.cells[i]) n += c.has_value();
    m.values[model.streams[i]] = n;
    m.rate[model.streams[i]] = m.horizon > 0 ? static_cast<double>(n) / m.horizon : 0.0;
    m.total_values += n;
  }
  m.total_rate = m.horizon > 0 ? static_cast<double>(m.total_values) / m.horizon : 0.0;
  for (const auto& [group, members] : groups) {
    double r = 0;
    for (const auto& s : members) {
      if (auto it = m.rate.find(s); it != m.rate.end()) r += it->second;
    }
    m.group_rate[group] = r;
  }
  return m;
}

MonitorRun run_fixed(const Specification& spec, const SensorTrace& trace, Frequency f, TimeUs horizon) {
  if (f.num <= 0 || f.den <= 0) throw Error(ErrorKind::Precondition, "frequency must be positive");
  Monitor monitor(spec);
  MonitorRun run;
  run.trace_id = trace.id;
  const CompiledSpec& c = monitor.compiled();
  for (std::size_t s = 0; s < c.stream_count(); ++s) run.model.streams.push_back(c.stream_name(s));
  run.model.input_count = c.spec.inputs.size();
  run.model.cells.resize(c.stream_count());
  for (std::size_t k = 0;; ++k) {
    TimeUs t = f.event_time(k);
    if (t >= horizon) break;
    EventInput ev{t, {}};
    for (const auto& in : c.spec.inputs) ev.values.push_back(query_sensor(trace, in.name, t));
    auto step = monitor.eval_event(ev);
    run.model.times.push_back(t);
    for (std::size_t s = 0; s < step.cells.size(); ++s) run.model.cells[s].push_back(step.cells[s]);
    run.triggers.insert(run.triggers.end(), step.triggers.begin(), step.triggers.end());
  }
  run.metrics = measure(run.model, horizon);
  return run;
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ComparisonReport compare_runs(const std::vector<ScenarioRuns>& scenarios,
                              const std::map<std::string, std::string>& trigger_bounds, double window) {
  ComparisonReport report;
  std::map<std::string, std::vector<double>> delays;
  std::map<std::string, std::size_t> runs_seen;
  for (const auto& sc : scenarios) {
    for (const auto& r : sc.runs) {
      if (r.trace_id != sc.runs.front().trace_id) {
        throw Error(ErrorKind::MismatchedTraces, "run '" + r.name + "' observed trace '" + r.trace_id +
                                                     "' instead of '" + sc.runs.front().trace_id + "'");
      }
      if (!runs_seen.count(r.name)) {
        report.runs.push_back(r.name);
        report.delays[r.name];
      }
      ++runs_seen[r.name];
      auto& bw = report.bandwidth[r.name];
      bw.horizon += r.metrics.horizon;
      bw.total_values += r.metrics.total_values;
      bw.total_rate += r.metrics.total_rate;
      for (const auto& [k, v] : r.metrics.values) bw.values[k] += v;
      for (const auto& [k, v] : r.metrics.rate) bw.rate[k] += v;
      for (const auto& [k, v] : r.metrics.group_rate) bw.group_rate[k] += v;
    }
    for (const auto& cr : sc.crossings) {
      for (const auto& [trigger, bound] : trigger_bounds) {
        if (bound != cr.bound) continue;
        std::vector<Detection> rows;
        std::optional<double> earliest;
        for (const auto& r : sc.runs) {
          Detection d{sc.scenario, trigger, bound, cr.time, r.name, std::nullopt, std::nullopt};
          for (const auto& rep : r.triggers) {
            double t = to_seconds(rep.time);
            if (rep.trigger == trigger && t >= cr.time && t <= cr.time + window) {
              d.detected = t;
              break;
            }
          }
          if (d.detected && (!earliest || *d.detected < *earliest)) earliest = d.detected;
          rows.push_back(d);
        }
        for (auto& d : rows) {
          if (d.detected) {
            d.delay = *d.detected - *earliest;
            delays[d.run].push_back(*d.delay);
          } else {
            ++report.delays[d.run].missed;
          }
          report.detections.push_back(d);
        }
      }
    }
  }
  for (auto& [name, bw] : report.bandwidth) {
    auto n = static_cast<double>(runs_seen[name]);
    bw.horizon /= n;
    bw.total_rate /= n;
    for (auto& [k, v] : bw.rate) v /= n;
    for (auto& [k, v] : bw.group_rate) v /= n;
  }
  for (auto& [name, d] : delays) {
    std::sort(d.begin(), d.end());
    auto& st = report.delays[name];
    st.count = d.size();
    st.median = quantile(d, 0.5);
    st.q1 = quantile(d, 0.25);
    st.q3 = quantile(d, 0.75);
  }
  return report;
}

std::string ComparisonReport::csv() const {
  std::ostringstream os;
  os << "scenario,trigger,bound,crossing,run,detected,delay\n";
  for (const auto& d : detections) {
    os << d.scenario << "," << d.trigger << "," << d.bound << "," << d.crossing << "," << d.run << ",";
    if (d.detected) os << *d.detected;
    os << ",";
    if (d.delay) os << *d.delay;
    os << "\n";
  }
  return os.str();
}

std::string ComparisonReport::bandwidth_csv() const {
  std::ostringstream os;
  os << "run,sensor,values_per_second\n";
  for (const auto& run : runs) {
    const auto& bw = bandwidth.at(run);
    for (const auto& [sensor, r] : bw.rate) os << run << "," << sensor << "," << r << "\n";
    os << run << ",total," << bw.total_rate << "\n";
  }
  return os.str();
}

std::string ComparisonReport::json() const {
  nlohmann::json j;
  j["runs"] = runs;
  for (const auto& run : runs) {
    const auto& d = delays.at(run);
    j["delays"][run] = {{"count", d.count}, {"missed", d.missed}, {"median", d.median}, {"q1", d.q1}, {"q3", d.q3}};
    const auto& bw = bandwidth.at(run);
    j["bandwidth"][run] = {{"total", bw.total_rate}, {"per_sensor", bw.rate}, {"groups", bw.group_rate}};
  }
  return j.dump(2) + "\n";
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, path + ": " + e.what());
  }
  auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path q(p);
    return (q.is_absolute() ? q : base / q).string();
  };
  ExperimentConfig c;
  c.spec_path = resolve(j.at("spec").get<std::string>());
  for (const auto& s : j.at("scenarios")) c.scenario_paths.push_back(resolve(s.get<std::string>()));
  c.horizon = j.value("horizon", c.horizon);
  c.window = j.value("window", c.window);
  c.trigger_bounds = j.at("triggers").get<std::map<std::string, std::string>>();
  if (j.contains("groups")) c.groups = j["groups"].get<std::map<std::string, std::vector<std::string>>>();
  for (const auto& r : j.at("runs")) {
    RunSpec rs;
    rs.name = r.at("name").get<std::string>();
    std::string kind = r.at("kind").get<std::string>();
    if (kind != "scheduled" && kind != "fixed") throw Error(ErrorKind::Io, "unknown run kind '" + kind + "'");
    rs.scheduled = kind == "scheduled";
    rs.frequency = parse_frequency(r.at("frequency").get<std::string>());
    if (rs.scheduled) {
      rs.config.mode = parse_mode(r.value("mode", std::string("dp")));
      rs.config.frequency = rs.frequency;
      if (r.contains("bound")) rs.config.bound = r["bound"].get<std::uint64_t>();
      rs.config.force = r.value("force", false);
    }
    c.runs.push_back(rs);
  }
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  Specification spec = parse_spec_file(config.spec_path);
  const TimeUs horizon = std::llround(config.horizon * 1e6);
  ExperimentResult result;
  for (const auto& path : config.scenario_paths) {
    Flight flight = generate_flight(load_scenario(path));
    ScenarioRuns sc{flight.scenario.name, flight.crossings, {}};
    // Crossings the monitors never get to observe are not ground truth for this horizon.
    std::erase_if(sc.crossings, [&](const Crossing& c) { return c.time >= config.horizon; });
    std::vector<std::future<MonitorRun>> jobs;
    for (const auto& rs : config.runs) {
      jobs.push_back(std::async(std::launch::async, [&, rs] {
        MonitorRun run;
        if (rs.scheduled) {
          Scheduler scheduler(spec, rs.config);
          ScheduledRun s = run_scheduled(scheduler, trace_source(flight.trace), horizon);
          run.model = std::move(s.model);
          run.triggers = std::move(s.triggers);
          run.plans = std::move(s.plans);
        } else {
          run = run_fixed(spec, flight.trace, rs.frequency, horizon);
        }
        run.name = rs.name;
        run.trace_id = flight.trace.id;
        run.metrics = measure(run.model, horizon, config.groups);
        return run;
      }));
    }
    for (auto& j : jobs) sc.runs.push_back(j.get());
    result.scenarios.push_back(std::move(sc));
  }
  result.report = compare_runs(result.scenarios, config.trigger_bounds, config.window);
  return result;
}

}  // namespace lola
