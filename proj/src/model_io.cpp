#include "lolasched/model_io.hpp"

#include <istream>
#include <ostream>

#include "json.hpp"
#include "lolasched/error.hpp"

namespace lola {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  if (!next_line(in, line)) throw Error(ErrorKind::Io, "empty CSV input");
  t.header = split_row(line);
  if (t.header.empty() || t.header[0] != "time") throw Error(ErrorKind::Io, "CSV header must start with 'time'");
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    auto cells = split_row(line);
    if (cells.size() != t.header.size()) {
      throw Error(ErrorKind::Io, "CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

Cell parse_cell(const std::string& text, const Type& type) {
  if (text.empty()) return std::nullopt;
  return parse_value(text, type);
}

}  // namespace

std::vector<EventInput> read_trace_csv(std::istream& in, const Specification& spec) {
  Table t = read_table(in);
  std::vector<int> column_input(t.header.size(), -1);
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
      if (spec.inputs[i].name == t.header[c]) column_input[c] = static_cast<int>(i);
    }
    if (column_input[c] < 0) throw Error(ErrorKind::UnknownStream, "trace column '" + t.header[c] + "' is not an input");
  }
  std::vector<EventInput> events;
  for (const auto& row : t.rows) {
    EventInput ev{parse_seconds(row[0]), std::vector<Cell>(spec.inputs.size())};
    for (std::size_t c = 1; c < row.size(); ++c) {
      auto i = static_cast<std::size_t>(column_input[c]);
      ev.values[i] = parse_cell(row[c], spec.inputs[i].type);
    }
    events.push_back(std::move(ev));
  }
  return events;
}

void write_trace_csv(std::ostream& out, const Specification& spec, const std::vector<EventInput>& events) {
  out << "time";
  for (const auto& in : spec.inputs) out << "," << in.name;
  out << "\n";
  for (const auto& ev : events) {
    out << format_seconds(ev.time);
    for (const auto& v : ev.values) out << "," << (v ? format_value(*v) : "");
    out << "\n";
  }
}

void write_model_csv(std::ostream& out, const EvaluationModel& model) {
  out << "time";
  for (const auto& s : model.streams) out << "," << s;
  out << "\n";
  for (std::size_t t = 0; t < model.steps(); ++t) {
    out << format_seconds(model.times[t]);
    for (const auto& col : model.cells) out << "," << (col[t] ? format_value(*col[t]) : "");
    out << "\n";
  }
}

EvaluationModel read_model_csv(std::istream& in, const Specification& input) {
  CompiledSpec c(input);
  Table t = read_table(in);
  EvaluationModel model;
  for (std::size_t s = 0; s < c.stream_count(); ++s) model.streams.push_back(c.stream_name(s));
  model.input_count = c.spec.inputs.size();
  if (std::vector<std::string>(t.header.begin() + 1, t.header.end()) != model.streams) {
    throw Error(ErrorKind::Io, "model columns do not match the specification's streams");
  }
  model.cells.resize(model.streams.size());
  for (const auto& row : t.rows) {
    model.times.push_back(parse_seconds(row[0]));
    for (std::size_t s = 0; s < model.streams.size(); ++s) {
      model.cells[s].push_back(parse_cell(row[s + 1], c.types.at(model.streams[s])));
    }
  }
  return model;
}

std::string trigger_json_line(const TriggerReport& report) {
  nlohmann::json j;
  j["trigger"] = report.trigger;
  j["time"] = to_seconds(report.time);
  j["message"] = report.message;
  return j.dump();
}

}  // namespace lola
