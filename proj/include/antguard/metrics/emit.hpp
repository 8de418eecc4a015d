#pragma once

// Report serialization: summary text, CSV and JSON lines.

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "antguard/metrics/report.hpp"
#include "antguard/scenario/config.hpp"

namespace antguard {

struct RunRecord {
  std::string scenario;
  std::uint64_t seed = 0;
  bool prevention = true;
  std::vector<std::string> overrides;
  MetricsReport report;
  double wall_clock_seconds = 0.0;  // informational; not serialized to csv/jsonl

  bool same_run(const RunRecord& o) const {
    return scenario == o.scenario && seed == o.seed && prevention == o.prevention && overrides == o.overrides &&
           report == o.report;
  }
};

enum class ReportFormat { summary, csv, jsonl };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kCsvHeader =
    "scenario,seed,prevention,legit_injected,legit_delivered,legit_fp_dropped,legit_tail_dropped,"
    "attack_injected,attack_delivered,attack_dropped,detection_latency,traceback_depth,quarantined_count,"
    "total_energy,adjunct_unreachable,routing_failures";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string csv_row(const RunRecord& r) {
  using detail::format_number;
  const auto& m = r.report;
  std::ostringstream o;
  o << detail::csv_field(r.scenario) << ',' << r.seed << ',' << (r.prevention ? "on" : "off") << ','
    << m.legit.injected << ',' << m.legit.delivered << ',' << m.legit.rule_dropped << ',' << m.legit.tail_dropped
    << ',' << m.attack.injected << ',' << m.attack.delivered << ',' << m.attack.rule_dropped << ','
    << (m.detection_latency ? format_number(*m.detection_latency) : "") << ','
    << (m.traceback_depth ? std::to_string(*m.traceback_depth) : "") << ',' << m.quarantined.size() << ','
    << format_number(m.total_energy) << ',' << m.adjunct_unreachable << ',' << m.routing_failures;
  return o.str();
}

inline nlohmann::json class_to_json(const ClassCounts& c) {
  return {{"injected", c.injected},
          {"delivered", c.delivered},
          {"rule_dropped", c.rule_dropped},
          {"tail_dropped", c.tail_dropped},
          {"routing_failures", c.routing_failures},
          {"in_flight", c.in_flight()}};
}

inline ClassCounts class_from_json(const nlohmann::json& j) {
  ClassCounts c;
  c.injected = j.at("injected").get<std::int64_t>();
  c.delivered = j.at("delivered").get<std::int64_t>();
  c.rule_dropped = j.at("rule_dropped").get<std::int64_t>();
  c.tail_dropped = j.at("tail_dropped").get<std::int64_t>();
  c.routing_failures = j.at("routing_failures").get<std::int64_t>();
  return c;
}

inline nlohmann::json report_to_json(const MetricsReport& m) {
  nlohmann::json j;
  j["legit"] = class_to_json(m.legit);
  j["attack"] = class_to_json(m.attack);
  j["legit_delivery_ratio"] = m.legit_delivery_ratio();
  j["detection_latency"] = m.detection_latency ? nlohmann::json(*m.detection_latency) : nlohmann::json(nullptr);
  j["traceback_depth"] = m.traceback_depth ? nlohmann::json(*m.traceback_depth) : nlohmann::json(nullptr);
  auto q = nlohmann::json::array();
  for (auto id : m.quarantined) q.push_back(id.value);
  j["quarantined"] = q;
  j["node_energy"] = m.node_energy;
  j["total_energy"] = m.total_energy;
  j["detect_alerts"] = m.detect_alerts;
  j["adjunct_unreachable"] = m.adjunct_unreachable;
  j["routing_failures"] = m.routing_failures;
  j["signature_alerts"] = m.signature_alerts;
  return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport m;
  m.legit = class_from_json(j.at("legit"));
  m.attack = class_from_json(j.at("attack"));
  if (!j.at("detection_latency").is_null()) m.detection_latency = j.at("detection_latency").get<double>();
  if (!j.at("traceback_depth").is_null()) m.traceback_depth = j.at("traceback_depth").get<int>();
  for (const auto& q : j.at("quarantined")) m.quarantined.emplace_back(q.get<std::uint32_t>());
  m.node_energy = j.at("node_energy").get<std::vector<double>>();
  m.total_energy = j.at("total_energy").get<double>();
  m.detect_alerts = j.at("detect_alerts").get<std::int64_t>();
  m.adjunct_unreachable = j.at("adjunct_unreachable").get<std::int64_t>();
  m.routing_failures = j.at("routing_failures").get<std::int64_t>();
  m.signature_alerts = j.at("signature_alerts").get<std::int64_t>();
  return m;
}

inline std::string jsonl_line(const RunRecord& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["prevention"] = r.prevention ? "on" : "off";
  j["overrides"] = r.overrides;
  j["report"] = report_to_json(r.report);
  return j.dump();
}

inline RunRecord run_record_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  RunRecord r;
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.prevention = j.at("prevention").get<std::string>() == "on";
  r.overrides = j.at("overrides").get<std::vector<std::string>>();
  r.report = report_from_json(j.at("report"));
  return r;
}

inline std::string summary_text(const RunRecord& r) {
  using detail::format_number;
  const auto& m = r.report;
  std::ostringstream o;
  o << "scenario            " << r.scenario << '\n'
    << "seed                " << r.seed << '\n'
    << "prevention          " << (r.prevention ? "on" : "off") << '\n'
    << "legit               injected " << m.legit.injected << ", delivered " << m.legit.delivered
    << ", false-positive drops " << m.legit.rule_dropped << ", tail drops " << m.legit.tail_dropped << '\n'
    << "legit delivery      " << format_number(m.legit_delivery_ratio()) << '\n'
    << "attack              injected " << m.attack.injected << ", delivered " << m.attack.delivered
    << ", filtered " << m.attack.rule_dropped << ", tail drops " << m.attack.tail_dropped << '\n'
    << "detect alerts       " << m.detect_alerts << '\n'
    << "detection latency   " << (m.detection_latency ? format_number(*m.detection_latency) : "-") << '\n'
    << "traceback depth     " << (m.traceback_depth ? std::to_string(*m.traceback_depth) : "-") << '\n'
    << "quarantined         ";
  if (m.quarantined.empty()) o << '-';
  for (std::size_t i = 0; i < m.quarantined.size(); ++i) o << (i ? " " : "") << m.quarantined[i].value;
  o << '\n'
    << "total energy        " << format_number(m.total_energy) << '\n'
    << "adjunct unreachable " << m.adjunct_unreachable << '\n'
    << "routing failures    " << m.routing_failures << '\n';
  return o.str();
}

inline void emit_report(const std::vector<RunRecord>& records, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::csv:
      out << kCsvHeader << '\n';
      for (const auto& r : records) out << csv_row(r) << '\n';
      break;
    case ReportFormat::jsonl:
      for (const auto& r : records) out << jsonl_line(r) << '\n';
      break;
    case ReportFormat::summary:
      for (std::size_t i = 0; i < records.size(); ++i) out << (i ? "\n" : "") << summary_text(records[i]);
      break;
  }
}

inline void emit_report(const std::vector<RunRecord>& records, ReportFormat format, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write report to '" + path + "'");
  emit_report(records, format, f);
  f.flush();
  if (!f) throw IoError("write failed for '" + path + "'");
}

}  // namespace antguard
