#pragma once

// Command-line front end: run, sweep and validate.
//
// Exit codes: 0 success, 1 validation or input error, 2 runtime abort.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "antguard/metrics/emit.hpp"
#include "antguard/metrics/report.hpp"
#include "antguard/scenario/parser.hpp"
#include "antguard/sim/simulator.hpp"

namespace antguard {

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAbort = 2;

/// "A..B" (inclusive), "A,B,C" or a single number.
inline std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    auto lo = detail::parse_number<std::uint64_t>(std::string_view(text).substr(0, dots));
    auto hi = detail::parse_number<std::uint64_t>(std::string_view(text).substr(dots + 2));
    if (!lo || !hi || *lo > *hi) throw ConfigError("--seeds: expected A..B with A <= B, got '" + text + "'");
    for (auto s = *lo; s <= *hi; ++s) out.push_back(s);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    auto v = detail::parse_number<std::uint64_t>(std::string_view(text).substr(pos, comma - pos));
    if (!v) throw ConfigError("--seeds: bad seed list '" + text + "'");
    out.push_back(*v);
    pos = comma + 1;
  }
  return out;
}

inline std::vector<bool> parse_prevention(const std::string& text) {
  std::vector<bool> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const auto item = text.substr(pos, comma - pos);
    if (item == "on") out.push_back(true);
    else if (item == "off") out.push_back(false);
    else throw ConfigError("--prevention: expected on, off or on,off, got '" + text + "'");
    pos = comma + 1;
  }
  return out;
}

inline ReportFormat parse_format(const std::string& text, const std::string& out_path, ReportFormat fallback) {
  if (text == "summary") return ReportFormat::summary;
  if (text == "csv") return ReportFormat::csv;
  if (text == "jsonl") return ReportFormat::jsonl;
  if (!text.empty()) throw ConfigError("--format: expected summary, csv or jsonl, got '" + text + "'");
  const auto ends_with = [&](std::string_view suffix) {
    return out_path.size() >= suffix.size() && out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".csv")) return ReportFormat::csv;
  if (ends_with(".jsonl") || ends_with(".json")) return ReportFormat::jsonl;
  return fallback;
}

inline std::optional<std::uint64_t> event_cap_from_env() {
  const char* v = std::getenv("ANTGUARD_EVENT_CAP");
  if (!v || !*v) return std::nullopt;
  auto n = detail::parse_number<std::uint64_t>(v);
  if (!n || *n == 0) throw ConfigError("ANTGUARD_EVENT_CAP: expected a positive integer, got '" + std::string(v) + "'");
  return n;
}

inline RunRecord execute(const ScenarioConfig& cfg, const std::string& scenario_name, std::uint64_t seed,
                         bool prevention, const std::vector<std::string>& overrides,
                         std::optional<std::uint64_t> event_cap, Trace* trace_out = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  auto result = run(cfg, seed, RunOptions{prevention, event_cap});
  RunRecord rec;
  rec.scenario = scenario_name;
  rec.seed = seed;
  rec.prevention = prevention;
  rec.overrides = overrides;
  rec.report = collect_metrics(result.trace, result.energy.size(), cfg.params.energy);
  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (trace_out) *trace_out = std::move(result.trace);
  return rec;
}

inline ScenarioConfig load_with_overrides(const std::string& path, const std::vector<std::string>& overrides) {
  auto cfg = load_scenario(path);
  for (const auto& o : overrides) apply_override(cfg, o);
  validate_scenario(cfg);
  return cfg;
}

inline void write_output(const std::vector<RunRecord>& records, ReportFormat format, const std::string& out_path,
                         std::ostream& out) {
  if (out_path.empty() || out_path == "-")
    emit_report(records, format, out);
  else
    emit_report(records, format, out_path);
}

}  // namespace cli

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"antguard: ant-based DDoS prevention simulator for sensor networks"};
  app.require_subcommand(1);

  std::string scenario, seed_text, seeds_text = "1..30", prevention_text, out_path, format_text, trace_path;
  std::vector<std::string> overrides;
  std::size_t jobs = 1;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--scenario", scenario, "Scenario file")->required();
  run_cmd->add_option("--seed", seed_text, "Seed (defaults to the scenario's)");
  run_cmd->add_option("--prevention", prevention_text, "on or off")->default_str("on");
  run_cmd->add_option("--out", out_path, "Report path (stdout when omitted)");
  run_cmd->add_option("--format", format_text, "summary, csv or jsonl");
  run_cmd->add_option("--trace", trace_path, "Write the event trace here");
  run_cmd->add_option("--set", overrides, "Parameter override KEY=VALUE");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over seeds and prevention settings");
  sweep_cmd->add_option("--scenario", scenario, "Scenario file")->required();
  sweep_cmd->add_option("--seeds", seeds_text, "Seed range A..B or list A,B,C");
  sweep_cmd->add_option("--prevention", prevention_text, "on, off or on,off");
  sweep_cmd->add_option("--out", out_path, "Report path (stdout when omitted)");
  sweep_cmd->add_option("--format", format_text, "summary, csv or jsonl (default jsonl)");
  sweep_cmd->add_option("--set", overrides, "Parameter override KEY=VALUE");
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate_cmd->add_option("--scenario", scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? cli::kExitOk : cli::kExitValidation;
  }

  try {
    const auto event_cap = cli::event_cap_from_env();

    if (validate_cmd->parsed()) {
      const auto cfg = load_scenario(scenario);
      out << "ok: " << cfg.topology.nodes.size() << " nodes, " << cfg.topology.links.size() << " links, "
          << cfg.legit.size() << " legit flows, " << cfg.attacks.size() << " attacks\n";
      return cli::kExitOk;
    }

    const auto cfg = cli::load_with_overrides(scenario, overrides);

    if (run_cmd->parsed()) {
      std::uint64_t seed = cfg.params.seed;
      if (!seed_text.empty()) {
        auto s = detail::parse_number<std::uint64_t>(seed_text);
        if (!s) throw ConfigError("--seed: expected a non-negative integer, got '" + seed_text + "'");
        seed = *s;
      }
      const auto settings = cli::parse_prevention(prevention_text.empty() ? "on" : prevention_text);
      if (settings.size() != 1) throw ConfigError("--prevention: run takes a single setting");
      const auto format = cli::parse_format(format_text, out_path, ReportFormat::summary);

      Trace trace;
      auto rec = cli::execute(cfg, scenario, seed, settings.front(), overrides, event_cap,
                              trace_path.empty() ? nullptr : &trace);
      if (!trace_path.empty()) {
        std::ofstream f(trace_path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write trace to '" + trace_path + "'");
        dump_trace(trace, f);
      }
      cli::write_output({rec}, format, out_path, out);
      return cli::kExitOk;
    }

    // sweep
    const auto seeds = cli::parse_seeds(seeds_text);
    const auto settings = cli::parse_prevention(prevention_text.empty() ? "on,off" : prevention_text);
    const auto format = cli::parse_format(format_text, out_path, ReportFormat::jsonl);

    struct Job {
      std::uint64_t seed;
      bool prevention;
    };
    std::vector<Job> work;
    for (auto s : seeds)
      for (bool p : settings) work.push_back({s, p});

    std::vector<RunRecord> records(work.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (auto i = next++; i < work.size(); i = next++) {
        try {
          records[i] = cli::execute(cfg, scenario, work[i].seed, work[i].prevention, overrides, event_cap);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 1; t < std::min(jobs, work.size()); ++t) pool.emplace_back(worker);
      worker();
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
      return std::tie(a.seed, a.prevention) < std::tie(b.seed, b.prevention);
    });
    cli::write_output(records, format, out_path, out);
    return cli::kExitOk;
  } catch (const SimulationAborted& e) {
    err << "error: run aborted: " << e.what() << '\n';
    return cli::kExitAbort;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return cli::kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return cli::kExitValidation;
  }
}

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"antguard"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace antguard
