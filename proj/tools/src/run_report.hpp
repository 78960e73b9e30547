#pragma once

// Per-run report emitted by every kernel subcommand: the fully resolved
// configuration, timing, scheduler counters, and a digest of the result.
// Serialization must round-trip losslessly; reproducibility tests compare
// reports from separate processes.

#include <string>

#include "cobl/scheduler.hpp"
#include "json.hpp"

namespace cobl::cli {

struct RunReport {
  nlohmann::json config;  // resolved flag values, post defaulting
  double wall_ms = 0;     // median over repeats, warm-up excluded
  std::string mode;
  int workers = 1;
  uint64_t packets = 0;
  uint64_t phases = 0;
  uint64_t steals = 0;
  std::string digest;  // 16 hex chars over the canonical result text
  std::string version;

  bool operator==(const RunReport&) const = default;

  nlohmann::json to_json() const {
    return {{"config", config},   {"wall_ms", wall_ms}, {"mode", mode},
            {"workers", workers}, {"packets", packets}, {"phases", phases},
            {"steals", steals},   {"digest", digest},   {"version", version}};
  }

  static RunReport from_json(const nlohmann::json& j) {
    RunReport r;
    r.config = j.at("config");
    r.wall_ms = j.at("wall_ms").get<double>();
    r.mode = j.at("mode").get<std::string>();
    r.workers = j.at("workers").get<int>();
    r.packets = j.at("packets").get<uint64_t>();
    r.phases = j.at("phases").get<uint64_t>();
    r.steals = j.at("steals").get<uint64_t>();
    r.digest = j.at("digest").get<std::string>();
    r.version = j.at("version").get<std::string>();
    return r;
  }

  void fill_exec(const ExecutionReport& exec) {
    mode = exec.mode == ScheduleMode::Static ? "static" : "stealing";
    workers = exec.workers;
    packets = exec.packets_total;
    phases = exec.phases;
    steals = exec.steals;
  }

  /// CSV form: one header line plus one value line (config as JSON blob).
  std::string to_csv() const {
    std::string out = "wall_ms,mode,workers,packets,phases,steals,digest,version\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", wall_ms);
    out += buf;
    out += ',' + mode + ',' + std::to_string(workers) + ',' + std::to_string(packets) +
           ',' + std::to_string(phases) + ',' + std::to_string(steals) + ',' + digest +
           ',' + version + '\n';
    return out;
  }
};

}  // namespace cobl::cli
