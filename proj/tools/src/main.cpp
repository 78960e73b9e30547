// cobl: drive the loop engine's kernels from the command line.
//
// Subcommands: gen, join, kmeans, matmul, bench, locality, depcheck.
// Exit codes: 0 success, 1 runtime failure, 2 invalid usage.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cobl/cache_sim.hpp"
#include "cobl/digest.hpp"
#include "cobl/engine_config.hpp"
#include "cobl/join.hpp"
#include "cobl/kmeans.hpp"
#include "cobl/loop_model.hpp"
#include "cobl/matmul.hpp"
#include "cobl/point_set.hpp"
#include "cobl/version.hpp"
#include "run_report.hpp"

namespace {

using namespace cobl;
using cli::RunReport;
using nlohmann::json;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// Warm-up run excluded, median of `repeats` timed runs.
double timed_median(int repeats, const std::function<void()>& run) {
  run();
  std::vector<double> ms;
  ms.reserve(static_cast<size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    const double t0 = now_ms();
    run();
    ms.push_back(now_ms() - t0);
  }
  std::sort(ms.begin(), ms.end());
  return ms[ms.size() / 2];
}

OrderChoice parse_order(const std::string& name) {
  if (name == "hilbert") return OrderChoice::Hilbert;
  if (name == "zorder") return OrderChoice::ZOrder;
  if (name == "rowmajor") return OrderChoice::RowMajor;
  if (name == "composite") return OrderChoice::Composite;
  throw ConfigError("unknown order: " + name +
                    " (expected hilbert, zorder, rowmajor, or composite)");
}

ScheduleMode parse_mode(const std::string& name) {
  if (name == "static") return ScheduleMode::Static;
  if (name == "stealing") return ScheduleMode::Stealing;
  throw ConfigError("unknown mode: " + name + " (expected static or stealing)");
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  for (const auto& s : split_list(csv)) {
    try {
      out.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad ") + what + " value: " + s);
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
}

PointSet load_input(const std::string& path) {
  if (path.empty()) throw ConfigError("--input is required");
  if (!std::filesystem::exists(path)) throw ConfigError("dataset not found: " + path);
  return load_points(path);
}

// shared kernel flags
struct KernelOpts {
  std::string input;
  std::string output;
  std::string format = "json";
  std::string order = "hilbert";
  std::string monotone_dims;
  std::string mode = "stealing";
  int workers = 1;
  uint64_t packet_size = 4096;
  uint64_t seed = 0;
  int repeats = 3;
  bool oracle = false;

  EngineConfig engine() const {
    EngineConfig cfg;
    cfg.order = parse_order(order);
    cfg.monotone_dims = parse_int_list(monotone_dims, "--monotone-dims");
    if (workers < 1) throw ConfigError("--workers must be >= 1");
    if (packet_size < 1) throw ConfigError("--packet-size must be >= 1");
    if (repeats < 1) throw ConfigError("--repeats must be >= 1");
    cfg.plan.workers = workers;
    cfg.plan.packet_size = packet_size;
    cfg.plan.mode = parse_mode(mode);
    return cfg;
  }

  json resolved(const char* command) const {
    return {{"command", command},   {"input", input},
            {"output", output},     {"format", format},
            {"order", order},       {"monotone_dims", monotone_dims},
            {"mode", mode},         {"workers", workers},
            {"packet_size", packet_size}, {"seed", seed},
            {"repeats", repeats},   {"oracle", oracle}};
  }

  void add_to(CLI::App* cmd, bool wants_input) {
    if (wants_input) cmd->add_option("--input", input, "dataset file");
    cmd->add_option("--output", output, "result file path");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--order", order, "hilbert, zorder, rowmajor, or composite");
    cmd->add_option("--monotone-dims", monotone_dims,
                    "comma list of monotone dims for composite order");
    cmd->add_option("--mode", mode, "static or stealing")
        ->check(CLI::IsMember({"static", "stealing"}));
    cmd->add_option("--workers", workers, "worker thread count");
    cmd->add_option("--packet-size", packet_size, "curve ordinals per packet");
    cmd->add_option("--seed", seed, "seed for generators and initialization");
    cmd->add_option("--repeats", repeats, "timed repetitions (median reported)");
    cmd->add_flag("--oracle", oracle, "also run the reference oracle and compare");
  }
};

void emit_report(const RunReport& report, const std::string& format) {
  if (format == "csv")
    std::cout << report.to_csv();
  else
    std::cout << report.to_json().dump(2) << "\n";
}

// ---- gen ----

struct GenOpts {
  std::string kind = "uniform";
  uint32_t n = 0;
  uint32_t d = 0;
  uint32_t k = 8;
  uint64_t seed = 0;
  std::string output;
};

int run_gen(const GenOpts& o) {
  if (o.n < 1 || o.d < 1) throw ConfigError("gen needs --n >= 1 and --d >= 1");
  if (o.output.empty()) throw ConfigError("gen needs --output");
  PointSet ps;
  if (o.kind == "uniform") {
    ps = gen_uniform(o.n, o.d, o.seed);
  } else if (o.kind == "gaussian-blobs") {
    if (o.k < 1) throw ConfigError("gaussian-blobs needs --k >= 1");
    ps = gen_blobs(o.n, o.d, o.k, o.seed);
  } else {
    throw ConfigError("unknown --kind: " + o.kind +
                      " (expected uniform or gaussian-blobs)");
  }
  if (o.output.size() > 4 && o.output.substr(o.output.size() - 4) == ".bin")
    save_points_binary(ps, o.output);
  else
    save_points_text(ps, o.output);

  std::ifstream in(o.output, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  Digest dg;
  dg.text(buf.str());
  json j{{"command", "gen"}, {"kind", o.kind},     {"n", o.n},
         {"d", o.d},         {"seed", o.seed},     {"output", o.output},
         {"digest", Digest::hex(dg.value())},      {"version", kVersion}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---- join ----

std::string join_canonical(const JoinResult& result) {
  std::string text;
  char buf[96];
  for (const PairHit& p : result.pairs) {
    std::snprintf(buf, sizeof buf, "%u,%u,%.12g\n", p.a, p.b, p.distance);
    text += buf;
  }
  return text;
}

int run_join(KernelOpts& o, double epsilon) {
  if (epsilon < 0) throw ConfigError("--epsilon must be >= 0");
  const PointSet ps = load_input(o.input);
  const EngineConfig cfg = o.engine();

  JoinParams params;
  params.epsilon = epsilon;
  params.dim_permutation = choose_dim_permutation(ps, epsilon);

  JoinResult result;
  const double wall = timed_median(o.repeats, [&] {
    result = epsilon_self_join(ps, params, cfg);
  });

  RunReport report;
  report.config = o.resolved("join");
  report.config["epsilon"] = epsilon;
  report.wall_ms = wall;
  report.fill_exec(result.stats.exec);
  const std::string canonical = join_canonical(result);
  Digest dg;
  dg.text(canonical);
  report.digest = Digest::hex(dg.value());
  report.version = kVersion;
  report.config["pairs"] = result.pairs.size();
  report.config["interval_violations"] = result.stats.interval_violations;

  if (o.oracle) {
    const auto expect = brute_force_join(ps, epsilon);
    bool match = expect.size() == result.pairs.size();
    for (size_t i = 0; match && i < expect.size(); ++i)
      match = expect[i].a == result.pairs[i].a && expect[i].b == result.pairs[i].b;
    report.config["oracle-match"] = match;
    if (!match) {
      emit_report(report, o.format);
      std::cerr << "join result does not match the brute-force oracle\n";
      return 1;
    }
  }

  if (!o.output.empty()) {
    if (o.format == "csv") {
      write_file(o.output, "a,b,distance\n" + canonical);
    } else {
      json pairs = json::array();
      for (const PairHit& p : result.pairs)
        pairs.push_back({{"a", p.a}, {"b", p.b}, {"distance", p.distance}});
      write_file(o.output, json{{"pairs", pairs}}.dump(2) + "\n");
    }
  }
  emit_report(report, o.format);
  return 0;
}

// ---- kmeans ----

std::string kmeans_canonical(const KMeansResult& result) {
  std::string text;
  char buf[64];
  for (uint32_t label : result.model.assignment) {
    std::snprintf(buf, sizeof buf, "%u\n", label);
    text += buf;
  }
  for (double c : result.model.centroids) {
    std::snprintf(buf, sizeof buf, "%.12g\n", c);
    text += buf;
  }
  std::snprintf(buf, sizeof buf, "%.12g\n", result.model.inertia);
  text += buf;
  return text;
}

int run_kmeans(KernelOpts& o, uint32_t k, uint32_t iters) {
  const PointSet ps = load_input(o.input);
  const EngineConfig cfg = o.engine();

  KMeansResult result;
  const double wall = timed_median(o.repeats, [&] {
    result = kmeans(ps, k, o.seed, iters, cfg);
  });

  RunReport report;
  report.config = o.resolved("kmeans");
  report.config["k"] = k;
  report.config["iters"] = iters;
  report.wall_ms = wall;
  report.fill_exec(result.exec);
  Digest dg;
  dg.text(kmeans_canonical(result));
  report.digest = Digest::hex(dg.value());
  report.version = kVersion;
  report.config["iterations"] = result.iterations;
  report.config["inertia"] = result.model.inertia;

  if (o.oracle) {
    const auto expect = lloyd_reference(ps, k, o.seed, iters);
    bool match = expect.model.assignment == result.model.assignment;
    double maxdiff = 0;
    for (size_t i = 0; match && i < expect.model.centroids.size(); ++i)
      maxdiff = std::max(maxdiff,
                         std::abs(expect.model.centroids[i] - result.model.centroids[i]));
    match = match && maxdiff <= 1e-9;
    report.config["oracle-match"] = match;
    if (!match) {
      emit_report(report, o.format);
      std::cerr << "kmeans result does not match the sequential oracle\n";
      return 1;
    }
  }

  if (!o.output.empty()) {
    if (o.format == "csv") {
      std::string text = "point,label\n";
      char buf[64];
      for (size_t i = 0; i < result.model.assignment.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%u\n", i, result.model.assignment[i]);
        text += buf;
      }
      write_file(o.output, text);
    } else {
      json j{{"labels", result.model.assignment},
             {"centroids", result.model.centroids},
             {"inertia", result.model.inertia},
             {"iterations", result.iterations},
             {"inertia_history", result.inertia_history}};
      write_file(o.output, j.dump(2) + "\n");
    }
  }
  emit_report(report, o.format);
  return 0;
}

// ---- matmul ----

std::string matmul_canonical(const Matrix& c) {
  std::string text = std::to_string(c.rows) + " " + std::to_string(c.cols) + "\n";
  char buf[48];
  for (double v : c.values) {
    std::snprintf(buf, sizeof buf, "%.12g\n", v);
    text += buf;
  }
  return text;
}

int run_matmul(KernelOpts& o, uint32_t size, uint32_t block_size) {
  if (size < 1) throw ConfigError("--size must be >= 1");
  const EngineConfig cfg = o.engine();
  const Matrix a = random_matrix(size, size, o.seed);
  const Matrix b = random_matrix(size, size, o.seed + 1);

  Matrix c;
  ExecutionReport exec;
  const double wall = timed_median(o.repeats, [&] {
    c = matmul(a, b, block_size, cfg, &exec);
  });

  RunReport report;
  report.config = o.resolved("matmul");
  report.config["size"] = size;
  report.config["block_size"] = block_size;
  report.wall_ms = wall;
  report.fill_exec(exec);
  Digest dg;
  dg.text(matmul_canonical(c));
  report.digest = Digest::hex(dg.value());
  report.version = kVersion;

  if (o.oracle) {
    const Matrix expect = matmul_reference(a, b);
    double maxrel = 0;
    for (size_t i = 0; i < expect.values.size(); ++i) {
      const double denom = std::max(1.0, std::abs(expect.values[i]));
      maxrel = std::max(maxrel, std::abs(expect.values[i] - c.values[i]) / denom);
    }
    const bool match = maxrel <= 1e-10;
    report.config["oracle-match"] = match;
    report.config["oracle-max-rel"] = maxrel;
    if (!match) {
      emit_report(report, o.format);
      std::cerr << "matmul result does not match the naive oracle\n";
      return 1;
    }
  }

  if (!o.output.empty()) {
    if (o.format == "csv") {
      std::string text;
      char buf[48];
      for (uint32_t i = 0; i < c.rows; ++i) {
        for (uint32_t j = 0; j < c.cols; ++j) {
          std::snprintf(buf, sizeof buf, "%.12g", c.at(i, j));
          text += buf;
          text += (j + 1 == c.cols) ? '\n' : ',';
        }
      }
      write_file(o.output, text);
    } else {
      write_file(o.output,
                 json{{"rows", c.rows}, {"cols", c.cols}, {"values", c.values}}.dump() +
                     "\n");
    }
  }
  emit_report(report, o.format);
  return 0;
}

// ---- bench ----

struct BenchOpts {
  std::string kernel = "join";
  std::string input;
  std::string output;
  std::string orders = "hilbert";
  std::string workers = "1";
  std::string packet_sizes = "4096";
  std::string mode = "stealing";
  uint32_t n = 20000;
  uint32_t d = 4;
  uint64_t seed = 0;
  double epsilon = 0.1;
  uint32_t k = 8;
  uint32_t iters = 20;
  uint32_t size = 128;
  uint32_t block_size = 32;
  int repeats = 3;
};

int run_bench(const BenchOpts& o) {
  const auto orders = split_list(o.orders);
  const auto workers = parse_int_list(o.workers, "--workers");
  const auto packet_sizes = parse_int_list(o.packet_sizes, "--packet-size");
  if (orders.empty() || workers.empty() || packet_sizes.empty())
    throw ConfigError("bench sweeps must be non-empty");
  if (o.repeats < 1) throw ConfigError("--repeats must be >= 1");

  PointSet ps;
  if (o.kernel == "join" || o.kernel == "kmeans") {
    ps = o.input.empty() ? gen_uniform(o.n, o.d, o.seed) : load_input(o.input);
  } else if (o.kernel != "matmul") {
    throw ConfigError("unknown --kernel: " + o.kernel);
  }
  Matrix ma, mb;
  if (o.kernel == "matmul") {
    ma = random_matrix(o.size, o.size, o.seed);
    mb = random_matrix(o.size, o.size, o.seed + 1);
  }

  std::string csv = "kernel,order,workers,packet_size,mode,wall_ms,speedup,steals,digest\n";
  struct Row {
    std::string order;
    int p;
    int packet;
    double wall;
    uint64_t steals;
    std::string digest;
  };
  std::vector<Row> rows;

  for (const auto& order : orders) {
    for (int packet : packet_sizes) {
      if (packet < 1) throw ConfigError("--packet-size must be >= 1");
      for (int p : workers) {
        if (p < 1) throw ConfigError("--workers must be >= 1");
        EngineConfig cfg;
        cfg.order = parse_order(order);
        cfg.plan.workers = p;
        cfg.plan.packet_size = static_cast<uint64_t>(packet);
        cfg.plan.mode = parse_mode(o.mode);

        Row row{order, p, packet, 0, 0, {}};
        if (o.kernel == "join") {
          JoinParams params;
          params.epsilon = o.epsilon;
          params.dim_permutation = choose_dim_permutation(ps, o.epsilon);
          JoinResult result;
          row.wall = timed_median(o.repeats, [&] {
            result = epsilon_self_join(ps, params, cfg);
          });
          row.steals = result.stats.exec.steals;
          Digest dg;
          dg.text(join_canonical(result));
          row.digest = Digest::hex(dg.value());
        } else if (o.kernel == "kmeans") {
          KMeansResult result;
          row.wall = timed_median(o.repeats, [&] {
            result = kmeans(ps, o.k, o.seed, o.iters, cfg);
          });
          row.steals = result.exec.steals;
          Digest dg;
          dg.text(kmeans_canonical(result));
          row.digest = Digest::hex(dg.value());
        } else {
          Matrix c;
          ExecutionReport exec;
          row.wall = timed_median(o.repeats, [&] {
            c = matmul(ma, mb, o.block_size, cfg, &exec);
          });
          row.steals = exec.steals;
          Digest dg;
          dg.text(matmul_canonical(c));
          row.digest = Digest::hex(dg.value());
        }
        rows.push_back(std::move(row));
      }
    }
  }

  // speedup is relative to the single-worker row of the same order and
  // packet size; if the sweep skips p=1 the slowest worker count stands in
  for (const Row& row : rows) {
    double base = row.wall;
    int base_p = row.p;
    for (const Row& other : rows) {
      if (other.order != row.order || other.packet != row.packet) continue;
      if (other.p == 1 || other.p < base_p) {
        base = other.wall;
        base_p = other.p;
        if (other.p == 1) break;
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f,%.4f", row.wall,
                  row.wall > 0 ? base / row.wall : 1.0);
    csv += o.kernel + ',' + row.order + ',' + std::to_string(row.p) + ',' +
           std::to_string(row.packet) + ',' + o.mode + ',' + buf + ',' +
           std::to_string(row.steals) + ',' + row.digest + '\n';
  }

  if (!o.output.empty())
    write_file(o.output, csv);
  else
    std::cout << csv;
  return 0;
}

// ---- locality ----

struct LocalityOpts {
  std::string orders = "hilbert,rowmajor";
  std::string lines = "64,256,1024";
  uint32_t domain = 64;
  uint32_t line_size = 1;
  std::string output;
};

int run_locality(const LocalityOpts& o) {
  const auto orders = split_list(o.orders);
  const auto lines = parse_int_list(o.lines, "--lines");
  if (orders.empty() || lines.empty())
    throw ConfigError("locality sweeps must be non-empty");
  if (o.domain < 1) throw ConfigError("--domain must be >= 1");
  if (o.line_size < 1) throw ConfigError("--line-size must be >= 1");

  GridDomain domain({o.domain, o.domain});
  const AccessPattern pattern = pairwise_pattern(o.domain);

  std::string csv = "order,lines,misses\n";
  for (const auto& name : orders) {
    EngineConfig cfg;
    cfg.order = parse_order(name);
    const CurveOrder order = order_for(domain, cfg);
    for (int line_count : lines) {
      if (line_count < 1) throw ConfigError("--lines entries must be >= 1");
      CacheModel cache{o.line_size, static_cast<uint32_t>(line_count)};
      const uint64_t misses = locality_score(order, domain, pattern, cache);
      csv += name + ',' + std::to_string(line_count) + ',' + std::to_string(misses) + '\n';
    }
  }
  if (!o.output.empty())
    write_file(o.output, csv);
  else
    std::cout << csv;
  return 0;
}

// ---- depcheck ----

LoopNest make_nest(const std::string& name) {
  LoopNest nest;
  if (name == "disjoint-map") {
    // out[i][j] = 2 * in[i][j]: no iteration touches another's cells
    nest.domain = GridDomain({8, 8});
    nest.accesses = {AccessDescriptor::affine("in", AccessMode::Read, {8, 1}),
                     AccessDescriptor::affine("out", AccessMode::Write, {8, 1})};
    nest.body = [](std::span<const uint32_t> c, ArrayStore& store) {
      const uint64_t cell = uint64_t{8} * c[0] + c[1];
      store.write("out", cell, 2.0 * store.read("in", cell));
    };
  } else if (name == "commutative-reduction") {
    // acc[0] += in[i][j]: all iterations collide on one cell, but the
    // reduction commutes so any order works
    nest.domain = GridDomain({8, 8});
    nest.accesses = {AccessDescriptor::affine("in", AccessMode::Read, {8, 1}),
                     AccessDescriptor::affine("acc", AccessMode::Reduce, {0, 0})};
    nest.body = [](std::span<const uint32_t> c, ArrayStore& store) {
      store.add("acc", 0, store.read("in", uint64_t{8} * c[0] + c[1]));
    };
  } else if (name == "prefix-sum") {
    // x[i] += x[i-1]: iteration i reads what iteration i-1 wrote
    nest.domain = GridDomain({16});
    nest.accesses = {AccessDescriptor::affine("x", AccessMode::Read, {1}, -1),
                     AccessDescriptor::affine("x", AccessMode::Read, {1}, 0),
                     AccessDescriptor::affine("x", AccessMode::Write, {1}, 0)};
    nest.body = [](std::span<const uint32_t> c, ArrayStore& store) {
      const uint64_t i = c[0];
      const double prev = i == 0 ? 0.0 : store.read("x", i - 1);
      store.write("x", i, store.read("x", i) + prev);
    };
  } else {
    throw ConfigError("unknown --nest: " + name +
                      " (expected disjoint-map, commutative-reduction, prefix-sum, or all)");
  }
  return nest;
}

int run_depcheck(const std::string& nest_name, const std::string& output) {
  std::vector<std::string> names;
  if (nest_name == "all")
    names = {"disjoint-map", "commutative-reduction", "prefix-sum"};
  else
    names = {nest_name};

  json out = json::array();
  for (const auto& name : names) {
    const LoopNest nest = make_nest(name);
    const DependenceReport report = dependence_check(nest);
    const ValidateResult validation = validate_instrumented(nest);
    json entry{{"nest", name},
               {"report", json::parse(report.to_json())},
               {"validation",
                {{"verifiable", validation.verifiable},
                 {"pass", validation.pass},
                 {"detail", validation.detail}}}};
    out.push_back(std::move(entry));
  }
  const std::string text = out.dump(2) + "\n";
  if (!output.empty())
    write_file(output, text);
  else
    std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cache-oblivious parallel loop engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cobl::kVersion));

  GenOpts gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a seeded dataset");
  cmd_gen->add_option("--kind", gen.kind, "uniform or gaussian-blobs");
  cmd_gen->add_option("--n", gen.n, "point count")->required();
  cmd_gen->add_option("--d", gen.d, "dimensions")->required();
  cmd_gen->add_option("--k", gen.k, "blob count for gaussian-blobs");
  cmd_gen->add_option("--seed", gen.seed, "generator seed");
  cmd_gen->add_option("--output", gen.output, "dataset path (.bin for binary)")
      ->required();

  KernelOpts join_opts;
  double epsilon = 0.1;
  auto* cmd_join = app.add_subcommand("join", "epsilon self-join over a point set");
  join_opts.add_to(cmd_join, true);
  cmd_join->add_option("--epsilon", epsilon, "similarity radius");

  KernelOpts kmeans_opts;
  uint32_t k = 8, iters = 50;
  auto* cmd_kmeans = app.add_subcommand("kmeans", "Lloyd clustering over a point set");
  kmeans_opts.add_to(cmd_kmeans, true);
  cmd_kmeans->add_option("--k", k, "cluster count");
  cmd_kmeans->add_option("--iters", iters, "iteration cap");

  KernelOpts matmul_opts;
  uint32_t size = 128, block_size = 32;
  auto* cmd_matmul = app.add_subcommand("matmul", "blocked matrix multiply");
  matmul_opts.add_to(cmd_matmul, false);
  cmd_matmul->add_option("--size", size, "square matrix edge");
  cmd_matmul->add_option("--block-size", block_size, "tile edge");

  BenchOpts bench;
  auto* cmd_bench = app.add_subcommand("bench", "sweep orders, workers, packet sizes");
  cmd_bench->add_option("--kernel", bench.kernel, "join, kmeans, or matmul");
  cmd_bench->add_option("--input", bench.input, "dataset file (else generated)");
  cmd_bench->add_option("--output", bench.output, "CSV path (else stdout)");
  cmd_bench->add_option("--order", bench.orders, "comma list of orders");
  cmd_bench->add_option("--workers", bench.workers, "comma list of worker counts");
  cmd_bench->add_option("--packet-size", bench.packet_sizes, "comma list of packet sizes");
  cmd_bench->add_option("--mode", bench.mode, "static or stealing");
  cmd_bench->add_option("--n", bench.n, "generated point count");
  cmd_bench->add_option("--d", bench.d, "generated dimensions");
  cmd_bench->add_option("--seed", bench.seed, "seed");
  cmd_bench->add_option("--epsilon", bench.epsilon, "join radius");
  cmd_bench->add_option("--k", bench.k, "kmeans clusters");
  cmd_bench->add_option("--iters", bench.iters, "kmeans iteration cap");
  cmd_bench->add_option("--size", bench.size, "matmul edge");
  cmd_bench->add_option("--block-size", bench.block_size, "matmul tile edge");
  cmd_bench->add_option("--repeats", bench.repeats, "timed repetitions per row");

  LocalityOpts locality;
  auto* cmd_locality = app.add_subcommand("locality", "simulated cache misses per order");
  cmd_locality->add_option("--order", locality.orders, "comma list of orders");
  cmd_locality->add_option("--lines", locality.lines, "comma list of cache line counts");
  cmd_locality->add_option("--domain", locality.domain, "square domain edge");
  cmd_locality->add_option("--line-size", locality.line_size, "cells per cache line");
  cmd_locality->add_option("--output", locality.output, "CSV path (else stdout)");

  std::string nest_name = "all";
  std::string depcheck_output;
  auto* cmd_depcheck = app.add_subcommand("depcheck", "dependence reports for sample nests");
  cmd_depcheck->add_option("--nest", nest_name,
                           "disjoint-map, commutative-reduction, prefix-sum, or all");
  cmd_depcheck->add_option("--output", depcheck_output, "JSON path (else stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_gen)) return run_gen(gen);
    if (app.got_subcommand(cmd_join)) return run_join(join_opts, epsilon);
    if (app.got_subcommand(cmd_kmeans)) return run_kmeans(kmeans_opts, k, iters);
    if (app.got_subcommand(cmd_matmul)) return run_matmul(matmul_opts, size, block_size);
    if (app.got_subcommand(cmd_bench)) return run_bench(bench);
    if (app.got_subcommand(cmd_locality)) return run_locality(locality);
    if (app.got_subcommand(cmd_depcheck)) return run_depcheck(nest_name, depcheck_output);
  } catch (const cobl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cobl::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
