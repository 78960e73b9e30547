#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the installed command surface: every invocation runs
// the real binary in a child process and inspects exit code, stdout, stderr,
// and produced files.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path p =
        fs::temp_directory_path() / ("cobl_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunResult run(const std::string& args) {
  const fs::path out = workdir() / "stdout.txt";
  const fs::path err = workdir() / "stderr.txt";
  const std::string cmd = std::string("\"") + COBL_CLI_PATH + "\" " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string dataset(const std::string& name, const std::string& gen_args) {
  const fs::path path = workdir() / name;
  if (!fs::exists(path)) {
    const RunResult r = run("gen " + gen_args + " --output " + path.string());
    REQUIRE(r.code == 0);
  }
  return path.string();
}

bool is_hex16(const std::string& s) {
  if (s.size() != 16) return false;
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

}  // namespace

TEST_CASE("version and help") {
  const RunResult v = run("--version");
  CHECK(v.code == 0);
  CHECK(!v.out.empty());
  CHECK(run("--help").code == 0);
  CHECK(run("join --help").code == 0);
}

TEST_CASE("generation is reproducible byte for byte") {
  const fs::path a = workdir() / "gen_a.txt";
  const fs::path b = workdir() / "gen_b.txt";
  const RunResult ra = run("gen --kind uniform --n 200 --d 3 --seed 42 --output " + a.string());
  const RunResult rb = run("gen --kind uniform --n 200 --d 3 --seed 42 --output " + b.string());
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(slurp(a) == slurp(b));
  const json ja = json::parse(ra.out);
  const json jb = json::parse(rb.out);
  CHECK(ja.at("digest") == jb.at("digest"));
  CHECK(is_hex16(ja.at("digest").get<std::string>()));

  // binary output holds the same points, so the join result must agree
  const fs::path bin = workdir() / "gen_a.bin";
  REQUIRE(run("gen --kind uniform --n 200 --d 3 --seed 42 --output " + bin.string()).code == 0);
  const RunResult jt = run("join --input " + a.string() + " --epsilon 0.2 --repeats 1");
  const RunResult jbn = run("join --input " + bin.string() + " --epsilon 0.2 --repeats 1");
  REQUIRE(jt.code == 0);
  REQUIRE(jbn.code == 0);
  CHECK(json::parse(jt.out).at("digest") == json::parse(jbn.out).at("digest"));
}

TEST_CASE("join agrees with its oracle and reports a stable digest") {
  const std::string input = dataset("pts_join.txt", "--kind uniform --n 500 --d 2 --seed 7");
  const std::string args = "join --input " + input + " --epsilon 0.1 --oracle --repeats 1";
  const RunResult r1 = run(args);
  REQUIRE(r1.code == 0);
  const json j1 = json::parse(r1.out);
  CHECK(j1.at("config").at("oracle-match") == true);
  CHECK(j1.at("config").at("interval_violations") == 0);
  CHECK(is_hex16(j1.at("digest").get<std::string>()));
  CHECK(j1.at("version").is_string());

  const RunResult r2 = run(args);
  REQUIRE(r2.code == 0);
  CHECK(json::parse(r2.out).at("digest") == j1.at("digest"));

  // pair file in CSV form
  const fs::path pairs = workdir() / "pairs.csv";
  REQUIRE(run(args + " --format csv --output " + pairs.string()).code == 0);
  const std::string text = slurp(pairs);
  CHECK(text.rfind("a,b,distance\n", 0) == 0);
}

TEST_CASE("kmeans digest is worker-count independent") {
  const std::string input = dataset("pts_kmeans.txt",
                                    "--kind gaussian-blobs --n 1000 --d 4 --k 5 --seed 9");
  const std::string base =
      "kmeans --input " + input + " --k 5 --iters 30 --seed 3 --repeats 1";
  const RunResult p1 = run(base + " --workers 1");
  const RunResult p4 = run(base + " --workers 4");
  const RunResult p4s = run(base + " --workers 4 --mode static");
  REQUIRE(p1.code == 0);
  REQUIRE(p4.code == 0);
  REQUIRE(p4s.code == 0);
  const json j1 = json::parse(p1.out);
  const json j4 = json::parse(p4.out);
  CHECK(j1.at("digest") == j4.at("digest"));
  CHECK(j1.at("digest") == json::parse(p4s.out).at("digest"));
  CHECK(j4.at("workers") == 4);

  const RunResult oracle = run(base + " --workers 4 --oracle");
  REQUIRE(oracle.code == 0);
  CHECK(json::parse(oracle.out).at("config").at("oracle-match") == true);
}

TEST_CASE("matmul digest is order and worker independent") {
  const std::string base = "matmul --size 48 --block-size 16 --seed 5 --repeats 1";
  const RunResult hil = run(base + " --order hilbert --workers 4 --oracle");
  REQUIRE(hil.code == 0);
  const json jh = json::parse(hil.out);
  CHECK(jh.at("config").at("oracle-match") == true);
  CHECK(jh.at("phases") == 3);  // ceil(48 / 16)
  for (const std::string variant :
       {" --order zorder --workers 2", " --order rowmajor --workers 1",
        " --order hilbert --workers 8 --mode static"}) {
    const RunResult r = run(base + variant);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).at("digest") == jh.at("digest"));
  }
}

TEST_CASE("bench emits a full sweep with consistent digests") {
  const RunResult r = run(
      "bench --kernel join --n 400 --d 2 --seed 11 --epsilon 0.15 "
      "--order hilbert,rowmajor --workers 1,2 --packet-size 64 --repeats 1");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);  // header + 2 orders x 2 worker counts
  CHECK(rows[0] == std::vector<std::string>{"kernel", "order", "workers", "packet_size",
                                            "mode", "wall_ms", "speedup", "steals",
                                            "digest"});
  const std::string digest = rows[1][8];
  CHECK(is_hex16(digest));
  for (size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 9);
    CHECK(rows[i][0] == "join");
    CHECK((rows[i][1] == "hilbert" || rows[i][1] == "rowmajor"));
    CHECK(rows[i][8] == digest);
    if (rows[i][2] == "1") CHECK(rows[i][6] == "1.0000");
  }
}

TEST_CASE("locality misses favor the space-filling order under pressure") {
  const RunResult r = run("locality --domain 64 --order hilbert,rowmajor --lines 64,256");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"order", "lines", "misses"});
  uint64_t misses[2][2] = {};  // [order][lines]
  for (size_t i = 1; i < rows.size(); ++i) {
    const int o = rows[i][0] == "hilbert" ? 0 : 1;
    const int l = rows[i][1] == "64" ? 0 : 1;
    misses[o][l] = std::stoull(rows[i][2]);
  }
  CHECK(misses[0][0] < misses[1][0]);   // strict win under pressure
  CHECK(misses[0][1] <= misses[1][1]);  // never worse with room to spare
}

TEST_CASE("depcheck classifies the sample nests") {
  const RunResult r = run("depcheck");
  REQUIRE(r.code == 0);
  const json all = json::parse(r.out);
  REQUIRE(all.is_array());
  REQUIRE(all.size() == 3);
  for (const json& entry : all) {
    const json& report = entry.at("report");
    const json& validation = entry.at("validation");
    CHECK(validation.at("verifiable") == true);
    CHECK(validation.at("pass") == true);
    const std::string name = entry.at("nest").get<std::string>();
    if (name == "disjoint-map") {
      CHECK(report.at("safe_unordered") == true);
      CHECK(report.at("conflicts").empty());
    } else if (name == "commutative-reduction") {
      CHECK(report.at("safe_unordered") == true);
      CHECK(!report.at("conflicts").empty());
      for (const json& c : report.at("conflicts"))
        CHECK(c.at("commutative_reduce") == true);
    } else {
      CHECK(name == "prefix-sum");
      CHECK(report.at("safe_unordered") == false);
      CHECK(report.at("schedulable") == true);
      CHECK(report.at("required_monotone_dims") == json::array({0}));
    }
  }

  // single nest to a file
  const fs::path out = workdir() / "dep.json";
  REQUIRE(run("depcheck --nest prefix-sum --output " + out.string()).code == 0);
  const json one = json::parse(slurp(out));
  REQUIRE(one.size() == 1);
  CHECK(one[0].at("nest") == "prefix-sum");
}

TEST_CASE("kernel reports carry the resolved configuration") {
  const std::string input = dataset("pts_join.txt", "--kind uniform --n 500 --d 2 --seed 7");
  const RunResult r = run("join --input " + input +
                          " --epsilon 0.05 --workers 2 --packet-size 128 --repeats 1");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  for (const char* key : {"config", "wall_ms", "mode", "workers", "packets", "phases",
                          "steals", "digest", "version"})
    CHECK(j.contains(key));
  CHECK(j.at("config").at("command") == "join");
  CHECK(j.at("config").at("epsilon") == 0.05);
  CHECK(j.at("config").at("packet_size") == 128);
  CHECK(j.at("mode") == "stealing");
  CHECK(j.at("workers") == 2);
  CHECK(j.at("wall_ms").get<double>() >= 0.0);
}

TEST_CASE("usage and runtime failures map to distinct exit codes") {
  CHECK(run("join --input /no/such/file.txt --epsilon 0.1").code == 2);
  CHECK(run("join --epsilon 0.1").code == 2);            // --input missing
  CHECK(run("nonsense").code == 2);                      // unknown subcommand
  CHECK(run("join --frobnicate 1").code == 2);           // unknown flag
  CHECK(run("gen --n 10 --output x.txt").code == 2);     // required --d missing
  CHECK(run("bench --kernel quicksort").code == 2);      // unknown kernel
  CHECK(run("matmul --size 8 --block-size 0").code == 2);
  CHECK(run("locality --domain 1024").code == 2);        // trace budget exceeded

  const std::string input = dataset("pts_join.txt", "--kind uniform --n 500 --d 2 --seed 7");
  CHECK(run("join --input " + input + " --epsilon -1").code == 2);
  CHECK(run("join --input " + input + " --epsilon 0.1 --workers 0").code == 2);
  CHECK(run("kmeans --input " + input + " --k 0").code == 2);
}
