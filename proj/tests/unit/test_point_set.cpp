#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "cobl/digest.hpp"
#include "cobl/errors.hpp"
#include "cobl/point_set.hpp"

using namespace cobl;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("seeded generation is deterministic and in range") {
  const PointSet a = gen_uniform(500, 3, 11);
  const PointSet b = gen_uniform(500, 3, 11);
  CHECK(a.data == b.data);
  CHECK(a.n == 500);
  CHECK(a.d == 3);
  REQUIRE(a.data.size() == 1500);
  for (const float v : a.data) {
    CHECK(v >= 0.0f);
    CHECK(v < 1.0f);
  }
  const PointSet c = gen_uniform(500, 3, 12);
  CHECK(a.data != c.data);

  const PointSet blobs = gen_blobs(300, 4, 5, 3);
  CHECK(blobs.n == 300);
  CHECK(blobs.d == 4);
  CHECK(blobs.data == gen_blobs(300, 4, 5, 3).data);
}

TEST_CASE("text round-trip preserves float32 values exactly") {
  const PointSet ps = gen_uniform(64, 5, 2);
  const std::string path = temp_path("cobl_pts_text.txt");
  save_points_text(ps, path);
  const PointSet back = load_points(path);
  CHECK(back.n == ps.n);
  CHECK(back.d == ps.d);
  CHECK(back.data == ps.data);
  std::filesystem::remove(path);
}

TEST_CASE("binary round-trip is byte-stable") {
  const PointSet ps = gen_blobs(128, 3, 4, 9);
  const std::string path = temp_path("cobl_pts_bin.bin");
  save_points_binary(ps, path);
  const std::string bytes1 = slurp(path);
  save_points_binary(ps, path);
  CHECK(slurp(path) == bytes1);
  REQUIRE(bytes1.size() == 8 + ps.data.size() * 4);

  const PointSet back = load_points(path);
  CHECK(back.n == ps.n);
  CHECK(back.d == ps.d);
  CHECK(back.data == ps.data);
  std::filesystem::remove(path);
}

TEST_CASE("malformed inputs are diagnosed") {
  const std::string path = temp_path("cobl_pts_bad.txt");

  std::ofstream(path) << "not a header\n";
  CHECK_THROWS_AS(load_points(path), DataError);

  std::ofstream(path) << "2 3\n1,2,3\n4,5\n";  // short row
  CHECK_THROWS_AS(load_points(path), DataError);

  std::ofstream(path) << "3 2\n1,2\n";  // fewer rows than the header claims
  CHECK_THROWS_AS(load_points(path), DataError);

  CHECK_THROWS_AS(load_points(temp_path("cobl_no_such_file.txt")), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("generator internals are stable across runs") {
  Rng a(77), b(77);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(5);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t v = c.integer(17);
    CHECK(v < 17);
    seen.insert(v);
  }
  CHECK(seen.size() == 17);  // all residues show up over 1000 draws
}

TEST_CASE("digest is the 64-bit FNV-1a with canonical number text") {
  Digest empty;
  CHECK(empty.value() == 14695981039346656037ull);
  CHECK(Digest::hex(empty.value()) == "cbf29ce484222325");

  Digest a;
  a.text("a");
  CHECK(a.value() == 0xaf63dc4c8601ec8cull);

  // numbers hash via their decimal text, newline terminated
  Digest n1, n2;
  n1.u64(123);
  n2.text("123\n");
  CHECK(n1.value() == n2.value());

  Digest f1, f2;
  f1.f64(0.1);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g\n", 0.1);
  f2.text(buf);
  CHECK(f1.value() == f2.value());

  // different content, different digest
  Digest x, y;
  x.text("abc");
  y.text("abd");
  CHECK(x.value() != y.value());
}
