#include "cobl/point_set.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cobl {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

uint64_t Rng::integer(uint64_t bound) {
  if (bound == 0) throw ConfigError("integer bound must be >= 1");
  const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % bound;
  uint64_t v = bits();
  while (v >= limit) v = bits();
  return v % bound;
}

namespace {

void check_points(const PointSet& ps) {
  if (ps.d == 0) throw DataError("points need d >= 1");
  if (ps.data.size() != static_cast<size_t>(ps.n) * ps.d)
    throw DataError("point data size does not match the header");
  for (float v : ps.data)
    if (!std::isfinite(v)) throw DataError("points must be finite");
}

PointSet load_points_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  PointSet ps;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": missing header");
  {
    std::istringstream head(line);
    if (!(head >> ps.n >> ps.d)) throw DataError(path + ": bad header, expected 'n d'");
  }
  if (ps.d == 0) throw DataError(path + ": d must be >= 1");
  ps.data.reserve(static_cast<size_t>(ps.n) * ps.d);
  for (uint32_t i = 0; i < ps.n; ++i) {
    if (!std::getline(in, line))
      throw DataError(path + ": fewer rows than the header promises");
    const char* s = line.c_str();
    for (uint32_t j = 0; j < ps.d; ++j) {
      char* end = nullptr;
      const float v = std::strtof(s, &end);
      if (end == s) throw DataError(path + ": malformed value in row " + std::to_string(i));
      ps.data.push_back(v);
      s = end;
      while (*s == ',' || *s == ' ' || *s == '\t') ++s;
    }
  }
  check_points(ps);
  return ps;
}

}  // namespace

PointSet load_points(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  unsigned char head[8];
  in.read(reinterpret_cast<char*>(head), 8);
  if (in.gcount() == 8) {
    const uint32_t n = static_cast<uint32_t>(head[0]) | (static_cast<uint32_t>(head[1]) << 8) |
                       (static_cast<uint32_t>(head[2]) << 16) |
                       (static_cast<uint32_t>(head[3]) << 24);
    const uint32_t d = static_cast<uint32_t>(head[4]) | (static_cast<uint32_t>(head[5]) << 8) |
                       (static_cast<uint32_t>(head[6]) << 16) |
                       (static_cast<uint32_t>(head[7]) << 24);
    in.seekg(0, std::ios::end);
    const auto size = static_cast<uint64_t>(in.tellg());
    if (d >= 1 && size == 8 + uint64_t{4} * n * d) {
      PointSet ps;
      ps.n = n;
      ps.d = d;
      ps.data.resize(static_cast<size_t>(n) * d);
      in.seekg(8);
      in.read(reinterpret_cast<char*>(ps.data.data()),
              static_cast<std::streamsize>(ps.data.size() * 4));
      if (!in) throw DataError(path + ": truncated binary payload");
      check_points(ps);
      return ps;
    }
  }
  return load_points_text(path);
}

void save_points_text(const PointSet& ps, const std::string& path) {
  check_points(ps);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << ps.n << ' ' << ps.d << '\n';
  char buf[48];
  for (uint32_t i = 0; i < ps.n; ++i) {
    const auto r = ps.row(i);
    for (uint32_t j = 0; j < ps.d; ++j) {
      // 9 significant digits round-trip float32 exactly
      std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(r[j]));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

void save_points_binary(const PointSet& ps, const std::string& path) {
  check_points(ps);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  unsigned char head[8];
  for (int i = 0; i < 4; ++i) head[i] = static_cast<unsigned char>(ps.n >> (8 * i));
  for (int i = 0; i < 4; ++i) head[4 + i] = static_cast<unsigned char>(ps.d >> (8 * i));
  out.write(reinterpret_cast<const char*>(head), 8);
  out.write(reinterpret_cast<const char*>(ps.data.data()),
            static_cast<std::streamsize>(ps.data.size() * 4));
  if (!out) throw DataError("failed writing " + path);
}

PointSet gen_uniform(uint32_t n, uint32_t d, uint64_t seed) {
  if (d == 0) throw ConfigError("points need d >= 1");
  Rng rng(seed);
  PointSet ps;
  ps.n = n;
  ps.d = d;
  ps.data.reserve(static_cast<size_t>(n) * d);
  for (uint64_t i = 0; i < static_cast<uint64_t>(n) * d; ++i)
    ps.data.push_back(static_cast<float>(rng.uniform()));
  return ps;
}

PointSet gen_blobs(uint32_t n, uint32_t d, uint32_t k, uint64_t seed, double spread) {
  if (d == 0) throw ConfigError("points need d >= 1");
  if (k == 0) throw ConfigError("blobs need k >= 1");
  Rng rng(seed);
  std::vector<double> centers(static_cast<size_t>(k) * d);
  for (double& c : centers) c = rng.uniform();
  PointSet ps;
  ps.n = n;
  ps.d = d;
  ps.data.reserve(static_cast<size_t>(n) * d);
  for (uint32_t i = 0; i < n; ++i) {
    const size_t c = static_cast<size_t>(i % k) * d;
    for (uint32_t j = 0; j < d; ++j)
      ps.data.push_back(static_cast<float>(centers[c + j] + spread * rng.gaussian()));
  }
  return ps;
}

}  // namespace cobl
