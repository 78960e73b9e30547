#pragma once

// Stable 64-bit result digests. Values are canonicalized to text first
// (floats at 12 significant digits, integers in decimal) so digests are
// reproducible across platforms and runs; the hash is FNV-1a.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace cobl {

class Digest {
 public:
  void bytes(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h_ ^= p[i];
      h_ *= 1099511628211ull;
    }
  }

  void text(std::string_view s) { bytes(s.data(), s.size()); }

  void u64(uint64_t v) {
    char buf[24];
    const int len = std::snprintf(buf, sizeof buf, "%llu\n",
                                  static_cast<unsigned long long>(v));
    bytes(buf, static_cast<size_t>(len));
  }

  void i64(int64_t v) {
    char buf[24];
    const int len = std::snprintf(buf, sizeof buf, "%lld\n", static_cast<long long>(v));
    bytes(buf, static_cast<size_t>(len));
  }

  void f64(double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.12g\n", v);
    bytes(buf, static_cast<size_t>(len));
  }

  uint64_t value() const { return h_; }

  static std::string hex(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf, 16);
  }

 private:
  uint64_t h_ = 14695981039346656037ull;
};

}  // namespace cobl
