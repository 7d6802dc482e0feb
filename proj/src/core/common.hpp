#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace driftbench {

enum class errc {
  invalid_argument,
  io,
  parse,
  config,
  runtime,
};

class db_error : public std::runtime_error {
 public:
  db_error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw db_error(code, what); }

// Shortest decimal representation that parses back to the identical value.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) fail(errc::invalid_argument, "cannot format non-finite value");
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(errc::runtime, "double formatting failed");
  return std::string(buf, ptr);
}

// Strict full-token parse; rejects non-finite results.
inline double parse_double_exact(const std::string& text, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(errc::parse, where + ": malformed number '" + text + "'");
  if (!std::isfinite(v)) fail(errc::parse, where + ": non-finite value '" + text + "'");
  return v;
}

inline int64_t parse_int_exact(const std::string& text, const std::string& where) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(errc::parse, where + ": malformed integer '" + text + "'");
  return v;
}

inline uint64_t parse_uint_exact(const std::string& text, const std::string& where) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(errc::parse, where + ": malformed unsigned integer '" + text + "'");
  return v;
}

inline uint64_t fnv1a64(const void* data, std::size_t len, uint64_t seed = 0xcbf29ce484222325ull) {
  const unsigned char* bytes = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace driftbench
