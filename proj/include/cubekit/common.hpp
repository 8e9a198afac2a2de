#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cubekit {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using HyperplaneId = std::uint32_t;

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
// Margin of a vertex in an action without boundary.
inline constexpr std::uint32_t kUnbounded = std::numeric_limits<std::uint32_t>::max();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Operation called outside its precondition (unvalidated graph, non-convex set, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Input exceeds a configured limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A bounded search ended without an answer; the question stays open.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

// Worker count used by the parallel kernels. Results never depend on it.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(begin, end) over fixed-size chunks of [0, count). Chunk boundaries
// depend only on count and chunk, so per-chunk reductions combined in chunk
// order are schedule-independent.
void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

// FNV-1a, 64 bit. Used for graph/action digests in certificates.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

std::vector<std::string> split_ws(std::string_view line);
std::string_view trim(std::string_view s);

}  // namespace cubekit
