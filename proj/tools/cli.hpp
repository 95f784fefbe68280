#pragma once

// Command-line front end. The logic lives in a library so tests can drive it
// with in-memory streams.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pastmon/monitor.hpp"

namespace pastmon::cli {

/// Entry point of the `pastmon` executable. Returns the process exit status:
/// 0 when no violation was seen, 1 on a violation, 2 on any error.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

struct BenchReport {
  std::size_t messages = 0;
  std::int64_t wall_ns = 0;
  std::int64_t decode_ns = 0;
  std::int64_t engine_ns = 0;

  double ns_per_message() const {
    return messages ? static_cast<double>(wall_ns) / static_cast<double>(messages) : 0.0;
  }
  std::string to_json() const;
};

/// Decodes and evaluates every line, timing the two phases separately.
/// Throws Error("no messages") when `lines` holds no message.
BenchReport bench(Monitor& monitor, const std::vector<std::string>& lines);

// Property shapes of the generated benchmark, each over boolean fields p, q, r.
//   absent_aq:  p never holds within `bound` steps after q
//   always_br:  p holds since q, within `bound`, whenever r closes the scope
//   recur_bqr:  p or q recurs every `bound` steps inside a q..r scope
//   hist:       p held throughout the last `bound` steps
std::string bench_spec(std::string_view property, std::int64_t bound);

/// Deterministic trace of `count` messages over p, q, r (discrete time).
std::vector<std::string> generate_trace(std::size_t count, std::uint64_t seed = 1);

}  // namespace pastmon::cli
