#pragma once

#include <cstdint>
#include <string>

namespace pastmon {

enum class TimeModel { discrete, dense };
enum class Semantics { boolean, robust };

struct MonitorOptions {
  TimeModel time_model = TimeModel::discrete;
  Semantics semantics = Semantics::boolean;
  bool condense = true;
  std::string time_field = "time";
  // Internal integer time units per input time unit (dense only).
  std::int64_t time_scale = 1000;
  // Bits per quantified variable in the first-order engine.
  unsigned fo_bits = 16;
  // Merge structurally identical subexpressions while compiling.
  bool cse = true;

  MonitorOptions& discrete() { time_model = TimeModel::discrete; return *this; }
  MonitorOptions& dense() { time_model = TimeModel::dense; return *this; }
  MonitorOptions& robust() { semantics = Semantics::robust; return *this; }
  MonitorOptions& disable_condensing() { condense = false; return *this; }
};

const char* to_string(TimeModel model);
const char* to_string(Semantics semantics);

}  // namespace pastmon
