#pragma once

// Message decoding and persistent (delta-decoded) state.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "pastmon/options.hpp"
#include "pastmon/value.hpp"

namespace pastmon {

struct Message {
  FieldMap fields;
  std::optional<double> timestamp;  // dense time only

  friend bool operator==(const Message&, const Message&) = default;
};

/// Decodes one flat JSON object. In dense mode the configured time field is
/// moved out of `fields` into `timestamp`.
Message decode_message(std::string_view line, const MonitorOptions& options);

/// Inverse of decode_message; used by generators and tests.
std::string encode_message(const Message& msg, const MonitorOptions& options);

/// Latest known value of every field.
struct PersistentState {
  FieldMap current;
  std::optional<double> last_time;

  /// Overwrites fields from `msg`, drops fields set to null and advances the
  /// clock. Leaves the state untouched when it throws.
  void apply(const Message& msg);

  friend bool operator==(const PersistentState&, const PersistentState&) = default;
};

PersistentState apply_delta(const PersistentState& state, const Message& msg);

/// Position in discrete time, the explicit stamp in dense time.
double extract_timestamp(const Message& msg, std::size_t index, TimeModel model);

}  // namespace pastmon
