#pragma once

// Monitor facade: compile a specification once, then feed messages.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pastmon/behavior.hpp"
#include "pastmon/network.hpp"
#include "pastmon/options.hpp"

namespace pastmon {

using VerdictValue = std::variant<bool, double>;

/// Value of the specification from `time` on (input time units).
struct VerdictEntry {
  double time = 0.0;
  VerdictValue value;
  friend bool operator==(const VerdictEntry&, const VerdictEntry&) = default;
};

/// Entries produced by one update. Discrete monitors produce at most one
/// entry; dense monitors produce one entry per segment of the elapsed span.
using Verdict = std::vector<VerdictEntry>;

class Monitor {
 public:
  Monitor(std::shared_ptr<const MonitorNetwork> network, MonitorOptions options);
  ~Monitor();
  Monitor(Monitor&&) noexcept;
  Monitor& operator=(Monitor&&) noexcept;

  /// Processes one message. On error nothing changes.
  Verdict update(const Message& msg);
  Verdict update(std::string_view json_line);

  /// Reports the span from the last message up to `end_time` (dense only) and
  /// advances the clock to it.
  Verdict finish(double end_time);

  /// Index of the last message (discrete, -1 before any) or the last
  /// timestamp (dense, 0 before any).
  double now() const;

  const MonitorNetwork& network() const { return *network_; }
  const MonitorOptions& options() const { return options_; }
  const PersistentState& state() const { return state_; }
  /// BDD kernel statistics as a JSON object; empty unless first-order.
  std::string kernel_stats() const;

 struct Engine;  // defined in the implementation

 private:

  void check_types(const Message& msg) const;
  Verdict emit(Verdict raw);

  std::shared_ptr<const MonitorNetwork> network_;
  MonitorOptions options_;
  std::unique_ptr<Engine> engine_;
  PersistentState state_;
  std::optional<Time> last_scaled_;
  std::int64_t count_ = 0;
  std::optional<VerdictValue> last_emitted_;
};

Monitor make_monitor(std::string_view spec, const MonitorOptions& options = {},
                     const PredicateRegistry& predicates = {});

/// Verdict entry as a one-line JSON object {"time": ..., "value": ...}.
/// Infinite robustness values are written as the strings "inf" and "-inf".
std::string to_json(const VerdictEntry& entry);

/// True when the entry reports a violation: false, or negative robustness.
bool is_violation(const VerdictEntry& entry);

}  // namespace pastmon
