#pragma once

// Drivers that feed traces through the public monitor API.

#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pastmon/monitor.hpp"

namespace testing {

using pastmon::FieldMap;
using pastmon::Message;
using pastmon::MonitorOptions;

/// Every key used anywhere in the trace.
inline std::set<std::string> keys_of(const std::vector<FieldMap>& states) {
  std::set<std::string> keys;
  for (const auto& s : states)
    for (const auto& [k, v] : s) keys.insert(k);
  return keys;
}

/// Full-state message: keys absent from `state` are sent as null so that
/// persistence does not carry stale values forward.
inline Message full_message(const FieldMap& state, const std::set<std::string>& keys) {
  Message m;
  for (const auto& k : keys) {
    auto it = state.find(k);
    m.fields[k] = it == state.end() ? pastmon::ScalarValue{} : it->second;
  }
  return m;
}

template <class V>
std::vector<V> run_discrete(std::string_view spec, const oracle::Trace& trace,
                            MonitorOptions options = {},
                            const pastmon::PredicateRegistry& registry = {}) {
  options.condense = false;
  auto monitor = pastmon::make_monitor(spec, options, registry);
  const auto keys = keys_of(trace);
  std::vector<V> out;
  for (const auto& state : trace) {
    auto verdict = monitor.update(full_message(state, keys));
    REQUIRE(verdict.size() == 1);
    out.push_back(std::get<V>(verdict[0].value));
  }
  return out;
}

/// Feeds a dense trace and returns the raw verdict entries plus the final
/// span up to the last stamp.
inline pastmon::Verdict run_dense(std::string_view spec, const oracle::DenseTrace& trace,
                                  MonitorOptions options) {
  options.time_model = pastmon::TimeModel::dense;
  auto monitor = pastmon::make_monitor(spec, options);
  const auto keys = keys_of(trace.states);
  pastmon::Verdict all;
  for (std::size_t i = 0; i < trace.stamps.size(); ++i) {
    Message m = full_message(trace.states[i], keys);
    m.timestamp = trace.stamps[i];
    for (auto& e : monitor.update(m)) all.push_back(e);
  }
  return all;
}

/// Value of a dense verdict at time t (the entry in force at t).
inline pastmon::VerdictValue value_at(const pastmon::Verdict& v, double t) {
  const pastmon::VerdictEntry* found = nullptr;
  for (const auto& e : v)
    if (e.time <= t + 1e-9) found = &e;
  REQUIRE(found != nullptr);
  return found->value;
}

}  // namespace testing
