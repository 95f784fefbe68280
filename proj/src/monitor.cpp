#include "pastmon/monitor.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "pastmon/dense.hpp"
#include "pastmon/discrete.hpp"
#include "pastmon/errors.hpp"
#include "pastmon/first_order.hpp"

namespace pastmon {

struct Monitor::Engine {
  std::variant<BooleanEngine, RobustEngine, DenseBooleanEngine, DenseRobustEngine,
               FirstOrderEngine>
      impl;
};

namespace {

std::unique_ptr<Monitor::Engine> make_engine(const std::shared_ptr<const MonitorNetwork>& net,
                                              const MonitorOptions& options) {
  using E = Monitor::Engine;
  const bool robust = net->semantics == Semantics::robust;
  if (net->time_model == TimeModel::dense) {
    if (robust) return std::unique_ptr<E>(new E{DenseRobustEngine(net)});
    return std::unique_ptr<E>(new E{DenseBooleanEngine(net)});
  }
  if (net->first_order()) return std::unique_ptr<E>(new E{FirstOrderEngine(net, options.fo_bits)});
  if (robust) return std::unique_ptr<E>(new E{RobustEngine(net)});
  return std::unique_ptr<E>(new E{BooleanEngine(net)});
}

bool contains(const std::vector<std::string>& sorted, const std::string& key) {
  return std::binary_search(sorted.begin(), sorted.end(), key);
}

}  // namespace

// Engine is incomplete in the header; spell out the special members here.
Monitor::Monitor(std::shared_ptr<const MonitorNetwork> network, MonitorOptions options)
    : network_(std::move(network)), options_(std::move(options)) {
  engine_ = make_engine(network_, options_);
}
Monitor::~Monitor() = default;
Monitor::Monitor(Monitor&&) noexcept = default;
Monitor& Monitor::operator=(Monitor&&) noexcept = default;

void Monitor::check_types(const Message& msg) const {
  for (const auto& [key, value] : msg.fields) {
    if (is_null(value)) continue;
    if (!is_number(value) && contains(network_->numeric_keys, key)) {
      throw TypeError("field '" + key + "' compared numerically but holds " + to_string(value));
    }
    if (!is_string(value) && contains(network_->string_keys, key)) {
      throw TypeError("field '" + key + "' bound to a reference variable but holds " +
                      to_string(value));
    }
  }
}

Verdict Monitor::update(std::string_view json_line) {
  return update(decode_message(json_line, options_));
}

Verdict Monitor::update(const Message& msg) {
  check_types(msg);
  const bool dense = network_->time_model == TimeModel::dense;

  if (!dense) {
    // Undo log so a throwing engine step leaves the state as it was.
    std::vector<std::pair<std::string, std::optional<ScalarValue>>> undo;
    for (const auto& [key, value] : msg.fields) {
      auto it = state_.current.find(key);
      undo.emplace_back(key, it == state_.current.end() ? std::nullopt
                                                        : std::optional<ScalarValue>(it->second));
    }
    const auto previous_time = state_.last_time;
    state_.apply(msg);
    VerdictValue value;
    try {
      const Time t = count_;
      std::visit(
          [&](auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, BooleanEngine> || std::is_same_v<T, RobustEngine> ||
                          std::is_same_v<T, FirstOrderEngine>) {
              value = e.step(state_.current, t);
            }
          },
          engine_->impl);
    } catch (...) {
      for (auto& [key, old] : undo) {
        if (old) {
          state_.current.insert_or_assign(key, *old);
        } else {
          state_.current.erase(key);
        }
      }
      state_.last_time = previous_time;
      throw;
    }
    Verdict raw{{static_cast<double>(count_), value}};
    ++count_;
    return emit(std::move(raw));
  }

  if (!msg.timestamp) {
    throw DecodeError("message has no '" + options_.time_field + "' timestamp");
  }
  const double stamp = *msg.timestamp;
  const auto scaled = static_cast<Time>(std::llround(stamp * static_cast<double>(network_->time_scale)));
  if (last_scaled_ && scaled <= *last_scaled_) {
    throw MonotonicityError("timestamp " + to_string(ScalarValue(stamp)) +
                            " does not advance past " +
                            to_string(ScalarValue(*state_.last_time)));
  }
  PersistentState next = apply_delta(state_, msg);

  Verdict raw;
  if (last_scaled_) {
    const Time begin = *last_scaled_;
    const double scale = static_cast<double>(network_->time_scale);
    std::visit(
        [&](auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, DenseBooleanEngine>) {
            for (const auto& s : to_segments(e.update(state_.current, begin, scaled), begin, scaled))
              raw.push_back({static_cast<double>(s.begin) / scale, s.value});
          } else if constexpr (std::is_same_v<T, DenseRobustEngine>) {
            for (const auto& s : condense(e.update(state_.current, begin, scaled)))
              raw.push_back({static_cast<double>(s.begin) / scale, s.value});
          }
        },
        engine_->impl);
  }
  state_ = std::move(next);
  last_scaled_ = scaled;
  ++count_;
  return emit(std::move(raw));
}

Verdict Monitor::emit(Verdict raw) {
  if (!options_.condense) return raw;
  Verdict out;
  for (auto& entry : raw) {
    if (last_emitted_ && *last_emitted_ == entry.value) continue;
    last_emitted_ = entry.value;
    out.push_back(std::move(entry));
  }
  return out;
}

Verdict Monitor::finish(double end_time) {
  if (network_->time_model != TimeModel::dense) {
    throw UnsupportedFeature("finish applies to dense time only");
  }
  Message msg;
  msg.timestamp = end_time;
  return update(msg);
}

double Monitor::now() const {
  if (network_->time_model == TimeModel::dense) return state_.last_time.value_or(0.0);
  return static_cast<double>(count_ - 1);
}

std::string Monitor::kernel_stats() const {
  if (auto* fo = std::get_if<FirstOrderEngine>(&engine_->impl)) return fo->kernel().stats();
  return {};
}

Monitor make_monitor(std::string_view spec, const MonitorOptions& options,
                     const PredicateRegistry& predicates) {
  ExprPtr expr = validate(parse(spec), options);
  auto net = std::make_shared<const MonitorNetwork>(compile(expr, options, predicates));
  return Monitor(std::move(net), options);
}

std::string to_json(const VerdictEntry& entry) {
  nlohmann::ordered_json j;
  double integral = 0.0;
  if (std::modf(entry.time, &integral) == 0.0 && std::fabs(entry.time) < 9e15) {
    j["time"] = static_cast<std::int64_t>(entry.time);
  } else {
    j["time"] = entry.time;
  }
  if (const bool* b = std::get_if<bool>(&entry.value)) {
    j["value"] = *b;
  } else {
    const double v = std::get<double>(entry.value);
    if (std::isinf(v)) {
      j["value"] = v > 0 ? "inf" : "-inf";
    } else {
      j["value"] = v;
    }
  }
  return j.dump();
}

bool is_violation(const VerdictEntry& entry) {
  if (const bool* b = std::get_if<bool>(&entry.value)) return !*b;
  return std::get<double>(entry.value) < 0.0;
}

}  // namespace pastmon
