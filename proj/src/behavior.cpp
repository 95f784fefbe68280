#include "pastmon/behavior.hpp"

#include <cmath>

#include <json.hpp>

#include "pastmon/errors.hpp"

namespace pastmon {

namespace {

ScalarValue to_scalar(const nlohmann::json& j, const std::string& key) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return std::monostate{};
    case nlohmann::json::value_t::boolean: return j.get<bool>();
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
    case nlohmann::json::value_t::number_float: {
      double x = j.get<double>();
      if (!std::isfinite(x)) throw DecodeError("non-finite number for field '" + key + "'");
      return x;
    }
    case nlohmann::json::value_t::string: return j.get<std::string>();
    default: throw DecodeError("non-scalar value for field '" + key + "'");
  }
}

nlohmann::json to_json(const ScalarValue& v) {
  if (is_bool(v)) return std::get<bool>(v);
  if (is_number(v)) {
    double x = std::get<double>(v);
    if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
    return x;
  }
  if (is_string(v)) return std::get<std::string>(v);
  return nullptr;
}

}  // namespace

Message decode_message(std::string_view line, const MonitorOptions& options) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) throw DecodeError("malformed JSON");
  if (!j.is_object()) throw DecodeError("message is not a JSON object");

  Message msg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    msg.fields.insert_or_assign(it.key(), to_scalar(it.value(), it.key()));
  }
  if (options.time_model == TimeModel::dense) {
    auto it = msg.fields.find(options.time_field);
    if (it == msg.fields.end())
      throw DecodeError("missing timestamp field '" + options.time_field + "'");
    if (!is_number(it->second))
      throw DecodeError("timestamp field '" + options.time_field + "' is not a number");
    double t = std::get<double>(it->second);
    if (t < 0) throw DecodeError("negative timestamp");
    msg.timestamp = t;
    msg.fields.erase(it);
  }
  return msg;
}

std::string encode_message(const Message& msg, const MonitorOptions& options) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (options.time_model == TimeModel::dense && msg.timestamp) {
    j[options.time_field] = to_json(*msg.timestamp);
  }
  for (const auto& [key, value] : msg.fields) j[key] = to_json(value);
  return j.dump();
}

void PersistentState::apply(const Message& msg) {
  double next = 0;
  if (msg.timestamp) {
    next = *msg.timestamp;
    if (last_time && next <= *last_time) {
      throw MonotonicityError("timestamp " + to_string(ScalarValue(next)) +
                              " does not exceed previous timestamp " +
                              to_string(ScalarValue(*last_time)));
    }
  } else {
    next = last_time ? *last_time + 1 : 0;
  }
  for (const auto& [key, value] : msg.fields) {
    if (is_null(value)) {
      auto it = current.find(key);
      if (it != current.end()) current.erase(it);
    } else {
      current.insert_or_assign(key, value);
    }
  }
  last_time = next;
}

PersistentState apply_delta(const PersistentState& state, const Message& msg) {
  PersistentState next = state;
  next.apply(msg);
  return next;
}

double extract_timestamp(const Message& msg, std::size_t index, TimeModel model) {
  if (model == TimeModel::discrete) return static_cast<double>(index);
  return msg.timestamp.value_or(0.0);
}

}  // namespace pastmon
