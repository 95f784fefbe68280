#pragma once

#include <map>
#include <string>
#include <variant>

namespace pastmon {

/// A scalar JSON value: null, boolean, finite number or string.
using ScalarValue = std::variant<std::monostate, bool, double, std::string>;

/// Field key to value, ordered so that iteration and comparison are deterministic.
using FieldMap = std::map<std::string, ScalarValue, std::less<>>;

inline bool is_null(const ScalarValue& v) { return std::holds_alternative<std::monostate>(v); }
inline bool is_number(const ScalarValue& v) { return std::holds_alternative<double>(v); }
inline bool is_string(const ScalarValue& v) { return std::holds_alternative<std::string>(v); }
inline bool is_bool(const ScalarValue& v) { return std::holds_alternative<bool>(v); }

std::string to_string(const ScalarValue& v);

}  // namespace pastmon
