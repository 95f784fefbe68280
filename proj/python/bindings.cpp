#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>

#include "pastmon/pastmon.hpp"

namespace py = pybind11;
using namespace pastmon;

namespace {

ScalarValue to_scalar(const py::handle& value, const std::string& key) {
  if (value.is_none()) return std::monostate{};
  // bool before int: Python bools are ints.
  if (py::isinstance<py::bool_>(value)) return value.cast<bool>();
  if (py::isinstance<py::int_>(value) || py::isinstance<py::float_>(value)) {
    double d = value.cast<double>();
    if (!std::isfinite(d)) throw DecodeError("field '" + key + "' is not a finite number");
    return d;
  }
  if (py::isinstance<py::str>(value)) return value.cast<std::string>();
  throw DecodeError("field '" + key + "' is not a scalar");
}

py::object from_scalar(const ScalarValue& v) {
  if (auto b = std::get_if<bool>(&v)) return py::bool_(*b);
  if (auto d = std::get_if<double>(&v)) return py::float_(*d);
  if (auto s = std::get_if<std::string>(&v)) return py::str(*s);
  return py::none();
}

// Same shape as the command line output.
py::object time_value(double t) {
  if (std::floor(t) == t && std::fabs(t) < 9e15) return py::int_(static_cast<long long>(t));
  return py::float_(t);
}

py::dict to_dict(const VerdictEntry& e) {
  py::dict out;
  out["time"] = time_value(e.time);
  if (auto b = std::get_if<bool>(&e.value)) {
    out["value"] = py::bool_(*b);
  } else {
    double d = std::get<double>(e.value);
    if (std::isinf(d)) out["value"] = py::str(d > 0 ? "inf" : "-inf");
    else out["value"] = py::float_(d);
  }
  return out;
}

class PyMonitor {
 public:
  PyMonitor(const std::string& spec, bool dense, bool robust, bool condense,
            const std::string& timefield, std::int64_t scale, unsigned bits,
            const std::map<std::string, py::function>& predicates)
      : monitor_(build(spec, dense, robust, condense, timefield, scale, bits, predicates)) {}

  py::object update(const py::dict& message) {
    Message msg;
    const auto& opts = monitor_.options();
    for (auto [k, v] : message) {
      std::string key = py::str(k);
      ScalarValue value = to_scalar(v, key);
      if (opts.time_model == TimeModel::dense && key == opts.time_field) {
        if (!is_number(value)) throw DecodeError("time field '" + key + "' must be a number");
        msg.timestamp = std::get<double>(value);
      } else {
        msg.fields.emplace(std::move(key), std::move(value));
      }
    }
    return wrap(monitor_.update(msg));
  }

  py::object finish(double end_time) { return wrap(monitor_.finish(end_time)); }
  double now() const { return monitor_.now(); }
  std::string kernel_stats() const { return monitor_.kernel_stats(); }

 private:
  static Monitor build(const std::string& spec, bool dense, bool robust, bool condense,
                       const std::string& timefield, std::int64_t scale, unsigned bits,
                       const std::map<std::string, py::function>& predicates) {
    MonitorOptions options;
    options.time_model = dense ? TimeModel::dense : TimeModel::discrete;
    options.semantics = robust ? Semantics::robust : Semantics::boolean;
    options.condense = condense;
    options.time_field = timefield;
    options.time_scale = scale;
    options.fo_bits = bits;
    PredicateRegistry registry;
    for (const auto& [name, fn] : predicates) {
      registry.emplace(name, [fn](const FieldMap& fields) {
        py::gil_scoped_acquire gil;
        py::dict arg;
        for (const auto& [k, v] : fields) arg[py::str(k)] = from_scalar(v);
        return py::bool_(fn(arg)).cast<bool>();
      });
    }
    return make_monitor(spec, options, registry);
  }

  // Discrete monitors return one dict (or None when condensed away); dense
  // monitors return a list.
  py::object wrap(const Verdict& v) const {
    if (monitor_.options().time_model == TimeModel::dense) {
      py::list out;
      for (const auto& e : v) out.append(to_dict(e));
      return std::move(out);
    }
    if (v.empty()) return py::none();
    return to_dict(v.front());
  }

  Monitor monitor_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online past-time temporal logic monitors";

  // Leaked on purpose: the translator may run until interpreter shutdown.
  static py::handle error = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
  static py::handle parse_error =
      py::exception<ParseError>(m, "ParseError", error.ptr()).release();
  static py::handle type_error = py::exception<TypeError>(m, "TypeError", error.ptr()).release();
  static py::handle capacity_error =
      py::exception<CapacityError>(m, "CapacityError", error.ptr()).release();
  static py::handle order_error =
      py::exception<MonotonicityError>(m, "MonotonicityError", error.ptr()).release();
  static py::handle decode_error =
      py::exception<DecodeError>(m, "DecodeError", error.ptr()).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::object inst = parse_error(e.what());
      inst.attr("position") = e.position();
      PyErr_SetObject(parse_error.ptr(), inst.ptr());
    } catch (const TypeError& e) {
      PyErr_SetString(type_error.ptr(), e.what());
    } catch (const CapacityError& e) {
      PyErr_SetString(capacity_error.ptr(), e.what());
    } catch (const MonotonicityError& e) {
      PyErr_SetString(order_error.ptr(), e.what());
    } catch (const DecodeError& e) {
      PyErr_SetString(decode_error.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<PyMonitor>(m, "Monitor")
      .def(py::init<const std::string&, bool, bool, bool, const std::string&, std::int64_t,
                    unsigned, const std::map<std::string, py::function>&>(),
           py::arg("spec"), py::arg("dense"), py::arg("robust"), py::arg("condense"),
           py::arg("timefield"), py::arg("scale"), py::arg("bits"), py::arg("predicates"))
      .def("update", &PyMonitor::update, py::arg("message"))
      .def("finish", &PyMonitor::finish, py::arg("end_time"))
      .def("now", &PyMonitor::now)
      .def("kernel_stats", &PyMonitor::kernel_stats);
}
