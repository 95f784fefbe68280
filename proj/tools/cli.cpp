#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pastmon/errors.hpp"
#include "pastmon/syntax.hpp"

namespace pastmon::cli {

namespace {

struct Config {
  std::string spec;
  std::string spec_file;
  std::string input = "-";
  std::string output;
  bool dense = false;
  std::string semantics = "bool";
  std::string time_field = "time";
  bool no_condense = false;
  bool fail_fast = false;
  unsigned bits = 16;
  std::int64_t scale = 1000;
  bool dump_graph = false;
  bool bdd_stats = false;
  std::optional<double> end_time;
  // bench only
  std::size_t generate = 0;
  std::string property = "hist";
  std::int64_t bound = 10;
  std::uint64_t seed = 1;
};

void add_monitor_flags(CLI::App& cmd, Config& c) {
  cmd.add_option("-s,--spec", c.spec, "Specification text");
  cmd.add_option("--spec-file", c.spec_file, "File holding the specification");
  cmd.add_flag("--dense", c.dense, "Dense time: messages carry timestamps");
  cmd.add_flag("!--discrete", c.dense, "Discrete time: one step per message (default)");
  cmd.add_option("--semantics", c.semantics, "bool or robust")
      ->check(CLI::IsMember({"bool", "boolean", "robust"}));
  cmd.add_option("--timefield", c.time_field, "Timestamp field in dense mode");
  cmd.add_flag("--no-condense", c.no_condense, "Emit every verdict");
  cmd.add_flag("!--condense", c.no_condense, "Emit verdicts only on change (default)");
  cmd.add_option("--bits", c.bits, "Bits per quantified variable")->check(CLI::Range(1, 32));
  cmd.add_option("--scale", c.scale, "Dense time units per input time unit")
      ->check(CLI::PositiveNumber);
}

MonitorOptions to_options(const Config& c) {
  MonitorOptions o;
  o.time_model = c.dense ? TimeModel::dense : TimeModel::discrete;
  o.semantics = c.semantics == "robust" ? Semantics::robust : Semantics::boolean;
  o.condense = !c.no_condense;
  o.time_field = c.time_field;
  o.fo_bits = c.bits;
  o.time_scale = c.scale;
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string spec_text(const Config& c) {
  if (!c.spec.empty() && !c.spec_file.empty()) throw Error("give either --spec or --spec-file");
  if (!c.spec_file.empty()) return read_file(c.spec_file);
  if (c.spec.empty()) throw Error("a specification is required (--spec or --spec-file)");
  return c.spec;
}

// Renders a parse error with a caret under the offending position.
std::string describe(const ParseError& e, std::string_view spec) {
  std::ostringstream s;
  s << "parse error at position " << e.position() << ": " << e.detail() << "\n  " << spec
    << "\n  " << std::string(std::min(e.position(), spec.size()), ' ') << '^';
  return s.str();
}

int do_run(const Config& c, std::istream& in, std::ostream& out, std::ostream& err) {
  const std::string spec = spec_text(c);
  std::optional<Monitor> monitor;
  try {
    monitor.emplace(make_monitor(spec, to_options(c)));
  } catch (const ParseError& e) {
    err << describe(e, spec) << '\n';
    return 2;
  }
  if (c.dump_graph) err << dump(monitor->network());

  std::ifstream file;
  std::istream* source = &in;
  if (c.input != "-") {
    file.open(c.input, std::ios::binary);
    if (!file) throw Error("cannot open '" + c.input + "'");
    source = &file;
  }
  std::ofstream sink;
  std::ostream* target = &out;
  if (!c.output.empty()) {
    sink.open(c.output, std::ios::binary);
    if (!sink) throw Error("cannot write '" + c.output + "'");
    target = &sink;
  }

  bool violated = false;
  auto write = [&](const Verdict& verdict) {
    for (const VerdictEntry& e : verdict) {
      *target << to_json(e) << '\n';
      if (is_violation(e)) violated = true;
    }
  };

  std::string line;
  std::size_t number = 0;
  while (std::getline(*source, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      write(monitor->update(line));
    } catch (const Error& e) {
      target->flush();
      err << "line " << number << ": " << e.what() << '\n';
      return 2;
    }
    if (violated && c.fail_fast) break;
  }
  if (c.end_time && !(violated && c.fail_fast)) {
    try {
      write(monitor->finish(*c.end_time));
    } catch (const Error& e) {
      err << "end time: " << e.what() << '\n';
      return 2;
    }
  }
  target->flush();
  if (c.bdd_stats) {
    const std::string stats = monitor->kernel_stats();
    if (!stats.empty()) err << stats << '\n';
  }
  return violated ? 1 : 0;
}

int do_bench(const Config& c, std::istream& in, std::ostream& out, std::ostream&) {
  std::string spec = c.spec.empty() && c.spec_file.empty() && c.generate
                         ? bench_spec(c.property, c.bound)
                         : spec_text(c);
  std::vector<std::string> lines;
  if (c.generate) {
    lines = generate_trace(c.generate, c.seed);
  } else {
    std::ifstream file;
    std::istream* source = &in;
    if (c.input != "-") {
      file.open(c.input, std::ios::binary);
      if (!file) throw Error("cannot open '" + c.input + "'");
      source = &file;
    }
    std::string line;
    while (std::getline(*source, line)) lines.push_back(std::move(line));
  }
  Monitor monitor = make_monitor(spec, to_options(c));
  BenchReport report = bench(monitor, lines);
  out << report.to_json() << '\n';
  return 0;
}

int do_dump(const Config& c, std::ostream& out, std::ostream& err) {
  const std::string spec = spec_text(c);
  try {
    Monitor monitor = make_monitor(spec, to_options(c));
    out << dump(monitor.network());
  } catch (const ParseError& e) {
    err << describe(e, spec) << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Online past-time temporal logic monitor for NDJSON streams", "pastmon"};
  app.require_subcommand(1);
  Config c;

  CLI::App* run = app.add_subcommand("run", "Monitor a stream and print verdicts as NDJSON");
  add_monitor_flags(*run, c);
  run->add_option("input", c.input, "Input file, '-' for standard input");
  run->add_option("-o,--output", c.output, "Write verdicts to a file");
  run->add_flag("--fail-fast", c.fail_fast, "Stop at the first violation");
  run->add_flag("--dump-graph", c.dump_graph, "Print the compiled network to standard error");
  run->add_flag("--bdd-stats", c.bdd_stats, "Print BDD kernel statistics to standard error");
  run->add_option("--end-time", c.end_time, "Close the last dense span at this time");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Measure per-message processing time");
  add_monitor_flags(*bench_cmd, c);
  bench_cmd->add_option("input", c.input, "Input file, '-' for standard input");
  bench_cmd->add_option("--generate", c.generate, "Generate this many messages instead of reading");
  bench_cmd->add_option("--property", c.property, "Generated property shape")
      ->check(CLI::IsMember({"absent_aq", "always_br", "recur_bqr", "hist"}));
  bench_cmd->add_option("--bound", c.bound, "Time bound of the generated property")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", c.seed, "Generator seed");

  CLI::App* dump_cmd = app.add_subcommand("dump-graph", "Print the compiled network");
  add_monitor_flags(*dump_cmd, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return do_run(c, in, out, err);
    if (*bench_cmd) return do_bench(c, in, out, err);
    return do_dump(c, out, err);
  } catch (const ParseError& e) {
    err << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

std::string BenchReport::to_json() const {
  nlohmann::ordered_json j;
  j["messages"] = messages;
  j["wall_ns"] = wall_ns;
  j["ns_per_message"] = ns_per_message();
  j["decode_ns"] = decode_ns;
  j["engine_ns"] = engine_ns;
  return j.dump();
}

BenchReport bench(Monitor& monitor, const std::vector<std::string>& lines) {
  using Clock = std::chrono::steady_clock;
  auto ns = [](Clock::duration d) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(d).count();
  };
  // Decode and evaluate in chunks so the two phases can be timed without
  // holding every decoded message at once.
  constexpr std::size_t kChunk = 4096;
  BenchReport report;
  std::vector<Message> batch;
  batch.reserve(kChunk);
  const auto start = Clock::now();
  for (std::size_t i = 0; i < lines.size();) {
    batch.clear();
    const auto t0 = Clock::now();
    for (; i < lines.size() && batch.size() < kChunk; ++i) {
      if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
      batch.push_back(decode_message(lines[i], monitor.options()));
    }
    const auto t1 = Clock::now();
    for (const Message& m : batch) monitor.update(m);
    const auto t2 = Clock::now();
    report.decode_ns += ns(t1 - t0);
    report.engine_ns += ns(t2 - t1);
    report.messages += batch.size();
  }
  report.wall_ns = ns(Clock::now() - start);
  if (report.messages == 0) throw Error("no messages");
  return report;
}

std::string bench_spec(std::string_view property, std::int64_t bound) {
  const std::string b = std::to_string(bound);
  if (property == "absent_aq") return "(once[0:" + b + "] {q}) -> not {p}";
  if (property == "always_br") return "{r} -> always[0:" + b + "] {p}";
  if (property == "recur_bqr") {
    return "({r} and not {q} and once {q}) -> ((once[0:" + b + "] ({p} or {q})) since {q})";
  }
  if (property == "hist") return "always[0:" + b + "] {p}";
  throw Error("unknown benchmark property '" + std::string(property) + "'");
}

std::vector<std::string> generate_trace(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution p_holds(0.97), q_event(0.01), r_event(0.01);
  std::vector<std::string> lines;
  lines.reserve(count);
  auto flag = [](bool b) { return b ? "true" : "false"; };
  for (std::size_t i = 0; i < count; ++i) {
    std::string line = "{\"p\":";
    line += flag(p_holds(rng));
    line += ",\"q\":";
    line += flag(q_event(rng));
    line += ",\"r\":";
    line += flag(r_event(rng));
    line += '}';
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace pastmon::cli
