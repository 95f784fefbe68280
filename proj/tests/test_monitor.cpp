#include <doctest.h>

#include <fstream>
#include <random>

#include "helpers.hpp"
#include "pastmon/errors.hpp"
#include "pastmon/pastmon.hpp"

using namespace pastmon;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(f, l);) out.push_back(l);
  return out;
}

const std::string kDoor = std::string(PASTMON_TEST_DATA) + "/dow_trace.ndjson";

}  // namespace

TEST_CASE("fresh monitors report their start time") {
  auto m = make_monitor("(H[0:5]{open} && !{suppr})->{warn}");
  CHECK(m.now() == -1);
  CHECK(make_monitor("{p}", MonitorOptions{}.dense()).now() == 0);
  CHECK_THROWS_AS(make_monitor("{p} since"), ParseError);
}

TEST_CASE("door monitor holds at every step") {
  auto opts = MonitorOptions{}.disable_condensing();
  auto m = make_monitor("(H[0:5]{open} and not{suppr}) -> {warn}", opts);
  auto lines = read_lines(kDoor);
  REQUIRE(lines.size() == 9);
  for (const auto& l : lines) {
    auto v = m.update(l);
    REQUIRE(v.size() == 1);
    CHECK(v[0].value == VerdictValue{true});
  }
  CHECK(m.now() == 8);
}

TEST_CASE("one options value builds independent monitors") {
  MonitorOptions opts;
  opts.disable_condensing();
  auto a = make_monitor("once {p}", opts);
  auto b = make_monitor("once {p}", opts);
  a.update(R"({"p": true})");
  CHECK(b.update(R"({"p": false})")[0].value == VerdictValue{false});
  CHECK(a.now() == 0);
  CHECK(b.now() == 0);
}

TEST_CASE("robust verdicts carry the margin") {
  auto m = make_monitor("{p > 0}", MonitorOptions{}.robust());
  CHECK(m.update(R"({"p": 1.1})")[0].value == VerdictValue{1.1});
}

TEST_CASE("condensing emits on change and re-expands to the full stream") {
  std::mt19937_64 rng(51);
  oracle::ExprShape shape;
  oracle::TraceShape tshape;
  for (int i = 0; i < 100; ++i) {
    auto e = oracle::random_expr(rng, shape);
    auto tr = oracle::random_trace(rng, tshape, 30);
    const std::string text = to_string(*e);
    auto full = testing::run_discrete<bool>(text, tr);
    auto m = make_monitor(text);
    auto keys = testing::keys_of(tr);
    std::vector<bool> expanded;
    std::optional<bool> current;
    for (std::size_t t = 0; t < tr.size(); ++t) {
      auto v = m.update(testing::full_message(tr[t], keys));
      if (t == 0) REQUIRE(v.size() == 1);
      if (!v.empty()) {
        CHECK(v[0].time == double(t));
        CHECK((!current || *current != std::get<bool>(v[0].value)));
        current = std::get<bool>(v[0].value);
      }
      expanded.push_back(*current);
    }
    CHECK(expanded == full);
  }
}

TEST_CASE("failed updates change nothing") {
  auto opts = MonitorOptions{}.disable_condensing();
  auto a = make_monitor("once[1:3] {x > 1} or {s: \"k\"}", opts);
  auto b = make_monitor("once[1:3] {x > 1} or {s: \"k\"}", opts);
  const char* good[] = {R"({"x": 2})", R"({"x": 0, "s": "k"})", R"({"s": "j"})", R"({"x": 1})",
                        R"({})", R"({"x": 3})"};
  for (int i = 0; i < 6; ++i) {
    CHECK_THROWS(a.update(R"({"x": "bad", "s": "k"})"));
    CHECK_THROWS(a.update(R"({"x": )"));
    CHECK(a.now() == b.now());
    CHECK(a.update(good[i]) == b.update(good[i]));
    CHECK(a.state() == b.state());
  }

  auto d = make_monitor("once[0:2] {p}", MonitorOptions{}.dense());
  d.update(R"({"time": 1, "p": true})");
  CHECK_THROWS_AS(d.update(R"({"time": 1, "p": false})"), MonotonicityError);
  CHECK_THROWS_AS(d.update(R"({"time": 0.5})"), MonotonicityError);
  CHECK(d.now() == 1);
  auto v = d.update(R"({"time": 2, "p": false})");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == VerdictEntry{1, true});
}

TEST_CASE("chunked replay equals one pass") {
  auto lines = read_lines(kDoor);
  auto whole = make_monitor("{warn} -> not(pre({open} since {warn}))");
  Verdict all;
  for (const auto& l : lines)
    for (auto& e : whole.update(l)) all.push_back(e);
  // Replaying in two chunks through the same monitor object is the same
  // stream; building a fresh monitor per chunk would not be.
  auto split = make_monitor("{warn} -> not(pre({open} since {warn}))");
  Verdict parts;
  for (std::size_t i = 0; i < 4; ++i)
    for (auto& e : split.update(lines[i])) parts.push_back(e);
  for (std::size_t i = 4; i < lines.size(); ++i)
    for (auto& e : split.update(lines[i])) parts.push_back(e);
  CHECK(all == parts);
}

TEST_CASE("dense condensing merges across updates") {
  auto m = make_monitor("{p}", MonitorOptions{}.dense());
  m.update(R"({"time": 0, "p": true})");
  CHECK(m.update(R"({"time": 1, "p": true})").size() == 1);
  CHECK(m.update(R"({"time": 2, "p": false})").empty());
  auto v = m.update(R"({"time": 3})");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == VerdictEntry{2, false});
}

TEST_CASE("verdicts serialize to one JSON object") {
  CHECK(to_json({3, true}) == R"({"time":3,"value":true})");
  CHECK(to_json({1.5, -2.25}) == R"({"time":1.5,"value":-2.25})");
  CHECK(to_json({0, std::numeric_limits<double>::infinity()}) == R"({"time":0,"value":"inf"})");
  CHECK(is_violation({0, false}));
  CHECK(is_violation({0, -0.5}));
  CHECK(!is_violation({0, 0.0}));
}

TEST_CASE("dense monitors accept a custom time field") {
  MonitorOptions o = MonitorOptions{}.dense();
  o.time_field = "ts";
  auto m = make_monitor("{p}", o);
  m.update(R"({"ts": 0, "p": true})");
  CHECK(m.update(R"({"ts": 3.5, "p": false})").size() == 1);
  CHECK(m.now() == 3.5);
}
