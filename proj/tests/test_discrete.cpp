#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pastmon/behavior.hpp"
#include "pastmon/errors.hpp"

using namespace pastmon;
using testing::run_discrete;

namespace {

oracle::Trace decode_all(const std::vector<std::string>& lines) {
  oracle::Trace out;
  PersistentState s;
  for (const auto& l : lines) {
    s.apply(decode_message(l, MonitorOptions{}));
    out.push_back(s.current);
  }
  return out;
}

const std::vector<std::string> kFullState = {
    R"({"p1": false, "nd": 1.23, "enm1": "A"})", R"({"p1": true, "nd": 0.01, "enm1": "A"})",
    R"({"p1": true, "nd": 9.12, "enm1": "B"})",  R"({"p1": true, "nd": 9.12, "enm1": "B"})",
    R"({"p1": false, "nd": 9.18, "enm1": "C"})",
};

}  // namespace

TEST_CASE("atomic constraint list over the categorical example") {
  auto v = run_discrete<bool>(R"({p1: true, nd > 9.0, enm1: "B"})", decode_all(kFullState));
  CHECK(v == std::vector<bool>{false, false, true, true, false});
}

TEST_CASE("pre is false at the first step") {
  oracle::Trace tr(3, FieldMap{{"p", true}});
  CHECK(run_discrete<bool>("pre {p}", tr) == std::vector<bool>{false, true, true});
  CHECK(run_discrete<bool>("pre not {p}", tr) == std::vector<bool>{false, false, false});
}

TEST_CASE("robustness of comparisons") {
  oracle::Trace tr{{{"nd", 0.01}}};
  CHECK(run_discrete<double>("{nd > 9.0}", tr, MonitorOptions{}.robust())[0] ==
        doctest::Approx(-8.99));
  oracle::Trace p{{{"p", -1.1}}, {{"p", 1.1}}, {{"p", -1.1}}};
  CHECK(run_discrete<double>("once {p > 0}", p, MonitorOptions{}.robust()) ==
        std::vector<double>{-1.1, 1.1, 1.1});
  CHECK(run_discrete<double>("{p < 0}", p, MonitorOptions{}.robust()) ==
        std::vector<double>{1.1, -1.1, 1.1});
  CHECK(run_discrete<double>("{p == -1.1}", p, MonitorOptions{}.robust()) ==
        std::vector<double>{oracle::kInf, -oracle::kInf, oracle::kInf});
  CHECK(run_discrete<double>("{missing > 0}", p, MonitorOptions{}.robust())[0] == -oracle::kInf);
}

TEST_CASE("ordering comparison against a string is a type error") {
  auto m = make_monitor("{x > 1}");
  CHECK_THROWS_AS(m.update(R"({"x": "text"})"), TypeError);
  CHECK(m.now() == -1);
}

TEST_CASE("untimed operators over the door trace") {
  std::vector<std::string> lines = {
      R"({"open": false, "suppr": false, "warn": false})",
      R"({"open": true, "suppr": false, "warn": false})",
      R"({"open": true, "suppr": false, "warn": false})",
      R"({"open": true, "suppr": false, "warn": false})",
      R"({"open": true, "suppr": false, "warn": false})",
      R"({"open": true, "suppr": false, "warn": false})",
      R"({"open": true, "suppr": false, "warn": true})",
      R"({"open": true, "suppr": true, "warn": false})",
      R"({"open": true, "suppr": true, "warn": false})",
  };
  auto tr = decode_all(lines);
  CHECK(run_discrete<bool>("H[0:5]{open}", tr) ==
        std::vector<bool>{false, false, false, false, false, false, true, true, true});
  CHECK(run_discrete<bool>("{open} since {warn}", tr) ==
        std::vector<bool>{false, false, false, false, false, false, true, true, true});
  CHECK(run_discrete<bool>("once[1:2] {warn}", tr) ==
        std::vector<bool>{false, false, false, false, false, false, false, true, true});
  for (const char* s : {"(H[0:5]{open} and not{suppr}) -> {warn}", "{warn} -> H[0:5]{open}",
                        "{warn} -> not{suppr}", "{warn} -> not(pre({open} since {warn}))"}) {
    auto v = run_discrete<bool>(s, tr);
    CHECK(std::all_of(v.begin(), v.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("random boolean formulas match the reference semantics") {
  std::mt19937_64 rng(21);
  oracle::ExprShape shape;
  oracle::TraceShape tshape;
  for (int i = 0; i < 400; ++i) {
    auto e = oracle::random_expr(rng, shape);
    auto tr = oracle::random_trace(rng, tshape, 25);
    const std::string text = to_string(*e);
    CAPTURE(text);
    CHECK(run_discrete<bool>(text, tr) == oracle::discrete<bool>(*e, tr));
  }
}

TEST_CASE("random robust formulas match the reference semantics") {
  std::mt19937_64 rng(22);
  oracle::ExprShape shape;
  shape.numeric_atoms = true;
  oracle::TraceShape tshape;
  tshape.embed_booleans = true;
  for (int i = 0; i < 400; ++i) {
    auto e = oracle::random_expr(rng, shape);
    auto tr = oracle::random_trace(rng, tshape, 25);
    const std::string text = to_string(*e);
    CAPTURE(text);
    CHECK(run_discrete<double>(text, tr, MonitorOptions{}.robust()) ==
          oracle::discrete<double>(*e, tr));
  }
}

TEST_CASE("robust since matches the max-min definition on 20-step traces") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3, 3);
  auto e = parse("{p > 0} since {q > 0}");
  for (int i = 0; i < 100; ++i) {
    oracle::Trace tr(20);
    for (auto& s : tr) {
      s["p"] = std::round(u(rng) * 4) / 4;
      s["q"] = std::round(u(rng) * 4) / 4;
    }
    CHECK(run_discrete<double>("{p > 0} since {q > 0}", tr, MonitorOptions{}.robust()) ==
          oracle::discrete<double>(*e, tr));
  }
}

TEST_CASE("custom predicates are evaluated per step") {
  PredicateRegistry r{{"even", [](const FieldMap& f) {
                         auto it = f.find("n");
                         return it != f.end() && static_cast<long>(std::get<double>(it->second)) % 2 == 0;
                       }}};
  oracle::Trace tr{{{"n", 1.0}}, {{"n", 2.0}}, {{"n", 3.0}}};
  CHECK(run_discrete<bool>("${even}", tr, {}, r) == std::vector<bool>{false, true, false});
  CHECK(run_discrete<bool>("once ${even}", tr, {}, r) == std::vector<bool>{false, true, true});
}
