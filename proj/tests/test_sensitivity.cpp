#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskbn/models.hpp"
#include "riskbn/sensitivity.hpp"

using namespace riskbn;
using namespace riskbn::testing;

TEST_CASE("a d-separated parameter has zero spread") {
  // a -> b -> c; with b observed, a cannot influence c
  Network net = build_network(
      {binary("a"), binary("b", {"a"}), binary("c", {"b"})},
      {prior(0.3), binary_cpt({0.9, 0.2}), binary_cpt({0.8, 0.1})});
  SensitivityTarget target{"c", "TRUE", {{"b", "TRUE"}}};
  std::vector<TornadoEntry> entries = tornado(net, target);
  for (const auto& e : entries)
    if (e.parameter.node == "a") CHECK(e.spread <= 1e-14);
}

TEST_CASE("identity parameter sweeps the full interval width") {
  // target = child with its parent observed: posterior equals the swept entry
  Network net = chain(0.3, 0.6, 0.2);
  SensitivityTarget target{"b", "TRUE", {{"a", "TRUE"}}};
  TornadoOptions options;
  options.include_target = true;
  std::vector<TornadoEntry> entries = tornado(net, target, options);
  // the entry for b's column under a=TRUE (config 0)
  bool found = false;
  for (const auto& e : entries) {
    if (e.parameter.node != "b" || e.parameter.config_index != 0) continue;
    found = true;
    CHECK(e.low == doctest::Approx(0.54).epsilon(1e-12));
    CHECK(e.high == doctest::Approx(0.66).epsilon(1e-12));
    CHECK(e.spread == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(e.baseline == doctest::Approx(0.6).epsilon(1e-12));
  }
  CHECK(found);
}

TEST_CASE("the target node's own parameters are excluded by default") {
  Network net = chain(0.3, 0.6, 0.2);
  std::vector<TornadoEntry> entries = tornado(net, {"b", "TRUE", {}});
  for (const auto& e : entries) CHECK(e.parameter.node != "b");
}

TEST_CASE("baseline posterior is always inside [low, high]") {
  const Network net = models::scenario("seabed").network;
  std::vector<TornadoEntry> entries = tornado(net, {"loss_of_eely", "TRUE", {}});
  REQUIRE(!entries.empty());
  for (const auto& e : entries) {
    CHECK(e.low <= e.baseline + 1e-15);
    CHECK(e.high >= e.baseline - 1e-15);
    CHECK(e.spread >= 0.0);
  }
}

TEST_CASE("near-zero sweeps produce near-zero spreads") {
  const Network net = models::scenario("seabed").network;
  TornadoOptions options;
  options.sweep = 1e-6;
  std::vector<TornadoEntry> entries =
      tornado(net, {"loss_of_eely", "TRUE", {}}, options);
  for (const auto& e : entries) CHECK(e.spread < 1e-4);
}

TEST_CASE("ties break by declaration then configuration index") {
  // b's two columns hold the same entry and a is uniform, so sweeping either
  // column produces bitwise-identical spreads; order must fall back to the
  // configuration index
  Network net = build_network(
      {binary("a"), binary("b", {"a"}), binary("c", {"b"})},
      {prior(0.5), binary_cpt({0.4, 0.4}), binary_cpt({0.9, 0.1})});
  std::vector<TornadoEntry> entries = tornado(net, {"c", "TRUE", {}});
  std::vector<const TornadoEntry*> b_entries;
  for (const auto& e : entries)
    if (e.parameter.node == "b") b_entries.push_back(&e);
  REQUIRE(b_entries.size() == 2);
  CHECK(b_entries[0]->spread == b_entries[1]->spread);
  CHECK(b_entries[0]->parameter.config_index == 0);
  CHECK(b_entries[1]->parameter.config_index == 1);
}

TEST_CASE("roots-only mode sweeps only priors") {
  const Network net = models::scenario("confined").network;
  TornadoOptions options;
  options.roots_only = true;
  std::vector<TornadoEntry> entries =
      tornado(net, {"loss_of_eely", "TRUE", {}}, options);
  CHECK(entries.size() == 15);  // one column per root
  for (const auto& e : entries) CHECK(e.parameter.parent_config.empty());
}

TEST_CASE("0/1 parameters are swept additively and flagged") {
  const Network net = models::scenario("confined").network;
  std::vector<TornadoEntry> entries = tornado(net, {"loss_of_eely", "TRUE", {}});
  bool saw_additive = false;
  for (const auto& e : entries) {
    if (e.parameter.node == "failure_of_propulsion_system" && e.additive) {
      saw_additive = true;  // the deterministic thruster-failure columns
      CHECK(e.spread <= 0.01);
    }
  }
  CHECK(saw_additive);
}

TEST_CASE("three-state columns stay normalized while swept") {
  Network net = build_network(
      {NodeSpec{"mode", {"low", "mid", "high"}, {}},
       binary("out", {"mode"})},
      {Cpt{3, 1, {0.2, 0.5, 0.3}}, binary_cpt({0.9, 0.5, 0.1})});
  // sweeping the 3-state prior must renormalize the other two entries; the
  // rebuilt network would fail validation otherwise
  std::vector<TornadoEntry> entries = tornado(net, {"out", "TRUE", {}});
  REQUIRE(!entries.empty());
  CHECK(entries[0].parameter.state == "low");
  CHECK(entries[0].spread > 0.0);
}

TEST_CASE("node importance groups by maximum spread") {
  std::vector<TornadoEntry> entries(3);
  entries[0].parameter = {"x", "TRUE", {}, 0, 0};
  entries[0].spread = 0.05;
  entries[1].parameter = {"x", "TRUE", {}, 0, 1};
  entries[1].spread = 0.2;
  entries[2].parameter = {"y", "TRUE", {}, 1, 0};
  entries[2].spread = 0.1;
  auto ranked = node_importance(entries);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].first == "x");
  CHECK(ranked[0].second == 0.2);
  CHECK(ranked[1].first == "y");

  auto single = node_importance({entries[2]});
  REQUIRE(single.size() == 1);
  CHECK(single[0].second == 0.1);
}

TEST_CASE("sweep arguments are validated") {
  Network net = chain(0.3, 0.6, 0.2);
  TornadoOptions bad;
  bad.sweep = 0.0;
  CHECK_THROWS_AS(tornado(net, {"b", "TRUE", {}}, bad), Error);
  bad.sweep = 0.1;
  bad.points = 4;
  CHECK_THROWS_AS(tornado(net, {"b", "TRUE", {}}, bad), Error);
  CHECK_THROWS_AS(tornado(net, {"b", "TRUE", {{"b", "TRUE"}}}), Error);
}

TEST_CASE("tornado CSV and SVG are deterministic") {
  Network net = chain(0.3, 0.6, 0.2);
  auto entries = tornado(net, {"b", "TRUE", {}});
  CHECK(tornado_csv(entries) == tornado_csv(entries));
  CHECK(tornado_svg(entries) == tornado_svg(entries));
  CHECK(tornado_csv(entries).substr(0, 5) == "rank,");
  CHECK(tornado_svg(entries).substr(0, 4) == "<svg");
}

TEST_CASE("the top tornado bar on the confined model is autonomous control") {
  const Network net = models::scenario("confined").network;
  auto entries = tornado(net, {"loss_of_eely", "TRUE", {}});
  REQUIRE(entries.size() >= 10);
  std::vector<TornadoEntry> top10(entries.begin(), entries.begin() + 10);
  std::string svg = tornado_svg(top10);
  std::size_t first_label = svg.find("<text x=\"4\"");
  REQUIRE(first_label != std::string::npos);
  std::size_t end = svg.find("</text>", first_label);
  CHECK(svg.substr(first_label, end - first_label)
            .find("failure_of_autonomous_control") != std::string::npos);
}

TEST_CASE("a single entry draws a single bar spanning low to high") {
  Network net = chain(0.3, 0.6, 0.2);
  auto entries = tornado(net, {"b", "TRUE", {}});
  REQUIRE(entries.size() == 1);  // one root, one column
  std::string svg = tornado_svg(entries);
  std::size_t bars = 0, pos = 0;
  while ((pos = svg.find("<rect", pos)) != std::string::npos) {
    ++bars;
    pos += 5;
  }
  CHECK(bars == 1);
  CHECK(svg.find(entries[0].parameter.node) != std::string::npos);
}
