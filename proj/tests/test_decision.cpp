#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "riskbn/decision.hpp"
#include "riskbn/models.hpp"

using namespace riskbn;
using namespace riskbn::testing;

namespace {

/// weather -> utility(d, weather); d=a pays off when weather is TRUE.
DecisionNetwork weather_dn() {
  Network net = build_network(
      {NodeSpec{"d", {"a", "b"}, {}}, binary("weather")},
      {Cpt{2, 1, {0.5, 0.5}}, prior(0.5)});
  DecisionNode d{"d", {"a", "b"}, {}};
  UtilityNode u{"payoff", {"d", "weather"}, {10.0, 0.0, 0.0, 10.0}};
  return DecisionNetwork(std::move(net), {d}, {u});
}

}  // namespace

TEST_CASE("expected utility of a constant table is the constant") {
  DecisionNetwork dn = weather_dn();
  DecisionNetwork flat(
      dn.graph(), dn.decisions(),
      {UtilityNode{"five", {"weather"}, {5.0, 5.0}},
       UtilityNode{"absolute", {}, {2.5}}});
  CHECK(expected_utility(flat, {{"d", "a"}}, {}) ==
        doctest::Approx(7.5).epsilon(1e-12));
  CHECK(expected_utility(flat, {{"d", "b"}}, {{"weather", "TRUE"}}) ==
        doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("expected utility is additive across utility nodes") {
  DecisionNetwork dn = weather_dn();
  UtilityNode u = dn.utilities()[0];
  DecisionNetwork doubled(dn.graph(), dn.decisions(),
                          {u, UtilityNode{"again", u.parents, u.table}});
  double once = expected_utility(dn, {{"d", "a"}}, {});
  double twice = expected_utility(doubled, {{"d", "a"}}, {});
  CHECK(twice == doctest::Approx(2.0 * once).epsilon(1e-12));
}

TEST_CASE("decisions outside the chance graph scale the loss posterior") {
  models::ScenarioBundle bundle = models::scenario("confined");
  // dangling decision; utility = -1000 * [loss_of_eely=TRUE]
  std::vector<NodeSpec> specs;
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < bundle.network.size(); ++i) {
    specs.push_back(bundle.network.spec(i));
    cpts.push_back(bundle.network.cpt(i));
  }
  specs.push_back(NodeSpec{"free_choice", {"x", "y"}, {}});
  cpts.push_back(Cpt{2, 1, {0.5, 0.5}});
  Network net = build_network(std::move(specs), std::move(cpts));
  DecisionNetwork dn(std::move(net), {DecisionNode{"free_choice", {"x", "y"}, {}}},
                     {UtilityNode{"penalty", {"loss_of_eely"}, {-1000.0, 0.0}}});
  double p_loss = posterior_ve(bundle.network, {{"loss_of_eely"}, {}})
                      .of("loss_of_eely")
                      .probabilities[0];
  double eu = expected_utility(dn, {{"free_choice", "y"}}, {});
  CHECK(eu == doctest::Approx(-1000.0 * p_loss).epsilon(1e-10));
}

TEST_CASE("optimal policy picks the strictly better alternative") {
  DecisionNetwork dn = weather_dn();
  Policy p = optimal_policy(dn, {{"weather", "TRUE"}});
  CHECK(p.choice("d") == "a");
  CHECK(p.expected_utility == doctest::Approx(10.0));
  Policy q = optimal_policy(dn, {{"weather", "FALSE"}});
  CHECK(q.choice("d") == "b");
}

TEST_CASE("constant utility falls back to the first alternatives") {
  models::ScenarioBundle bundle = models::scenario("confined");
  DecisionNetwork flat(bundle.decision.graph(), bundle.decision.decisions(),
                       {UtilityNode{"flat", {}, {1.0}}});
  Policy p = optimal_policy(flat, {});
  CHECK(p.choice("altitude_set_point") == "low");
  CHECK(p.choice("speed_set_point") == "slow");
  CHECK(p.choice("control_strategy") == "platforming");
  CHECK(p.choice("shape_configuration") == "torpedo");
}

TEST_CASE("optimal policy matches exhaustive enumeration on the bundled DN") {
  models::ScenarioBundle bundle = models::scenario("confined");
  const DecisionNetwork& dn = bundle.decision;
  Policy best = optimal_policy(dn, {});
  // brute force over all joint assignments
  double best_eu = -1e300;
  DecisionAssignment best_assignment;
  std::vector<std::size_t> idx(dn.decisions().size(), 0);
  while (true) {
    DecisionAssignment a;
    for (std::size_t k = 0; k < dn.decisions().size(); ++k)
      a.emplace(dn.decisions()[k].id, dn.decisions()[k].alternatives[idx[k]]);
    double eu = expected_utility(dn, a, {});
    if (eu > best_eu) {
      best_eu = eu;
      best_assignment = a;
    }
    std::size_t k = dn.decisions().size();
    bool done = true;
    while (k-- > 0) {
      if (++idx[k] < dn.decisions()[k].alternatives.size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
  CHECK(best.assignment() == best_assignment);
  CHECK(best.expected_utility == doctest::Approx(best_eu).epsilon(1e-12));
}

TEST_CASE("argmax is invariant under positive affine utility maps") {
  DecisionNetwork dn = weather_dn();
  Evidence ev{{"weather", "TRUE"}};
  Policy base = optimal_policy(dn, ev);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> scale(0.1, 10.0), offset(-50.0, 50.0);
  for (int it = 0; it < 20; ++it) {
    double a = scale(rng), b = offset(rng);
    UtilityNode u = dn.utilities()[0];
    for (double& v : u.table) v = a * v + b;
    DecisionNetwork mapped(dn.graph(), dn.decisions(), {u});
    Policy p = optimal_policy(mapped, ev);
    CHECK(p.choices == base.choices);
    CHECK(p.expected_utility ==
          doctest::Approx(a * base.expected_utility + b).epsilon(1e-9));
  }
}

TEST_CASE("guard of one is exactly the optimal policy") {
  DecisionNetwork dn = weather_dn();
  Evidence ev{{"weather", "FALSE"}};
  std::vector<Recommendation> history;
  history.push_back(recommend_with_guards(dn, {{"weather", "TRUE"}}, {},
                                          DwellGuard{1}, {}));
  Recommendation rec =
      recommend_with_guards(dn, ev, history, DwellGuard{1}, {});
  CHECK(rec.emitted.choices == optimal_policy(dn, ev).choices);
}

TEST_CASE("dwell guard suppresses alternating recommendations") {
  DecisionNetwork dn = weather_dn();
  std::vector<Recommendation> history;
  DwellGuard guard{3};
  std::string first_emitted;
  int switches = 0;
  for (int call = 0; call < 10; ++call) {
    Evidence ev{{"weather", call % 2 == 0 ? "TRUE" : "FALSE"}};
    Recommendation rec = recommend_with_guards(dn, ev, history, guard, {});
    if (history.empty()) {
      first_emitted = rec.emitted.choice("d");
    } else if (rec.emitted.choice("d") !=
               history.back().emitted.choice("d")) {
      ++switches;
    }
    history.push_back(rec);
  }
  CHECK(switches == 0);
  CHECK(history.back().emitted.choice("d") == first_emitted);
  // candidates did alternate underneath
  CHECK(history[0].candidate.choice("d") != history[1].candidate.choice("d"));
}

TEST_CASE("a persistent change is eventually emitted") {
  DecisionNetwork dn = weather_dn();
  std::vector<Recommendation> history;
  DwellGuard guard{3};
  history.push_back(
      recommend_with_guards(dn, {{"weather", "TRUE"}}, {}, guard, {}));
  CHECK(history.back().emitted.choice("d") == "a");
  Evidence flipped{{"weather", "FALSE"}};
  for (int call = 0; call < 3; ++call)
    history.push_back(
        recommend_with_guards(dn, flipped, history, guard, {}));
  CHECK(history[1].emitted.choice("d") == "a");  // suppressed
  CHECK(history[2].emitted.choice("d") == "a");  // suppressed
  CHECK(history[3].emitted.choice("d") == "b");  // third consecutive call
}

TEST_CASE("safety overrides force their fragment regardless of utility") {
  models::ScenarioBundle bundle = models::scenario("confined");
  SafetyOverride abort_on_risk{
      "abort-on-risk",
      [](const DecisionNetwork& dn, const Evidence& ev) {
        Posterior post = posterior_ve(dn.graph(), {{"loss_of_eely"}, ev});
        return post.of("loss_of_eely").probabilities[0] > 0.5;
      },
      {{"control_strategy", "abort"}}};
  Evidence risky{{"failure_of_autonomous_control", "TRUE"}};
  Recommendation rec = recommend_with_guards(
      bundle.decision, risky, {}, DwellGuard{1}, std::vector{abort_on_risk});
  CHECK(rec.emitted.choice("control_strategy") == "abort");
}

TEST_CASE("conflicting overrides are rejected") {
  DecisionNetwork dn = weather_dn();
  SafetyOverride f1{"f1", [](auto&, auto&) { return true; }, {{"d", "a"}}};
  SafetyOverride f2{"f2", [](auto&, auto&) { return true; }, {{"d", "b"}}};
  CHECK_THROWS_AS(recommend_with_guards(dn, {}, {}, DwellGuard{1},
                                        std::vector{f1, f2}),
                  Error);
}

TEST_CASE("assignments must cover every decision") {
  DecisionNetwork dn = weather_dn();
  CHECK_THROWS_AS(expected_utility(dn, {}, {}), Error);
  try {
    expected_utility(dn, {}, {});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::incomplete_assignment);
  }
  CHECK_THROWS_AS(expected_utility(dn, {{"d", "zz"}}, {}), Error);
}
