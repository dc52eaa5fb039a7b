#include <doctest.h>

#include <algorithm>
#include <set>

#include "riskbn/error.hpp"
#include "riskbn/hazid.hpp"
#include "riskbn/models.hpp"

using namespace riskbn;

namespace {

HazardRecord record(std::string scenario, std::string hazard, std::string event,
                    int f, int c, int d) {
  HazardRecord r;
  r.scenario = std::move(scenario);
  r.hazard = std::move(hazard);
  r.event = std::move(event);
  r.causes = {"cause"};
  r.consequences = {"consequence"};
  r.frequency = make_rating(RatingKind::frequency, f);
  r.consequence = make_rating(RatingKind::consequence, c);
  r.detectability = make_rating(RatingKind::detectability, d);
  return r;
}

}  // namespace

TEST_CASE("rpn is the product of the three scores") {
  CHECK(compute_rpn(record("confined", "DVL failure.", "e", 3, 3, 2)).value == 18);
  CHECK(compute_rpn(record("seabed", "Controller failure.", "e", 2, 3, 2)).value == 12);
  CHECK(compute_rpn(record("seabed", "h", "e", 1, 1, 1)).value == 1);
  CHECK_THROWS_AS(make_rating(RatingKind::frequency, 0), Error);
  CHECK_THROWS_AS(make_rating(RatingKind::frequency, 4), Error);
}

TEST_CASE("detectability labels are inverted") {
  CHECK(make_rating(RatingKind::detectability, 3).label() == "Low");
  CHECK(make_rating(RatingKind::detectability, 1).label() == "High");
  CHECK(make_rating(RatingKind::frequency, 3).label() == "High");
  CHECK(make_rating(RatingKind::consequence, 2).label() == "Med");
}

TEST_CASE("ranking is a stable descending sort") {
  std::vector<HazardRecord> records = {
      record("seabed", "first-six", "e", 1, 3, 2),
      record("seabed", "eighteen", "e", 3, 3, 2),
      record("seabed", "second-six", "e", 2, 3, 1),
  };
  auto ranked = rank_hazards(records);
  CHECK(ranked[0].hazard == "eighteen");
  CHECK(ranked[1].hazard == "first-six");
  CHECK(ranked[2].hazard == "second-six");

  auto single = rank_hazards({records[0]});
  CHECK(single.size() == 1);
  CHECK(single[0] == records[0]);
}

TEST_CASE("bundled confined table has the two top hazards at rpn 18") {
  auto records = parse_pha_csv(models::bundled_pha_csv("confined"));
  REQUIRE(records.size() == 13);
  auto ranked = rank_hazards(records);
  std::set<std::string> top;
  for (const auto& r : ranked)
    if (compute_rpn(r).value == 18) top.insert(r.hazard);
  CHECK(top == std::set<std::string>{"Strong currents.", "DVL failure."});
  CHECK(compute_rpn(ranked[0]).value == 18);
  CHECK(compute_rpn(ranked[1]).value == 18);
  CHECK(compute_rpn(ranked[2]).value < 18);
}

TEST_CASE("bundled seabed table spans rpn 2 to 18") {
  auto records = parse_pha_csv(models::bundled_pha_csv("seabed"));
  REQUIRE(records.size() == 16);
  int max_rpn = 0, min_rpn = 100;
  std::string max_hazard;
  for (const auto& r : records) {
    int v = compute_rpn(r).value;
    if (v > max_rpn) {
      max_rpn = v;
      max_hazard = r.hazard;
    }
    min_rpn = std::min(min_rpn, v);
  }
  CHECK(max_rpn == 18);
  CHECK(max_hazard == "DVL failure.");
  CHECK(min_rpn == 2);
}

TEST_CASE("rpn bounds hold for every bundled record") {
  for (const auto& label : {"seabed", "confined"}) {
    for (const auto& r : parse_pha_csv(models::bundled_pha_csv(label))) {
      int v = compute_rpn(r).value;
      CHECK(v >= 1);
      CHECK(v <= 27);
    }
  }
}

TEST_CASE("empty record list renders a bare CSV header") {
  CHECK(render_pha({}, PhaFormat::csv) ==
        "scenario,hazard,event,causes,consequences,freq,conseq,detect,rpn\n");
}

TEST_CASE("rendered CSV round-trips field for field") {
  auto records = parse_pha_csv(models::bundled_pha_csv("seabed"));
  auto again = parse_pha_csv(render_pha(records, PhaFormat::csv));
  CHECK(records == again);
}

TEST_CASE("rendering the parsed bundle reproduces the file bytes") {
  for (const auto& label : {"seabed", "confined"}) {
    std::string_view original = models::bundled_pha_csv(label);
    auto records = parse_pha_csv(original);
    CHECK(render_pha(records, PhaFormat::csv) == original);
  }
}

TEST_CASE("markdown rendering shows scored labels") {
  auto records = parse_pha_csv(models::bundled_pha_csv("confined"));
  std::string md = render_pha(records, PhaFormat::markdown);
  CHECK(md.find("| Hazard | Event | Cause | Consequence | Freq | Conseq | "
                "Detect | rpn |") == 0);
  CHECK(md.find("3 High | 3 High | 2 Med | 18") != std::string::npos);
}

TEST_CASE("quoted fields survive the CSV round trip") {
  HazardRecord r = record("seabed", "Strong currents.", "hits a wall", 1, 3, 2);
  r.causes = {"contouring a steep area, wall", "said \"too close\""};
  auto parsed = parse_pha_csv(render_pha(std::vector{r}, PhaFormat::csv));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0] == r);
}

TEST_CASE("stored rpn values are verified when parsing") {
  std::string bad =
      "scenario,hazard,event,causes,consequences,freq,conseq,detect,rpn\n"
      "seabed,h,e,c,q,2,3,2,13\n";
  CHECK_THROWS_AS(parse_pha_csv(bad), Error);
  std::string good =
      "scenario,hazard,event,causes,consequences,freq,conseq,detect\n"
      "seabed,h,e,c,q,2,3,2\n";
  CHECK(parse_pha_csv(good).size() == 1);  // rpn column is optional
}

TEST_CASE("unknown formats are rejected") {
  CHECK_THROWS_AS(parse_pha_format("pdf"), Error);
  try {
    parse_pha_format("pdf");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_format);
  }
  CHECK(parse_pha_format("md") == PhaFormat::markdown);
}
