#include "riskbn/hazid.hpp"

#include <algorithm>

#include "riskbn/error.hpp"
#include "riskbn/text_util.hpp"

namespace riskbn {

Rating make_rating(RatingKind kind, int score) {
  if (score < 1 || score > 3)
    fail(ErrorCode::invalid_argument,
         "rating score must be 1..3, got " + std::to_string(score));
  return Rating{kind, score};
}

std::string Rating::label() const {
  int level = kind == RatingKind::detectability ? 4 - score : score;
  switch (level) {
    case 1: return "Low";
    case 2: return "Med";
    default: return "High";
  }
}

std::string Rating::rubric() const {
  switch (kind) {
    case RatingKind::frequency:
      switch (score) {
        case 1: return "The event may occur less than once per mission";
        case 2: return "The event will be encountered, on average, once per mission";
        default: return "The event will be encountered several times per mission";
      }
    case RatingKind::consequence:
      switch (score) {
        case 1:
          return "No noticeable influence on the mission, the vehicle or the "
                 "collected data";
        case 2:
          return "Damages or delays that minorly reduce the available mission "
                 "time or affect data collection";
        default:
          return "Possible loss of the vehicle, early mission abort, or "
                 "significant loss of scientific data";
      }
    case RatingKind::detectability:
      switch (score) {
        case 1:
          return "The vehicle can collect and infer information about the event "
                 "with high certainty";
        case 2:
          return "The vehicle may infer information about the event, with high "
                 "uncertainty";
        default:
          return "The vehicle cannot detect or assess the event during the "
                 "operation";
      }
  }
  return {};
}

RpnScore compute_rpn(const HazardRecord& record) {
  if (record.frequency.kind != RatingKind::frequency ||
      record.consequence.kind != RatingKind::consequence ||
      record.detectability.kind != RatingKind::detectability)
    fail(ErrorCode::invalid_argument, "record has ratings of the wrong kinds");
  if (record.hazard.empty() || record.event.empty())
    fail(ErrorCode::invalid_argument, "record needs a hazard and an event");
  return RpnScore{record.frequency.score * record.consequence.score *
                  record.detectability.score};
}

std::vector<HazardRecord> rank_hazards(std::vector<HazardRecord> records) {
  if (records.empty())
    fail(ErrorCode::invalid_argument, "no hazard records to rank");
  std::stable_sort(records.begin(), records.end(),
                   [](const HazardRecord& a, const HazardRecord& b) {
                     return compute_rpn(a).value > compute_rpn(b).value;
                   });
  return records;
}

PhaFormat parse_pha_format(std::string_view name) {
  if (name == "csv") return PhaFormat::csv;
  if (name == "markdown" || name == "md") return PhaFormat::markdown;
  fail(ErrorCode::unsupported_format,
       "unsupported PHA format '" + std::string(name) + "'");
}

static const char* kPhaHeader =
    "scenario,hazard,event,causes,consequences,freq,conseq,detect,rpn";

std::string render_pha(std::span<const HazardRecord> records, PhaFormat format) {
  std::string out;
  if (format == PhaFormat::csv) {
    out = kPhaHeader;
    out += '\n';
    for (const auto& r : records) {
      out += csv_field(r.scenario);
      out += ',';
      out += csv_field(r.hazard);
      out += ',';
      out += csv_field(r.event);
      out += ',';
      out += csv_field(join(r.causes, "; "));
      out += ',';
      out += csv_field(join(r.consequences, "; "));
      out += ',';
      out += std::to_string(r.frequency.score);
      out += ',';
      out += std::to_string(r.consequence.score);
      out += ',';
      out += std::to_string(r.detectability.score);
      out += ',';
      out += std::to_string(compute_rpn(r).value);
      out += '\n';
    }
    return out;
  }
  out = "| Hazard | Event | Cause | Consequence | Freq | Conseq | Detect | rpn |\n";
  out += "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : records) {
    out += "| " + r.hazard + " | " + r.event + " | " + join(r.causes, "; ") +
           " | " + join(r.consequences, "; ") + " | " +
           std::to_string(r.frequency.score) + " " + r.frequency.label() +
           " | " + std::to_string(r.consequence.score) + " " +
           r.consequence.label() + " | " +
           std::to_string(r.detectability.score) + " " +
           r.detectability.label() + " | " +
           std::to_string(compute_rpn(r).value) + " |\n";
  }
  return out;
}

namespace {

int parse_score(const std::string& field, std::size_t line) {
  if (field.size() == 1 && field[0] >= '1' && field[0] <= '3')
    return field[0] - '0';
  fail(ErrorCode::parse_error, "line " + std::to_string(line) +
                                   ": expected a 1-3 score, got '" + field +
                                   "'");
}

}  // namespace

std::vector<HazardRecord> parse_pha_csv(std::string_view text) {
  std::size_t pos = 0, line = 1;
  std::vector<std::string> header = csv_parse_line(text, pos);
  bool with_rpn = header.size() == 9;
  std::vector<std::string> want = {"scenario", "hazard",       "event",
                                   "causes",   "consequences", "freq",
                                   "conseq",   "detect"};
  if (with_rpn) want.push_back("rpn");
  if (header != want)
    fail(ErrorCode::parse_error, "unexpected PHA header");

  std::vector<HazardRecord> records;
  while (pos < text.size()) {
    ++line;
    std::vector<std::string> f = csv_parse_line(text, pos);
    if (f.size() == 1 && f[0].empty()) continue;  // trailing blank line
    if (f.size() != want.size())
      fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": has " +
                                       std::to_string(f.size()) + " fields");
    HazardRecord r;
    r.scenario = f[0];
    r.hazard = f[1];
    r.event = f[2];
    r.causes = split_trimmed(f[3], ';');
    r.consequences = split_trimmed(f[4], ';');
    r.frequency = make_rating(RatingKind::frequency, parse_score(f[5], line));
    r.consequence = make_rating(RatingKind::consequence, parse_score(f[6], line));
    r.detectability =
        make_rating(RatingKind::detectability, parse_score(f[7], line));
    if (r.hazard.empty() || r.event.empty())
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line) + ": empty hazard or event");
    if (with_rpn) {
      int stored = 0;
      try {
        stored = std::stoi(f[8]);
      } catch (...) {
        fail(ErrorCode::parse_error,
             "line " + std::to_string(line) + ": bad rpn value '" + f[8] + "'");
      }
      if (stored != compute_rpn(r).value)
        fail(ErrorCode::parse_error,
             "line " + std::to_string(line) + ": stored rpn " + f[8] +
                 " does not equal the rating product " +
                 std::to_string(compute_rpn(r).value));
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace riskbn
