#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace riskbn {

enum class RatingKind { frequency, consequence, detectability };

/// 1-3 score against the PHA rubric. Detectability is inverted: high
/// detectability (strong background knowledge) scores 1, low/none scores 3.
struct Rating {
  RatingKind kind = RatingKind::frequency;
  int score = 1;

  /// Short display label ("Low"/"Med"/"High"); for detectability the label
  /// names the detectability level, so score 3 renders as "Low".
  std::string label() const;
  /// Full rubric sentence for the (kind, score) cell.
  std::string rubric() const;

  bool operator==(const Rating&) const = default;
};

Rating make_rating(RatingKind kind, int score);

/// One PHA row: hazardous source, event, causes/consequences (several per
/// cell), the three ratings, and the scenario tag.
struct HazardRecord {
  std::string scenario;  // "seabed" or "confined"
  std::string hazard;
  std::string event;
  std::vector<std::string> causes;
  std::vector<std::string> consequences;
  Rating frequency;
  Rating consequence;
  Rating detectability;

  bool operator==(const HazardRecord&) const = default;
};

struct RpnScore {
  int value = 1;  // in [1, 27]
};

/// Risk priority number: frequency x consequence x detectability.
RpnScore compute_rpn(const HazardRecord& record);

/// Stable sort by rpn descending; equal scores keep input order.
std::vector<HazardRecord> rank_hazards(std::vector<HazardRecord> records);

enum class PhaFormat { csv, markdown };

PhaFormat parse_pha_format(std::string_view name);  // unsupported_format

/// Deterministic rendering. CSV columns: scenario,hazard,event,causes,
/// consequences,freq,conseq,detect,rpn with ';'-joined multi-values;
/// markdown uses the display order Hazard, Event, Cause, Consequence,
/// Freq, Conseq, Detect, rpn.
std::string render_pha(std::span<const HazardRecord> records, PhaFormat format);

/// Parses the ingestion CSV (same columns; the rpn column is optional and
/// verified against the computed product when present).
std::vector<HazardRecord> parse_pha_csv(std::string_view text);

}  // namespace riskbn
