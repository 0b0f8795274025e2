#pragma once

#include <cstddef>
#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sociohub/profile.hpp"

namespace sociohub {

class EmptyQuery : public std::invalid_argument {
 public:
  EmptyQuery() : std::invalid_argument("query is empty after trimming") {}
};

/// Relevance in [0, 1].
class MatchScore {
 public:
  constexpr MatchScore() = default;
  /// Throws std::out_of_range outside [0, 1] (and for NaN).
  explicit MatchScore(double value);

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const MatchScore&, const MatchScore&) = default;

 private:
  double value_ = 0.0;
};

struct RankedResult {
  UnifiedProfile profile;
  MatchScore score;

  friend bool operator==(const RankedResult&, const RankedResult&) = default;
};

inline constexpr double kExactWeight = 1.0;
inline constexpr double kPrefixWeight = 0.9;
inline constexpr double kFuzzyWeight = 0.8;
inline constexpr double kDisplayNameWeight = 0.95;

inline constexpr double kDefaultThreshold = 0.3;
inline constexpr std::size_t kDefaultLimit = 10;

/// Unrestricted Damerau-Levenshtein distance: insertion, deletion,
/// substitution and transposition of adjacent symbols each cost 1. Unlike
/// optimal string alignment this is a metric.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Decodes both sides as UTF-8 (no case folding) and compares scalar values.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// 1.0 on exact match, 0.9 when the text starts with the query, otherwise
/// 0.8 scaled by normalized edit-distance similarity. Both sides are trimmed
/// and case folded first. Throws EmptyQuery.
MatchScore field_score(std::string_view query, std::string_view text);

/// Best of the handle score and 0.95 x the display-name score.
MatchScore score_profile(std::string_view query, const UnifiedProfile& profile);

/// Total order on ranked results: score desc, followers desc, handle asc,
/// platform asc, then the remaining profile fields so distinct results never
/// compare equal.
bool rank_order_less(const RankedResult& a, const RankedResult& b);

/// Scores every candidate, keeps those at or above `threshold`, sorts by
/// rank_order_less and truncates to `limit`. Throws EmptyQuery, and
/// std::invalid_argument when limit is 0.
std::vector<RankedResult> rank_results(std::string_view query,
                                       std::span<const UnifiedProfile> candidates,
                                       std::size_t limit,
                                       MatchScore threshold = MatchScore{kDefaultThreshold});

}  // namespace sociohub
