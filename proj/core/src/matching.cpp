#include "sociohub/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "sociohub/unicode.hpp"

namespace sociohub {

MatchScore::MatchScore(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::out_of_range("match score outside [0, 1]");
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;

  // Lowrance-Wagner: row/column 0 hold the sentinel `inf`, row/column 1 the
  // usual Levenshtein borders.
  const std::size_t inf = n + m;
  const std::size_t width = m + 2;
  std::vector<std::size_t> d((n + 2) * width);
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * width + j]; };

  at(0, 0) = inf;
  for (std::size_t i = 0; i <= n; ++i) {
    at(i + 1, 0) = inf;
    at(i + 1, 1) = i;
  }
  for (std::size_t j = 0; j <= m; ++j) {
    at(0, j + 1) = inf;
    at(1, j + 1) = j;
  }

  std::unordered_map<char32_t, std::size_t> last_row;  // last row where a symbol occurred in `a`
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t last_col = 0;  // last column in this row where a[i-1] matched
    for (std::size_t j = 1; j <= m; ++j) {
      const auto found = last_row.find(b[j - 1]);
      const std::size_t i1 = found == last_row.end() ? 0 : found->second;
      const std::size_t j1 = last_col;
      std::size_t cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        last_col = j;
      }
      at(i + 1, j + 1) = std::min({at(i, j) + cost, at(i + 1, j) + 1, at(i, j + 1) + 1,
                                   at(i1, j1) + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row[a[i - 1]] = i;
  }
  return at(n + 1, m + 1);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(decode_utf8(a), decode_utf8(b));
}

namespace {

// Query folded once, reused across every candidate field.
class PreparedQuery {
 public:
  explicit PreparedQuery(std::string_view query) : folded_(fold_for_matching(query)) {
    if (folded_.empty()) throw EmptyQuery();
  }

  double score(std::string_view text) const {
    const std::u32string t = fold_for_matching(text);
    if (t == folded_) return kExactWeight;
    if (t.size() > folded_.size() && std::u32string_view(t).substr(0, folded_.size()) == folded_) {
      return kPrefixWeight;
    }
    const double distance = static_cast<double>(edit_distance(folded_, t));
    const double longest = static_cast<double>(std::max(folded_.size(), t.size()));
    return kFuzzyWeight * std::max(0.0, 1.0 - distance / longest);
  }

  double score(const UnifiedProfile& profile) const {
    return std::max(score(profile.handle), kDisplayNameWeight * score(profile.display_name));
  }

 private:
  std::u32string folded_;
};

}  // namespace

MatchScore field_score(std::string_view query, std::string_view text) {
  return MatchScore{PreparedQuery(query).score(text)};
}

MatchScore score_profile(std::string_view query, const UnifiedProfile& profile) {
  return MatchScore{PreparedQuery(query).score(profile)};
}

bool rank_order_less(const RankedResult& a, const RankedResult& b) {
  const auto& pa = a.profile;
  const auto& pb = b.profile;
  if (a.score != b.score) return a.score > b.score;
  if (pa.followers != pb.followers) return pa.followers > pb.followers;
  if (pa.handle != pb.handle) return pa.handle < pb.handle;
  if (pa.platform != pb.platform) return pa.platform < pb.platform;
  return std::tie(pa.display_name, pa.bio, pa.following, pa.location, pa.retrieved_at) <
         std::tie(pb.display_name, pb.bio, pb.following, pb.location, pb.retrieved_at);
}

std::vector<RankedResult> rank_results(std::string_view query,
                                       std::span<const UnifiedProfile> candidates,
                                       std::size_t limit, MatchScore threshold) {
  if (limit == 0) throw std::invalid_argument("limit must be at least 1");
  const PreparedQuery prepared(query);

  std::vector<RankedResult> ranked;
  for (const auto& candidate : candidates) {
    const MatchScore score{prepared.score(candidate)};
    if (score >= threshold) ranked.push_back({candidate, score});
  }
  if (ranked.size() > limit) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(limit),
                      ranked.end(), rank_order_less);
    ranked.resize(limit);
  } else {
    std::sort(ranked.begin(), ranked.end(), rank_order_less);
  }
  return ranked;
}

}  // namespace sociohub
