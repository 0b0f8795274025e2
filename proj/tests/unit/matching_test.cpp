#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sociohub/matching.hpp"
#include "sociohub/unicode.hpp"
#include "support/oracles.hpp"

namespace sociohub {
namespace {

UnifiedProfile profile(std::string handle, std::string display, std::int64_t followers = 0,
                       Platform platform = Platform::twitter) {
  UnifiedProfile p;
  p.platform = platform;
  p.handle = std::move(handle);
  p.display_name = std::move(display);
  p.followers = followers;
  return p;
}

TEST(UnicodeTest, SimpleCaseFolding) {
  EXPECT_EQ(simple_case_fold(U'A'), U'a');
  EXPECT_EQ(simple_case_fold(U'z'), U'z');
  EXPECT_EQ(simple_case_fold(U'Ä'), U'ä');
  EXPECT_EQ(simple_case_fold(U'Σ'), U'σ');
  EXPECT_EQ(simple_case_fold(U'ς'), U'σ');
  EXPECT_EQ(simple_case_fold(U'ẞ'), U'ß');
  EXPECT_EQ(simple_case_fold(U'ß'), U'ß');  // full folding would expand to "ss"
  EXPECT_EQ(simple_case_fold(U'K'), U'k');  // KELVIN SIGN
  EXPECT_EQ(simple_case_fold(U'数'), U'数');
}

TEST(UnicodeTest, Utf8DecodeAndTrim) {
  EXPECT_EQ(decode_utf8("aé数😀"), std::u32string(U"aé数😀"));
  EXPECT_EQ(encode_utf8(U"aé数😀"), "aé数😀");
  EXPECT_EQ(decode_utf8("a\xff" "b"), std::u32string(U"a�b"));
  EXPECT_EQ(decode_utf8("\xc3"), std::u32string(U"�"));
  EXPECT_EQ(trim("  x y \t\n"), "x y");
  EXPECT_EQ(trim("   "), "");
  EXPECT_EQ(fold_for_matching("  ÅSA "), std::u32string(U"åsa"));
}

TEST(EditDistanceTest, Examples) {
  EXPECT_EQ(edit_distance("", ""), 0u);
  EXPECT_EQ(edit_distance("abc", ""), 3u);
  EXPECT_EQ(edit_distance("", "abc"), 3u);
  // Frozen from the breadth-first-search oracle.
  EXPECT_EQ(edit_distance("alce", "alice"), 1u);
  EXPECT_EQ(edit_distance("ab", "ba"), 1u);
  EXPECT_EQ(edit_distance("robert", "bob"), 4u);
  EXPECT_EQ(edit_distance("alice", "alicia"), 2u);
  // Unrestricted transpositions: optimal string alignment would give 3.
  EXPECT_EQ(edit_distance("ca", "abc"), 2u);
  EXPECT_EQ(edit_distance("数据", "据数"), 1u);
}

TEST(EditDistanceTest, FrozenValuesAgreeWithOracle) {
  for (auto [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"alce", "alice"}, {"ab", "ba"}, {"robert", "bob"}, {"alice", "alicia"}, {"ca", "abc"},
           {"xyz", "alice"}}) {
    EXPECT_EQ(edit_distance(a, b), oracle::bfs_edit_distance(a, b)) << a << " / " << b;
  }
}

std::string random_word(std::mt19937& rng, std::size_t max_len, std::string_view alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
  return s;
}

TEST(EditDistanceProperty, MatchesBfsOracleOnShortStrings) {
  std::mt19937 rng(11);
  for (int i = 0; i < 400; ++i) {
    const auto a = random_word(rng, 5, "abc");
    const auto b = random_word(rng, 5, "abc");
    ASSERT_EQ(edit_distance(a, b), oracle::bfs_edit_distance(a, b)) << a << " / " << b;
  }
}

TEST(EditDistanceProperty, MetricAxioms) {
  std::mt19937 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_word(rng, 8, "abcd");
    const auto b = random_word(rng, 8, "abcd");
    const auto c = random_word(rng, 8, "abcd");
    const auto ab = edit_distance(a, b);
    ASSERT_EQ(ab, edit_distance(b, a));
    ASSERT_EQ(ab == 0, a == b);
    ASSERT_LE(edit_distance(a, c), ab + edit_distance(b, c)) << a << " " << b << " " << c;
    ASSERT_LE(ab, std::max(a.size(), b.size()));
  }
}

TEST(FieldScoreTest, Examples) {
  EXPECT_DOUBLE_EQ(field_score("bob", "bob").value(), 1.0);
  EXPECT_DOUBLE_EQ(field_score("ali", "alice").value(), 0.9);
  EXPECT_NEAR(field_score("alce", "alice").value(), 0.64, 1e-12);
  EXPECT_DOUBLE_EQ(field_score("xyz", "alice").value(), 0.0);
}

TEST(FieldScoreTest, FoldsCaseAndTrims) {
  EXPECT_DOUBLE_EQ(field_score("  BOB ", "bob").value(), 1.0);
  EXPECT_DOUBLE_EQ(field_score("zoë", "ZOË ÇELIK").value(), 0.9);
  EXPECT_DOUBLE_EQ(field_score("bob", "").value(), 0.0);
  EXPECT_THROW(field_score("   ", "bob"), EmptyQuery);
  EXPECT_THROW(field_score("", "bob"), EmptyQuery);
}

TEST(ScoreProfileTest, Examples) {
  EXPECT_DOUBLE_EQ(score_profile("bob", profile("bob", "Robert")).value(), 1.0);
  EXPECT_DOUBLE_EQ(score_profile("robert", profile("bob", "Robert")).value(), 0.95);
  EXPECT_DOUBLE_EQ(score_profile("zzz", profile("bob", "Bo")).value(), 0.0);
  EXPECT_THROW(score_profile(" ", profile("bob", "Bo")), EmptyQuery);
}

TEST(ScoreProfileTest, HandleOutranksEqualDisplayNameMatch) {
  EXPECT_GT(score_profile("ada", profile("ada", "x")).value(),
            score_profile("ada", profile("x", "ada")).value());
}

TEST(MatchScoreTest, RejectsOutOfRange) {
  EXPECT_THROW(MatchScore{-0.01}, std::out_of_range);
  EXPECT_THROW(MatchScore{1.01}, std::out_of_range);
  EXPECT_THROW(MatchScore{std::nan("")}, std::out_of_range);
  EXPECT_NO_THROW(MatchScore{0.0});
  EXPECT_NO_THROW(MatchScore{1.0});
}

TEST(RankResultsTest, AliceAliciaBob) {
  const std::vector<UnifiedProfile> candidates{profile("alice", "alice", 10),
                                               profile("alicia", "alicia", 99),
                                               profile("bob", "bob", 5)};
  const auto ranked = rank_results("alice", candidates, 10, MatchScore{0.3});
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].profile.handle, "alice");
  EXPECT_DOUBLE_EQ(ranked[0].score.value(), 1.0);
  EXPECT_EQ(ranked[1].profile.handle, "alicia");
  EXPECT_NEAR(ranked[1].score.value(), 0.8 * (1.0 - 2.0 / 6.0), 1e-12);
}

TEST(RankResultsTest, FollowersBreakScoreTies) {
  const std::vector<UnifiedProfile> candidates{profile("adax", "", 10), profile("aday", "", 99)};
  const auto ranked = rank_results("ada", candidates, 10, MatchScore{0.0});
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].profile.handle, "aday");
}

TEST(RankResultsTest, HandleThenPlatformBreakRemainingTies) {
  const std::vector<UnifiedProfile> candidates{
      profile("ada", "", 5, Platform::mastodon), profile("ada", "", 5, Platform::twitter),
      profile("ada", "", 5, Platform::instagram)};
  const auto ranked = rank_results("ada", candidates, 10, MatchScore{0.0});
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].profile.platform, Platform::twitter);
  EXPECT_EQ(ranked[1].profile.platform, Platform::instagram);
  EXPECT_EQ(ranked[2].profile.platform, Platform::mastodon);

  const auto by_handle =
      rank_results("a", std::vector{profile("ab", "", 1), profile("aa", "", 1)}, 10, MatchScore{0.0});
  EXPECT_EQ(by_handle[0].profile.handle, "aa");
}

TEST(RankResultsTest, EmptyCandidatesAndErrors) {
  EXPECT_TRUE(rank_results("x", std::vector<UnifiedProfile>{}, 10).empty());
  EXPECT_THROW(rank_results(" ", std::vector<UnifiedProfile>{}, 10), EmptyQuery);
  EXPECT_THROW(rank_results("x", std::vector<UnifiedProfile>{}, 0), std::invalid_argument);
}

// Random corpus with many collisions so every tie-break level is exercised.
std::vector<UnifiedProfile> random_corpus(std::mt19937& rng, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size(0, max_size);
  std::uniform_int_distribution<int> followers(0, 3), coin(0, 3), plat(0, 2);
  std::vector<UnifiedProfile> out;
  std::set<std::pair<int, std::string>> seen;
  for (std::size_t n = size(rng); n > 0; --n) {
    UnifiedProfile p;
    p.platform = kAllPlatforms[static_cast<std::size_t>(plat(rng))];
    p.handle = random_word(rng, 4, "abcAB");
    if (p.handle.empty() || !seen.emplace(static_cast<int>(p.platform), p.handle).second) continue;
    p.display_name = random_word(rng, 4, "abcB ");
    p.bio = random_word(rng, 3, "xy");
    p.followers = followers(rng);
    p.following = followers(rng);
    if (p.platform == Platform::twitter && coin(rng) == 0) p.location = "here";
    p.retrieved_at = Timestamp{std::chrono::seconds{coin(rng)}};
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::pair<UnifiedProfile, double>> flatten(const std::vector<RankedResult>& ranked) {
  std::vector<std::pair<UnifiedProfile, double>> out;
  for (const auto& r : ranked) out.emplace_back(r.profile, r.score.value());
  return out;
}

std::vector<std::pair<UnifiedProfile, double>> flatten(const std::vector<oracle::OracleResult>& ranked) {
  std::vector<std::pair<UnifiedProfile, double>> out;
  for (const auto& r : ranked) out.emplace_back(r.profile, r.score);
  return out;
}

TEST(RankResultsProperty, EqualsBruteForceOracle) {
  std::mt19937 rng(21);
  oracle::CachedDistance distance;
  std::uniform_int_distribution<std::size_t> limit(1, 60);
  std::uniform_real_distribution<double> threshold(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto corpus = random_corpus(rng, 50);
    std::string query = random_word(rng, 3, "abcA");
    if (query.empty()) query = "a";
    const std::size_t k = limit(rng);
    const double t = trial % 4 == 0 ? 0.0 : threshold(rng);
    ASSERT_EQ(flatten(rank_results(query, corpus, k, MatchScore{t})),
              flatten(oracle::oracle_rank(query, corpus, k, t, distance)))
        << "trial " << trial;
  }
}

TEST(RankResultsProperty, PermutationInvariantTruncationMonotoneScoresBounded) {
  std::mt19937 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    auto corpus = random_corpus(rng, 40);
    const std::string query = "ab";
    const MatchScore threshold{0.2};
    const auto full = rank_results(query, corpus, 100, threshold);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    ASSERT_EQ(rank_results(query, corpus, 100, threshold), full);
    for (std::size_t k = 1; k <= full.size(); ++k) {
      const auto shorter = rank_results(query, corpus, k, threshold);
      const auto longer = rank_results(query, corpus, k + 1, threshold);
      ASSERT_EQ(shorter.size(), k);
      ASSERT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
    }
    for (const auto& r : full) {
      ASSERT_GE(r.score, threshold);
      ASSERT_LE(r.score.value(), 1.0);
    }
  }
}

}  // namespace
}  // namespace sociohub
