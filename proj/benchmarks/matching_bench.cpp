#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "sociohub/matching.hpp"

namespace {

using namespace sociohub;

std::string random_handle(std::mt19937& rng, std::size_t length) {
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz_0123456789";
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string out;
  for (std::size_t i = 0; i < length; ++i) out += kAlphabet[pick(rng)];
  return out;
}

void BM_EditDistance(benchmark::State& state) {
  std::mt19937 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_handle(rng, n);
  const auto b = random_handle(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(edit_distance(a, b));
}
BENCHMARK(BM_EditDistance)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

// One aggregate result set: three platforms at the maximum per-platform limit.
void BM_RankResults(benchmark::State& state) {
  std::mt19937 rng(2);
  std::vector<UnifiedProfile> candidates;
  for (int i = 0; i < state.range(0); ++i) {
    UnifiedProfile p;
    p.platform = kAllPlatforms[static_cast<std::size_t>(i % 3)];
    p.handle = "ada" + random_handle(rng, 6);
    p.display_name = "Ada " + random_handle(rng, 10);
    p.followers = i;
    candidates.push_back(std::move(p));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_results("ada lovelace", candidates, 30));
  }
}
BENCHMARK(BM_RankResults)->Arg(50)->Arg(150);

}  // namespace
