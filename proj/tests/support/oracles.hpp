#pragma once

// Test-only reference implementations. They deliberately share no code with
// the library paths they check.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "sociohub/profile.hpp"

namespace sociohub::oracle {

/// Unrestricted Damerau-Levenshtein distance as the length of a shortest
/// edit path, found by breadth-first search over every string reachable by
/// one insertion, deletion, substitution or adjacent swap. Exponential; keep
/// inputs short.
inline std::size_t bfs_edit_distance(const std::string& from, const std::string& to) {
  if (from == to) return 0;
  std::set<char> alphabet(from.begin(), from.end());
  alphabet.insert(to.begin(), to.end());
  const std::size_t max_len = std::max(from.size(), to.size()) + 2;

  std::unordered_map<std::string, std::size_t> dist{{from, 0}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    const std::size_t d = dist[cur];
    std::vector<std::string> next;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next.push_back(cur.substr(0, i) + cur.substr(i + 1));
      for (char c : alphabet) {
        if (c != cur[i]) next.push_back(cur.substr(0, i) + c + cur.substr(i + 1));
      }
      if (i + 1 < cur.size() && cur[i] != cur[i + 1]) {
        std::string swapped = cur;
        std::swap(swapped[i], swapped[i + 1]);
        next.push_back(swapped);
      }
    }
    if (cur.size() < max_len) {
      for (std::size_t i = 0; i <= cur.size(); ++i) {
        for (char c : alphabet) next.push_back(cur.substr(0, i) + c + cur.substr(i));
      }
    }
    for (auto& n : next) {
      if (dist.count(n)) continue;
      if (n == to) return d + 1;
      dist.emplace(n, d + 1);
      queue.push_back(std::move(n));
    }
  }
  return static_cast<std::size_t>(-1);
}

/// Memoizing wrapper for repeated oracle queries.
class CachedDistance {
 public:
  std::size_t operator()(const std::string& a, const std::string& b) {
    const auto key = std::make_pair(a, b);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const std::size_t d = bfs_edit_distance(a, b);
    cache_.emplace(key, d);
    return d;
  }

 private:
  std::map<std::pair<std::string, std::string>, std::size_t> cache_;
};

/// ASCII-only trim + lower-case; oracle corpora use ASCII text.
inline std::string ascii_fold(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\n\r\f\v");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\n\r\f\v");
  std::string out = s.substr(first, last - first + 1);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline double oracle_field_score(const std::string& query, const std::string& text,
                                 CachedDistance& distance) {
  const std::string q = ascii_fold(query);
  const std::string t = ascii_fold(text);
  if (q == t) return 1.0;
  if (t.rfind(q, 0) == 0) return 0.9;
  const double d = static_cast<double>(distance(q, t));
  const double longest = static_cast<double>(std::max(q.size(), t.size()));
  return 0.8 * std::max(0.0, 1.0 - d / longest);
}

struct OracleResult {
  UnifiedProfile profile;
  double score = 0;
};

/// Scores every candidate, sorts by the documented key chain, filters and
/// truncates.
inline std::vector<OracleResult> oracle_rank(const std::string& query,
                                             const std::vector<UnifiedProfile>& candidates,
                                             std::size_t limit, double threshold,
                                             CachedDistance& distance) {
  std::vector<OracleResult> all;
  for (const auto& c : candidates) {
    const double s = std::max(oracle_field_score(query, c.handle, distance),
                              0.95 * oracle_field_score(query, c.display_name, distance));
    if (s >= threshold) all.push_back({c, s});
  }
  const auto key = [](const OracleResult& r) {
    const auto& p = r.profile;
    return std::make_tuple(-r.score, -p.followers, p.handle, static_cast<int>(p.platform),
                           p.display_name, p.bio, p.following, p.location, p.retrieved_at);
  };
  std::sort(all.begin(), all.end(),
            [&](const OracleResult& a, const OracleResult& b) { return key(a) < key(b); });
  if (all.size() > limit) all.resize(limit);
  return all;
}

/// RFC 4180 reader: quoted fields, doubled quotes, LF or CRLF records.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sociohub::oracle
