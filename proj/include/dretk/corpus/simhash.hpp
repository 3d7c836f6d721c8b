#pragma once

// File normalization, 64-bit SimHash over 3-token shingles, and
// near-duplicate clustering.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dretk {

// XML comments removed, whitespace runs collapsed, blank lines dropped.
inline std::string normalize_file_text(std::string_view content) {
  std::string text(content);
  for (;;) {
    const auto open = text.find("<!--");
    if (open == std::string::npos) break;
    const auto close = text.find("-->", open + 4);
    text.erase(open, close == std::string::npos ? std::string::npos : close + 3 - open);
  }
  std::string out;
  std::string line;
  auto flush = [&] {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    if (!line.empty()) {
      if (!out.empty()) out.push_back('\n');
      out += line;
    }
    line.clear();
  };
  for (char c : text) {
    if (c == '\n' || c == '\r') {
      flush();
    } else if (c == ' ' || c == '\t' || c == '\f' || c == '\v') {
      if (!line.empty() && line.back() != ' ') line.push_back(' ');
    } else {
      line.push_back(c);
    }
  }
  flush();
  return out;
}

using Fingerprint = std::uint64_t;

// FNV-1a 64 followed by the splitmix64 finalizer.
inline std::uint64_t feature_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

inline bool is_markup_punct(char c) {
  switch (c) {
    case '<': case '>': case '/': case '=': case '"': case '\'': case '!': case '?': case '(':
    case ')': case '[': case ']': case '|': case ',': case '*': case '+': case '&': case ';':
    case ':': case '{': case '}': case '%': case '#':
      return true;
    default:
      return false;
  }
}

// Tokens are the runs between whitespace and markup punctuation.
inline std::vector<std::string> simhash_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (space || is_markup_punct(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline Fingerprint simhash(std::string_view text, std::size_t shingle = 3) {
  const auto tokens = simhash_tokens(text);
  if (tokens.empty()) return 0;
  std::int64_t column[64] = {};
  auto add = [&](std::size_t from, std::size_t to) {
    std::string feature;
    for (std::size_t i = from; i < to; ++i) {
      if (i > from) feature.push_back('\x1f');
      feature += tokens[i];
    }
    const std::uint64_t h = feature_hash(feature);
    for (int b = 0; b < 64; ++b) column[b] += (h >> b) & 1U ? 1 : -1;
  };
  if (tokens.size() < shingle) {
    add(0, tokens.size());
  } else {
    for (std::size_t i = 0; i + shingle <= tokens.size(); ++i) add(i, i + shingle);
  }
  Fingerprint fp = 0;
  for (int b = 0; b < 64; ++b)
    if (column[b] > 0) fp |= Fingerprint{1} << b;
  return fp;
}

inline int hamming(Fingerprint a, Fingerprint b) { return std::popcount(a ^ b); }

struct DedupResult {
  std::vector<std::string> kept;                     // sorted
  std::vector<std::vector<std::string>> clusters;    // size >= 2, each sorted, ordered by first path
  std::map<std::string, std::string> duplicate_of;   // dropped path -> kept representative
};

inline DedupResult dedup(std::vector<std::pair<std::string, Fingerprint>> entries, int threshold) {
  std::sort(entries.begin(), entries.end());
  const std::size_t n = entries.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (hamming(entries[i].second, entries[j].second) <= threshold) {
        const auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(entries[i].first);
  DedupResult out;
  for (auto& [root, paths] : groups) {
    out.kept.push_back(paths.front());
    if (paths.size() > 1) {
      for (std::size_t k = 1; k < paths.size(); ++k) out.duplicate_of[paths[k]] = paths.front();
      out.clusters.push_back(paths);
    }
  }
  std::sort(out.kept.begin(), out.kept.end());
  std::sort(out.clusters.begin(), out.clusters.end());
  return out;
}

}  // namespace dretk
