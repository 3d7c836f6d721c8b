#pragma once

// Bounded enumeration of L(r): all words up to a length cap. Intended for
// test oracles and witness checks, not for large inputs.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dretk/marking.hpp"
#include "dretk/regex.hpp"

namespace dretk {

template <typename Label>
using Word = std::vector<Label>;

template <typename Label>
struct LanguageSample {
  std::set<Word<Label>> words;
  bool overflow = false;
};

namespace detail {

// Shortlex order: shorter words first, then lexicographic.
struct Shortlex {
  template <typename W>
  bool operator()(const W& a, const W& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

template <typename Label>
using WordSet = std::set<Word<Label>>;

template <typename Label>
WordSet<Label> concat_sets(const WordSet<Label>& a, const WordSet<Label>& b, std::size_t max_len) {
  WordSet<Label> out;
  for (const auto& u : a)
    for (const auto& v : b) {
      if (u.size() + v.size() > max_len) continue;
      Word<Label> w = u;
      w.insert(w.end(), v.begin(), v.end());
      out.insert(std::move(w));
    }
  return out;
}

template <typename Label>
void shuffle_words(const Word<Label>& u, std::size_t i, const Word<Label>& v, std::size_t j,
                   Word<Label>& acc, WordSet<Label>& out) {
  if (i == u.size() && j == v.size()) {
    out.insert(acc);
    return;
  }
  if (i < u.size()) {
    acc.push_back(u[i]);
    shuffle_words(u, i + 1, v, j, acc, out);
    acc.pop_back();
  }
  if (j < v.size()) {
    acc.push_back(v[j]);
    shuffle_words(u, i, v, j + 1, acc, out);
    acc.pop_back();
  }
}

template <typename Label>
WordSet<Label> shuffle_sets(const WordSet<Label>& a, const WordSet<Label>& b, std::size_t max_len) {
  WordSet<Label> out;
  Word<Label> acc;
  for (const auto& u : a)
    for (const auto& v : b)
      if (u.size() + v.size() <= max_len) shuffle_words(u, 0, v, 0, acc, out);
  return out;
}

template <typename Label, typename LeafLabel>
WordSet<Label> language_upto(const Regex& r, std::size_t max_len, const LeafLabel& label) {
  switch (r.kind()) {
    case Kind::Empty: return {};
    case Kind::Epsilon: return {Word<Label>{}};
    case Kind::Symbol:
      if (max_len == 0) return {};
      return {Word<Label>{label(r)}};
    case Kind::Union: {
      auto a = language_upto<Label>(r.left(), max_len, label);
      auto b = language_upto<Label>(r.right(), max_len, label);
      a.insert(b.begin(), b.end());
      return a;
    }
    case Kind::Concat:
      return concat_sets(language_upto<Label>(r.left(), max_len, label),
                         language_upto<Label>(r.right(), max_len, label), max_len);
    case Kind::Interleave:
      return shuffle_sets(language_upto<Label>(r.left(), max_len, label),
                          language_upto<Label>(r.right(), max_len, label), max_len);
    case Kind::Optional: {
      auto a = language_upto<Label>(r.child(), max_len, label);
      a.insert(Word<Label>{});
      return a;
    }
    case Kind::Star:
    case Kind::Plus:
    case Kind::Count: {
      CountBounds b{0, CountBounds::kUnbounded};
      if (r.is(Kind::Plus)) b.min = 1;
      if (r.is(Kind::Count)) b = r.bounds();
      const auto inner = language_upto<Label>(r.child(), max_len, label);
      WordSet<Label> result;
      WordSet<Label> power{Word<Label>{}};  // inner^i
      if (b.min == 0) result.insert(Word<Label>{});
      for (std::uint64_t i = 1; i <= b.max; ++i) {
        auto next = concat_sets(power, inner, max_len);
        if (next.empty()) break;
        if (next == power) {
          // inner is nullable: every later power is the same set.
          result.insert(next.begin(), next.end());
          break;
        }
        power = std::move(next);
        if (i >= b.min) result.insert(power.begin(), power.end());
      }
      return result;
    }
  }
  return {};
}

template <typename Label>
LanguageSample<Label> truncate_sample(WordSet<Label> all, std::size_t max_words) {
  LanguageSample<Label> out;
  if (all.size() <= max_words) {
    out.words = std::move(all);
    return out;
  }
  std::vector<Word<Label>> sorted(all.begin(), all.end());
  std::sort(sorted.begin(), sorted.end(), Shortlex{});
  sorted.resize(max_words);
  out.words.insert(sorted.begin(), sorted.end());
  out.overflow = true;
  return out;
}

}  // namespace detail

// Words of L(r) of length <= max_len. When more than max_words exist, the
// shortlex-least max_words are kept and `overflow` is set.
inline LanguageSample<std::string> enumerate_language(const Regex& r, std::size_t max_len,
                                                      std::size_t max_words) {
  auto all = detail::language_upto<std::string>(r, max_len,
                                                [](const Regex& s) { return s.name(); });
  return detail::truncate_sample(std::move(all), max_words);
}

// Same, over the marked alphabet: each letter is a position id.
inline LanguageSample<Regex::Position> enumerate_marked(const MarkedRegex& m, std::size_t max_len,
                                                        std::size_t max_words) {
  auto all = detail::language_upto<Regex::Position>(m.tree, max_len,
                                                    [](const Regex& s) { return s.position(); });
  return detail::truncate_sample(std::move(all), max_words);
}

}  // namespace dretk
