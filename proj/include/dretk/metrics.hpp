#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>

#include "dretk/regex.hpp"
#include "dretk/schema/schema_doc.hpp"

namespace dretk {

// Tag emitted with reports: Plus adds one level, Optional none, Count one
// level only when unbounded, Interleave takes the maximum of its operands.
inline constexpr const char* kStarHeightConvention = "star-height convention v1";

inline std::size_t star_height(const Regex& r) {
  switch (r.kind()) {
    case Kind::Empty:
    case Kind::Epsilon:
    case Kind::Symbol: return 0;
    case Kind::Union:
    case Kind::Concat:
    case Kind::Interleave: return std::max(star_height(r.left()), star_height(r.right()));
    case Kind::Star:
    case Kind::Plus: return star_height(r.child()) + 1;
    case Kind::Optional: return star_height(r.child());
    case Kind::Count: return star_height(r.child()) + (r.bounds().unbounded() ? 1 : 0);
  }
  return 0;
}

// Every unary operator (*, +, ?, {m,n}) adds one level.
inline std::size_t nesting_depth(const Regex& r) {
  if (r.is_leaf()) return 0;
  if (r.is_unary()) return nesting_depth(r.child()) + 1;
  return std::max(nesting_depth(r.left()), nesting_depth(r.right()));
}

// Counters with m >= 2 or finite n >= 2; {0,1}, {1,1}, {0,inf}, {1,inf} are trivial.
inline std::size_t nontrivial_counters(const Regex& r) {
  std::size_t n = 0;
  if (r.is(Kind::Count)) {
    const auto& b = r.bounds();
    if (b.min >= 2 || (!b.unbounded() && b.max >= 2)) ++n;
  }
  for (const auto& c : r.children()) n += nontrivial_counters(c);
  return n;
}

inline std::size_t interleave_count(const Regex& r) {
  std::size_t n = r.is(Kind::Interleave) ? 1 : 0;
  for (const auto& c : r.children()) n += interleave_count(c);
  return n;
}

struct ExprMetrics {
  std::size_t star_height = 0;
  std::size_t nesting_depth = 0;
  std::size_t nontrivial_counters = 0;
  bool has_interleaving = false;
  std::size_t interleave_count = 0;
};

inline ExprMetrics expr_metrics(const Regex& r) {
  ExprMetrics m;
  m.star_height = star_height(r);
  m.nesting_depth = nesting_depth(r);
  m.nontrivial_counters = nontrivial_counters(r);
  m.interleave_count = interleave_count(r);
  m.has_interleaving = m.interleave_count > 0;
  return m;
}

// Density: mean number of symbol occurrences per rule.
inline double schema_density(const SchemaDoc& doc) {
  if (doc.rules.empty()) throw std::invalid_argument("density needs at least one rule");
  std::size_t total = 0;
  for (const auto& r : doc.rules) total += leaf_count(r.content);
  return static_cast<double>(total) / static_cast<double>(doc.rules.size());
}

}  // namespace dretk
