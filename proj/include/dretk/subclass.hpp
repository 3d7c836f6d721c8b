#pragma once

// Membership in the SORE / CHARE families, with a failure reason per class
// so that member + reasons partitions any set of expressions.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dretk/regex.hpp"

namespace dretk {

// Most-repeated symbol count; 0 for symbol-free expressions.
inline std::size_t max_occurrences(const Regex& r) {
  std::size_t best = 0;
  for (const auto& [name, n] : symbols(r)) best = std::max(best, n);
  return best;
}

enum class SoreReason { Nonstandard, Ore2, Ore3, Ore4, Ore5, Ore6, MoreThan7 };
enum class ChareReason { NotASore, NotATerminalSymbol, UnaryOperatorsInFactor, Nonstandard };
enum class EChareReason { NotASore, NotATerminalSymbol, StarOrOptionalInFactor, Nonstandard };

inline const char* row_name(SoreReason r) {
  switch (r) {
    case SoreReason::Nonstandard: return "nonstandard expression";
    case SoreReason::Ore2: return "2-OREs";
    case SoreReason::Ore3: return "3-OREs";
    case SoreReason::Ore4: return "4-OREs";
    case SoreReason::Ore5: return "5-OREs";
    case SoreReason::Ore6: return "6-OREs";
    case SoreReason::MoreThan7: return "more than 7";
  }
  return "?";
}

inline const char* row_name(ChareReason r) {
  switch (r) {
    case ChareReason::NotASore: return "not a SORE";
    case ChareReason::NotATerminalSymbol: return "not a terminal symbol";
    case ChareReason::UnaryOperatorsInFactor: return "occur unary operators";
    case ChareReason::Nonstandard: return "nonstandard expression";
  }
  return "?";
}

inline const char* row_name(EChareReason r) {
  switch (r) {
    case EChareReason::NotASore: return "not a SORE";
    case EChareReason::NotATerminalSymbol: return "not a terminal symbol";
    case EChareReason::StarOrOptionalInFactor: return "the unary operator *or?";
    case EChareReason::Nonstandard: return "nonstandard expression";
  }
  return "?";
}

// Short identifiers used in per-expression records.
inline const char* reason_id(SoreReason r) {
  switch (r) {
    case SoreReason::Nonstandard: return "nonstandard";
    case SoreReason::Ore2: return "2-ORE";
    case SoreReason::Ore3: return "3-ORE";
    case SoreReason::Ore4: return "4-ORE";
    case SoreReason::Ore5: return "5-ORE";
    case SoreReason::Ore6: return "6-ORE";
    case SoreReason::MoreThan7: return "more_than_7";
  }
  return "?";
}
inline const char* reason_id(ChareReason r) {
  switch (r) {
    case ChareReason::NotASore: return "not_a_sore";
    case ChareReason::NotATerminalSymbol: return "not_a_terminal_symbol";
    case ChareReason::UnaryOperatorsInFactor: return "unary_operators_in_factor";
    case ChareReason::Nonstandard: return "nonstandard";
  }
  return "?";
}
inline const char* reason_id(EChareReason r) {
  switch (r) {
    case EChareReason::NotASore: return "not_a_sore";
    case EChareReason::NotATerminalSymbol: return "not_a_terminal_symbol";
    case EChareReason::StarOrOptionalInFactor: return "star_or_optional_in_factor";
    case EChareReason::Nonstandard: return "nonstandard";
  }
  return "?";
}

// "SOREs" for max_occ <= 1, "k-OREs" for 2..6, "more than 7" above.
inline std::string k_ore_band(std::size_t max_occ) {
  if (max_occ <= 1) return "SOREs";
  if (max_occ <= 6) return std::to_string(max_occ) + "-OREs";
  return "more than 7";
}

inline SoreReason band_reason(std::size_t max_occ) {
  switch (max_occ) {
    case 2: return SoreReason::Ore2;
    case 3: return SoreReason::Ore3;
    case 4: return SoreReason::Ore4;
    case 5: return SoreReason::Ore5;
    case 6: return SoreReason::Ore6;
    default: return SoreReason::MoreThan7;
  }
}

template <typename Reason>
struct Membership {
  bool member = false;
  std::optional<Reason> reason;  // present iff !member
};

inline Membership<SoreReason> is_sore(const Regex& r) {
  if (!is_standard(r)) return {false, SoreReason::Nonstandard};
  const std::size_t k = max_occurrences(r);
  if (k <= 1) return {true, std::nullopt};
  return {false, band_reason(k)};
}

namespace detail {

inline void flatten(const Regex& r, Kind k, std::vector<Regex>& out) {
  if (r.is(k)) {
    flatten(r.left(), k, out);
    flatten(r.right(), k, out);
  } else {
    out.push_back(r);
  }
}

enum class FactorDefect { None, OperatorInDisjunct, NotATerminal };

// Checks the f1 ... fn shape where every fi is (d1 | ... | dm) under at most
// one of ?, *, +. With `allow_plus_disjunct`, a disjunct may be a+.
inline FactorDefect chare_shape(const Regex& r, bool allow_plus_disjunct) {
  std::vector<Regex> factors;
  flatten(r, Kind::Concat, factors);
  FactorDefect worst = FactorDefect::None;
  for (const auto& f : factors) {
    Regex body = f;
    if (body.is(Kind::Star) || body.is(Kind::Plus) || body.is(Kind::Optional)) body = body.child();
    std::vector<Regex> disjuncts;
    flatten(body, Kind::Union, disjuncts);
    for (const auto& d : disjuncts) {
      if (d.is(Kind::Symbol)) continue;
      if (allow_plus_disjunct && d.is(Kind::Plus) && d.child().is(Kind::Symbol)) continue;
      Regex core = d;
      while (core.is_unary()) core = core.child();
      if (!core.is(Kind::Symbol)) return FactorDefect::NotATerminal;
      worst = FactorDefect::OperatorInDisjunct;
    }
  }
  return worst;
}

}  // namespace detail

inline Membership<ChareReason> is_simplified_chare(const Regex& r) {
  if (!is_standard(r)) return {false, ChareReason::Nonstandard};
  if (max_occurrences(r) > 1) return {false, ChareReason::NotASore};
  switch (detail::chare_shape(r, false)) {
    case detail::FactorDefect::NotATerminal: return {false, ChareReason::NotATerminalSymbol};
    case detail::FactorDefect::OperatorInDisjunct: return {false, ChareReason::UnaryOperatorsInFactor};
    case detail::FactorDefect::None: break;
  }
  return {true, std::nullopt};
}

inline Membership<EChareReason> is_esimplified_chare(const Regex& r) {
  if (!is_standard(r)) return {false, EChareReason::Nonstandard};
  if (max_occurrences(r) > 1) return {false, EChareReason::NotASore};
  switch (detail::chare_shape(r, true)) {
    case detail::FactorDefect::NotATerminal: return {false, EChareReason::NotATerminalSymbol};
    case detail::FactorDefect::OperatorInDisjunct: return {false, EChareReason::StarOrOptionalInFactor};
    case detail::FactorDefect::None: break;
  }
  return {true, std::nullopt};
}

struct SubclassReport {
  bool is_standard = true;
  std::size_t max_occ = 0;
  std::string k_ore;
  Membership<SoreReason> sore;
  Membership<ChareReason> simplified_chare;
  Membership<EChareReason> esimplified_chare;
  bool sore_w_c = false;   // single-occurrence, counting allowed
  bool sore_w_i = false;   // single-occurrence, interleaving allowed
  bool sore_w_ci = false;  // single-occurrence, both allowed
};

inline SubclassReport classify(const Regex& r) {
  SubclassReport rep;
  rep.is_standard = is_standard(r);
  rep.max_occ = max_occurrences(r);
  rep.k_ore = k_ore_band(rep.max_occ);
  rep.sore = is_sore(r);
  rep.simplified_chare = is_simplified_chare(r);
  rep.esimplified_chare = is_esimplified_chare(r);
  const bool single = rep.max_occ <= 1;
  const bool has_count = contains_kind(r, Kind::Count);
  const bool has_inter = contains_kind(r, Kind::Interleave);
  rep.sore_w_c = single && !has_inter;
  rep.sore_w_i = single && !has_count;
  rep.sore_w_ci = single;
  return rep;
}

}  // namespace dretk
