#pragma once

// Determinism (one-unambiguity) of expressions with counting and
// interleaving, using the marked-word definition: E is deterministic iff for
// all words u x v, u y w in L(mark(E)) with single letters x, y, x != y
// implies that x and y carry different symbols.
//
// Standard expressions go through the Glushkov first/follow sets. Everything
// else is explored over Brzozowski derivatives of the marked expression, after
// counter clamping and after splitting interleavings whose operands use
// disjoint alphabets.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dretk/marking.hpp"
#include "dretk/regex.hpp"

namespace dretk {

using Position = Regex::Position;

struct Witness {
  std::vector<Position> prefix_positions;  // marked prefix u
  std::vector<std::string> prefix;         // u with marks dropped
  Position pos_x = 0;
  Position pos_y = 0;
  std::string symbol;

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Outcome { Deterministic, NonDeterministic, UndecidedResource };
enum class Method { Compositional, Oracle };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Deterministic: return "deterministic";
    case Outcome::NonDeterministic: return "non-deterministic";
    case Outcome::UndecidedResource: return "undecided-resource";
  }
  return "?";
}

inline const char* method_name(Method m) {
  return m == Method::Oracle ? "oracle" : "compositional";
}

struct DeterminismVerdict {
  Outcome outcome = Outcome::Deterministic;
  std::optional<Witness> witness;  // present iff outcome == NonDeterministic
  Method method = Method::Compositional;
  bool clamped = false;  // the witness refers to clamp_counter_bounds(r)
  std::size_t states = 0;

  [[nodiscard]] bool deterministic() const noexcept { return outcome == Outcome::Deterministic; }
  [[nodiscard]] bool decided() const noexcept { return outcome != Outcome::UndecidedResource; }
};

struct DeterminismOptions {
  std::size_t state_ceiling = 1'000'000;
  // Split interleavings of symbol-disjoint operands instead of building their product.
  bool split_disjoint_interleave = true;
};

// ---------------------------------------------------------------------------
// First / last / follow

struct FirstFollow {
  std::set<Position> first;
  std::set<Position> last;
  std::map<Position, std::set<Position>> follow;
  bool nullable = false;
};

namespace detail {

inline FirstFollow first_follow_rec(const Regex& r, std::map<Position, std::set<Position>>& follow) {
  FirstFollow out;
  switch (r.kind()) {
    case Kind::Empty: return out;
    case Kind::Epsilon: out.nullable = true; return out;
    case Kind::Symbol:
      out.first = out.last = {r.position()};
      follow[r.position()];
      return out;
    case Kind::Union: {
      auto a = first_follow_rec(r.left(), follow);
      auto b = first_follow_rec(r.right(), follow);
      out.first = a.first;
      out.first.insert(b.first.begin(), b.first.end());
      out.last = a.last;
      out.last.insert(b.last.begin(), b.last.end());
      out.nullable = a.nullable || b.nullable;
      return out;
    }
    case Kind::Concat: {
      auto a = first_follow_rec(r.left(), follow);
      auto b = first_follow_rec(r.right(), follow);
      for (Position p : a.last) follow[p].insert(b.first.begin(), b.first.end());
      out.first = a.first;
      if (a.nullable) out.first.insert(b.first.begin(), b.first.end());
      out.last = b.last;
      if (b.nullable) out.last.insert(a.last.begin(), a.last.end());
      out.nullable = a.nullable && b.nullable;
      return out;
    }
    case Kind::Interleave: {
      // No cross-operand follow edges: shuffle is not expressible here.
      auto a = first_follow_rec(r.left(), follow);
      auto b = first_follow_rec(r.right(), follow);
      out.first = a.first;
      out.first.insert(b.first.begin(), b.first.end());
      out.last = a.last;
      out.last.insert(b.last.begin(), b.last.end());
      out.nullable = a.nullable && b.nullable;
      return out;
    }
    case Kind::Star:
    case Kind::Plus:
    case Kind::Optional:
    case Kind::Count: {
      out = first_follow_rec(r.child(), follow);
      const bool loops = r.is(Kind::Star) || r.is(Kind::Plus) ||
                         (r.is(Kind::Count) && r.bounds().max >= 2);
      if (loops)
        for (Position p : out.last) follow[p].insert(out.first.begin(), out.first.end());
      if (r.is(Kind::Star) || r.is(Kind::Optional)) out.nullable = true;
      if (r.is(Kind::Count) && r.bounds().min == 0) out.nullable = true;
      return out;
    }
  }
  return out;
}

}  // namespace detail

// Inductive first/last/follow sets. Count(E,[m,n]) loops last(E) back to
// first(E) when n >= 2. Interleave contributes first/last/nullable only.
inline FirstFollow first_follow(const MarkedRegex& m) {
  FirstFollow out;
  auto top = detail::first_follow_rec(m.tree, out.follow);
  out.first = std::move(top.first);
  out.last = std::move(top.last);
  out.nullable = top.nullable;
  return out;
}

// ---------------------------------------------------------------------------
// Counter clamping

// Shrinks every counter to bounds <= 3 while keeping the reachable
// (must-repeat, may-repeat, may-exit) iteration situations of the original.
inline Regex clamp_counter_bounds(const Regex& r) {
  return transform(r, [](const Regex& n) {
    if (!n.is(Kind::Count)) return n;
    const CountBounds b = n.bounds();
    CountBounds c;
    c.min = std::min<std::uint32_t>(b.min, 2);
    if (b.max == b.min) {
      c.max = c.min;
    } else if (b.unbounded()) {
      c.max = std::max<std::uint32_t>(c.min + 1, 2);
    } else {
      // A counter that cannot repeat ({0,1}) must stay non-repeating.
      c.max = std::min<std::uint32_t>(b.max, std::max<std::uint32_t>(c.min + 1, 2));
    }
    if (c == b) return n;
    return Regex::count(n.child(), c);
  });
}

namespace detail {

// Removes empty-language subexpressions, keeping position ids. The result is
// either Empty or free of Empty nodes.
inline Regex prune_empty(const Regex& r) {
  return transform(r, [](const Regex& n) -> Regex {
    auto is_empty = [](const Regex& x) { return x.is(Kind::Empty); };
    switch (n.kind()) {
      case Kind::Union:
        if (is_empty(n.left())) return n.right();
        if (is_empty(n.right())) return n.left();
        return n;
      case Kind::Concat:
      case Kind::Interleave:
        if (is_empty(n.left()) || is_empty(n.right())) return Regex::empty();
        return n;
      case Kind::Star:
      case Kind::Optional:
        return is_empty(n.child()) ? Regex::epsilon() : n;
      case Kind::Plus:
        return is_empty(n.child()) ? Regex::empty() : n;
      case Kind::Count:
        if (!is_empty(n.child())) return n;
        return n.bounds().min == 0 ? Regex::epsilon() : Regex::empty();
      default:
        return n;
    }
  });
}

inline void collect_interleave_operands(const Regex& r, std::vector<Regex>& out) {
  if (r.is(Kind::Interleave)) {
    collect_interleave_operands(r.left(), out);
    collect_interleave_operands(r.right(), out);
  } else {
    out.push_back(r);
  }
}

// E1 & ... & Ek with pairwise symbol-disjoint operands becomes the union over
// i of the rotations E(i+1) ... E(k) E1 ... E(i). The result accepts a subset
// of the original marked language, and every pair of simultaneously enabled
// positions of the original that could clash is enabled together after some
// prefix of the rewrite.
inline Regex split_disjoint_interleavings(const Regex& r) {
  if (r.is_leaf()) return r;
  if (!r.is(Kind::Interleave)) {
    std::vector<Regex> kids;
    for (const auto& c : r.children()) kids.push_back(split_disjoint_interleavings(c));
    return r.with_children(std::move(kids));
  }
  std::vector<Regex> ops;
  collect_interleave_operands(r, ops);
  for (auto& op : ops) op = split_disjoint_interleavings(op);
  std::vector<std::set<std::string>> alphabets;
  for (const auto& op : ops) {
    std::set<std::string> a;
    for_each_symbol(op, [&](const Regex& s) { a.insert(s.name()); });
    alphabets.push_back(std::move(a));
  }
  bool disjoint = true;
  for (std::size_t i = 0; i < ops.size() && disjoint; ++i)
    for (std::size_t j = i + 1; j < ops.size() && disjoint; ++j)
      for (const auto& s : alphabets[i])
        if (alphabets[j].count(s)) {
          disjoint = false;
          break;
        }
  if (!disjoint) return Regex::interleave_all(ops);
  std::vector<Regex> branches;
  const std::size_t k = ops.size();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Regex> seq;
    for (std::size_t j = 1; j <= k; ++j) seq.push_back(ops[(i + j) % k]);
    branches.push_back(Regex::cat_all(seq));
  }
  return Regex::alt_all(branches);
}

// Smallest (x, y), x < y, of distinct enabled positions sharing a symbol.
inline std::optional<std::pair<Position, Position>> find_clash(
    const std::vector<Position>& enabled, const std::vector<std::string>& symbol_at) {
  std::map<std::string, Position> seen;
  std::optional<std::pair<Position, Position>> best;
  // enabled is sorted ascending; the first repeat of a symbol pairs with its
  // smallest earlier position, but a smaller x may appear with a later y.
  for (Position p : enabled) {
    const auto& s = symbol_at.at(p - 1);
    auto [it, inserted] = seen.emplace(s, p);
    if (!inserted) {
      std::pair<Position, Position> cand{it->second, p};
      if (!best || cand < *best) best = cand;
    }
  }
  return best;
}

// Breadth-first search over a deterministic automaton on marked letters,
// visiting states in shortlex order of their least prefixes. `Automaton`
// provides State, start(), enabled(state) sorted ascending, and
// step(state, position).
template <typename Automaton>
DeterminismVerdict explore(Automaton& a, const std::vector<std::string>& symbol_at,
                           std::size_t ceiling) {
  using State = typename Automaton::State;
  DeterminismVerdict v;
  struct Visit {
    State state;
    std::size_t parent;
    Position via;
  };
  std::vector<Visit> visits;
  std::unordered_map<State, std::size_t> index;
  visits.push_back({a.start(), static_cast<std::size_t>(-1), 0});
  index.emplace(a.start(), 0);
  for (std::size_t head = 0; head < visits.size(); ++head) {
    const State s = visits[head].state;
    const std::vector<Position> en = a.enabled(s);
    if (auto clash = find_clash(en, symbol_at)) {
      Witness w;
      for (std::size_t i = head; visits[i].parent != static_cast<std::size_t>(-1); i = visits[i].parent)
        w.prefix_positions.push_back(visits[i].via);
      std::reverse(w.prefix_positions.begin(), w.prefix_positions.end());
      for (Position p : w.prefix_positions) w.prefix.push_back(symbol_at.at(p - 1));
      w.pos_x = clash->first;
      w.pos_y = clash->second;
      w.symbol = symbol_at.at(w.pos_x - 1);
      v.outcome = Outcome::NonDeterministic;
      v.witness = std::move(w);
      v.states = visits.size();
      return v;
    }
    for (Position p : en) {
      const State t = a.step(s, p);
      if (index.count(t)) continue;
      if (visits.size() >= ceiling) {
        v.outcome = Outcome::UndecidedResource;
        v.states = visits.size();
        return v;
      }
      index.emplace(t, visits.size());
      visits.push_back({t, head, p});
    }
  }
  v.outcome = Outcome::Deterministic;
  v.states = visits.size();
  return v;
}

// Glushkov automaton of a standard, Empty-free marked expression: state 0 is
// the start, state p means "last read position p".
class GlushkovAutomaton {
 public:
  using State = Position;

  explicit GlushkovAutomaton(const Regex& tree) {
    MarkedRegex m{tree, {}};
    ff_ = first_follow(m);
  }

  State start() const { return 0; }
  std::vector<Position> enabled(State s) const {
    const auto& set = s == 0 ? ff_.first : ff_.follow.at(s);
    return {set.begin(), set.end()};
  }
  State step(State, Position p) const { return p; }

 private:
  FirstFollow ff_;
};

// Hash-consed terms over marked letters with smart constructors that keep
// every non-Empty term free of Empty subterms. Unions are flattened, sorted
// and deduplicated, which bounds the number of distinct derivatives.
class TermTable {
 public:
  using Id = std::uint32_t;
  static constexpr Id kEmpty = 0;
  static constexpr Id kEps = 1;

  TermTable() {
    intern({Kind::Empty, 0, 0, 0, {}});
    intern({Kind::Epsilon, 0, 0, 0, {}});
  }

  Id from_regex(const Regex& r) {
    switch (r.kind()) {
      case Kind::Empty: return kEmpty;
      case Kind::Epsilon: return kEps;
      case Kind::Symbol: return sym(r.position());
      case Kind::Union: return alt({from_regex(r.left()), from_regex(r.right())});
      case Kind::Concat: return cat(from_regex(r.left()), from_regex(r.right()));
      case Kind::Interleave: return shuffle(from_regex(r.left()), from_regex(r.right()));
      case Kind::Star: return star(from_regex(r.child()));
      case Kind::Plus: return plus(from_regex(r.child()));
      case Kind::Optional: return opt(from_regex(r.child()));
      case Kind::Count: return count(from_regex(r.child()), r.bounds().min, r.bounds().max);
    }
    return kEmpty;
  }

  bool nullable(Id t) const { return terms_[t].nullable; }
  const std::vector<Position>& first(Id t) const { return terms_[t].first; }
  std::size_t size() const { return terms_.size(); }

  Id derive(Id t, Position p) {
    const Term& term = terms_[t];
    if (!std::binary_search(term.first.begin(), term.first.end(), p)) return kEmpty;
    const std::uint64_t key = (static_cast<std::uint64_t>(t) << 32) | p;
    if (auto it = deriv_memo_.find(key); it != deriv_memo_.end()) return it->second;
    Id out = kEmpty;
    const Term copy = term;  // terms_ may grow below
    switch (copy.kind) {
      case Kind::Symbol: out = kEps; break;
      case Kind::Union: {
        std::vector<Id> parts;
        for (Id k : copy.kids) parts.push_back(derive(k, p));
        out = alt(std::move(parts));
        break;
      }
      case Kind::Concat: {
        const Id head = cat(derive(copy.kids[0], p), copy.kids[1]);
        out = nullable(copy.kids[0]) ? alt({head, derive(copy.kids[1], p)}) : head;
        break;
      }
      case Kind::Star: out = cat(derive(copy.kids[0], p), t); break;
      case Kind::Plus: out = cat(derive(copy.kids[0], p), star(copy.kids[0])); break;
      case Kind::Optional: out = derive(copy.kids[0], p); break;
      case Kind::Count: {
        const std::uint32_t lo = copy.min == 0 ? 0 : copy.min - 1;
        const std::uint32_t hi = copy.max == CountBounds::kUnbounded ? copy.max : copy.max - 1;
        out = cat(derive(copy.kids[0], p), count(copy.kids[0], lo, hi));
        break;
      }
      case Kind::Interleave:
        out = alt({shuffle(derive(copy.kids[0], p), copy.kids[1]),
                   shuffle(copy.kids[0], derive(copy.kids[1], p))});
        break;
      default: break;
    }
    deriv_memo_.emplace(key, out);
    return out;
  }

 private:
  struct Key {
    Kind kind;
    Position pos;
    std::uint32_t min;
    std::uint32_t max;
    std::vector<Id> kids;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(k.kind);
      auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      };
      mix(k.pos);
      mix(k.min);
      mix(k.max);
      for (Id c : k.kids) mix(c);
      return static_cast<std::size_t>(h);
    }
  };
  struct Term {
    Kind kind;
    Position pos;
    std::uint32_t min;
    std::uint32_t max;
    std::vector<Id> kids;
    bool nullable;
    std::vector<Position> first;
  };

  Id intern(Key key) {
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    Term t{key.kind, key.pos, key.min, key.max, key.kids, false, {}};
    switch (key.kind) {
      case Kind::Empty: break;
      case Kind::Epsilon: t.nullable = true; break;
      case Kind::Symbol: t.first = {key.pos}; break;
      case Kind::Union:
        for (Id k : key.kids) {
          t.nullable = t.nullable || terms_[k].nullable;
          t.first = merge(t.first, terms_[k].first);
        }
        break;
      case Kind::Concat:
        t.nullable = terms_[key.kids[0]].nullable && terms_[key.kids[1]].nullable;
        t.first = terms_[key.kids[0]].first;
        if (terms_[key.kids[0]].nullable) t.first = merge(t.first, terms_[key.kids[1]].first);
        break;
      case Kind::Interleave:
        t.nullable = terms_[key.kids[0]].nullable && terms_[key.kids[1]].nullable;
        t.first = merge(terms_[key.kids[0]].first, terms_[key.kids[1]].first);
        break;
      case Kind::Star:
      case Kind::Optional:
        t.nullable = true;
        t.first = terms_[key.kids[0]].first;
        break;
      case Kind::Plus:
        t.nullable = terms_[key.kids[0]].nullable;
        t.first = terms_[key.kids[0]].first;
        break;
      case Kind::Count:
        t.nullable = key.min == 0 || terms_[key.kids[0]].nullable;
        t.first = terms_[key.kids[0]].first;
        break;
    }
    const Id id = static_cast<Id>(terms_.size());
    terms_.push_back(std::move(t));
    index_.emplace(std::move(key), id);
    return id;
  }

  static std::vector<Position> merge(const std::vector<Position>& a, const std::vector<Position>& b) {
    std::vector<Position> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  Id sym(Position p) { return intern({Kind::Symbol, p, 0, 0, {}}); }

  Id alt(std::vector<Id> parts) {
    std::vector<Id> flat;
    for (Id p : parts) {
      if (p == kEmpty) continue;
      if (terms_[p].kind == Kind::Union) {
        const auto kids = terms_[p].kids;
        flat.insert(flat.end(), kids.begin(), kids.end());
      } else {
        flat.push_back(p);
      }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return kEmpty;
    if (flat.size() == 1) return flat.front();
    return intern({Kind::Union, 0, 0, 0, std::move(flat)});
  }

  Id cat(Id a, Id b) {
    if (a == kEmpty || b == kEmpty) return kEmpty;
    if (a == kEps) return b;
    if (b == kEps) return a;
    if (terms_[a].kind == Kind::Concat) {
      const Id x = terms_[a].kids[0];
      const Id y = terms_[a].kids[1];
      return cat(x, cat(y, b));
    }
    return intern({Kind::Concat, 0, 0, 0, {a, b}});
  }

  Id shuffle(Id a, Id b) {
    if (a == kEmpty || b == kEmpty) return kEmpty;
    if (a == kEps) return b;
    if (b == kEps) return a;
    return intern({Kind::Interleave, 0, 0, 0, {a, b}});
  }

  Id star(Id a) {
    if (a == kEmpty || a == kEps) return kEps;
    if (terms_[a].kind == Kind::Star) return a;
    return intern({Kind::Star, 0, 0, 0, {a}});
  }

  Id plus(Id a) {
    if (a == kEmpty) return kEmpty;
    if (a == kEps) return kEps;
    return intern({Kind::Plus, 0, 0, 0, {a}});
  }

  Id opt(Id a) {
    if (a == kEmpty || a == kEps) return kEps;
    if (terms_[a].nullable) return a;
    return intern({Kind::Optional, 0, 0, 0, {a}});
  }

  Id count(Id a, std::uint32_t lo, std::uint32_t hi) {
    if (hi == 0) return kEps;
    if (a == kEmpty) return lo == 0 ? kEps : kEmpty;
    if (a == kEps) return kEps;
    const bool inf = hi == CountBounds::kUnbounded;
    if (lo == 1 && hi == 1) return a;
    if (lo == 0 && hi == 1) return opt(a);
    if (lo == 0 && inf) return star(a);
    if (lo == 1 && inf) return plus(a);
    return intern({Kind::Count, 0, lo, hi, {a}});
  }

  std::vector<Term> terms_;
  std::unordered_map<Key, Id, KeyHash> index_;
  std::unordered_map<std::uint64_t, Id> deriv_memo_;
};

class DerivativeAutomaton {
 public:
  using State = TermTable::Id;

  explicit DerivativeAutomaton(const Regex& tree) : start_(table_.from_regex(tree)) {}

  State start() const { return start_; }
  std::vector<Position> enabled(State s) const { return table_.first(s); }
  State step(State s, Position p) { return table_.derive(s, p); }

 private:
  TermTable table_;
  State start_;
};

inline DeterminismVerdict explore_derivatives(const Regex& tree, const std::vector<std::string>& symbol_at,
                                              std::size_t ceiling) {
  DerivativeAutomaton a(tree);
  return explore(a, symbol_at, ceiling);
}

}  // namespace detail

inline DeterminismVerdict is_deterministic(const Regex& r, const DeterminismOptions& opt = {}) {
  const MarkedRegex marked = mark(r);
  const Regex pruned = detail::prune_empty(marked.tree);
  DeterminismVerdict v;
  if (pruned.is(Kind::Empty)) return v;  // no words, no positions to clash

  if (is_standard(pruned)) {
    detail::GlushkovAutomaton g(pruned);
    return detail::explore(g, marked.symbol_at, opt.state_ceiling);
  }

  const Regex clamped = clamp_counter_bounds(pruned);
  const bool was_clamped = !(clamped == pruned);
  const Regex target = opt.split_disjoint_interleave ? detail::split_disjoint_interleavings(clamped) : clamped;
  const bool was_split = !(target == clamped);
  v = detail::explore_derivatives(target, marked.symbol_at, opt.state_ceiling);
  v.clamped = was_clamped;
  if (v.outcome != Outcome::NonDeterministic) return v;

  // Prefer the shortlex-least witness on the unmodified expression; keep the
  // one already found if that search runs out of budget.
  const std::size_t refine_budget = std::min<std::size_t>(opt.state_ceiling, 200'000);
  if (was_clamped) {
    auto exact = detail::explore_derivatives(pruned, marked.symbol_at, refine_budget);
    if (exact.outcome == Outcome::NonDeterministic) {
      exact.states = v.states;
      return exact;
    }
  }
  if (was_split) {
    auto exact = detail::explore_derivatives(clamped, marked.symbol_at, refine_budget);
    if (exact.outcome == Outcome::NonDeterministic) {
      exact.clamped = was_clamped;
      exact.states = v.states;
      return exact;
    }
  }
  return v;
}

}  // namespace dretk
