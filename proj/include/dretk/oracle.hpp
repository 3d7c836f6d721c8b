#pragma once

// Brute-force determinism oracle. Builds an epsilon-NFA over the marked
// alphabet by structural construction (counters fully unfolded, interleaving
// as a product of sub-automata), trims states that cannot reach acceptance,
// and runs the subset construction. A clash is a reachable subset with two
// outgoing live letters x != y carrying the same symbol.
//
// Test-scale only: AST size <= 32 and every finite counter bound <= 8.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dretk/determinism.hpp"  // verdict types only
#include "dretk/marking.hpp"
#include "dretk/regex.hpp"

namespace dretk {

namespace oracle_detail {

struct Nfa {
  int start = 0;
  std::vector<bool> accept;
  std::vector<std::vector<int>> eps;
  std::vector<std::vector<std::pair<Position, int>>> edges;

  int add_state(bool acc = false) {
    accept.push_back(acc);
    eps.emplace_back();
    edges.emplace_back();
    return static_cast<int>(accept.size()) - 1;
  }
  [[nodiscard]] int size() const { return static_cast<int>(accept.size()); }

  // Copies `other` into this automaton; returns the state offset.
  int absorb(const Nfa& other) {
    const int off = size();
    for (int s = 0; s < other.size(); ++s) {
      add_state(false);
      for (int t : other.eps[s]) eps.back().push_back(t + off);
      for (auto [p, t] : other.edges[s]) edges.back().emplace_back(p, t + off);
    }
    return off;
  }
};

inline constexpr std::size_t kMaxOracleStates = 2'000'000;

inline void guard(const Nfa& n) {
  if (static_cast<std::size_t>(n.size()) > kMaxOracleStates)
    throw std::invalid_argument("oracle automaton too large");
}

inline Nfa build(const Regex& r);

inline Nfa concat(const Nfa& a, const Nfa& b) {
  Nfa out;
  const int oa = out.absorb(a);
  const int ob = out.absorb(b);
  out.start = a.start + oa;
  for (int s = 0; s < a.size(); ++s)
    if (a.accept[s]) out.eps[s + oa].push_back(b.start + ob);
  for (int s = 0; s < b.size(); ++s) out.accept[s + ob] = b.accept[s];
  guard(out);
  return out;
}

inline Nfa alternative(const Nfa& a, const Nfa& b) {
  Nfa out;
  const int st = out.add_state(false);
  const int oa = out.absorb(a);
  const int ob = out.absorb(b);
  out.start = st;
  out.eps[st] = {a.start + oa, b.start + ob};
  for (int s = 0; s < a.size(); ++s) out.accept[s + oa] = a.accept[s];
  for (int s = 0; s < b.size(); ++s) out.accept[s + ob] = b.accept[s];
  guard(out);
  return out;
}

inline Nfa epsilon_nfa() {
  Nfa n;
  n.start = n.add_state(true);
  return n;
}

inline Nfa optional(const Nfa& a) { return alternative(epsilon_nfa(), a); }

// a* built with a fresh hub state.
inline Nfa kleene(const Nfa& a) {
  Nfa out;
  const int hub = out.add_state(true);
  const int oa = out.absorb(a);
  out.start = hub;
  out.eps[hub].push_back(a.start + oa);
  for (int s = 0; s < a.size(); ++s)
    if (a.accept[s]) out.eps[s + oa].push_back(hub);
  guard(out);
  return out;
}

inline Nfa product(const Nfa& a, const Nfa& b) {
  Nfa out;
  const int nb = b.size();
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < nb; ++j) out.add_state(a.accept[i] && b.accept[j]);
  guard(out);
  auto id = [nb](int i, int j) { return i * nb + j; };
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < nb; ++j) {
      const int s = id(i, j);
      for (int t : a.eps[i]) out.eps[s].push_back(id(t, j));
      for (int t : b.eps[j]) out.eps[s].push_back(id(i, t));
      for (auto [p, t] : a.edges[i]) out.edges[s].emplace_back(p, id(t, j));
      for (auto [p, t] : b.edges[j]) out.edges[s].emplace_back(p, id(i, t));
    }
  out.start = id(a.start, b.start);
  return out;
}

inline Nfa build(const Regex& r) {
  switch (r.kind()) {
    case Kind::Empty: {
      Nfa n;
      n.start = n.add_state(false);
      return n;
    }
    case Kind::Epsilon: return epsilon_nfa();
    case Kind::Symbol: {
      Nfa n;
      n.start = n.add_state(false);
      const int f = n.add_state(true);
      n.edges[n.start].emplace_back(r.position(), f);
      return n;
    }
    case Kind::Union: return alternative(build(r.left()), build(r.right()));
    case Kind::Concat: return concat(build(r.left()), build(r.right()));
    case Kind::Interleave: return product(build(r.left()), build(r.right()));
    case Kind::Star: return kleene(build(r.child()));
    case Kind::Plus: {
      const Nfa inner = build(r.child());
      return concat(inner, kleene(inner));
    }
    case Kind::Optional: return optional(build(r.child()));
    case Kind::Count: {
      // E{m,n} = E^m (E?)^(n-m), or E^m E* when n is unbounded.
      const Nfa inner = build(r.child());
      const CountBounds b = r.bounds();
      Nfa acc = epsilon_nfa();
      for (std::uint32_t i = 0; i < b.min; ++i) acc = concat(acc, inner);
      if (b.unbounded()) return concat(acc, kleene(inner));
      const Nfa opt = optional(inner);
      for (std::uint32_t i = b.min; i < b.max; ++i) acc = concat(acc, opt);
      return acc;
    }
  }
  return epsilon_nfa();
}

inline void check_preconditions(const Regex& r) {
  if (size(r) > 32) throw std::invalid_argument("oracle precondition: AST size must be <= 32");
  bool ok = true;
  auto visit = [&](auto& self, const Regex& n) -> void {
    if (n.is(Kind::Count)) {
      if (n.bounds().min > 8 || (!n.bounds().unbounded() && n.bounds().max > 8)) ok = false;
    }
    for (const auto& c : n.children()) self(self, c);
  };
  visit(visit, r);
  if (!ok) throw std::invalid_argument("oracle precondition: finite counter bounds must be <= 8");
}

class SubsetAutomaton {
 public:
  using State = std::uint32_t;

  explicit SubsetAutomaton(Nfa nfa) : nfa_(std::move(nfa)) {
    compute_live();
    std::vector<int> init;
    if (live_[nfa_.start]) init.push_back(nfa_.start);
    start_ = intern(closure(std::move(init)));
  }

  State start() const { return start_; }

  std::vector<Position> enabled(State s) const {
    std::vector<Position> out;
    for (int q : subsets_[s])
      for (auto [p, t] : nfa_.edges[q])
        if (live_[t]) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  State step(State s, Position p) {
    std::vector<int> next;
    for (int q : subsets_[s])
      for (auto [x, t] : nfa_.edges[q])
        if (x == p && live_[t]) next.push_back(t);
    return intern(closure(std::move(next)));
  }

 private:
  void compute_live() {
    const int n = nfa_.size();
    std::vector<std::vector<int>> rev(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      for (int t : nfa_.eps[s]) rev[t].push_back(s);
      for (auto [p, t] : nfa_.edges[s]) rev[t].push_back(s);
    }
    live_.assign(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s)
      if (nfa_.accept[s]) {
        live_[s] = true;
        stack.push_back(s);
      }
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (int u : rev[s])
        if (!live_[u]) {
          live_[u] = true;
          stack.push_back(u);
        }
    }
  }

  std::vector<int> closure(std::vector<int> seed) const {
    std::vector<bool> in(static_cast<std::size_t>(nfa_.size()), false);
    std::vector<int> out;
    while (!seed.empty()) {
      const int s = seed.back();
      seed.pop_back();
      if (in[s] || !live_[s]) continue;
      in[s] = true;
      out.push_back(s);
      for (int t : nfa_.eps[s]) seed.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  State intern(std::vector<int> subset) {
    auto [it, inserted] = ids_.emplace(subset, static_cast<State>(subsets_.size()));
    if (inserted) subsets_.push_back(std::move(subset));
    return it->second;
  }

  Nfa nfa_;
  std::vector<bool> live_;
  std::vector<std::vector<int>> subsets_;
  std::map<std::vector<int>, State> ids_;
  State start_ = 0;
};

}  // namespace oracle_detail

// Exact, exhaustive decision of the marked-word definition. Subsets are
// visited breadth-first with letters in ascending order, so the reported
// prefix is shortlex-least. `len_limit` bounds the explored prefix length;
// exceeding it throws.
inline DeterminismVerdict oracle_is_deterministic(const Regex& r, std::size_t len_limit = 256) {
  oracle_detail::check_preconditions(r);
  const MarkedRegex marked = mark(r);
  oracle_detail::SubsetAutomaton a(oracle_detail::build(marked.tree));

  struct Node {
    std::uint32_t subset;
    std::size_t parent;
    Position via;
    std::size_t depth;
  };
  constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
  std::vector<Node> queue{{a.start(), kRoot, 0, 0}};
  std::map<std::uint32_t, bool> seen{{a.start(), true}};
  DeterminismVerdict v;
  v.method = Method::Oracle;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Node cur = queue[head];
    if (cur.depth > len_limit) throw std::invalid_argument("oracle exceeded len_limit");
    const std::vector<Position> out = a.enabled(cur.subset);
    // Brute-force pair scan: least (x, y) with x < y and equal symbols.
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        if (marked.symbol_of(out[i]) != marked.symbol_of(out[j])) continue;
        Witness w;
        for (std::size_t k = head; queue[k].parent != kRoot; k = queue[k].parent)
          w.prefix_positions.insert(w.prefix_positions.begin(), queue[k].via);
        for (Position p : w.prefix_positions) w.prefix.push_back(marked.symbol_of(p));
        w.pos_x = out[i];
        w.pos_y = out[j];
        w.symbol = marked.symbol_of(out[i]);
        v.outcome = Outcome::NonDeterministic;
        v.witness = std::move(w);
        v.states = queue.size();
        return v;
      }
    for (Position p : out) {
      const std::uint32_t next = a.step(cur.subset, p);
      if (seen.emplace(next, true).second) queue.push_back({next, head, p, cur.depth + 1});
    }
  }
  v.states = queue.size();
  return v;
}

}  // namespace dretk
