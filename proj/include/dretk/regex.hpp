#pragma once

// Immutable AST for regular expressions extended with counting and
// interleaving. Nodes are shared; a Regex is a cheap value handle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dretk {

enum class Kind : std::uint8_t {
  Empty,
  Epsilon,
  Symbol,
  Union,
  Concat,
  Star,
  Plus,
  Optional,
  Count,
  Interleave,
};

inline const char* kind_name(Kind k) noexcept {
  switch (k) {
    case Kind::Empty: return "Empty";
    case Kind::Epsilon: return "Epsilon";
    case Kind::Symbol: return "Sym";
    case Kind::Union: return "Union";
    case Kind::Concat: return "Concat";
    case Kind::Star: return "Star";
    case Kind::Plus: return "Plus";
    case Kind::Optional: return "Optional";
    case Kind::Count: return "Count";
    case Kind::Interleave: return "Interleave";
  }
  return "?";
}

// Bounds of E{m,n}. `max == kUnbounded` stands for infinity.
struct CountBounds {
  static constexpr std::uint32_t kUnbounded = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t min = 0;
  std::uint32_t max = kUnbounded;

  [[nodiscard]] bool unbounded() const noexcept { return max == kUnbounded; }
  [[nodiscard]] bool valid() const noexcept { return max >= 1 && min <= max; }

  friend bool operator==(const CountBounds&, const CountBounds&) = default;
};

class InvalidBounds : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Regex {
  struct Node;

 public:
  // Position id 0 means "unmarked".
  using Position = std::uint32_t;

  Regex() : Regex(epsilon()) {}

  static Regex empty() { return Regex(std::make_shared<Node>(Kind::Empty)); }
  static Regex epsilon() {
    static const Regex eps(std::make_shared<Node>(Kind::Epsilon));
    return eps;
  }
  static Regex symbol(std::string name, Position pos = 0) {
    if (name.empty()) throw std::invalid_argument("symbol name must be non-empty");
    auto n = std::make_shared<Node>(Kind::Symbol);
    n->name = std::move(name);
    n->position = pos;
    return Regex(std::move(n));
  }
  static Regex alt(Regex l, Regex r) { return binary(Kind::Union, std::move(l), std::move(r)); }
  static Regex cat(Regex l, Regex r) { return binary(Kind::Concat, std::move(l), std::move(r)); }
  static Regex interleave(Regex l, Regex r) {
    return binary(Kind::Interleave, std::move(l), std::move(r));
  }
  static Regex star(Regex e) { return unary(Kind::Star, std::move(e)); }
  static Regex plus(Regex e) { return unary(Kind::Plus, std::move(e)); }
  static Regex optional(Regex e) { return unary(Kind::Optional, std::move(e)); }
  static Regex count(Regex e, CountBounds b) {
    if (!b.valid()) throw InvalidBounds("counter bounds require min <= max and max >= 1");
    auto n = std::make_shared<Node>(Kind::Count);
    n->bounds = b;
    n->children = {std::move(e)};
    return Regex(std::move(n));
  }
  static Regex count(Regex e, std::uint32_t min, std::uint32_t max) {
    return count(std::move(e), CountBounds{min, max});
  }

  // Left-associated folds; an empty list yields `fallback`.
  static Regex cat_all(const std::vector<Regex>& parts, Regex fallback = epsilon()) {
    return fold(Kind::Concat, parts, std::move(fallback));
  }
  static Regex alt_all(const std::vector<Regex>& parts, Regex fallback = empty()) {
    return fold(Kind::Union, parts, std::move(fallback));
  }
  static Regex interleave_all(const std::vector<Regex>& parts, Regex fallback = epsilon()) {
    return fold(Kind::Interleave, parts, std::move(fallback));
  }

  [[nodiscard]] Kind kind() const noexcept { return node_->kind; }
  [[nodiscard]] const std::string& name() const noexcept { return node_->name; }
  [[nodiscard]] Position position() const noexcept { return node_->position; }
  [[nodiscard]] const CountBounds& bounds() const noexcept { return node_->bounds; }
  [[nodiscard]] const Regex& left() const { return node_->children.at(0); }
  [[nodiscard]] const Regex& right() const { return node_->children.at(1); }
  [[nodiscard]] const Regex& child() const { return node_->children.at(0); }
  [[nodiscard]] const std::vector<Regex>& children() const noexcept { return node_->children; }

  [[nodiscard]] bool is(Kind k) const noexcept { return kind() == k; }
  [[nodiscard]] bool is_leaf() const noexcept { return node_->children.empty(); }
  [[nodiscard]] bool is_binary() const noexcept {
    return kind() == Kind::Union || kind() == Kind::Concat || kind() == Kind::Interleave;
  }
  [[nodiscard]] bool is_unary() const noexcept {
    return kind() == Kind::Star || kind() == Kind::Plus || kind() == Kind::Optional ||
           kind() == Kind::Count;
  }

  // Same node kind and payload, new children.
  [[nodiscard]] Regex with_children(std::vector<Regex> kids) const {
    auto n = std::make_shared<Node>(*node_);
    n->children = std::move(kids);
    return Regex(std::move(n));
  }
  [[nodiscard]] Regex with_symbol(std::string name, Position pos) const {
    return symbol(std::move(name), pos);
  }

  [[nodiscard]] const void* identity() const noexcept { return node_.get(); }

  // Structural equality, position ids included.
  friend bool operator==(const Regex& a, const Regex& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind || x.name != y.name || x.position != y.position ||
        x.bounds != y.bounds || x.children.size() != y.children.size())
      return false;
    for (std::size_t i = 0; i < x.children.size(); ++i)
      if (!(x.children[i] == y.children[i])) return false;
    return true;
  }

 private:
  struct Node {
    explicit Node(Kind k) : kind(k) {}
    Kind kind;
    std::string name;
    Position position = 0;
    CountBounds bounds{};
    std::vector<Regex> children;
  };

  explicit Regex(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Regex binary(Kind k, Regex l, Regex r) {
    auto n = std::make_shared<Node>(k);
    n->children = {std::move(l), std::move(r)};
    return Regex(std::move(n));
  }
  static Regex unary(Kind k, Regex e) {
    auto n = std::make_shared<Node>(k);
    n->children = {std::move(e)};
    return Regex(std::move(n));
  }
  static Regex fold(Kind k, const std::vector<Regex>& parts, Regex fallback) {
    if (parts.empty()) return fallback;
    Regex acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = binary(k, acc, parts[i]);
    return acc;
  }

  std::shared_ptr<const Node> node_;
};

// Number of AST nodes.
inline std::size_t size(const Regex& r) {
  std::size_t n = 1;
  for (const auto& c : r.children()) n += size(c);
  return n;
}

inline bool contains_kind(const Regex& r, Kind k) {
  if (r.kind() == k) return true;
  for (const auto& c : r.children())
    if (contains_kind(c, k)) return true;
  return false;
}

// No counting and no interleaving.
inline bool is_standard(const Regex& r) {
  return !contains_kind(r, Kind::Count) && !contains_kind(r, Kind::Interleave);
}

// Bottom-up rebuild: `f` receives the node with already-rewritten children.
inline Regex transform(const Regex& r, const std::function<Regex(const Regex&)>& f) {
  if (r.is_leaf()) return f(r);
  std::vector<Regex> kids;
  kids.reserve(r.children().size());
  bool changed = false;
  for (const auto& c : r.children()) {
    kids.push_back(transform(c, f));
    changed = changed || kids.back().identity() != c.identity();
  }
  return f(changed ? r.with_children(std::move(kids)) : r);
}

// Leaves in left-to-right order.
inline void for_each_symbol(const Regex& r, const std::function<void(const Regex&)>& f) {
  if (r.is(Kind::Symbol)) {
    f(r);
    return;
  }
  for (const auto& c : r.children()) for_each_symbol(c, f);
}

using SymbolCounts = std::map<std::string, std::size_t>;

// Multiset of leaf symbols. Counting does not multiply occurrences.
inline SymbolCounts symbols(const Regex& r) {
  SymbolCounts out;
  for_each_symbol(r, [&](const Regex& s) { ++out[s.name()]; });
  return out;
}

inline std::size_t leaf_count(const Regex& r) {
  std::size_t n = 0;
  for_each_symbol(r, [&](const Regex&) { ++n; });
  return n;
}

// True iff the empty word is in L(r).
inline bool nullable(const Regex& r) {
  switch (r.kind()) {
    case Kind::Empty: return false;
    case Kind::Epsilon: return true;
    case Kind::Symbol: return false;
    case Kind::Union: return nullable(r.left()) || nullable(r.right());
    case Kind::Concat:
    case Kind::Interleave: return nullable(r.left()) && nullable(r.right());
    case Kind::Star:
    case Kind::Optional: return true;
    case Kind::Plus: return nullable(r.child());
    case Kind::Count: return r.bounds().min == 0 || nullable(r.child());
  }
  return false;
}

// True iff L(r) is empty.
inline bool empty_language(const Regex& r) {
  switch (r.kind()) {
    case Kind::Empty: return true;
    case Kind::Epsilon:
    case Kind::Symbol: return false;
    case Kind::Union: return empty_language(r.left()) && empty_language(r.right());
    case Kind::Concat:
    case Kind::Interleave: return empty_language(r.left()) || empty_language(r.right());
    case Kind::Star:
    case Kind::Optional: return false;
    case Kind::Plus: return empty_language(r.child());
    case Kind::Count: return r.bounds().min > 0 && empty_language(r.child());
  }
  return false;
}

// Drops position ids.
inline Regex unmark(const Regex& r) {
  return transform(r, [](const Regex& n) {
    if (n.is(Kind::Symbol) && n.position() != 0) return Regex::symbol(n.name());
    return n;
  });
}

// Applies a symbol renaming; unmapped symbols are kept.
inline Regex rename(const Regex& r, const std::map<std::string, std::string>& mapping) {
  return transform(r, [&](const Regex& n) {
    if (!n.is(Kind::Symbol)) return n;
    auto it = mapping.find(n.name());
    return it == mapping.end() ? n : Regex::symbol(it->second, n.position());
  });
}

}  // namespace dretk
