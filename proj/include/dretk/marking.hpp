#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dretk/dialect.hpp"
#include "dretk/regex.hpp"

namespace dretk {

// A regex whose symbol leaves carry position ids 1..P in left-to-right order.
struct MarkedRegex {
  Regex tree;
  std::vector<std::string> symbol_at;  // symbol_at[p - 1] is the symbol of position p

  [[nodiscard]] std::size_t position_count() const noexcept { return symbol_at.size(); }
  [[nodiscard]] const std::string& symbol_of(Regex::Position p) const { return symbol_at.at(p - 1); }
};

inline MarkedRegex mark(const Regex& r) {
  MarkedRegex m;
  Regex::Position next = 1;
  m.tree = transform(r, [&](const Regex& n) {
    if (!n.is(Kind::Symbol)) return n;
    m.symbol_at.push_back(n.name());
    return Regex::symbol(n.name(), next++);
  });
  return m;
}

// Subscripted form, e.g. "(a_1|b_2)*a_3".
inline std::string render_marked(const MarkedRegex& m) {
  const Regex shown = transform(m.tree, [](const Regex& n) {
    if (!n.is(Kind::Symbol) || n.position() == 0) return n;
    return Regex::symbol(n.name() + "_" + std::to_string(n.position()), n.position());
  });
  return render(shown);
}

}  // namespace dretk
