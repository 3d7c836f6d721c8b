#pragma once

// RELAX NG (XML syntax) content models. Every element pattern yields a rule
// keyed by its name; inside a content model a nested element is just its
// name. Defines are inlined through refs, with a guard against ref cycles.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dretk/regex.hpp"
#include "dretk/schema/schema_doc.hpp"
#include "dretk/schema/xml.hpp"

namespace dretk {

namespace rng_detail {

using xml::Element;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class Extractor {
 public:
  Extractor(const Element& root, SchemaDoc& doc) : root_(root), doc_(doc) {}

  void run() {
    if (root_.local == "grammar") collect(root_);
    elements(root_);
  }

 private:
  static bool rng(const Element& e) { return e.ns == xml::kRngNamespace; }

  struct Define {
    std::vector<const Element*> parts;
    std::string combine;
  };

  void collect(const Element& grammar) {
    for (const auto& c : grammar.children) {
      if (!rng(c)) continue;
      if (c.local == "define") {
        const std::string name = c.attr("name").value_or("");
        auto& d = defines_[name];
        d.parts.push_back(&c);
        if (auto comb = c.attr("combine")) d.combine = *comb;
      } else if (c.local == "div") {
        collect(c);
      } else if (c.local == "include") {
        if (auto href = c.attr("href")) doc_.imports.push_back({ReferenceKind::Include, *href});
        collect(c);
      }
    }
  }

  // Rules for element patterns in document order; nested grammars are not
  // entered.
  void elements(const Element& e) {
    if (!rng(e)) return;
    if (e.local == "grammar" && &e != &root_) {
      doc_.skip("nested-grammar");
      return;
    }
    if (e.local == "externalRef") {
      if (auto href = e.attr("href")) doc_.imports.push_back({ReferenceKind::ExternalRef, *href});
      return;
    }
    if (e.local == "element") {
      if (auto name = element_name(e)) doc_.rules.push_back({*name, group(e, true)});
      else doc_.skip("name-class");
    }
    for (const auto& c : e.children) elements(c);
  }

  static std::optional<std::string> element_name(const Element& e) {
    if (auto n = e.attr("name")) return xml::local_part(trim(*n));
    for (const auto& c : e.children) {
      if (!rng(c)) continue;
      if (c.local == "name") return xml::local_part(trim(c.text));
      if (c.local == "anyName" || c.local == "nsName" || c.local == "choice") return std::nullopt;
    }
    return std::nullopt;
  }

  // Children of e as a group; for element patterns the name class is skipped.
  Regex group(const Element& e, bool is_element) {
    std::vector<Regex> parts;
    bool name_seen = false;
    for (const auto& c : e.children) {
      if (!rng(c)) continue;
      if (is_element && !name_seen && !e.attr("name") &&
          (c.local == "name" || c.local == "anyName" || c.local == "nsName" || c.local == "choice")) {
        name_seen = true;
        continue;
      }
      parts.push_back(pattern(c));
    }
    return seq(parts);
  }

  static Regex seq(const std::vector<Regex>& parts) {
    std::vector<Regex> kept;
    for (const auto& p : parts)
      if (!p.is(Kind::Epsilon)) kept.push_back(p);
    return Regex::cat_all(kept);
  }

  Regex pattern(const Element& e) {
    const std::string& k = e.local;
    if (k == "element") {
      if (auto name = element_name(e)) return Regex::symbol(*name);
      doc_.skip("anyName");
      return Regex::epsilon();
    }
    if (k == "group") return group(e, false);
    if (k == "choice") {
      std::vector<Regex> alts;
      for (const auto& c : e.children)
        if (rng(c)) alts.push_back(pattern(c));
      return Regex::alt_all(alts);
    }
    if (k == "interleave") {
      std::vector<Regex> kept;
      for (const auto& c : e.children)
        if (rng(c)) {
          Regex p = pattern(c);
          if (!p.is(Kind::Epsilon)) kept.push_back(p);
        }
      return Regex::interleave_all(kept);
    }
    if (k == "mixed") return group(e, false);
    if (k == "zeroOrMore") return wrap(Kind::Star, group(e, false));
    if (k == "oneOrMore") return wrap(Kind::Plus, group(e, false));
    if (k == "optional") return wrap(Kind::Optional, group(e, false));
    if (k == "ref") return ref(e.attr("name").value_or(""));
    if (k == "notAllowed") return Regex::empty();
    if (k == "text" || k == "data" || k == "value" || k == "list" || k == "attribute" || k == "empty")
      return Regex::epsilon();
    if (k == "externalRef") {
      doc_.skip("externalRef");
      return Regex::epsilon();
    }
    if (k == "parentRef") {
      doc_.skip("parentRef");
      return Regex::epsilon();
    }
    if (k == "grammar") {
      doc_.skip("nested-grammar");
      return Regex::epsilon();
    }
    doc_.skip(k);
    return Regex::epsilon();
  }

  static Regex wrap(Kind k, Regex body) {
    if (body.is(Kind::Epsilon)) return body;
    switch (k) {
      case Kind::Star: return Regex::star(std::move(body));
      case Kind::Plus: return Regex::plus(std::move(body));
      default: return Regex::optional(std::move(body));
    }
  }

  Regex ref(const std::string& name) {
    auto it = defines_.find(name);
    if (it == defines_.end()) {
      doc_.skip("unresolved-ref");
      return Regex::epsilon();
    }
    if (!active_.insert(name).second) {
      doc_.skip("cyclic-ref");
      return Regex::epsilon();
    }
    std::vector<Regex> bodies;
    for (const auto* part : it->second.parts) bodies.push_back(group(*part, false));
    active_.erase(name);
    if (bodies.size() == 1) return bodies.front();
    if (it->second.combine == "interleave") {
      std::vector<Regex> kept;
      for (const auto& b : bodies)
        if (!b.is(Kind::Epsilon)) kept.push_back(b);
      return Regex::interleave_all(kept);
    }
    return Regex::alt_all(bodies);
  }

  const Element& root_;
  SchemaDoc& doc_;
  std::map<std::string, Define> defines_;
  std::set<std::string> active_;
};

}  // namespace rng_detail

inline SchemaDoc extract_rng(std::string_view content, std::string source_path = {}) {
  SchemaDoc doc;
  doc.kind = SchemaKind::RNG;
  doc.source_path = std::move(source_path);
  auto parsed = xml::parse(content);
  if (!parsed.ok())
    throw SchemaParseError("line " + std::to_string(parsed.line) + ": " + parsed.error);
  const auto& root = *parsed.root;
  if (root.ns != xml::kRngNamespace || (root.local != "grammar" && root.local != "element"))
    throw SchemaParseError("root is not a RELAX NG grammar or element");
  rng_detail::Extractor(root, doc).run();
  doc.wellformed = true;
  return doc;
}

}  // namespace dretk
