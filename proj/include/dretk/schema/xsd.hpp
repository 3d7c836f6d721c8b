#pragma once

// XML Schema content models. One rule per complexType in document order,
// keyed by the type name, or by the enclosing element's name for anonymous
// types. Occurrences map to Count except the exact sugar cases.

#include <cstdint>
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

namespace xsd_detail {

using xml::Element;

inline std::uint32_t parse_occurs(const std::string& v, const std::string& path) {
  if (v.empty()) throw SchemaParseError(path + ": empty occurrence value");
  std::uint64_t n = 0;
  for (char c : v) {
    if (c < '0' || c > '9') throw SchemaParseError(path + ": bad occurrence value '" + v + "'");
    n = n * 10 + static_cast<std::uint64_t>(c - '0');
    if (n >= CountBounds::kUnbounded) throw SchemaParseError(path + ": occurrence value too large");
  }
  return static_cast<std::uint32_t>(n);
}

class Extractor {
 public:
  Extractor(const Element& root, SchemaDoc& doc) : root_(root), doc_(doc) {
    index(root_);
  }

  void run() {
    for (const auto& c : root_.children) {
      if (!xsd(c)) continue;
      if (c.local == "import" || c.local == "include" || c.local == "redefine") {
        if (auto loc = c.attr("schemaLocation")) {
          const auto kind = c.local == "import"    ? ReferenceKind::Import
                            : c.local == "include" ? ReferenceKind::Include
                                                   : ReferenceKind::Redefine;
          doc_.imports.push_back({kind, *loc});
        }
        if (c.local == "redefine" && !c.children.empty()) doc_.skip("redefine-body");
      }
    }
    walk(root_, "/schema", std::nullopt);
  }

 private:
  static bool xsd(const Element& e) { return e.ns == xml::kXsdNamespace; }

  void index(const Element& schema) {
    for (const auto& c : schema.children) {
      if (!xsd(c)) continue;
      const auto name = c.attr("name");
      if (!name) continue;
      if (c.local == "complexType") types_.emplace(*name, &c);
      else if (c.local == "group") groups_.emplace(*name, &c);
    }
  }

  // Visit every complexType in document order, remembering the nearest
  // enclosing element name for anonymous types.
  void walk(const Element& e, const std::string& path, std::optional<std::string> owner) {
    for (const auto& c : e.children) {
      if (!xsd(c)) continue;
      if (c.local == "redefine") continue;
      const std::string here = path + "/" + c.local + label(c);
      if (c.local == "element") {
        if (c.attr("substitutionGroup")) doc_.skip("substitutionGroup");
        walk(c, here, c.attr("name"));
      } else if (c.local == "complexType") {
        auto key = c.attr("name");
        if (!key) key = owner;
        if (!key) {
          doc_.skip("unnamed-complexType");
        } else {
          std::set<std::string> guard;
          doc_.rules.push_back({*key, type_content(c, here, guard)});
        }
        walk(c, here, std::nullopt);
      } else {
        walk(c, here, owner);
      }
    }
  }

  static std::string label(const Element& e) {
    if (auto n = e.attr("name")) return "[@name='" + *n + "']";
    if (auto r = e.attr("ref")) return "[@ref='" + *r + "']";
    return {};
  }

  Regex type_content(const Element& ct, const std::string& path, std::set<std::string>& guard) {
    for (const auto& c : ct.children) {
      if (!xsd(c)) continue;
      const std::string here = path + "/" + c.local;
      if (c.local == "simpleContent") return Regex::epsilon();
      if (c.local == "complexContent") return complex_content(c, here, guard);
      if (is_particle(c.local)) return particle(c, here);
    }
    return Regex::epsilon();
  }

  Regex complex_content(const Element& cc, const std::string& path, std::set<std::string>& guard) {
    for (const auto& d : cc.children) {
      if (!xsd(d)) continue;
      if (d.local != "extension" && d.local != "restriction") continue;
      const std::string here = path + "/" + d.local;
      Regex own = Regex::epsilon();
      for (const auto& p : d.children)
        if (xsd(p) && is_particle(p.local)) {
          own = particle(p, here + "/" + p.local);
          break;
        }
      if (d.local == "restriction") return own;
      Regex base = Regex::epsilon();
      const std::string base_name = xml::local_part(d.attr("base").value_or(""));
      if (auto it = types_.find(base_name); it != types_.end()) {
        if (guard.insert(base_name).second) {
          base = type_content(*it->second, here, guard);
          guard.erase(base_name);
        } else {
          doc_.skip("cyclic-base-type");
        }
      } else if (base_name != "anyType") {
        doc_.skip("unresolved-base-type");
      }
      return seq({base, own});
    }
    return Regex::epsilon();
  }

  static bool is_particle(const std::string& n) {
    return n == "sequence" || n == "choice" || n == "all" || n == "group" || n == "element" || n == "any";
  }

  static Regex seq(const std::vector<Regex>& parts) {
    std::vector<Regex> kept;
    for (const auto& p : parts)
      if (!p.is(Kind::Epsilon)) kept.push_back(p);
    return Regex::cat_all(kept);
  }

  Regex particle(const Element& e, const std::string& path) {
    Regex body;
    if (e.local == "element") {
      std::string name = xml::local_part(e.attr("ref").value_or(e.attr("name").value_or("")));
      if (name.empty()) throw SchemaParseError(path + ": element without name or ref");
      body = Regex::symbol(std::move(name));
    } else if (e.local == "any") {
      doc_.skip("any");
      body = Regex::epsilon();
    } else if (e.local == "group") {
      body = group_ref(e, path);
    } else {
      std::vector<Regex> parts;
      for (const auto& c : e.children)
        if (xsd(c) && is_particle(c.local)) parts.push_back(particle(c, path + "/" + c.local + label(c)));
      if (e.local == "sequence") {
        body = seq(parts);
      } else if (e.local == "choice") {
        body = Regex::alt_all(parts);
      } else {
        std::vector<Regex> kept;
        for (const auto& p : parts)
          if (!p.is(Kind::Epsilon)) kept.push_back(p);
        body = Regex::interleave_all(kept);
      }
    }
    return occurs(e, body, path);
  }

  Regex group_ref(const Element& e, const std::string& path) {
    const auto ref = e.attr("ref");
    if (!ref) throw SchemaParseError(path + ": group without ref");
    const std::string name = xml::local_part(*ref);
    auto it = groups_.find(name);
    if (it == groups_.end()) {
      doc_.skip("unresolved-group-ref");
      return Regex::epsilon();
    }
    if (!active_groups_.insert(name).second) {
      doc_.skip("cyclic-group-ref");
      return Regex::epsilon();
    }
    Regex body = Regex::epsilon();
    for (const auto& c : it->second->children)
      if (xsd(c) && (c.local == "sequence" || c.local == "choice" || c.local == "all")) {
        body = particle(c, path + "/" + c.local);
        break;
      }
    active_groups_.erase(name);
    return body;
  }

  static Regex occurs(const Element& e, Regex body, const std::string& path) {
    const std::uint32_t min = e.attr("minOccurs") ? parse_occurs(*e.attr("minOccurs"), path) : 1;
    std::uint32_t max = 1;
    if (auto m = e.attr("maxOccurs")) max = *m == "unbounded" ? CountBounds::kUnbounded : parse_occurs(*m, path);
    if (max == 0) return Regex::epsilon();
    if (min > max) throw SchemaParseError(path + ": minOccurs exceeds maxOccurs");
    if (body.is(Kind::Epsilon)) return body;
    const bool inf = max == CountBounds::kUnbounded;
    if (min == 1 && max == 1) return body;
    if (min == 0 && max == 1) return Regex::optional(std::move(body));
    if (min == 0 && inf) return Regex::star(std::move(body));
    if (min == 1 && inf) return Regex::plus(std::move(body));
    return Regex::count(std::move(body), min, max);
  }

  const Element& root_;
  SchemaDoc& doc_;
  std::map<std::string, const Element*> types_;
  std::map<std::string, const Element*> groups_;
  std::set<std::string> active_groups_;
};

}  // namespace xsd_detail

inline SchemaDoc extract_xsd(std::string_view content, std::string source_path = {}) {
  SchemaDoc doc;
  doc.kind = SchemaKind::XSD;
  doc.source_path = std::move(source_path);
  auto parsed = xml::parse(content);
  if (!parsed.ok())
    throw SchemaParseError("line " + std::to_string(parsed.line) + ": " + parsed.error);
  const auto& root = *parsed.root;
  if (!root.is(xml::kXsdNamespace, "schema")) throw SchemaParseError("/: root is not xs:schema");
  xsd_detail::Extractor(root, doc).run();
  doc.wellformed = true;
  return doc;
}

}  // namespace dretk
