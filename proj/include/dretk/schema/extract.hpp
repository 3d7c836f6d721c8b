#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dretk/schema/dtd.hpp"
#include "dretk/schema/rng.hpp"
#include "dretk/schema/schema_doc.hpp"
#include "dretk/schema/xml.hpp"
#include "dretk/schema/xsd.hpp"

namespace dretk {

inline std::string lower_extension(std::string_view path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash)) return {};
  std::string ext(path.substr(dot));
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Extension first, then the root construct.
inline SchemaKind detect_kind(std::string_view path, std::string_view content) {
  const std::string ext = lower_extension(path);
  if (ext == ".dtd") return SchemaKind::DTD;
  if (ext == ".xsd") return SchemaKind::XSD;
  if (ext == ".rng") return SchemaKind::RNG;
  if (ext == ".rnc") return SchemaKind::Unknown;
  auto parsed = xml::parse(content);
  if (parsed.ok()) {
    const auto& r = *parsed.root;
    if (r.is(xml::kXsdNamespace, "schema")) return SchemaKind::XSD;
    if (r.ns == xml::kRngNamespace && (r.local == "grammar" || r.local == "element")) return SchemaKind::RNG;
    return SchemaKind::Unknown;
  }
  if (content.find("<!ELEMENT") != std::string_view::npos) return SchemaKind::DTD;
  return SchemaKind::Unknown;
}

struct WellformedResult {
  bool ok = false;
  std::string diagnostics;
};

inline WellformedResult check_wellformed(std::string_view content, SchemaKind kind) {
  if (kind == SchemaKind::DTD) {
    try {
      extract_dtd(content);
      return {true, {}};
    } catch (const SchemaParseError& e) {
      return {false, e.what()};
    }
  }
  auto parsed = xml::parse(content);
  if (parsed.ok()) return {true, {}};
  return {false, "line " + std::to_string(parsed.line) + ", column " + std::to_string(parsed.column) + ": " +
                     parsed.error};
}

inline WellformedResult check_wellformed(std::string_view content) {
  return check_wellformed(content, detect_kind({}, content));
}

// Never throws: failures come back as wellformed = false with a note.
inline SchemaDoc extract_schema(const std::string& path, std::string_view content) {
  const SchemaKind kind = detect_kind(path, content);
  SchemaDoc doc;
  doc.kind = kind;
  doc.source_path = path;
  if (kind == SchemaKind::Unknown) {
    doc.notes.push_back("unknown schema kind");
    return doc;
  }
  const auto wf = check_wellformed(content, kind);
  if (!wf.ok) {
    doc.notes.push_back(wf.diagnostics);
    return doc;
  }
  try {
    switch (kind) {
      case SchemaKind::DTD: return extract_dtd(content, path);
      case SchemaKind::XSD: return extract_xsd(content, path);
      case SchemaKind::RNG: return extract_rng(content, path);
      case SchemaKind::Unknown: break;
    }
  } catch (const SchemaParseError& e) {
    doc.wellformed = true;
    doc.notes.push_back(e.what());
  }
  return doc;
}

struct ExtractionReport {
  std::size_t files_seen = 0;
  std::size_t files_wellformed = 0;
  std::size_t files_with_rules = 0;
  std::size_t rules_total = 0;
  std::vector<std::string> notes;  // "path: message"

  void add(const SchemaDoc& doc) {
    ++files_seen;
    if (doc.wellformed) ++files_wellformed;
    if (!doc.rules.empty()) ++files_with_rules;
    rules_total += doc.rules.size();
    for (const auto& n : doc.notes) notes.push_back(doc.source_path + ": " + n);
  }
};

}  // namespace dretk
