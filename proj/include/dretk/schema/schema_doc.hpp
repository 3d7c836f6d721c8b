#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dretk/regex.hpp"

namespace dretk {

enum class SchemaKind { DTD, XSD, RNG, Unknown };

inline const char* kind_name(SchemaKind k) {
  switch (k) {
    case SchemaKind::DTD: return "DTD";
    case SchemaKind::XSD: return "XSD";
    case SchemaKind::RNG: return "RNG";
    case SchemaKind::Unknown: return "unknown";
  }
  return "unknown";
}

enum class ReferenceKind { Import, Include, Redefine, ExternalRef };

inline const char* reference_name(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::Import: return "import";
    case ReferenceKind::Include: return "include";
    case ReferenceKind::Redefine: return "redefine";
    case ReferenceKind::ExternalRef: return "external-ref";
  }
  return "?";
}

struct Reference {
  ReferenceKind kind = ReferenceKind::Import;
  std::string target;  // locator as written in the file
};

struct Rule {
  std::string element;
  Regex content;
};

struct SchemaDoc {
  SchemaKind kind = SchemaKind::Unknown;
  std::string source_path;
  std::vector<Rule> rules;  // document order
  std::vector<Reference> imports;
  bool wellformed = false;
  std::map<std::string, std::size_t> skipped;  // construct -> occurrences
  std::vector<std::string> notes;

  void skip(const std::string& construct) { ++skipped[construct]; }
};

struct SchemaParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  std::string from;
  std::string to;
  ReferenceKind kind = ReferenceKind::Import;
};

inline bool is_url(std::string_view s) {
  const auto p = s.find("://");
  if (p == std::string_view::npos || p == 0) return false;
  for (char c : s.substr(0, p))
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '+' ||
          c == '-' || c == '.'))
      return false;
  return true;
}

// Relative locators resolve against the directory of `source`.
inline std::string resolve_locator(const std::string& source, const std::string& target) {
  if (target.empty() || is_url(target)) return target;
  std::filesystem::path t(target);
  if (t.is_absolute()) return t.lexically_normal().generic_string();
  return (std::filesystem::path(source).parent_path() / t).lexically_normal().generic_string();
}

// One edge per reference statement; duplicates are kept.
inline std::vector<Edge> import_edges(const SchemaDoc& doc) {
  std::vector<Edge> out;
  for (const auto& ref : doc.imports)
    out.push_back({doc.source_path, resolve_locator(doc.source_path, ref.target), ref.kind});
  return out;
}

}  // namespace dretk
