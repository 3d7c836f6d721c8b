#pragma once

// Minimal namespace-aware DOM built with expat. Only what content-model
// extraction needs: element names, attributes, child elements, text.

#include <expat.h>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dretk::xml {

inline constexpr std::string_view kXsdNamespace = "http://www.w3.org/2001/XMLSchema";
inline constexpr std::string_view kRngNamespace = "http://relaxng.org/ns/structure/1.0";

struct Element {
  std::string ns;
  std::string local;
  std::map<std::string, std::string> attrs;  // unqualified attributes only
  std::vector<Element> children;
  std::string text;
  std::size_t line = 0;

  [[nodiscard]] bool is(std::string_view namespace_uri, std::string_view name) const {
    return ns == namespace_uri && local == name;
  }
  [[nodiscard]] std::optional<std::string> attr(const std::string& name) const {
    auto it = attrs.find(name);
    if (it == attrs.end()) return std::nullopt;
    return it->second;
  }
};

struct ParseResult {
  std::optional<Element> root;
  std::string error;
  std::size_t line = 0;
  std::size_t column = 0;

  [[nodiscard]] bool ok() const noexcept { return root.has_value(); }
};

// "prefix:name" -> "name".
inline std::string local_part(std::string_view qname) {
  const auto colon = qname.rfind(':');
  return std::string(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
}

namespace detail {

constexpr char kSep = '\x1f';

struct Builder {
  std::vector<Element*> stack;
  std::unique_ptr<Element> root;
  XML_Parser parser = nullptr;

  static void split(const char* raw, std::string& ns, std::string& local) {
    std::string_view s(raw);
    const auto p = s.find(kSep);
    if (p == std::string_view::npos) {
      ns.clear();
      local = std::string(s);
    } else {
      ns = std::string(s.substr(0, p));
      local = std::string(s.substr(p + 1));
    }
  }

  static void on_start(void* ud, const XML_Char* name, const XML_Char** atts) {
    auto* b = static_cast<Builder*>(ud);
    Element e;
    split(name, e.ns, e.local);
    e.line = static_cast<std::size_t>(XML_GetCurrentLineNumber(b->parser));
    for (std::size_t i = 0; atts[i] != nullptr; i += 2) {
      std::string ans, alocal;
      split(atts[i], ans, alocal);
      if (ans.empty()) e.attrs.emplace(alocal, atts[i + 1]);
    }
    if (b->stack.empty()) {
      b->root = std::make_unique<Element>(std::move(e));
      b->stack.push_back(b->root.get());
    } else {
      auto& kids = b->stack.back()->children;
      kids.push_back(std::move(e));
      b->stack.push_back(&kids.back());
    }
  }

  static void on_end(void* ud, const XML_Char*) { static_cast<Builder*>(ud)->stack.pop_back(); }

  static void on_text(void* ud, const XML_Char* s, int len) {
    auto* b = static_cast<Builder*>(ud);
    if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

}  // namespace detail

inline ParseResult parse(std::string_view content) {
  ParseResult out;
  XML_Parser p = XML_ParserCreateNS(nullptr, detail::kSep);
  if (p == nullptr) {
    out.error = "could not allocate XML parser";
    return out;
  }
  detail::Builder b;
  b.parser = p;
  XML_SetUserData(p, &b);
  XML_SetElementHandler(p, &detail::Builder::on_start, &detail::Builder::on_end);
  XML_SetCharacterDataHandler(p, &detail::Builder::on_text);
  const auto status = XML_Parse(p, content.data(), static_cast<int>(content.size()), XML_TRUE);
  if (status == XML_STATUS_ERROR) {
    out.error = XML_ErrorString(XML_GetErrorCode(p));
    out.line = static_cast<std::size_t>(XML_GetCurrentLineNumber(p));
    out.column = static_cast<std::size_t>(XML_GetCurrentColumnNumber(p));
  } else if (b.root) {
    out.root = std::move(*b.root);
  } else {
    out.error = "no root element";
  }
  XML_ParserFree(p);
  return out;
}

}  // namespace dretk::xml
