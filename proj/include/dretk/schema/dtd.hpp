#pragma once

// DTD declarations to content-model rules.
//
//   ','  -> Concat      '|' -> Union       '*' '+' '?' -> Star Plus Optional
//   EMPTY -> epsilon    ANY -> rule omitted, recorded as skipped
//   (#PCDATA | a | b)* -> (a|b)*           (#PCDATA) -> epsilon
//
// Parameter entities defined in the file are expanded; external ones are
// recorded and skipped.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dretk/regex.hpp"
#include "dretk/schema/schema_doc.hpp"

namespace dretk {

namespace dtd_detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

inline bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == ':' || c == '.' || c == '-' || u >= 0x80;
}

class ContentParser {
 public:
  ContentParser(std::string_view text, std::size_t decl) : s_(text), decl_(decl) {}

  std::string name() {
    ws();
    const std::size_t start = i_;
    while (i_ < s_.size() && is_name_char(s_[i_])) ++i_;
    if (start == i_) fail("expected a name");
    return std::string(s_.substr(start, i_ - start));
  }

  // Returns false for ANY.
  bool contentspec(Regex& out) {
    ws();
    if (keyword("EMPTY")) {
      out = Regex::epsilon();
    } else if (keyword("ANY")) {
      return false;
    } else if (peek() == '(') {
      out = group_or_mixed();
    } else {
      fail("expected EMPTY, ANY or '('");
    }
    ws();
    if (i_ != s_.size()) fail("trailing characters after content model");
    return true;
  }

 private:
  Regex group_or_mixed() {
    const std::size_t save = i_;
    ++i_;
    ws();
    if (s_.substr(i_, 7) == "#PCDATA") {
      i_ += 7;
      std::vector<Regex> names;
      ws();
      while (peek() == '|') {
        ++i_;
        names.push_back(Regex::symbol(name()));
        ws();
      }
      expect(')');
      const bool starred = peek() == '*';
      if (starred) ++i_;
      if (!names.empty() && !starred) fail("mixed content with elements must end in ')*'");
      if (names.empty()) return Regex::epsilon();
      return Regex::star(Regex::alt_all(names));
    }
    i_ = save;
    return cp();
  }

  Regex cp() {
    ws();
    Regex base;
    if (peek() == '(') {
      ++i_;
      std::vector<Regex> parts{cp()};
      ws();
      char sep = '\0';
      while (peek() == ',' || peek() == '|') {
        if (sep != '\0' && peek() != sep) fail("mixed ',' and '|' in one group");
        sep = peek();
        ++i_;
        parts.push_back(cp());
        ws();
      }
      expect(')');
      base = sep == '|' ? Regex::alt_all(parts) : Regex::cat_all(parts);
    } else {
      base = Regex::symbol(name());
    }
    switch (peek()) {
      case '*': ++i_; return Regex::star(base);
      case '+': ++i_; return Regex::plus(base);
      case '?': ++i_; return Regex::optional(base);
      default: return base;
    }
  }

  bool keyword(std::string_view kw) {
    if (s_.substr(i_, kw.size()) != kw) return false;
    if (i_ + kw.size() < s_.size() && is_name_char(s_[i_ + kw.size()])) return false;
    i_ += kw.size();
    return true;
  }

  void expect(char c) {
    ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void ws() {
    while (i_ < s_.size() && is_space(s_[i_])) ++i_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaParseError("declaration " + std::to_string(decl_) + ": " + msg + " at column " +
                           std::to_string(i_));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t decl_;
};

class DtdReader {
 public:
  explicit DtdReader(SchemaDoc& doc) : doc_(doc) {}

  void run(std::string_view text, int depth) {
    if (depth > 16) throw SchemaParseError("parameter entity nesting too deep");
    std::size_t i = 0;
    while (true) {
      while (i < text.size() && is_space(text[i])) ++i;
      if (i >= text.size()) return;
      const std::string_view rest = text.substr(i);
      if (rest.starts_with("<!--")) {
        const auto end = text.find("-->", i + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        i = end + 3;
      } else if (rest.starts_with("<?")) {
        const auto end = text.find("?>", i + 2);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        i = end + 2;
      } else if (rest.starts_with("<![")) {
        i = conditional(text, i, depth);
      } else if (rest.starts_with("<!")) {
        i = declaration(text, i);
      } else if (text[i] == '%') {
        const auto semi = text.find(';', i);
        if (semi == std::string_view::npos) fail("unterminated parameter entity reference");
        const std::string name(text.substr(i + 1, semi - i - 1));
        i = semi + 1;
        if (auto it = pes_.find(name); it != pes_.end()) {
          const std::string value = it->second;
          run(value, depth + 1);
        } else if (external_pes_.count(name)) {
          doc_.skip("external-parameter-entity");
        } else {
          doc_.skip("undefined-parameter-entity");
        }
      } else {
        fail("unexpected character '" + std::string(1, text[i]) + "'");
      }
    }
  }

 private:
  std::size_t conditional(std::string_view text, std::size_t i, int depth) {
    std::size_t j = i + 3;
    while (j < text.size() && is_space(text[j])) ++j;
    std::string keyword;
    if (j < text.size() && text[j] == '%') {
      const auto semi = text.find(';', j);
      if (semi == std::string_view::npos) fail("unterminated parameter entity reference");
      keyword = expand(std::string(text.substr(j, semi - j + 1)));
      j = semi + 1;
    } else {
      while (j < text.size() && is_name_char(text[j])) keyword.push_back(text[j++]);
    }
    while (!keyword.empty() && is_space(keyword.back())) keyword.pop_back();
    while (!keyword.empty() && is_space(keyword.front())) keyword.erase(keyword.begin());
    while (j < text.size() && is_space(text[j])) ++j;
    if (j >= text.size() || text[j] != '[') fail("malformed conditional section");
    ++j;
    // Find the matching "]]>" allowing nested sections.
    int nest = 1;
    std::size_t k = j;
    while (k < text.size()) {
      if (text.substr(k, 3) == "<![") {
        ++nest;
        k += 3;
      } else if (text.substr(k, 3) == "]]>") {
        if (--nest == 0) break;
        k += 3;
      } else {
        ++k;
      }
    }
    if (nest != 0) fail("unterminated conditional section");
    if (keyword == "INCLUDE") {
      run(text.substr(j, k - j), depth + 1);
    } else if (keyword == "IGNORE") {
      doc_.skip("ignored-section");
    } else {
      fail("unknown conditional section keyword '" + keyword + "'");
    }
    return k + 3;
  }

  std::size_t declaration(std::string_view text, std::size_t i) {
    ++decl_;
    std::size_t j = i + 2;
    std::string keyword;
    while (j < text.size() && text[j] >= 'A' && text[j] <= 'Z') keyword.push_back(text[j++]);
    char quote = '\0';
    std::size_t k = j;
    for (; k < text.size(); ++k) {
      const char c = text[k];
      if (quote != '\0') {
        if (c == quote) quote = '\0';
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      }
    }
    if (k >= text.size()) fail("unterminated <!" + keyword + " declaration");
    const std::string body(text.substr(j, k - j));
    if (keyword == "ELEMENT") {
      element(body);
    } else if (keyword == "ENTITY") {
      entity(body);
    } else if (keyword == "ATTLIST" || keyword == "NOTATION") {
      // attributes and notations are not part of content models
    } else {
      fail("unknown declaration <!" + keyword);
    }
    return k + 1;
  }

  void entity(const std::string& body) {
    std::size_t i = 0;
    auto ws = [&] {
      while (i < body.size() && is_space(body[i])) ++i;
    };
    ws();
    bool parameter = false;
    if (i < body.size() && body[i] == '%') {
      parameter = true;
      ++i;
      ws();
    }
    std::string name;
    while (i < body.size() && is_name_char(body[i])) name.push_back(body[i++]);
    if (name.empty()) fail("entity declaration without a name");
    ws();
    if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
      const char q = body[i];
      const auto end = body.find(q, i + 1);
      if (end == std::string::npos) fail("unterminated entity value");
      if (parameter && !pes_.count(name) && !external_pes_.count(name))
        pes_.emplace(name, body.substr(i + 1, end - i - 1));
    } else if (body.compare(i, 6, "SYSTEM") == 0 || body.compare(i, 6, "PUBLIC") == 0) {
      if (parameter) external_pes_.insert(name);
      else doc_.skip("external-entity");
    } else {
      fail("malformed entity declaration");
    }
  }

  void element(const std::string& raw) {
    std::string body;
    try {
      body = expand(raw);
    } catch (const SchemaParseError&) {
      doc_.skip("undefined-parameter-entity");
      return;
    }
    ContentParser p(body, decl_);
    const std::string name = p.name();
    Regex content;
    if (!p.contentspec(content)) {
      doc_.skip("ANY");
      return;
    }
    if (!declared_.insert(name).second) {
      doc_.skip("duplicate-element-declaration");
      return;
    }
    doc_.rules.push_back({name, content});
  }

  // Textual expansion of %name; references; throws on undefined names.
  std::string expand(std::string s) const {
    for (int round = 0; round < 64; ++round) {
      const auto pct = s.find('%');
      if (pct == std::string::npos) return s;
      const auto semi = s.find(';', pct);
      if (semi == std::string::npos) return s;
      const std::string name = s.substr(pct + 1, semi - pct - 1);
      auto it = pes_.find(name);
      if (it == pes_.end()) throw SchemaParseError("undefined parameter entity %" + name + ";");
      s = s.substr(0, pct) + " " + it->second + " " + s.substr(semi + 1);
    }
    throw SchemaParseError("parameter entity expansion too deep");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaParseError("declaration " + std::to_string(decl_ + 1) + ": " + msg);
  }

  SchemaDoc& doc_;
  std::map<std::string, std::string> pes_;
  std::set<std::string> external_pes_;
  std::set<std::string> declared_;
  std::size_t decl_ = 0;
};

}  // namespace dtd_detail

// Throws SchemaParseError with the offending declaration index.
inline SchemaDoc extract_dtd(std::string_view content, std::string source_path = {}) {
  SchemaDoc doc;
  doc.kind = SchemaKind::DTD;
  doc.source_path = std::move(source_path);
  dtd_detail::DtdReader(doc).run(content, 0);
  doc.wellformed = true;
  return doc;
}

}  // namespace dretk
