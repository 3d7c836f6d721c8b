#pragma once

// Report tables (CSV / aligned text) and the JSON form of AggregateStats.

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dretk/corpus/aggregate.hpp"
#include "dretk/metrics.hpp"
#include "dretk/subclass.hpp"

namespace dretk {

inline std::string percent(std::size_t count, std::size_t total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total));
  return buf;
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += "\"\"";
      else out.push_back(c);
    }
    return out + "\"";
  }

  [[nodiscard]] std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_cell(cells[i]);
      }
      out.push_back('\n');
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  [[nodiscard]] std::string text() const {
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) width[i] = std::max(width[i], cells[i].size());
    };
    measure(header);
    for (const auto& r : rows) measure(r);
    std::string out = title + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string& c = cells[i];
        const std::string pad(width[i] - c.size(), ' ');
        out += i == 0 ? c + pad : "  " + pad + c;
      }
      out.push_back('\n');
    };
    line(header);
    std::size_t total = 0;
    for (auto w : width) total += w + 2;
    out += std::string(total > 2 ? total - 2 : 0, '-') + "\n";
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline const std::vector<Bucket>& schema_buckets() {
  static const std::vector<Bucket> b{Bucket::DTD, Bucket::XSD, Bucket::RNG};
  return b;
}

inline Table table2(const AggregateStats& s) {
  Table t{"Subclasses (% of expressions)", {"Subclasses", "DTDs(%)", "XSDs(%)", "RNGs(%)", "RegExLib(%)"}, {}};
  auto row = [&](const std::string& name, auto&& count) {
    std::vector<std::string> r{name};
    for (Bucket b : kBuckets) r.push_back(percent(count(s.at(b)), s.at(b).total));
    t.rows.push_back(std::move(r));
  };
  auto reason = [](const std::map<std::string, std::size_t>& m, const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? std::size_t{0} : it->second;
  };
  row("SOREs", [](const BucketStats& b) { return b.sore; });
  for (auto r : {SoreReason::Nonstandard, SoreReason::Ore2, SoreReason::Ore3, SoreReason::Ore4, SoreReason::Ore5,
                 SoreReason::Ore6, SoreReason::MoreThan7}) {
    const std::string key = row_name(r);
    row(key, [&](const BucketStats& b) { return reason(b.sore_reasons, key); });
  }
  row("Simplified CHAREs", [](const BucketStats& b) { return b.chare; });
  for (auto r : {ChareReason::NotASore, ChareReason::NotATerminalSymbol, ChareReason::UnaryOperatorsInFactor,
                 ChareReason::Nonstandard}) {
    const std::string key = row_name(r);
    row(key, [&](const BucketStats& b) { return reason(b.chare_reasons, key); });
  }
  row("eSimplified CHAREs", [](const BucketStats& b) { return b.echare; });
  for (auto r : {EChareReason::NotASore, EChareReason::NotATerminalSymbol, EChareReason::StarOrOptionalInFactor,
                 EChareReason::Nonstandard}) {
    const std::string key = row_name(r);
    row(key, [&](const BucketStats& b) { return reason(b.echare_reasons, key); });
  }
  row("SOREwC", [](const BucketStats& b) { return b.sore_w_c; });
  row("SOREwI", [](const BucketStats& b) { return b.sore_w_i; });
  row("SOREwCorI", [](const BucketStats& b) { return b.sore_w_ci; });
  return t;
}

inline Table histogram_table(const AggregateStats& s, const std::string& title, const std::string& label,
                             std::map<std::size_t, std::size_t> BucketStats::*field) {
  Table t{title, {label, "DTDs(%)", "XSDs(%)", "RNGs(%)"}, {}};
  std::size_t top = 3;
  for (Bucket b : schema_buckets())
    if (!(s.at(b).*field).empty()) top = std::max(top, (s.at(b).*field).rbegin()->first);
  for (std::size_t v = 0; v <= top; ++v) {
    std::vector<std::string> r{std::to_string(v)};
    for (Bucket b : schema_buckets()) {
      const auto& h = s.at(b).*field;
      auto it = h.find(v);
      r.push_back(percent(it == h.end() ? 0 : it->second, s.at(b).total));
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline Table table3(const AggregateStats& s) {
  return histogram_table(s, std::string("Star height (") + kStarHeightConvention + ")", "Star height",
                         &BucketStats::star_height);
}

inline Table table4(const AggregateStats& s) {
  return histogram_table(s, "Nesting depth", "Nesting depth", &BucketStats::nesting_depth);
}

inline Table fig1_table(const AggregateStats& s) {
  Table t{"Determinism",
          {"Kind", "Expressions", "Deterministic", "Whole(%)", "CHARE(%)", "eCHARE(%)", "Undecided", "Errors"},
          {}};
  for (Bucket b : kBuckets) {
    const auto& x = s.at(b);
    t.rows.push_back({bucket_name(b), std::to_string(x.total), std::to_string(x.deterministic),
                      percent(x.deterministic, x.total), percent(x.det_chare, x.total),
                      percent(x.det_echare, x.total), std::to_string(x.undecided), std::to_string(x.errors)});
  }
  return t;
}

inline Table features_table(const AggregateStats& s) {
  Table t{"Counting and interleaving",
          {"Kind", "Expressions", "Non-trivial counters", "Counters(%)", "Interleaving", "Interleaving(%)"},
          {}};
  for (Bucket b : kBuckets) {
    const auto& x = s.at(b);
    t.rows.push_back({bucket_name(b), std::to_string(x.total), std::to_string(x.nontrivial_counter_exprs),
                      percent(x.nontrivial_counter_exprs, x.total), std::to_string(x.interleaving_exprs),
                      percent(x.interleaving_exprs, x.total)});
  }
  return t;
}

inline Table density_summary_table(const AggregateStats& s) {
  Table t{"Density", {"Kind", "Files", "Mean density"}, {}};
  for (Bucket b : schema_buckets())
    t.rows.push_back({bucket_name(b), std::to_string(s.at(b).density_files), fixed(s.at(b).density_mean(), 4)});
  return t;
}

inline Table density_files_table(std::vector<SchemaDoc> docs) {
  std::sort(docs.begin(), docs.end(),
            [](const SchemaDoc& a, const SchemaDoc& b) { return a.source_path < b.source_path; });
  Table t{"Density per file", {"path", "kind", "rules", "density"}, {}};
  for (const auto& d : docs)
    if (!d.rules.empty())
      t.rows.push_back({d.source_path, kind_name(d.kind), std::to_string(d.rules.size()), fixed(schema_density(d), 6)});
  return t;
}

inline Table table5(const NormalizedDreSet& set) {
  Table t{"Number of DREs", {"Type", "Original DRE set", "Normalized DRE set", "Undecided"}, {}};
  std::size_t undecided = 0;
  for (Bucket b : kBuckets) {
    const auto& e = set.kinds.at(b);
    undecided += e.undecided;
    t.rows.push_back({bucket_name(b), std::to_string(e.original_count()), std::to_string(e.normalized_count()),
                      std::to_string(e.undecided)});
  }
  t.rows.push_back({"Total", std::to_string(set.total_original()), std::to_string(set.total_normalized()),
                    std::to_string(undecided)});
  return t;
}

inline std::vector<Table> report_tables(const AggregateStats& s) {
  return {table2(s), table3(s), table4(s), fig1_table(s), features_table(s), density_summary_table(s)};
}

// ---- JSON ----

inline nlohmann::json histogram_json(const std::map<std::size_t, std::size_t>& h) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : h) j[std::to_string(k)] = v;
  return j;
}

inline std::map<std::size_t, std::size_t> histogram_from_json(const nlohmann::json& j) {
  std::map<std::size_t, std::size_t> h;
  for (auto it = j.begin(); it != j.end(); ++it) h[std::stoul(it.key())] = it.value().get<std::size_t>();
  return h;
}

inline nlohmann::json to_json(const BucketStats& b) {
  return {
      {"total", b.total},
      {"errors", b.errors},
      {"deterministic", b.deterministic},
      {"nondeterministic", b.nondeterministic},
      {"undecided", b.undecided},
      {"deterministic_chare", b.det_chare},
      {"deterministic_echare", b.det_echare},
      {"sore", b.sore},
      {"sore_reasons", b.sore_reasons},
      {"simplified_chare", b.chare},
      {"simplified_chare_reasons", b.chare_reasons},
      {"esimplified_chare", b.echare},
      {"esimplified_chare_reasons", b.echare_reasons},
      {"sore_w_c", b.sore_w_c},
      {"sore_w_i", b.sore_w_i},
      {"sore_w_ci", b.sore_w_ci},
      {"star_height", histogram_json(b.star_height)},
      {"nesting_depth", histogram_json(b.nesting_depth)},
      {"nontrivial_counter_exprs", b.nontrivial_counter_exprs},
      {"interleaving_exprs", b.interleaving_exprs},
      {"density_files", b.density_files},
      {"density_sum", b.density_sum},
      {"density_mean", b.density_mean()},
  };
}

inline BucketStats bucket_from_json(const nlohmann::json& j) {
  BucketStats b;
  b.total = j.at("total");
  b.errors = j.at("errors");
  b.deterministic = j.at("deterministic");
  b.nondeterministic = j.at("nondeterministic");
  b.undecided = j.at("undecided");
  b.det_chare = j.at("deterministic_chare");
  b.det_echare = j.at("deterministic_echare");
  b.sore = j.at("sore");
  b.sore_reasons = j.at("sore_reasons").get<std::map<std::string, std::size_t>>();
  b.chare = j.at("simplified_chare");
  b.chare_reasons = j.at("simplified_chare_reasons").get<std::map<std::string, std::size_t>>();
  b.echare = j.at("esimplified_chare");
  b.echare_reasons = j.at("esimplified_chare_reasons").get<std::map<std::string, std::size_t>>();
  b.sore_w_c = j.at("sore_w_c");
  b.sore_w_i = j.at("sore_w_i");
  b.sore_w_ci = j.at("sore_w_ci");
  b.star_height = histogram_from_json(j.at("star_height"));
  b.nesting_depth = histogram_from_json(j.at("nesting_depth"));
  b.nontrivial_counter_exprs = j.at("nontrivial_counter_exprs");
  b.interleaving_exprs = j.at("interleaving_exprs");
  b.density_files = j.at("density_files");
  b.density_sum = j.at("density_sum");
  return b;
}

inline nlohmann::json to_json(const AggregateStats& s) {
  nlohmann::json j;
  j["star_height_convention"] = kStarHeightConvention;
  for (const auto& [b, x] : s.buckets) j["buckets"][bucket_name(b)] = to_json(x);
  return j;
}

inline AggregateStats stats_from_json(const nlohmann::json& j) {
  AggregateStats s;
  for (Bucket b : kBuckets)
    if (j.at("buckets").contains(bucket_name(b))) s[b] = bucket_from_json(j.at("buckets").at(bucket_name(b)));
  return s;
}

// format: "csv", "json" or "text".
inline std::string emit_report(const AggregateStats& s, const std::string& format) {
  if (format == "json") return to_json(s).dump(2) + "\n";
  const auto tables = report_tables(s);
  std::string out;
  if (format == "csv") {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) out.push_back('\n');
      out += tables[i].csv();
    }
  } else if (format == "text") {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) out.push_back('\n');
      out += tables[i].text();
    }
  } else {
    throw std::invalid_argument("unsupported report format '" + format + "'");
  }
  return out;
}

}  // namespace dretk
