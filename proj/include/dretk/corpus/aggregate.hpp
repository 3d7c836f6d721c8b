#pragma once

// Per-expression analysis and the corpus counters behind the report tables.

#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dretk/determinism.hpp"
#include "dretk/dialect.hpp"
#include "dretk/metrics.hpp"
#include "dretk/schema/schema_doc.hpp"
#include "dretk/subclass.hpp"

namespace dretk {

enum class Bucket { DTD, XSD, RNG, RegExLib };

inline constexpr std::array<Bucket, 4> kBuckets{Bucket::DTD, Bucket::XSD, Bucket::RNG, Bucket::RegExLib};

inline const char* bucket_name(Bucket b) {
  switch (b) {
    case Bucket::DTD: return "DTD";
    case Bucket::XSD: return "XSD";
    case Bucket::RNG: return "RNG";
    case Bucket::RegExLib: return "RegExLib";
  }
  return "?";
}

inline std::optional<Bucket> bucket_of(SchemaKind k) {
  switch (k) {
    case SchemaKind::DTD: return Bucket::DTD;
    case SchemaKind::XSD: return Bucket::XSD;
    case SchemaKind::RNG: return Bucket::RNG;
    case SchemaKind::Unknown: break;
  }
  return std::nullopt;
}

struct ExprRecord {
  Bucket bucket = Bucket::DTD;
  std::string source;   // file path, or "regexlib:<line>"
  std::string element;  // rule name; empty for RegExLib
  Regex expr;
  DeterminismVerdict verdict;
  SubclassReport subclass;
  ExprMetrics metrics;
  std::optional<std::string> error;
};

inline ExprRecord analyze_expression(Bucket bucket, std::string source, std::string element, Regex r,
                                     const DeterminismOptions& opt = {}) {
  ExprRecord rec;
  rec.bucket = bucket;
  rec.source = std::move(source);
  rec.element = std::move(element);
  rec.expr = std::move(r);
  try {
    rec.verdict = is_deterministic(rec.expr, opt);
    rec.subclass = classify(rec.expr);
    rec.metrics = expr_metrics(rec.expr);
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

struct AnalysisOptions {
  DeterminismOptions determinism;
  unsigned jobs = 1;
};

// Records come out in input order (documents by path, rules in order, then
// RegExLib lines) whatever the number of jobs.
inline std::vector<ExprRecord> analyze_corpus(std::vector<SchemaDoc> docs, const std::vector<Regex>& regexlib,
                                              const AnalysisOptions& opt = {}) {
  std::sort(docs.begin(), docs.end(),
            [](const SchemaDoc& a, const SchemaDoc& b) { return a.source_path < b.source_path; });
  struct Job {
    Bucket bucket;
    std::string source, element;
    Regex expr;
  };
  std::vector<Job> jobs;
  for (const auto& d : docs) {
    const auto b = bucket_of(d.kind);
    if (!b) continue;
    for (const auto& rule : d.rules) jobs.push_back({*b, d.source_path, rule.element, rule.content});
  }
  for (std::size_t i = 0; i < regexlib.size(); ++i)
    jobs.push_back({Bucket::RegExLib, "regexlib:" + std::to_string(i + 1), {}, regexlib[i]});

  std::vector<ExprRecord> out(jobs.size());
  auto work = [&](std::size_t from, std::size_t step) {
    for (std::size_t i = from; i < jobs.size(); i += step)
      out[i] = analyze_expression(jobs[i].bucket, jobs[i].source, jobs[i].element, jobs[i].expr, opt.determinism);
  };
  const unsigned n = std::max(1U, opt.jobs);
  if (n == 1 || jobs.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work, t, n);
    for (auto& t : pool) t.join();
  }
  return out;
}

struct BucketStats {
  std::size_t total = 0;
  std::size_t errors = 0;
  std::size_t deterministic = 0;
  std::size_t nondeterministic = 0;
  std::size_t undecided = 0;
  std::size_t det_chare = 0;   // deterministic and Simplified CHARE
  std::size_t det_echare = 0;  // deterministic and eSimplified CHARE

  std::size_t sore = 0;
  std::map<std::string, std::size_t> sore_reasons;  // keyed by table row name
  std::size_t chare = 0;
  std::map<std::string, std::size_t> chare_reasons;
  std::size_t echare = 0;
  std::map<std::string, std::size_t> echare_reasons;
  std::size_t sore_w_c = 0;
  std::size_t sore_w_i = 0;
  std::size_t sore_w_ci = 0;

  std::map<std::size_t, std::size_t> star_height;
  std::map<std::size_t, std::size_t> nesting_depth;
  std::size_t nontrivial_counter_exprs = 0;
  std::size_t interleaving_exprs = 0;

  std::size_t density_files = 0;
  double density_sum = 0.0;

  [[nodiscard]] double density_mean() const {
    return density_files == 0 ? 0.0 : density_sum / static_cast<double>(density_files);
  }

  void add(const ExprRecord& r) {
    if (r.error) {
      ++errors;
      return;
    }
    ++total;
    switch (r.verdict.outcome) {
      case Outcome::Deterministic: ++deterministic; break;
      case Outcome::NonDeterministic: ++nondeterministic; break;
      case Outcome::UndecidedResource: ++undecided; break;
    }
    const auto& s = r.subclass;
    if (r.verdict.deterministic() && s.simplified_chare.member) ++det_chare;
    if (r.verdict.deterministic() && s.esimplified_chare.member) ++det_echare;
    if (s.sore.member) ++sore;
    else ++sore_reasons[row_name(*s.sore.reason)];
    if (s.simplified_chare.member) ++chare;
    else ++chare_reasons[row_name(*s.simplified_chare.reason)];
    if (s.esimplified_chare.member) ++echare;
    else ++echare_reasons[row_name(*s.esimplified_chare.reason)];
    if (s.sore_w_c) ++sore_w_c;
    if (s.sore_w_i) ++sore_w_i;
    if (s.sore_w_ci) ++sore_w_ci;
    ++star_height[r.metrics.star_height];
    ++nesting_depth[r.metrics.nesting_depth];
    if (r.metrics.nontrivial_counters > 0) ++nontrivial_counter_exprs;
    if (r.metrics.has_interleaving) ++interleaving_exprs;
  }

  void add_density(double d) {
    ++density_files;
    density_sum += d;
  }

  void merge(const BucketStats& o) {
    total += o.total;
    errors += o.errors;
    deterministic += o.deterministic;
    nondeterministic += o.nondeterministic;
    undecided += o.undecided;
    det_chare += o.det_chare;
    det_echare += o.det_echare;
    sore += o.sore;
    chare += o.chare;
    echare += o.echare;
    sore_w_c += o.sore_w_c;
    sore_w_i += o.sore_w_i;
    sore_w_ci += o.sore_w_ci;
    for (const auto& [k, v] : o.sore_reasons) sore_reasons[k] += v;
    for (const auto& [k, v] : o.chare_reasons) chare_reasons[k] += v;
    for (const auto& [k, v] : o.echare_reasons) echare_reasons[k] += v;
    for (const auto& [k, v] : o.star_height) star_height[k] += v;
    for (const auto& [k, v] : o.nesting_depth) nesting_depth[k] += v;
    nontrivial_counter_exprs += o.nontrivial_counter_exprs;
    interleaving_exprs += o.interleaving_exprs;
    density_files += o.density_files;
    density_sum += o.density_sum;
  }

  friend bool operator==(const BucketStats&, const BucketStats&) = default;
};

struct AggregateStats {
  std::map<Bucket, BucketStats> buckets{{Bucket::DTD, {}}, {Bucket::XSD, {}}, {Bucket::RNG, {}},
                                        {Bucket::RegExLib, {}}};

  BucketStats& operator[](Bucket b) { return buckets[b]; }
  [[nodiscard]] const BucketStats& at(Bucket b) const { return buckets.at(b); }

  void merge(const AggregateStats& o) {
    for (const auto& [b, s] : o.buckets) buckets[b].merge(s);
  }

  friend bool operator==(const AggregateStats&, const AggregateStats&) = default;
};

// Density is taken per document with at least one rule, in path order.
inline AggregateStats aggregate(const std::vector<ExprRecord>& records, std::vector<SchemaDoc> docs) {
  AggregateStats stats;
  for (const auto& r : records) stats[r.bucket].add(r);
  std::sort(docs.begin(), docs.end(),
            [](const SchemaDoc& a, const SchemaDoc& b) { return a.source_path < b.source_path; });
  for (const auto& d : docs) {
    const auto b = bucket_of(d.kind);
    if (b && !d.rules.empty()) stats[*b].add_density(schema_density(d));
  }
  return stats;
}

inline AggregateStats aggregate(const std::vector<SchemaDoc>& docs, const std::vector<Regex>& regexlib,
                                const AnalysisOptions& opt = {}) {
  return aggregate(analyze_corpus(docs, regexlib, opt), docs);
}

// Symbols renamed a1, a2, ... in order of first occurrence.
inline Regex normalize_dre(const Regex& r) {
  std::map<std::string, std::string> mapping;
  for_each_symbol(r, [&](const Regex& s) {
    if (!mapping.count(s.name())) mapping.emplace(s.name(), "a" + std::to_string(mapping.size() + 1));
  });
  return rename(r, mapping);
}

struct DreSetEntry {
  std::set<std::string> originals;   // distinct rendered deterministic expressions
  std::set<std::string> normalized;  // distinct rendered normalized forms
  std::size_t undecided = 0;

  [[nodiscard]] std::size_t original_count() const { return originals.size(); }
  [[nodiscard]] std::size_t normalized_count() const { return normalized.size(); }
};

struct NormalizedDreSet {
  std::map<Bucket, DreSetEntry> kinds{{Bucket::DTD, {}}, {Bucket::XSD, {}}, {Bucket::RNG, {}},
                                      {Bucket::RegExLib, {}}};

  [[nodiscard]] std::size_t total_original() const {
    std::size_t n = 0;
    for (const auto& [b, e] : kinds) n += e.original_count();
    return n;
  }
  // Distinct across kinds.
  [[nodiscard]] std::set<std::string> all_normalized() const {
    std::set<std::string> out;
    for (const auto& [b, e] : kinds) out.insert(e.normalized.begin(), e.normalized.end());
    return out;
  }
  [[nodiscard]] std::size_t total_normalized() const { return all_normalized().size(); }
};

inline void add_to_dre_set(NormalizedDreSet& set, Bucket b, const Regex& r, const DeterminismVerdict& v) {
  auto& e = set.kinds[b];
  if (v.outcome == Outcome::UndecidedResource) {
    ++e.undecided;
    return;
  }
  if (!v.deterministic()) return;
  if (e.originals.insert(render(r)).second) e.normalized.insert(render(normalize_dre(r)));
}

inline NormalizedDreSet build_dre_set(const std::vector<ExprRecord>& records) {
  NormalizedDreSet set;
  for (const auto& r : records)
    if (!r.error) add_to_dre_set(set, r.bucket, r.expr, r.verdict);
  return set;
}

inline NormalizedDreSet build_dre_set(const std::vector<std::pair<Bucket, Regex>>& exprs,
                                      const DeterminismOptions& opt = {}) {
  NormalizedDreSet set;
  for (const auto& [b, r] : exprs) add_to_dre_set(set, b, r, is_deterministic(r, opt));
  return set;
}

}  // namespace dretk
