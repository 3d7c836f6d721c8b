#pragma once

// JSON records for verdicts, subclass reports, metrics, expressions and
// extracted schema documents.

#include <string>

#include "json.hpp"

#include "dretk/corpus/aggregate.hpp"
#include "dretk/determinism.hpp"
#include "dretk/dialect.hpp"
#include "dretk/metrics.hpp"
#include "dretk/schema/schema_doc.hpp"
#include "dretk/subclass.hpp"

namespace dretk {

inline nlohmann::json witness_json(const Witness& w) {
  return {{"prefix", w.prefix},
          {"prefix_positions", w.prefix_positions},
          {"symbol", w.symbol},
          {"positions", {w.pos_x, w.pos_y}}};
}

inline nlohmann::json verdict_json(const DeterminismVerdict& v) {
  nlohmann::json j;
  j["outcome"] = outcome_name(v.outcome);
  j["deterministic"] = v.outcome == Outcome::UndecidedResource ? nlohmann::json(nullptr)
                                                                : nlohmann::json(v.deterministic());
  j["witness"] = v.witness ? witness_json(*v.witness) : nlohmann::json(nullptr);
  j["method"] = method_name(v.method);
  j["clamped"] = v.clamped;
  return j;
}

template <typename Reason>
nlohmann::json membership_json(const Membership<Reason>& m) {
  return {{"member", m.member},
          {"reason", m.reason ? nlohmann::json(reason_id(*m.reason)) : nlohmann::json(nullptr)},
          {"row", m.reason ? nlohmann::json(row_name(*m.reason)) : nlohmann::json(nullptr)}};
}

inline nlohmann::json subclass_json(const SubclassReport& r) {
  return {{"standard", r.is_standard},
          {"max_occurrences", r.max_occ},
          {"k_ore", r.k_ore},
          {"sore", membership_json(r.sore)},
          {"simplified_chare", membership_json(r.simplified_chare)},
          {"esimplified_chare", membership_json(r.esimplified_chare)},
          {"sore_w_c", r.sore_w_c},
          {"sore_w_i", r.sore_w_i},
          {"sore_w_ci", r.sore_w_ci}};
}

inline nlohmann::json metrics_json(const ExprMetrics& m) {
  return {{"star_height", m.star_height},
          {"star_height_convention", kStarHeightConvention},
          {"nesting_depth", m.nesting_depth},
          {"nontrivial_counters", m.nontrivial_counters},
          {"interleaving", m.has_interleaving},
          {"interleave_count", m.interleave_count}};
}

inline nlohmann::json expr_record_json(const ExprRecord& r) {
  nlohmann::json j;
  j["kind"] = bucket_name(r.bucket);
  j["source"] = r.source;
  if (!r.element.empty()) j["element"] = r.element;
  j["regex"] = render(r.expr);
  if (r.error) {
    j["error"] = *r.error;
    return j;
  }
  j["determinism"] = verdict_json(r.verdict);
  j["subclass"] = subclass_json(r.subclass);
  j["metrics"] = metrics_json(r.metrics);
  return j;
}

inline nlohmann::json schema_doc_json(const SchemaDoc& d) {
  nlohmann::json j;
  j["path"] = d.source_path;
  j["kind"] = kind_name(d.kind);
  j["wellformed"] = d.wellformed;
  j["rules"] = nlohmann::json::array();
  for (const auto& r : d.rules) j["rules"].push_back({{"element", r.element}, {"regex", render(r.content)}});
  j["imports"] = nlohmann::json::array();
  for (const auto& i : d.imports) j["imports"].push_back({{"kind", reference_name(i.kind)}, {"target", i.target}});
  j["skipped"] = d.skipped;
  if (!d.notes.empty()) j["notes"] = d.notes;
  return j;
}

}  // namespace dretk
