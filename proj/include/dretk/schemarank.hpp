#pragma once

// Schema reference digraph, PageRank by power iteration, and
// SchemaRank = PR * times.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dretk/corpus/report.hpp"
#include "dretk/schema/schema_doc.hpp"

namespace dretk {

enum class TimesMode { Multiplicity, DistinctFiles };

struct GraphOptions {
  TimesMode times_mode = TimesMode::Multiplicity;
  bool import_only = false;  // ignore include / redefine / external-ref
};

struct RefGraph {
  std::vector<std::string> nodes;  // sorted
  std::map<std::string, std::size_t> index;
  std::vector<bool> external;      // referenced but not in the corpus
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edges;  // multiplicity
  std::vector<double> times;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }

  std::size_t add_node(const std::string& path, bool is_external) {
    auto [it, inserted] = index.emplace(path, nodes.size());
    if (inserted) {
      nodes.push_back(path);
      external.push_back(is_external);
    }
    return it->second;
  }

  // Sort nodes by path and renumber.
  void finalize() {
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
    std::vector<std::size_t> renum(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) renum[order[i]] = i;
    std::vector<std::string> n2(nodes.size());
    std::vector<bool> e2(nodes.size());
    std::vector<double> t2(times.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      n2[renum[i]] = nodes[i];
      e2[renum[i]] = external[i];
      if (i < times.size()) t2[renum[i]] = times[i];
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> ed;
    for (const auto& [k, m] : edges) ed[{renum[k.first], renum[k.second]}] += m;
    nodes = std::move(n2);
    external = std::move(e2);
    times = std::move(t2);
    edges = std::move(ed);
    index.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  }
};

inline RefGraph build_graph(const std::vector<SchemaDoc>& docs, const GraphOptions& opt = {}) {
  RefGraph g;
  std::set<std::string> known;
  for (const auto& d : docs) known.insert(d.source_path);
  for (const auto& p : known) g.add_node(p, false);
  for (const auto& d : docs)
    for (const auto& e : import_edges(d)) {
      if (opt.import_only && e.kind != ReferenceKind::Import) continue;
      if (e.to.empty()) continue;
      const auto from = g.add_node(e.from, false);
      const auto to = g.add_node(e.to, known.count(e.to) == 0);
      ++g.edges[{from, to}];
    }
  g.times.assign(g.nodes.size(), 0.0);
  for (const auto& [k, m] : g.edges)
    g.times[k.second] += opt.times_mode == TimesMode::Multiplicity ? static_cast<double>(m) : 1.0;
  g.finalize();
  return g;
}

struct PageRankOptions {
  double damping = 0.85;
  double eps = 1e-10;
  std::size_t max_iter = 100;
  bool weighted = true;  // duplicate edges weigh by multiplicity
};

struct PageRankResult {
  std::vector<double> pr;
  std::size_t iterations = 0;
  double residual = 0.0;
};

inline PageRankResult pagerank(const RefGraph& g, const PageRankOptions& opt = {}) {
  const std::size_t n = g.size();
  if (n == 0) throw std::invalid_argument("pagerank of an empty graph");
  if (!(opt.damping > 0.0 && opt.damping < 1.0)) throw std::invalid_argument("damping must lie in (0, 1)");
  std::vector<double> out_weight(n, 0.0);
  struct Arc {
    std::size_t from, to;
    double w;
  };
  std::vector<Arc> arcs;
  for (const auto& [k, m] : g.edges) {
    const double w = opt.weighted ? static_cast<double>(m) : 1.0;
    arcs.push_back({k.first, k.second, w});
    out_weight[k.first] += w;
  }
  const double nd = static_cast<double>(n);
  PageRankResult res;
  res.pr.assign(n, 1.0 / nd);
  std::vector<double> next(n);
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (out_weight[i] == 0.0) dangling += res.pr[i];
    const double base = (1.0 - opt.damping) / nd + opt.damping * dangling / nd;
    std::fill(next.begin(), next.end(), base);
    for (const auto& a : arcs) next[a.to] += opt.damping * res.pr[a.from] * a.w / out_weight[a.from];
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) resid += std::abs(next[i] - res.pr[i]);
    res.pr.swap(next);
    res.iterations = it + 1;
    res.residual = resid;
    if (resid < opt.eps) break;
  }
  return res;
}

struct RankScores {
  std::vector<std::string> nodes;
  std::vector<bool> external;
  std::vector<double> pr;
  std::vector<double> times;
  std::vector<double> sr;
  std::size_t iterations = 0;
  double residual = 0.0;
};

inline RankScores schemarank(const PageRankResult& pr, const RefGraph& g) {
  if (pr.pr.size() != g.size()) throw std::invalid_argument("pr not defined on every node");
  RankScores s;
  s.nodes = g.nodes;
  s.external = g.external;
  s.pr = pr.pr;
  s.times = g.times;
  s.iterations = pr.iterations;
  s.residual = pr.residual;
  s.sr.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s.sr[i] = pr.pr[i] * g.times[i];
  return s;
}

// Descending by sr, ties by path. Returns node indices.
inline std::vector<std::size_t> top_k(const RankScores& s, std::size_t k) {
  std::vector<std::size_t> idx(s.nodes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (s.sr[a] != s.sr[b]) return s.sr[a] > s.sr[b];
    return s.nodes[a] < s.nodes[b];
  });
  if (k < idx.size()) idx.resize(k);
  return idx;
}

inline Table rank_table(const RankScores& s) {
  Table t{"SchemaRank", {"path", "pr", "times", "sr", "external"}, {}};
  for (auto i : top_k(s, s.nodes.size()))
    t.rows.push_back({s.nodes[i], fixed(s.pr[i], 12), fixed(s.times[i], 0), fixed(s.sr[i], 12),
                      s.external[i] ? "1" : "0"});
  return t;
}

inline std::string graph_dot(const RefGraph& g) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out + "\"";
  };
  std::string out = "digraph schemas {\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out += "  " + quote(g.nodes[i]) + (g.external[i] ? " [shape=box, style=dashed];\n" : ";\n");
  for (const auto& [k, m] : g.edges)
    out += "  " + quote(g.nodes[k.first]) + " -> " + quote(g.nodes[k.second]) + " [weight=" + std::to_string(m) +
           ", label=" + std::to_string(m) + "];\n";
  out += "}\n";
  return out;
}

}  // namespace dretk
