// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "dretk/dretk.hpp"
#include "json.hpp"
#include "support/corpus_files.hpp"
#include "support/dense_pagerank.hpp"
#include "support/random_regex.hpp"

using namespace dretk;
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Result {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

Result oracle_equivalence() {
  Result r;
  prop::GenConfig cfg;
  cfg.alphabet = 4;
  cfg.max_size = 12;
  cfg.max_bound = 3;
  cfg.unbounded_counters = false;
  cfg.interleave = true;
  prop::RegexGen gen(2024, cfg);
  const auto t0 = Clock::now();
  int agree = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Regex e = gen.next();
    const auto a = is_deterministic(e);
    const auto b = oracle_is_deterministic(e);
    if (a.decided() && a.deterministic() == b.deterministic()) ++agree;
    else r.fail("disagreement on " + render(e));
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) r.fail("took " + fmt(secs) + " s");
  if (r.ok) r.detail = std::to_string(agree) + "/" + std::to_string(n) + " agree in " + fmt(secs) + " s";
  return r;
}

Result worked_examples() {
  Result r;
  if (!is_deterministic(parse_regex("a(a)*")).deterministic()) r.fail("a(a)* not deterministic");
  const auto v = is_deterministic(parse_regex("(a)*a"));
  if (v.outcome != dretk::Outcome::NonDeterministic || !v.witness) {
    r.fail("(a)*a not reported non-deterministic");
  } else {
    // witness: empty prefix, two distinct a-positions both able to start a word
    const auto& w = *v.witness;
    const auto m = mark(parse_regex("(a)*a"));
    const auto ff = first_follow(m);
    const bool valid = w.prefix_positions.empty() && w.pos_x != w.pos_y && m.symbol_of(w.pos_x) == "a" &&
                       m.symbol_of(w.pos_y) == "a" && ff.first.count(w.pos_x) && ff.first.count(w.pos_y);
    if (!valid) r.fail("invalid witness for (a)*a");
  }
  const auto path = prop::fixtures() / "corpus" / "dtd" / "dblp.dtd";
  const auto doc = extract_schema(path.generic_string(), prop::slurp(path));
  if (doc.rules.size() != 3) r.fail("DBLP fixture has " + std::to_string(doc.rules.size()) + " rules");
  for (const auto& rule : doc.rules) {
    const auto c = classify(rule.content);
    if (!is_deterministic(rule.content).deterministic()) r.fail(rule.element + " not deterministic");
    if (!c.sore.member || !c.simplified_chare.member) r.fail(rule.element + " not SORE/CHARE");
  }
  if (!doc.rules.empty()) {
    const double d = schema_density(doc);
    if (std::abs(d - 10.0 / 3.0) > 1e-9) r.fail("density " + fmt(d, 12));
    else if (r.ok) r.detail = "DBLP density " + fmt(d, 12);
  }
  return r;
}

Result definition_fixtures() {
  Result r;
  if (!classify(parse_regex("a(b|c)*d+(e|f)?")).simplified_chare.member) r.fail("a(b|c)*d+(e|f)? rejected");
  const auto ab = is_simplified_chare(parse_regex("(a b|c)*"));
  if (ab.member || ab.reason != ChareReason::NotATerminalSymbol) r.fail("(ab|c)* wrong verdict");
  const auto ops = is_simplified_chare(parse_regex("(a*|b?)*"));
  if (ops.member || ops.reason != ChareReason::UnaryOperatorsInFactor) r.fail("(a*|b?)* wrong verdict");
  if (!is_esimplified_chare(parse_regex("a|b+")).member) r.fail("a|b+ rejected");
  return r;
}

Result clamp_soundness() {
  Result r;
  prop::GenConfig cfg;
  cfg.max_bound = 6;
  prop::RegexGen gen(77, cfg);
  for (int i = 0; i < 1000; ++i) {
    const Regex e = gen.next();
    if (oracle_is_deterministic(e).deterministic() != oracle_is_deterministic(clamp_counter_bounds(e)).deterministic())
      r.fail("verdict changed on " + render(e));
  }
  if (r.ok) r.detail = "1000 expressions, 0 failures";
  return r;
}

Result pagerank_oracle() {
  Result r;
  std::mt19937_64 rng(99);
  double worst = 0.0;
  int capped_at_default = 0;
  for (int t = 0; t < 200; ++t) {
    const auto g = prop::random_graph(rng);
    if (pagerank(g).iterations >= PageRankOptions{}.max_iter) ++capped_at_default;
    // run to the eps stopping rule
    PageRankOptions opt;
    opt.max_iter = 100000;
    const auto got = pagerank(g, opt);
    const auto want = prop::dense_oracle(g, opt.damping);
    double l1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) l1 += std::abs(got.pr[i] - want[i]);
    worst = std::max(worst, l1);
    if (l1 >= 1e-8) r.fail("graph " + std::to_string(t) + " L1 " + std::to_string(l1));
    const double s = std::accumulate(got.pr.begin(), got.pr.end(), 0.0);
    if (std::abs(s - 1.0) > 1e-9) r.fail("graph " + std::to_string(t) + " sums to " + fmt(s, 12));
  }
  const auto cycle = pagerank(prop::graph({"A", "B"}, {{0, 1}, {1, 0}}));
  if (std::abs(cycle.pr[0] - 0.5) > 1e-12 || std::abs(cycle.pr[1] - 0.5) > 1e-12) r.fail("two-cycle not (0.5, 0.5)");
  if (r.ok) {
    std::ostringstream o;
    o << "200 graphs, worst L1 " << worst << "; " << capped_at_default << " would stop at the default "
      << PageRankOptions{}.max_iter << "-step cap";
    r.detail = o.str();
  }
  return r;
}

Result normalization() {
  Result r;
  auto norm = [](const char* e) { return render(normalize_dre(parse_regex(e))); };
  if (norm("red green blue") != "a1 a2 a3") r.fail("red green blue -> " + norm("red green blue"));
  if (norm("name age sex") != "a1 a2 a3") r.fail("name age sex -> " + norm("name age sex"));
  if (norm("red green green") != "a1 a2 a2") r.fail("red green green -> " + norm("red green green"));
  const auto set = build_dre_set({{Bucket::XSD, parse_regex("red green blue")}, {Bucket::XSD, parse_regex("name age sex")}});
  if (set.total_original() != 2 || set.total_normalized() != 1) r.fail("DRE set counts wrong");
  prop::GenConfig cfg;
  cfg.max_size = 20;
  prop::RegexGen gen(5150, cfg);
  for (int i = 0; i < 10000; ++i) {
    const Regex e = gen.next();
    const Regex n = normalize_dre(e);
    if (normalize_dre(n) != n) r.fail("not idempotent on " + render(e));
  }
  return r;
}

struct CliRun {
  int status = -1;
};

CliRun cli(const std::vector<std::string>& args) {
  std::string cmd = "'" + std::string(DRETK_CLI) + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1};
}

std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string text = prop::slurp(e.path());
    if (e.path().filename() == "manifest.json") {
      auto j = json::parse(text);
      j.erase("generated_at");
      text = j.dump();
    }
    out[e.path().filename().string()] = text;
  }
  return out;
}

Result pipeline() {
  Result r;
  const auto base = fs::temp_directory_path() / ("dretk-acceptance-" + std::to_string(std::random_device{}()));
  const auto a = base / "a", b = base / "b";
  const std::string corpus = (prop::fixtures() / "corpus").string();
  const std::string lib = (prop::fixtures() / "regexlib.txt").string();
  const auto t0 = Clock::now();
  const auto ra = cli({"analyze", "--corpus", corpus, "--regexlib", lib, "--out", a.string()});
  const auto rb = cli({"analyze", "--corpus", corpus, "--regexlib", lib, "--out", b.string()});
  const double secs = seconds_since(t0);
  if (ra.status != 0 || rb.status != 0) {
    r.fail("analyze exited with " + std::to_string(ra.status) + "/" + std::to_string(rb.status));
  } else {
    if (outputs(a) != outputs(b)) r.fail("outputs differ between runs");
    const auto stats = stats_from_json(json::parse(prop::slurp(a / "stats.json")));
    std::size_t exprs = 0;
    for (const auto& [bucket, s] : stats.buckets) {
      exprs += s.total;
      std::size_t sore = s.sore, chare = s.chare, echare = s.echare;
      for (const auto& [k, v] : s.sore_reasons) sore += v;
      for (const auto& [k, v] : s.chare_reasons) chare += v;
      for (const auto& [k, v] : s.echare_reasons) echare += v;
      if (sore != s.total || chare != s.total || echare != s.total)
        r.fail(std::string("partition broken in ") + bucket_name(bucket));
    }
    if (secs >= 5.0) r.fail("took " + fmt(secs) + " s");
    if (r.ok) r.detail = "2 runs identical, " + std::to_string(exprs) + " expressions, " + fmt(secs) + " s";
  }
  std::error_code ec;
  fs::remove_all(base, ec);
  return r;
}

Result dedup_criterion() {
  Result r;
  auto prints = [](const std::vector<fs::path>& files) {
    std::vector<std::pair<std::string, Fingerprint>> out;
    for (const auto& f : files) out.emplace_back(f.generic_string(), simhash(normalize_file_text(prop::slurp(f))));
    return out;
  };
  const auto dtd = prop::fixtures() / "corpus" / "dtd";
  const auto res = dedup(prints({dtd / "dblp.dtd", dtd / "dblp_copy.dtd", dtd / "dblp_commented.dtd"}), 3);
  if (res.kept.size() != 1 || !res.kept[0].ends_with("dblp.dtd")) r.fail("DBLP variants did not collapse to dblp.dtd");
  std::vector<fs::path> distinct;
  for (const char* sub : {"xsd", "rng", "misc"})
    for (const auto& f : prop::corpus_files(prop::fixtures() / "corpus" / sub)) distinct.push_back(f);
  const auto all = dedup(prints(distinct), 0);
  if (all.kept.size() != distinct.size()) r.fail("distinct corpus lost files at threshold 0");
  if (r.ok) r.detail = "3 -> 1; " + std::to_string(distinct.size()) + " distinct kept";
  return r;
}

Result metric_properties() {
  Result r;
  prop::GenConfig cfg;
  prop::RegexGen gen(8080, cfg);
  for (int i = 0; i < 10000; ++i) {
    const Regex e = gen.next();
    if (star_height(e) > nesting_depth(e)) r.fail("star height exceeds nesting depth on " + render(e));
  }
  std::vector<std::string> pool{"title", "year", "author", "x:item", "b", "a", "node-2", "q", "price", "c"};
  for (int i = 0; i < 1000; ++i) {
    const Regex e = gen.next();
    std::shuffle(pool.begin(), pool.end(), gen.rng());
    std::map<std::string, std::string> perm;
    for (int k = 0; k < cfg.alphabet; ++k) perm[std::string(1, static_cast<char>('a' + k))] = pool[k];
    const Regex f = rename(e, perm);
    const auto ve = is_deterministic(e), vf = is_deterministic(f);
    const auto ce = classify(e), cf = classify(f);
    const auto me = expr_metrics(e), mf = expr_metrics(f);
    const bool same = ve.outcome == vf.outcome && ce.sore.reason == cf.sore.reason &&
                      ce.simplified_chare.reason == cf.simplified_chare.reason &&
                      ce.esimplified_chare.reason == cf.esimplified_chare.reason && ce.sore_w_c == cf.sore_w_c &&
                      ce.sore_w_i == cf.sore_w_i && ce.sore_w_ci == cf.sore_w_ci && me.star_height == mf.star_height &&
                      me.nesting_depth == mf.nesting_depth && me.nontrivial_counters == mf.nontrivial_counters &&
                      me.interleave_count == mf.interleave_count;
    if (!same) r.fail("renaming changed results on " + render(e));
  }
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"determinism oracle equivalence", oracle_equivalence},
      {"worked examples and DBLP fixture", worked_examples},
      {"CHARE definition fixtures", definition_fixtures},
      {"counter clamp soundness", clamp_soundness},
      {"PageRank oracle", pagerank_oracle},
      {"DRE normalization", normalization},
      {"pipeline determinism and partition", pipeline},
      {"SimHash dedup", dedup_criterion},
      {"metric properties", metric_properties},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << "\n";
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
