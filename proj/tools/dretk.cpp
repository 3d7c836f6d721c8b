// dretk: determinism, subclass and metrics analysis of schema content models.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dretk/dretk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitError = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return static_cast<bool>(in) || in.eof();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("write failed for " + path.string());
}

// Regular files under each root (or the root itself), sorted.
std::vector<std::string> walk(const std::vector<std::string>& roots) {
  std::vector<std::string> files;
  for (const auto& root : roots) {
    std::error_code ec;
    if (fs::is_regular_file(root, ec)) {
      files.push_back(fs::path(root).generic_string());
      continue;
    }
    if (!fs::is_directory(root, ec)) throw ConfigError("corpus root does not exist: " + root);
    for (fs::recursive_directory_iterator it(root, ec), end; it != end; it.increment(ec)) {
      if (ec) break;
      if (it->is_regular_file(ec)) files.push_back(it->path().generic_string());
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

bool parse_or_report(const std::string& text, dretk::Regex& out) {
  try {
    out = dretk::parse_regex(text);
    return true;
  } catch (const dretk::SyntaxError& e) {
    std::cerr << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return false;
}

struct RankParams {
  double damping = 0.85;
  double eps = 1e-10;
  std::size_t max_iter = 100;
  std::string times_mode = "multiplicity";
  bool import_only = false;
  bool unweighted = false;

  [[nodiscard]] dretk::GraphOptions graph() const {
    dretk::GraphOptions g;
    g.times_mode = times_mode == "distinct" ? dretk::TimesMode::DistinctFiles : dretk::TimesMode::Multiplicity;
    g.import_only = import_only;
    return g;
  }
  [[nodiscard]] dretk::PageRankOptions pagerank() const {
    return {damping, eps, max_iter, !unweighted};
  }
  void add_to(CLI::App* app) {
    app->add_option("--damping", damping, "PageRank damping factor")->check(CLI::Range(0.0, 1.0));
    app->add_option("--eps", eps, "L1 convergence threshold")->check(CLI::PositiveNumber);
    app->add_option("--max-iter", max_iter, "PageRank iteration cap")->check(CLI::Range(1, 1000000));
    app->add_option("--times-mode", times_mode, "times(p): multiplicity or distinct")
        ->check(CLI::IsMember({"multiplicity", "distinct"}));
    app->add_flag("--import-only", import_only, "count only import statements as edges");
    app->add_flag("--unweighted", unweighted, "collapse duplicate edges when distributing rank");
  }
  [[nodiscard]] json to_json() const {
    return {{"damping", damping}, {"eps", eps},           {"max_iter", max_iter},
            {"times_mode", times_mode}, {"import_only", import_only}, {"weighted", !unweighted}};
  }
};

struct Corpus {
  std::vector<std::string> files;
  std::vector<dretk::SchemaDoc> docs;  // kept files, path order
  dretk::DedupResult dedup;
  dretk::ExtractionReport report;
};

Corpus load_corpus(const std::vector<std::string>& roots, int threshold) {
  Corpus c;
  c.files = walk(roots);
  std::vector<std::pair<std::string, dretk::Fingerprint>> prints;
  std::map<std::string, std::string> content;
  for (const auto& f : c.files) {
    std::string text;
    if (!read_file(f, text)) {
      std::cerr << "warning: cannot read " << f << "\n";
      continue;
    }
    prints.emplace_back(f, dretk::simhash(dretk::normalize_file_text(text)));
    content.emplace(f, std::move(text));
  }
  c.dedup = dretk::dedup(prints, threshold);
  for (const auto& f : c.dedup.kept) {
    c.docs.push_back(dretk::extract_schema(f, content.at(f)));
    c.report.add(c.docs.back());
  }
  return c;
}

std::vector<dretk::SchemaDoc> xsd_docs(const std::vector<dretk::SchemaDoc>& docs) {
  std::vector<dretk::SchemaDoc> out;
  for (const auto& d : docs)
    if (d.kind == dretk::SchemaKind::XSD) out.push_back(d);
  return out;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int cmd_check(const std::string& expr, std::size_t ceiling) {
  dretk::Regex r;
  if (!parse_or_report(expr, r)) return kExitError;
  dretk::DeterminismOptions opt;
  opt.state_ceiling = ceiling;
  const auto v = dretk::is_deterministic(r, opt);
  json j = dretk::verdict_json(v);
  j["regex"] = dretk::render(r);
  if (v.witness) {
    const auto m = dretk::mark(v.clamped ? dretk::clamp_counter_bounds(r) : r);
    j["marked"] = dretk::render_marked(m);
  }
  std::cout << j.dump() << "\n";
  switch (v.outcome) {
    case dretk::Outcome::Deterministic: return 0;
    case dretk::Outcome::NonDeterministic: return 1;
    case dretk::Outcome::UndecidedResource: return kExitError;
  }
  return kExitError;
}

template <typename F>
int with_expr(const std::string& expr, F&& f) {
  dretk::Regex r;
  if (!parse_or_report(expr, r)) return kExitError;
  json j = f(r);
  j["regex"] = dretk::render(r);
  std::cout << j.dump() << "\n";
  return 0;
}

struct AnalyzeConfig {
  std::vector<std::string> roots;
  std::string out_dir = "dretk-out";
  std::string regexlib;
  int threshold = 3;
  std::size_t ceiling = 1'000'000;
  std::vector<std::string> formats{"csv", "json", "text"};
  unsigned jobs = 1;
  RankParams rank;
};

std::vector<dretk::Regex> load_regexlib(const std::string& path, std::size_t& parse_errors) {
  std::vector<dretk::Regex> out;
  if (path.empty()) return out;
  std::string text;
  if (!read_file(path, text)) throw ConfigError("cannot read RegExLib file " + path);
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(dretk::parse_regex(line));
    } catch (const std::exception& e) {
      ++parse_errors;
      std::cerr << path << ":" << n << ": " << e.what() << "\n";
    }
  }
  return out;
}

int cmd_analyze(const AnalyzeConfig& cfg) {
  const fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw ConfigError("cannot create output directory " + cfg.out_dir);

  Corpus c = load_corpus(cfg.roots, cfg.threshold);
  std::size_t regexlib_errors = 0;
  const auto regexlib = load_regexlib(cfg.regexlib, regexlib_errors);

  dretk::AnalysisOptions opt;
  opt.determinism.state_ceiling = cfg.ceiling;
  opt.jobs = cfg.jobs;
  const auto records = dretk::analyze_corpus(c.docs, regexlib, opt);
  const auto stats = dretk::aggregate(records, c.docs);
  const auto dres = dretk::build_dre_set(records);

  std::string lines;
  for (const auto& r : records) lines += dretk::expr_record_json(r).dump() + "\n";
  write_file(out / "expressions.jsonl", lines);
  lines.clear();
  for (const auto& d : c.docs) lines += dretk::schema_doc_json(d).dump() + "\n";
  write_file(out / "schemas.jsonl", lines);

  write_file(out / "table2.csv", dretk::table2(stats).csv());
  write_file(out / "table3.csv", dretk::table3(stats).csv());
  write_file(out / "table4.csv", dretk::table4(stats).csv());
  write_file(out / "fig1.csv", dretk::fig1_table(stats).csv());
  write_file(out / "features.csv", dretk::features_table(stats).csv());
  write_file(out / "density.csv", dretk::density_files_table(c.docs).csv());
  write_file(out / "density_summary.csv", dretk::density_summary_table(stats).csv());
  write_file(out / "table5.csv", dretk::table5(dres).csv());
  lines.clear();
  for (const auto& s : dres.all_normalized()) lines += s + "\n";
  write_file(out / "dre_set.txt", lines);
  write_file(out / "stats.json", dretk::to_json(stats).dump(2) + "\n");
  for (const auto& f : cfg.formats)
    write_file(out / ("report." + std::string(f == "text" ? "txt" : f)), dretk::emit_report(stats, f));

  const auto graph = dretk::build_graph(xsd_docs(c.docs), cfg.rank.graph());
  if (graph.size() > 0) {
    const auto scores = dretk::schemarank(dretk::pagerank(graph, cfg.rank.pagerank()), graph);
    write_file(out / "rank.csv", dretk::rank_table(scores).csv());
  } else {
    write_file(out / "rank.csv", dretk::Table{"", {"path", "pr", "times", "sr", "external"}, {}}.csv());
  }
  write_file(out / "graph.dot", dretk::graph_dot(graph));

  json dups = json::array();
  for (const auto& cl : c.dedup.clusters) dups.push_back(cl);

  std::map<std::string, std::size_t> skipped;
  std::map<std::string, std::size_t> kinds;
  for (const auto& d : c.docs) {
    ++kinds[dretk::kind_name(d.kind)];
    for (const auto& [k, v] : d.skipped) skipped[k] += v;
  }
  std::size_t errors = 0;
  for (const auto& r : records)
    if (r.error) ++errors;

  json m;
  m["generated_at"] = utc_now();
  m["parameters"] = {{"corpus_roots", cfg.roots},
                     {"regexlib", cfg.regexlib},
                     {"simhash_bits", 64},
                     {"simhash_shingle", 3},
                     {"simhash_threshold", cfg.threshold},
                     {"state_ceiling", cfg.ceiling},
                     {"formats", cfg.formats},
                     {"rank", cfg.rank.to_json()},
                     {"star_height_convention", dretk::kStarHeightConvention}};
  m["counts"] = {{"files_seen", c.files.size()},
                 {"duplicates_removed", c.files.size() - c.dedup.kept.size()},
                 {"files_extracted", c.report.files_seen},
                 {"files_wellformed", c.report.files_wellformed},
                 {"files_with_rules", c.report.files_with_rules},
                 {"rules_total", c.report.rules_total},
                 {"files_by_kind", kinds},
                 {"regexlib_expressions", regexlib.size()},
                 {"regexlib_parse_errors", regexlib_errors},
                 {"expressions", records.size()},
                 {"expression_errors", errors}};
  m["duplicate_clusters"] = dups;
  m["skipped_constructs"] = skipped;
  m["notes"] = c.report.notes;
  write_file(out / "manifest.json", m.dump(2) + "\n");
  std::cerr << "analyzed " << c.files.size() << " files, " << records.size() << " expressions -> "
            << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Determinism and subclass analysis of regular expressions in XML schemas"};
  app.require_subcommand(1);

  std::string expr;
  std::size_t ceiling = 1'000'000;

  auto* check = app.add_subcommand("check", "decide determinism; exit 0 deterministic, 1 not, 2 error/undecided");
  check->add_option("expr", expr, "expression in the dialect")->required();
  check->add_option("--ceiling", ceiling, "state ceiling")->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "SORE / CHARE subclass report");
  classify->add_option("expr", expr)->required();

  auto* metrics = app.add_subcommand("metrics", "star height, nesting depth, counters");
  metrics->add_option("expr", expr)->required();

  auto* normalize = app.add_subcommand("normalize", "rename symbols a1, a2, ... by first occurrence");
  normalize->add_option("expr", expr)->required();

  std::string file;
  auto* extract = app.add_subcommand("extract", "content models of a DTD, XSD or RNG file as JSON");
  extract->add_option("file", file)->required();

  std::vector<std::string> paths;
  int threshold = 3;
  auto* dedup = app.add_subcommand("dedup", "SimHash near-duplicate clusters");
  dedup->add_option("paths", paths, "files or directories")->required();
  dedup->add_option("--threshold", threshold, "Hamming distance threshold")->check(CLI::Range(0, 64));

  AnalyzeConfig cfg;
  auto* analyze = app.add_subcommand("analyze", "full corpus pipeline");
  analyze->add_option("--corpus", cfg.roots, "corpus root directories")->required();
  analyze->add_option("--out", cfg.out_dir, "output directory");
  analyze->add_option("--regexlib", cfg.regexlib, "RegExLib expressions, one per line in the dialect");
  analyze->add_option("--threshold", cfg.threshold, "SimHash Hamming threshold")->check(CLI::Range(0, 64));
  analyze->add_option("--ceiling", cfg.ceiling, "determinism state ceiling")->check(CLI::PositiveNumber);
  analyze->add_option("--formats", cfg.formats, "report formats")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "text"}));
  analyze->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1, 256));
  cfg.rank.add_to(analyze);

  std::vector<std::string> rank_roots;
  std::string rank_out, dot_out;
  std::size_t top = 0;
  RankParams rank;
  auto* rank_cmd = app.add_subcommand("rank", "PageRank and SchemaRank over XSD references");
  rank_cmd->add_option("--corpus", rank_roots, "corpus roots or files")->required();
  rank_cmd->add_option("--out", rank_out, "CSV output (default stdout)");
  rank_cmd->add_option("--dot", dot_out, "GraphViz output of the reference graph");
  rank_cmd->add_option("--top", top, "keep only the k best");
  rank.add_to(rank_cmd);

  std::string stats_file, format = "text";
  auto* report = app.add_subcommand("report", "re-emit a report from stats.json");
  report->add_option("--stats", stats_file, "stats.json from analyze")->required();
  report->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "text"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(expr, ceiling);
    if (*classify) return with_expr(expr, [](const dretk::Regex& r) { return dretk::subclass_json(dretk::classify(r)); });
    if (*metrics) return with_expr(expr, [](const dretk::Regex& r) { return dretk::metrics_json(dretk::expr_metrics(r)); });
    if (*normalize) {
      dretk::Regex r;
      if (!parse_or_report(expr, r)) return kExitError;
      std::cout << dretk::render(dretk::normalize_dre(r)) << "\n";
      return 0;
    }
    if (*extract) {
      std::string text;
      if (!read_file(file, text)) throw ConfigError("cannot read " + file);
      const auto doc = dretk::extract_schema(file, text);
      std::cout << dretk::schema_doc_json(doc).dump() << "\n";
      return doc.wellformed ? 0 : 1;
    }
    if (*dedup) {
      std::vector<std::pair<std::string, dretk::Fingerprint>> prints;
      for (const auto& f : walk(paths)) {
        std::string text;
        if (!read_file(f, text)) throw ConfigError("cannot read " + f);
        prints.emplace_back(f, dretk::simhash(dretk::normalize_file_text(text)));
      }
      const auto res = dretk::dedup(prints, threshold);
      json j;
      j["threshold"] = threshold;
      j["kept"] = res.kept;
      j["clusters"] = res.clusters;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*analyze) return cmd_analyze(cfg);
    if (*rank_cmd) {
      const Corpus c = load_corpus(rank_roots, 0);
      const auto graph = dretk::build_graph(xsd_docs(c.docs), rank.graph());
      if (graph.size() == 0) throw ConfigError("no XSD files found");
      const auto scores = dretk::schemarank(dretk::pagerank(graph, rank.pagerank()), graph);
      auto table = dretk::rank_table(scores);
      if (top > 0 && table.rows.size() > top) table.rows.resize(top);
      if (rank_out.empty()) std::cout << table.csv();
      else write_file(rank_out, table.csv());
      if (!dot_out.empty()) write_file(dot_out, dretk::graph_dot(graph));
      return 0;
    }
    if (*report) {
      std::string text;
      if (!read_file(stats_file, text)) throw ConfigError("cannot read " + stats_file);
      std::cout << dretk::emit_report(dretk::stats_from_json(json::parse(text)), format);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
