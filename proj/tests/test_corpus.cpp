#include <gtest/gtest.h>

#include <random>

#include "dretk/corpus/aggregate.hpp"
#include "dretk/corpus/report.hpp"
#include "dretk/corpus/simhash.hpp"
#include "dretk/schema/dtd.hpp"
#include "support/corpus_files.hpp"
#include "support/random_regex.hpp"

using namespace dretk;

namespace {

const char* kDblp =
    "<!ELEMENT dblp (article|book)*>\n"
    "<!ELEMENT article (title|year|author)*>\n"
    "<!ELEMENT book (title|year|author|editor|publisher)*>\n";

SchemaDoc dblp_doc() { return extract_dtd(kDblp, "dblp.dtd"); }

// Every symbol becomes x: what is left is kinds, arities and bounds.
Regex shape(const Regex& r) {
  std::map<std::string, std::string> m;
  for (const auto& [s, n] : symbols(r)) m[s] = "x";
  return rename(r, m);
}

std::string random_text(std::mt19937_64& rng, std::size_t bytes) {
  static const std::vector<std::string> words{"element", "name", "type", "sequence", "choice", "ref",
                                              "minOccurs", "maxOccurs", "item", "list", "value", "group",
                                              "attribute", "string", "complex", "simple", "order", "node"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> num(0, 999);
  std::string out;
  while (out.size() < bytes) {
    out += words[pick(rng)] + std::to_string(num(rng));
    out += (num(rng) % 7 == 0) ? "/>\n" : " ";
  }
  return out;
}

void expect_partition(const BucketStats& b) {
  std::size_t s = b.sore, c = b.chare, e = b.echare;
  for (const auto& [k, v] : b.sore_reasons) s += v;
  for (const auto& [k, v] : b.chare_reasons) c += v;
  for (const auto& [k, v] : b.echare_reasons) e += v;
  EXPECT_EQ(s, b.total);
  EXPECT_EQ(c, b.total);
  EXPECT_EQ(e, b.total);
  std::size_t h = 0, n = 0;
  for (const auto& [k, v] : b.star_height) h += v;
  for (const auto& [k, v] : b.nesting_depth) n += v;
  EXPECT_EQ(h, b.total);
  EXPECT_EQ(n, b.total);
  EXPECT_EQ(b.deterministic + b.nondeterministic + b.undecided, b.total);
}

std::string csv_row(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(name + ",", 0) == 0) return line;
  return {};
}

}  // namespace

TEST(NormalizeText, Examples) {
  EXPECT_EQ(normalize_file_text("<a> <!--c--> <b/></a>"), "<a> <b/></a>");
  EXPECT_EQ(normalize_file_text("<!-- only -->\n  \n\t"), "");
  const std::string once = normalize_file_text("<a>\n\n   <b/>  <!-- x\n y -->\n</a>\n");
  EXPECT_EQ(normalize_file_text(once), once);
}

TEST(SimHash, DeterministicAndCommentInsensitive) {
  const std::string text = std::string(kDblp);
  EXPECT_EQ(simhash(normalize_file_text(text)), simhash(normalize_file_text(text)));
  const std::string commented = "<!-- bibliography -->\n" + text + "<!-- end -->\n";
  EXPECT_EQ(simhash(normalize_file_text(commented)), simhash(normalize_file_text(text)));
}

TEST(SimHash, UnrelatedTextsAreFarApart) {
  std::mt19937_64 rng(51);
  int far = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const auto a = simhash(normalize_file_text(random_text(rng, 1024)));
    const auto b = simhash(normalize_file_text(random_text(rng, 1024)));
    if (hamming(a, b) > 3) ++far;
  }
  EXPECT_GE(far, trials * 99 / 100);
}

TEST(SimHash, TiesGiveZeroBits) {
  EXPECT_EQ(simhash(""), 0U);
  // one feature: the fingerprint is that feature's hash
  EXPECT_EQ(simhash("solo"), feature_hash("solo"));
}

TEST(Dedup, Examples) {
  const auto same = dedup({{"b.dtd", 0xABCDULL}, {"a.dtd", 0xABCDULL}}, 3);
  EXPECT_EQ(same.kept, std::vector<std::string>{"a.dtd"});
  EXPECT_EQ(same.duplicate_of.at("b.dtd"), "a.dtd");

  const auto distinct = dedup({{"a", 0x1ULL}, {"b", 0x2ULL}, {"c", 0x4ULL}}, 0);
  EXPECT_EQ(distinct.kept, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(distinct.clusters.empty());

  // A~B (2), B~C (2), A-C (4)
  const auto chain = dedup({{"C", 0b1111ULL}, {"A", 0b0000ULL}, {"B", 0b0011ULL}}, 3);
  EXPECT_EQ(chain.kept, std::vector<std::string>{"A"});
  ASSERT_EQ(chain.clusters.size(), 1U);
  EXPECT_EQ(chain.clusters[0], (std::vector<std::string>{"A", "B", "C"}));
}

TEST(Dedup, FixtureCorpus) {
  std::vector<std::pair<std::string, Fingerprint>> entries;
  for (const auto& f : prop::corpus_files(prop::fixtures() / "corpus"))
    entries.emplace_back(f.generic_string(), simhash(normalize_file_text(prop::slurp(f))));
  const auto r = dedup(entries, 3);
  ASSERT_EQ(r.clusters.size(), 1U);
  ASSERT_EQ(r.clusters[0].size(), 3U);
  EXPECT_NE(r.clusters[0][0].find("dblp.dtd"), std::string::npos);
  EXPECT_EQ(r.kept.size(), entries.size() - 2);
  // threshold 0 keeps everything that is not byte-identical after normalization
  EXPECT_EQ(dedup(entries, 0).kept.size(), entries.size() - 2);
}

TEST(NormalizeDre, Examples) {
  EXPECT_EQ(render(normalize_dre(parse_regex("red green blue"))), "a1 a2 a3");
  EXPECT_EQ(render(normalize_dre(parse_regex("red green green"))), "a1 a2 a2");
  EXPECT_EQ(render(normalize_dre(parse_regex("name age sex"))), "a1 a2 a3");
  EXPECT_EQ(render(normalize_dre(parse_regex("(b|a)*b"))), "(a1|a2)*a1");
}

TEST(NormalizeDre, IdempotentAndShapePreserving) {
  prop::GenConfig cfg;
  prop::RegexGen gen(52, cfg);
  for (int i = 0; i < 2000; ++i) {
    const Regex r = gen.next();
    const Regex n = normalize_dre(r);
    ASSERT_EQ(normalize_dre(n), n) << render(r);
    ASSERT_EQ(shape(n), shape(r)) << render(r);
    ASSERT_EQ(is_deterministic(n).deterministic(), is_deterministic(r).deterministic()) << render(r);
    const auto cr = classify(r), cn = classify(n);
    ASSERT_EQ(cr.sore.member, cn.sore.member);
    ASSERT_EQ(cr.simplified_chare.reason, cn.simplified_chare.reason);
    ASSERT_EQ(expr_metrics(r).star_height, expr_metrics(n).star_height);
  }
}

TEST(DreSet, Examples) {
  const auto two = build_dre_set({{Bucket::XSD, parse_regex("red green blue")},
                                  {Bucket::XSD, parse_regex("name age sex")}});
  EXPECT_EQ(two.kinds.at(Bucket::XSD).original_count(), 2U);
  EXPECT_EQ(two.kinds.at(Bucket::XSD).normalized_count(), 1U);

  const auto nondet = build_dre_set({{Bucket::DTD, parse_regex("(a)*a")}});
  EXPECT_EQ(nondet.total_original(), 0U);

  const auto none = build_dre_set(std::vector<std::pair<Bucket, Regex>>{});
  EXPECT_EQ(none.total_original(), 0U);
  EXPECT_EQ(none.total_normalized(), 0U);

  DeterminismOptions tight;
  tight.state_ceiling = 2;
  const auto undecided = build_dre_set({{Bucket::RNG, parse_regex("(a&b&c&d)*")}}, tight);
  EXPECT_EQ(undecided.kinds.at(Bucket::RNG).undecided, 1U);
  EXPECT_EQ(undecided.total_original(), 0U);
}

TEST(DreSet, NormalizedNeverExceedsOriginal) {
  prop::GenConfig cfg;
  prop::RegexGen gen(53, cfg);
  std::vector<std::pair<Bucket, Regex>> exprs;
  for (int i = 0; i < 500; ++i) exprs.emplace_back(kBuckets[i % 4], gen.next());
  const auto set = build_dre_set(exprs);
  for (const auto& [b, e] : set.kinds) EXPECT_LE(e.normalized_count(), e.original_count());
  EXPECT_LE(set.total_normalized(), set.total_original());
}

TEST(Aggregate, DblpOnly) {
  const auto stats = aggregate(std::vector<SchemaDoc>{dblp_doc()}, {});
  const auto& d = stats.at(Bucket::DTD);
  EXPECT_EQ(d.total, 3U);
  EXPECT_EQ(d.deterministic, 3U);
  EXPECT_EQ(d.sore, 3U);
  EXPECT_EQ(d.chare, 3U);
  EXPECT_EQ(d.det_chare, 3U);
  EXPECT_EQ(d.density_files, 1U);
  EXPECT_NEAR(d.density_mean(), 10.0 / 3.0, 1e-9);
  EXPECT_EQ(stats.at(Bucket::XSD).total, 0U);
}

TEST(Aggregate, EmptyCorpus) {
  const auto stats = aggregate(std::vector<SchemaDoc>{}, {});
  EXPECT_EQ(stats, AggregateStats{});
  for (const auto& [b, s] : stats.buckets) EXPECT_EQ(s.total, 0U);
}

TEST(Aggregate, InterleavingInRngBucket) {
  SchemaDoc d;
  d.kind = SchemaKind::RNG;
  d.source_path = "x.rng";
  d.wellformed = true;
  d.rules.push_back({"r", parse_regex("a&b")});
  const auto stats = aggregate(std::vector<SchemaDoc>{d}, {});
  const auto& r = stats.at(Bucket::RNG);
  EXPECT_EQ(r.interleaving_exprs, 1U);
  EXPECT_EQ(r.sore_reasons.at("nonstandard expression"), 1U);
}

TEST(Report, CsvValues) {
  const auto zero = emit_report(AggregateStats{}, "csv");
  EXPECT_EQ(csv_row(zero, "SOREs"), "SOREs,0.00,0.00,0.00,0.00");
  const auto dblp = emit_report(aggregate(std::vector<SchemaDoc>{dblp_doc()}, {}), "csv");
  EXPECT_EQ(csv_row(dblp, "SOREs"), "SOREs,100.00,0.00,0.00,0.00");
  EXPECT_THROW(emit_report(AggregateStats{}, "xml"), std::invalid_argument);
}

TEST(Report, Table2RowNames) {
  const auto t = table2(AggregateStats{});
  std::vector<std::string> names;
  for (const auto& r : t.rows) names.push_back(r[0]);
  EXPECT_EQ(names, (std::vector<std::string>{
                       "SOREs", "nonstandard expression", "2-OREs", "3-OREs", "4-OREs", "5-OREs", "6-OREs",
                       "more than 7", "Simplified CHAREs", "not a SORE", "not a terminal symbol",
                       "occur unary operators", "nonstandard expression", "eSimplified CHAREs", "not a SORE",
                       "not a terminal symbol", "the unary operator *or?", "nonstandard expression", "SOREwC",
                       "SOREwI", "SOREwCorI"}));
}

TEST(Report, JsonRoundTrip) {
  const auto docs = prop::load_docs(prop::corpus_files(prop::fixtures() / "corpus"));
  const auto stats = aggregate(docs, prop::regexlib_fixture());
  const auto text = emit_report(stats, "json");
  EXPECT_EQ(stats_from_json(nlohmann::json::parse(text)), stats);
}

TEST(Pipeline, PartitionOnFixtures) {
  const auto docs = prop::load_docs(prop::corpus_files(prop::fixtures() / "corpus"));
  const auto stats = aggregate(docs, prop::regexlib_fixture());
  for (const auto& [b, s] : stats.buckets) {
    SCOPED_TRACE(bucket_name(b));
    EXPECT_GT(s.total, 0U);
    expect_partition(s);
  }
}

TEST(Pipeline, OrderAndThreadIndependent) {
  auto docs = prop::load_docs(prop::corpus_files(prop::fixtures() / "corpus"));
  const auto lib = prop::regexlib_fixture();
  const auto a = aggregate(docs, lib);
  std::reverse(docs.begin(), docs.end());
  AnalysisOptions opt;
  opt.jobs = 4;
  const auto b = aggregate(docs, lib, opt);
  EXPECT_EQ(a, b);
  EXPECT_EQ(emit_report(a, "csv"), emit_report(b, "csv"));
  EXPECT_EQ(emit_report(a, "text"), emit_report(b, "text"));
}
