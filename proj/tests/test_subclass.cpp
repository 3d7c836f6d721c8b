#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "dretk/determinism.hpp"
#include "dretk/dialect.hpp"
#include "dretk/subclass.hpp"
#include "support/random_regex.hpp"

using namespace dretk;

namespace {

SubclassReport cls(const std::string& e) { return classify(parse_regex(e)); }

std::map<std::string, std::string> shuffle_alphabet(std::mt19937_64& rng, int n) {
  std::vector<std::string> from, to;
  for (int i = 0; i < n; ++i) from.emplace_back(1, static_cast<char>('a' + i));
  to = from;
  std::shuffle(to.begin(), to.end(), rng);
  std::map<std::string, std::string> m;
  for (int i = 0; i < n; ++i) m[from[i]] = to[i];
  return m;
}

bool same(const SubclassReport& a, const SubclassReport& b) {
  return a.is_standard == b.is_standard && a.max_occ == b.max_occ && a.k_ore == b.k_ore &&
         a.sore.member == b.sore.member && a.sore.reason == b.sore.reason &&
         a.simplified_chare.member == b.simplified_chare.member &&
         a.simplified_chare.reason == b.simplified_chare.reason &&
         a.esimplified_chare.member == b.esimplified_chare.member &&
         a.esimplified_chare.reason == b.esimplified_chare.reason && a.sore_w_c == b.sore_w_c &&
         a.sore_w_i == b.sore_w_i && a.sore_w_ci == b.sore_w_ci;
}

}  // namespace

TEST(Subclass, DefinitionFixtures) {
  EXPECT_TRUE(cls("a(b|c)*d+(e|f)?").simplified_chare.member);

  const auto ab = cls("(a b|c)*");
  EXPECT_FALSE(ab.simplified_chare.member);
  EXPECT_EQ(ab.simplified_chare.reason, ChareReason::NotATerminalSymbol);
  EXPECT_EQ(ab.esimplified_chare.reason, EChareReason::NotATerminalSymbol);

  const auto ops = cls("(a*|b?)*");
  EXPECT_FALSE(ops.simplified_chare.member);
  EXPECT_EQ(ops.simplified_chare.reason, ChareReason::UnaryOperatorsInFactor);

  const auto plus = cls("a|b+");
  EXPECT_TRUE(plus.esimplified_chare.member);
  EXPECT_FALSE(plus.simplified_chare.member);

  const auto star = cls("(a*|b)c");
  EXPECT_FALSE(star.esimplified_chare.member);
  EXPECT_EQ(star.esimplified_chare.reason, EChareReason::StarOrOptionalInFactor);
}

TEST(Subclass, SoreAndBands) {
  EXPECT_TRUE(cls("a(b|c)*").sore.member);
  EXPECT_EQ(cls("(a|b)*a").sore.reason, SoreReason::Ore2);
  EXPECT_EQ(cls("(a|b)*a").k_ore, "2-OREs");
  EXPECT_EQ(max_occurrences(parse_regex("a b c a b c a b c")), 3U);
  EXPECT_EQ(max_occurrences(parse_regex("()")), 0U);
  EXPECT_EQ(cls("a a a a a a a").sore.reason, SoreReason::MoreThan7);
  const auto nonstd = cls("(a*b{0,2}a*)+");
  EXPECT_FALSE(nonstd.sore.member);
  EXPECT_EQ(nonstd.sore.reason, SoreReason::Nonstandard);
}

TEST(Subclass, ExtendedSoreVariants) {
  const auto c = cls("a{2,5}b");
  EXPECT_FALSE(c.sore.member);
  EXPECT_EQ(c.sore.reason, SoreReason::Nonstandard);
  EXPECT_TRUE(c.sore_w_c);
  EXPECT_FALSE(c.sore_w_i);
  EXPECT_TRUE(c.sore_w_ci);

  const auto i = cls("a&b&c");
  EXPECT_TRUE(i.sore_w_i);
  EXPECT_FALSE(i.sore_w_c);
  EXPECT_TRUE(i.sore_w_ci);

  const auto t = cls("(title|year|author)*");
  EXPECT_TRUE(t.sore.member);
  EXPECT_TRUE(t.simplified_chare.member);
}

TEST(Subclass, SymbolFreeExpressions) {
  for (const char* e : {"()", "%empty%"}) {
    const auto r = cls(e);
    EXPECT_TRUE(r.sore.member) << e;
    EXPECT_FALSE(r.simplified_chare.member) << e;
    EXPECT_EQ(r.simplified_chare.reason, ChareReason::NotATerminalSymbol) << e;
  }
  EXPECT_TRUE(cls("a").simplified_chare.member);
}

TEST(Subclass, ImplicationChainOnRandomInputs) {
  prop::GenConfig cfg;
  cfg.alphabet = 8;
  cfg.empty_leaves = false;
  prop::RegexGen gen(31, cfg);
  for (int i = 0; i < 5000; ++i) {
    const Regex r = gen.next();
    const auto c = classify(r);
    if (c.simplified_chare.member) ASSERT_TRUE(c.esimplified_chare.member) << render(r);
    if (c.esimplified_chare.member) ASSERT_TRUE(c.sore.member) << render(r);
    if (c.sore.member) ASSERT_TRUE(c.sore_w_c && c.sore_w_i && c.sore_w_ci) << render(r);
  }
}

TEST(Subclass, ReasonsPartitionEveryClass) {
  prop::GenConfig cfg;
  cfg.alphabet = 6;
  prop::RegexGen gen(32, cfg);
  for (int i = 0; i < 5000; ++i) {
    const Regex r = gen.next();
    const auto c = classify(r);
    ASSERT_NE(c.sore.member, c.sore.reason.has_value());
    ASSERT_NE(c.simplified_chare.member, c.simplified_chare.reason.has_value());
    ASSERT_NE(c.esimplified_chare.member, c.esimplified_chare.reason.has_value());
    if (!is_standard(r)) {
      ASSERT_EQ(c.sore.reason, SoreReason::Nonstandard);
      ASSERT_EQ(c.simplified_chare.reason, ChareReason::Nonstandard);
    } else if (c.max_occ > 1) {
      ASSERT_EQ(c.simplified_chare.reason, ChareReason::NotASore);
      ASSERT_EQ(c.esimplified_chare.reason, EChareReason::NotASore);
    }
  }
}

TEST(Subclass, RenamingInvariance) {
  prop::GenConfig cfg;
  prop::RegexGen gen(33, cfg);
  for (int i = 0; i < 1000; ++i) {
    const Regex r = gen.next();
    const auto perm = shuffle_alphabet(gen.rng(), cfg.alphabet);
    ASSERT_TRUE(same(classify(r), classify(rename(r, perm)))) << render(r);
  }
}

TEST(Subclass, SoresAreDeterministic) {
  prop::GenConfig cfg;
  cfg.alphabet = 12;
  cfg.counters = false;
  cfg.interleave = false;
  prop::RegexGen gen(34, cfg);
  int seen = 0;
  for (int i = 0; i < 5000; ++i) {
    const Regex r = gen.next();
    if (!is_sore(r).member) continue;
    ++seen;
    ASSERT_TRUE(is_deterministic(r).deterministic()) << render(r);
  }
  EXPECT_GT(seen, 1000);
}
