#include <gtest/gtest.h>

#include <cmath>

#include "mtprep/align.h"
#include "mtprep/error.h"
#include "mtprep/rng.h"
#include "test_util.h"

using namespace mtprep;
using mtprep::testing::TempDir;

namespace {

// Values of a plain Python IBM Model 1 EM (tests/oracle/make_fixture.py).
constexpr double kToyAX = 0.9551986360273028;
constexpr double kToyBY = 0.8269586415563086;
constexpr double kToyAY = 0.04480136397269712;
constexpr double kToyBX = 0.17304135844369134;

ParallelCorpus toy() { return {"uk", "lv", {{"a b", "x y"}, {"a", "x"}}}; }

AlignConfig no_null(unsigned iterations = 5) {
  AlignConfig c;
  c.use_null = false;
  c.iterations = iterations;
  return c;
}

ParallelCorpus random_corpus(std::uint64_t seed, std::size_t pairs) {
  Rng rng(seed);
  ParallelCorpus c{"uk", "lv", {}};
  for (std::size_t i = 0; i < pairs; ++i) {
    SentencePair p;
    for (auto side : {&p.source, &p.target}) {
      const auto len = 1 + rng.below(7);
      for (std::uint64_t k = 0; k < len; ++k) {
        if (k) side->push_back(' ');
        *side += (side == &p.source ? "s" : "t") + std::to_string(rng.below(15));
      }
    }
    c.pairs.push_back(p);
  }
  return c;
}

}  // namespace

TEST(Ibm1, SingleCooccurrenceIsCertain) {
  auto r = train_ibm1({"uk", "lv", {{"a", "x"}}}, no_null(1));
  EXPECT_DOUBLE_EQ(r.table.prob("a", "x"), 1.0);
}

TEST(Ibm1, ToyCorpusMatchesReferenceEm) {
  auto r = train_ibm1(toy(), no_null());
  EXPECT_NEAR(r.table.prob("a", "x"), kToyAX, 1e-12);
  EXPECT_NEAR(r.table.prob("b", "y"), kToyBY, 1e-12);
  EXPECT_NEAR(r.table.prob("a", "y"), kToyAY, 1e-12);
  EXPECT_NEAR(r.table.prob("b", "x"), kToyBX, 1e-12);
  EXPECT_GT(r.table.prob("a", "x"), 0.9);
  EXPECT_GT(r.table.prob("b", "y"), r.table.prob("b", "x"));
}

TEST(Ibm1, UnseenPairsHaveZeroProbability) {
  auto r = train_ibm1(toy(), no_null());
  EXPECT_EQ(r.table.prob("a", "nope"), 0.0);
  EXPECT_EQ(r.table.prob("nope", "x"), 0.0);
}

TEST(Ibm1, EmptyCorpusIsError) {
  EXPECT_THROW(train_ibm1({"uk", "lv", {}}, AlignConfig{}), DataError);
}

TEST(Ibm1, ZeroIterationsRejected) {
  AlignConfig c;
  c.iterations = 0;
  EXPECT_THROW(train_ibm1(toy(), c), ConfigError);
}

TEST(Ibm1, RowsSumToOneAfterEveryIteration) {
  auto corpus = random_corpus(7, 300);
  for (unsigned it = 1; it <= 6; ++it) {
    for (bool null : {false, true}) {
      AlignConfig c;
      c.iterations = it;
      c.use_null = null;
      auto r = train_ibm1(corpus, c);
      for (int s = 0; s < 15; ++s) EXPECT_NEAR(r.table.row_sum("s" + std::to_string(s)), 1.0, 1e-9);
      if (null) {
        EXPECT_NEAR(r.table.row_sum(TranslationTable::kNull), 1.0, 1e-9);
      }
    }
  }
}

TEST(Ibm1, LogLikelihoodNonDecreasing) {
  auto corpus = random_corpus(11, 500);
  AlignConfig c;
  c.iterations = 8;
  auto r = train_ibm1(corpus, c);
  ASSERT_EQ(r.log_likelihood.size(), 9u);
  for (std::size_t i = 1; i < r.log_likelihood.size(); ++i)
    EXPECT_GE(r.log_likelihood[i], r.log_likelihood[i - 1] - 1e-9) << i;
}

TEST(Ibm1, BitwiseIdenticalAcrossThreadCounts) {
  auto corpus = random_corpus(3, 3000);
  AlignConfig one, many;
  many.threads = 6;
  auto a = train_ibm1(corpus, one), b = train_ibm1(corpus, many);
  EXPECT_EQ(a.table.to_lines(), b.table.to_lines());
  EXPECT_EQ(a.log_likelihood, b.log_likelihood);
}

TEST(TranslationTable, SaveLoadRoundTripAndOrder) {
  TempDir dir;
  auto r = train_ibm1(toy(), no_null());
  r.table.save(dir.file("t"));
  auto lines = r.table.to_lines();
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].substr(0, 4), "a\tx\t");
  EXPECT_EQ(lines[1].substr(0, 4), "a\ty\t");
  EXPECT_EQ(lines[2].substr(0, 4), "b\ty\t");
  EXPECT_EQ(lines[3].substr(0, 4), "b\tx\t");
  auto back = TranslationTable::load(dir.file("t"));
  EXPECT_EQ(back.to_lines(), lines);
  EXPECT_EQ(back.prob("a", "x"), r.table.prob("a", "x"));
}

TEST(TranslationTable, LoadRejectsMalformedLines) {
  TempDir dir;
  mtprep::testing::write_file(dir.file("t"), "a\tx\n");
  EXPECT_THROW(TranslationTable::load(dir.file("t")), DataError);
  mtprep::testing::write_file(dir.file("u"), "a\tx\tnan?\n");
  EXPECT_THROW(TranslationTable::load(dir.file("u")), DataError);
}

TEST(Viterbi, ToyPairIntersection) {
  auto c = no_null();
  auto fwd = train_ibm1(toy(), c).table;
  auto rev = train_ibm1(reversed(toy()), c).table;
  EXPECT_EQ(viterbi_align({"a", "b"}, {"x", "y"}, fwd, rev, c), Alignment({{0, 0}, {1, 1}}));
  EXPECT_EQ(viterbi_align({"a"}, {"x"}, fwd, rev, c), Alignment({{0, 0}}));
  EXPECT_EQ(viterbi_align({"a"}, {}, fwd, rev, c), Alignment{});
  EXPECT_EQ(viterbi_align({}, {"x"}, fwd, rev, c), Alignment{});
}

TEST(Viterbi, UnknownWordsWithoutNullTieToIndexZero) {
  auto c = no_null();
  c.symmetrize = Symmetrize::SourceToTarget;
  auto fwd = train_ibm1(toy(), c).table;
  auto rev = train_ibm1(reversed(toy()), c).table;
  EXPECT_EQ(viterbi_align({"q", "r"}, {"z"}, fwd, rev, c), Alignment({{0, 0}}));
}

TEST(Viterbi, UnknownWordsWithNullStayUnaligned) {
  AlignConfig c;
  auto fwd = train_ibm1(toy(), c).table;
  auto rev = train_ibm1(reversed(toy()), c).table;
  EXPECT_EQ(viterbi_align({"q", "r"}, {"z"}, fwd, rev, c), Alignment{});
}

TEST(Viterbi, SymmetrizationModes) {
  // Forward links both targets to "a"; reverse links both sources to "x".
  ParallelCorpus c{"uk", "lv", {{"a b", "x y"}, {"a", "x y"}, {"a b", "x"}}};
  for (auto mode : {Symmetrize::Intersection, Symmetrize::Union, Symmetrize::SourceToTarget}) {
    auto cfg = no_null();
    cfg.symmetrize = mode;
    auto fwd = train_ibm1(c, cfg).table;
    auto rev = train_ibm1(reversed(c), cfg).table;
    auto a = viterbi_align({"a", "b"}, {"x", "y"}, fwd, rev, cfg);
    auto f = no_null();
    f.symmetrize = Symmetrize::SourceToTarget;
    auto forward_only = viterbi_align({"a", "b"}, {"x", "y"}, fwd, rev, f);
    for (const auto& l : a.links) {
      if (mode == Symmetrize::Intersection) {
        EXPECT_TRUE(forward_only.contains(l));
      }
    }
    if (mode == Symmetrize::Union) {
      for (const auto& l : forward_only.links) EXPECT_TRUE(a.contains(l));
    }
  }
}

TEST(AlignCorpus, ToyCorpus) {
  auto r = align_corpus(toy(), no_null());
  ASSERT_EQ(r.alignments.size(), 2u);
  EXPECT_EQ(format_alignment(r.alignments[0]), "0-0 1-1");
  EXPECT_EQ(format_alignment(r.alignments[1]), "0-0");
}

TEST(AlignCorpus, SinglePair) {
  // With NULL, t(x|NULL) = t(x|a) = 1 and the tie goes to NULL (position 0).
  auto r = align_corpus({"uk", "lv", {{"a", "x"}}}, AlignConfig{});
  ASSERT_EQ(r.alignments.size(), 1u);
  EXPECT_EQ(format_alignment(r.alignments[0]), "");
  EXPECT_EQ(format_alignment(align_corpus({"uk", "lv", {{"a", "x"}}}, no_null()).alignments[0]),
            "0-0");
}

TEST(AlignCorpus, DeterministicFiles) {
  TempDir dir;
  auto corpus = random_corpus(5, 800);
  AlignConfig c1, c4;
  c4.threads = 4;
  write_alignments(align_corpus(corpus, c1).alignments, dir.file("a"));
  write_alignments(align_corpus(corpus, c1).alignments, dir.file("b"));
  write_alignments(align_corpus(corpus, c4).alignments, dir.file("c"));
  const auto a = mtprep::testing::read_file(dir.file("a"));
  EXPECT_EQ(a, mtprep::testing::read_file(dir.file("b")));
  EXPECT_EQ(a, mtprep::testing::read_file(dir.file("c")));
}

TEST(AlignCorpus, LinksWithinSentenceBounds) {
  auto corpus = random_corpus(9, 200);
  auto r = align_corpus(corpus, AlignConfig{});
  for (std::size_t i = 0; i < corpus.size(); ++i)
    EXPECT_NO_THROW(check_alignment(r.alignments[i], split_tokens(corpus.pairs[i].source).size(),
                                    split_tokens(corpus.pairs[i].target).size()));
}

TEST(AlignConfig, ParseSymmetrize) {
  EXPECT_EQ(parse_symmetrize("intersection"), Symmetrize::Intersection);
  EXPECT_EQ(parse_symmetrize("union"), Symmetrize::Union);
  EXPECT_EQ(parse_symmetrize("source-to-target"), Symmetrize::SourceToTarget);
  EXPECT_THROW(parse_symmetrize("grow-diag"), ConfigError);
  EXPECT_EQ(symmetrize_name(Symmetrize::Union), "union");
}

TEST(Reversed, SwapsSidesAndLanguages) {
  auto r = reversed(toy());
  EXPECT_EQ(r.source_lang, "lv");
  EXPECT_EQ(r.pairs[0], (SentencePair{"x y", "a b"}));
}
