#include <gtest/gtest.h>

#include "negtax/taxonomy.hpp"

namespace negtax {
namespace {

TEST(Taxonomy, LabelNamesRoundTrip) {
  for (auto l : kAllLabels) EXPECT_EQ(label_from_string(to_string(l)), l);
  EXPECT_EQ(label_from_string("Immediate Antonym"), NegationLabel::ImmediateAntonym);
  EXPECT_EQ(label_from_string("exclusionary"), NegationLabel::Exceptor);
  EXPECT_EQ(label_from_string("Contradictions"), NegationLabel::Contradiction);
  EXPECT_THROW(label_from_string("sarcasm"), Error);
}

TEST(Taxonomy, LeavesExcludeOther) {
  EXPECT_EQ(kTaxonomyLeaves.size(), 10u);
  for (auto l : kTaxonomyLeaves) EXPECT_NE(l, NegationLabel::Other);
}

TEST(Taxonomy, ParentsAndScopes) {
  EXPECT_EQ(parent_category(NegationLabel::Contrary), "Quantifiers");
  EXPECT_EQ(parent_category(NegationLabel::PolarAntonym), "Contrasting");
  EXPECT_EQ(scope_level(NegationLabel::Sentential), ScopeLevel::Sentence);
  EXPECT_EQ(scope_level(NegationLabel::Exceptor), ScopeLevel::Sentence);
  EXPECT_EQ(scope_level(NegationLabel::Contradiction), ScopeLevel::Pair);
  EXPECT_EQ(scope_level(NegationLabel::MidAntonym), ScopeLevel::Pair);
  try {
    scope_level(NegationLabel::Other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoScope);
  }
}

TEST(CueLexicon, OperatorLabelsOnly) {
  EXPECT_TRUE(cue_lexicon(NegationLabel::Sentential).contains("not", CueKind::Word));
  EXPECT_TRUE(cue_lexicon(NegationLabel::Exceptor).contains("besides", CueKind::Word));
  EXPECT_TRUE(cue_lexicon(NegationLabel::Affixal).contains("un", CueKind::Prefix));
  EXPECT_TRUE(cue_lexicon(NegationLabel::Affixal).contains("less", CueKind::Suffix));
  EXPECT_TRUE(cue_lexicon(NegationLabel::Implicit).contains("refuse", CueKind::Word));
  for (auto l : {NegationLabel::Contrary, NegationLabel::PolarAntonym, NegationLabel::Other}) {
    try {
      cue_lexicon(l);
      FAIL() << to_string(l);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::NoCueLexicon);
    }
  }
}

TEST(CueLexicon, FindsCuesInText) {
  const auto& lex = CueLexicons::builtin();
  auto m = lex.find("Movies that don't feature Tom Hanks", NegationLabel::Sentential);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].cue.text, "not");

  m = lex.find("Which countries refused to join?", NegationLabel::Implicit);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].token, "refused");

  m = lex.find("movies with unhappy endings", NegationLabel::Affixal);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].token, "unhappy");

  m = lex.find("a hairless cat", NegationLabel::Affixal);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].cue.kind, CueKind::Suffix);
}

TEST(CueLexicon, AffixNeedsTwoExtraBytes) {
  const auto& lex = CueLexicons::builtin();
  EXPECT_TRUE(lex.find("in", NegationLabel::Affixal).empty());
  EXPECT_TRUE(lex.find("unit", NegationLabel::Affixal).size() == 1);
}

TEST(CueLexicon, ButHeuristic) {
  const auto& lex = CueLexicons::builtin();
  EXPECT_EQ(lex.find("All planets but Earth", NegationLabel::Exceptor).size(), 1u);
  EXPECT_TRUE(lex.find("But the planets are far.", NegationLabel::Exceptor).empty());
  EXPECT_TRUE(lex.find("It is small, but it is bright.", NegationLabel::Exceptor).empty());
}

TEST(CueLexicon, FileOverridesSection) {
  auto lex = CueLexicons::parse("# custom\n[implicit]\nabstain\n\n[affixal]\nanti-\n-proof\n");
  EXPECT_TRUE(lex.lexicon(NegationLabel::Implicit).contains("abstain", CueKind::Word));
  EXPECT_FALSE(lex.lexicon(NegationLabel::Implicit).contains("refuse", CueKind::Word));
  EXPECT_TRUE(lex.lexicon(NegationLabel::Affixal).contains("anti", CueKind::Prefix));
  EXPECT_TRUE(lex.lexicon(NegationLabel::Affixal).contains("proof", CueKind::Suffix));
  EXPECT_TRUE(lex.lexicon(NegationLabel::Sentential).contains("not", CueKind::Word));
  EXPECT_THROW(CueLexicons::parse("[contrary]\nall\n"), Error);
  EXPECT_THROW(CueLexicons::parse("orphan\n"), Error);
}

TEST(Exceptor, SetSubtraction) {
  std::set<std::string> movies{"big", "cast_away", "forrest_gump"};
  auto rest = exceptor_semantics(movies, std::set<std::string>{"forrest_gump"});
  EXPECT_EQ(rest, (std::set<std::string>{"big", "cast_away"}));
  EXPECT_EQ(exceptor_semantics(movies, std::set<std::string>{}), movies);
  EXPECT_TRUE(exceptor_semantics(movies, movies).empty());
  try {
    exceptor_semantics(movies, std::set<std::string>{"titanic"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidExclusion);
  }
}

}  // namespace
}  // namespace negtax
