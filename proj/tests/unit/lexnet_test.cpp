#include <gtest/gtest.h>

#include <random>

#include "negtax/error.hpp"
#include "negtax/lexnet.hpp"
#include "support.hpp"

namespace negtax::lexnet {
namespace {

const AntonymIndex& mini() {
  static const AntonymIndex index = AntonymIndex::load(test::fixture("wordnet-mini"));
  return index;
}

TEST(Lexnet, NormalizeLemma) {
  EXPECT_EQ(normalize_lemma("Moderately Paced"), "moderately_paced");
  EXPECT_EQ(normalize_lemma("galore(ip)"), "galore");
  EXPECT_EQ(normalize_lemma("  Open "), "open");
}

TEST(Lexnet, MissingDirectoryIsResourceError) {
  try {
    AntonymIndex::load("/nonexistent/wordnet");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ResourceError);
  }
}

TEST(Lexnet, AntonymRelationIsSymmetric) {
  const auto& entries = mini().entries();
  ASSERT_FALSE(entries.empty());
  std::vector<AntonymIndex::Key> keys;
  for (const auto& [key, _] : entries) keys.push_back(key);
  std::mt19937 rng(7);
  std::shuffle(keys.begin(), keys.end(), rng);
  if (keys.size() > 1000) keys.resize(1000);
  for (const auto& [lemma, pos] : keys) {
    for (const auto& other : mini().antonyms(lemma, pos)) {
      EXPECT_TRUE(mini().antonyms(other, pos).count(lemma)) << lemma << " / " << other;
    }
  }
}

TEST(Lexnet, DirectAndViaSimilar) {
  EXPECT_EQ(mini().are_antonyms("hot", "cold").evidence, Evidence::Direct);
  EXPECT_EQ(mini().are_antonyms("cold", "hot").evidence, Evidence::Direct);
  auto warm = mini().are_antonyms("warm", "cold");
  EXPECT_EQ(warm.evidence, Evidence::ViaSimilar);
  EXPECT_EQ(warm.bridge, "hot");
  EXPECT_EQ(mini().are_antonyms("hot", "open").evidence, Evidence::No);
  EXPECT_EQ(mini().are_antonyms("Open", "Closed").evidence, Evidence::Direct);
}

TEST(Lexnet, SubtypeImmediate) {
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"open", "closed"}, {"win", "lose"}, {"buy", "sell"}, {"inside", "outside"}}) {
    EXPECT_EQ(mini().antonym_subtype(a, b), NegationLabel::ImmediateAntonym) << a << "/" << b;
  }
}

TEST(Lexnet, SubtypePolar) {
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"hot", "cold"}, {"fast", "slow"}, {"tall", "short"}, {"rich", "poor"}, {"young", "old"}}) {
    EXPECT_EQ(mini().antonym_subtype(a, b), NegationLabel::PolarAntonym) << a << "/" << b;
  }
}

TEST(Lexnet, SubtypeMid) {
  EXPECT_EQ(mini().antonym_subtype("warm", "cold"), NegationLabel::MidAntonym);
  EXPECT_EQ(mini().antonym_subtype("tiny", "large"), NegationLabel::MidAntonym);
}

TEST(Lexnet, NotAntonymsThrows) {
  try {
    mini().antonym_subtype("hot", "open");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotAntonyms);
  }
}

TEST(Lexnet, HandMadeLexicon) {
  auto table = AntonymIndex::load(test::fixture("table-lexicon"));
  EXPECT_EQ(table.antonym_subtype("professional", "casual"), NegationLabel::ImmediateAntonym);
  EXPECT_EQ(table.antonym_subtype("fast", "slow"), NegationLabel::PolarAntonym);
  EXPECT_EQ(table.antonym_subtype("moderately_paced", "fast"), NegationLabel::MidAntonym);
  EXPECT_TRUE(table.attributes("fast").count("speed"));
}

}  // namespace
}  // namespace negtax::lexnet
