#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "negtax/taxonomy.hpp"

namespace negtax::lexnet {

enum class Pos { Noun, Verb, Adj, Adv };

std::string_view to_string(Pos pos);

enum class Evidence { Direct, ViaSimilar, No };

std::string_view to_string(Evidence e);

struct AntonymCheck {
  Evidence evidence = Evidence::No;
  /// For ViaSimilar: the near-synonym of w1 whose antonym is w2.
  std::string bridge;
};

/// Lowercase, spaces to underscores, adjective syntax markers such as
/// "(p)" removed.
std::string normalize_lemma(std::string_view word);

/// Antonym and similar-to relations read from a Princeton WordNet 3.x
/// database directory. Immutable after load.
class AntonymIndex {
 public:
  using Key = std::pair<std::string, Pos>;

  /// Reads data.{adj,adv,noun,verb} and index.{adj,adv,noun,verb}.
  /// Throws Errc::ResourceError on missing or malformed files.
  static AntonymIndex load(const std::filesystem::path& wordnet_dir);

  const std::set<std::string>& antonyms(std::string_view lemma, Pos pos) const;
  /// Adjectives linked by the similar-to pointer (cluster heads and satellites).
  const std::set<std::string>& similar_to(std::string_view lemma) const;
  /// Nouns naming the attribute an adjective is a value of ("speed" for fast).
  const std::set<std::string>& attributes(std::string_view lemma) const;
  bool contains(std::string_view lemma) const;

  AntonymCheck are_antonyms(std::string_view w1, std::string_view w2) const;

  /// ViaSimilar -> MidAntonym; Direct between two gradable adjectives
  /// (both in similar-to clusters and values of a shared attribute) ->
  /// PolarAntonym; other Direct pairs -> ImmediateAntonym.
  /// Throws Errc::NotAntonyms when are_antonyms(w1, w2) is No.
  NegationLabel antonym_subtype(std::string_view w1, std::string_view w2) const;

  const std::map<Key, std::set<std::string>>& entries() const { return entries_; }
  std::size_t lemma_count() const { return lemmas_.size(); }

 private:
  std::map<Key, std::set<std::string>> entries_;
  std::map<std::string, std::set<std::string>> similar_;
  std::map<std::string, std::set<std::string>> attributes_;
  std::set<std::string> lemmas_;
};

}  // namespace negtax::lexnet
