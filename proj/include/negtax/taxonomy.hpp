#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "negtax/error.hpp"

namespace negtax {

/// Leaves of the negation taxonomy plus Other ("no negation found").
/// Declaration order follows the tree's left-to-right leaf order.
enum class NegationLabel {
  Sentential,
  Exceptor,
  Contradiction,
  Contrary,
  Subcontradiction,
  Affixal,
  Implicit,
  ImmediateAntonym,
  MidAntonym,
  PolarAntonym,
  Other,
};

inline constexpr std::size_t kLabelCount = 11;

inline constexpr std::array<NegationLabel, kLabelCount> kAllLabels = {
    NegationLabel::Sentential,       NegationLabel::Exceptor,
    NegationLabel::Contradiction,    NegationLabel::Contrary,
    NegationLabel::Subcontradiction, NegationLabel::Affixal,
    NegationLabel::Implicit,         NegationLabel::ImmediateAntonym,
    NegationLabel::MidAntonym,       NegationLabel::PolarAntonym,
    NegationLabel::Other,
};

/// The ten leaves of the tree (everything but Other).
inline constexpr std::array<NegationLabel, 10> kTaxonomyLeaves = {
    NegationLabel::Sentential,       NegationLabel::Exceptor,
    NegationLabel::Contradiction,    NegationLabel::Contrary,
    NegationLabel::Subcontradiction, NegationLabel::Affixal,
    NegationLabel::Implicit,         NegationLabel::ImmediateAntonym,
    NegationLabel::MidAntonym,       NegationLabel::PolarAntonym,
};

constexpr std::size_t label_index(NegationLabel l) { return static_cast<std::size_t>(l); }

/// Canonical snake_case name ("immediate_antonym", ...).
std::string_view to_string(NegationLabel label);

/// Inverse of to_string. Case-insensitive; also accepts a few spellings
/// found in external datasets ("exclusionary", "others", "none").
NegationLabel label_from_string(std::string_view name);
std::optional<NegationLabel> try_label_from_string(std::string_view name);

/// Human-readable column header ("Immediate antonyms").
std::string_view display_name(NegationLabel label);

/// Internal node of the taxonomy tree that the leaf hangs under, e.g.
/// Contrary -> "Quantifiers", PolarAntonym -> "Contrasting".
std::string_view parent_category(NegationLabel label);

enum class ScopeLevel { Sentence, Pair };

std::string_view to_string(ScopeLevel level);

/// Throws Errc::NoScope for Other.
ScopeLevel scope_level(NegationLabel label);

enum class CueKind { Word, Prefix, Suffix };

struct Cue {
  std::string text;  // lowercase, no hyphen
  CueKind kind = CueKind::Word;

  friend bool operator==(const Cue&, const Cue&) = default;
  friend auto operator<=>(const Cue&, const Cue&) = default;
};

struct CueLexicon {
  NegationLabel label = NegationLabel::Other;
  std::vector<Cue> cues;

  bool contains(std::string_view text, CueKind kind) const;
};

/// A cue found in running text.
struct CueMatch {
  NegationLabel label;
  Cue cue;
  std::size_t token_index;
  std::string token;
  /// Set when the match relied on a heuristic (contrastive vs exceptive "but").
  std::string note;
};

/// Cue lexicons for the operator-defined labels (Sentential, Exceptor,
/// Affixal, Implicit). Immutable after construction.
class CueLexicons {
 public:
  /// Built-in English lexicons.
  static const CueLexicons& builtin();

  /// Reads a UTF-8 file with `[label]` section headers and one cue per line.
  /// Prefix cues are written `un-`, suffix cues `-less`. Blank lines and
  /// lines starting with '#' are ignored. Sections present in the file
  /// replace the built-in set for that label; others keep the defaults.
  static CueLexicons load(const std::filesystem::path& path);
  static CueLexicons parse(std::string_view contents);

  /// Throws Errc::NoCueLexicon for quantifier and antonym labels and Other.
  const CueLexicon& lexicon(NegationLabel label) const;
  bool has_lexicon(NegationLabel label) const;

  /// Case-insensitive scan over punctuation-stripped tokens. "n't" is read
  /// as "not". Affixal cues require the token to be at least two bytes
  /// longer than the morpheme.
  std::vector<CueMatch> find(std::string_view text) const;
  std::vector<CueMatch> find(std::string_view text, NegationLabel label) const;

 private:
  CueLexicons() = default;
  std::map<NegationLabel, CueLexicon> lexicons_;
};

/// Convenience over CueLexicons::builtin().
const CueLexicon& cue_lexicon(NegationLabel label);

/// Exceptor semantics as set subtraction: returns domain \ excluded.
/// Throws Errc::InvalidExclusion unless excluded is a subset of domain.
template <typename T, typename Compare = std::less<T>>
std::set<T, Compare> exceptor_semantics(const std::set<T, Compare>& domain,
                                        const std::set<T, Compare>& excluded) {
  if (!std::includes(domain.begin(), domain.end(), excluded.begin(), excluded.end(),
                     domain.key_comp())) {
    throw Error(Errc::InvalidExclusion, "exclusion set is not a subset of the domain");
  }
  std::set<T, Compare> out(domain.key_comp());
  std::set_difference(domain.begin(), domain.end(), excluded.begin(), excluded.end(),
                      std::inserter(out, out.end()), domain.key_comp());
  return out;
}

}  // namespace negtax
