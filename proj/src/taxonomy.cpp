#include "negtax/taxonomy.hpp"

#include <fstream>
#include <sstream>

#include "negtax/text.hpp"

namespace negtax {

namespace {

struct LabelInfo {
  NegationLabel label;
  std::string_view name;
  std::string_view display;
  std::string_view parent;
};

constexpr std::array<LabelInfo, kLabelCount> kInfo = {{
    {NegationLabel::Sentential, "sentential", "Sentential", "Logical operators"},
    {NegationLabel::Exceptor, "exceptor", "Exceptors", "Exclusion"},
    {NegationLabel::Contradiction, "contradiction", "Contradiction", "Quantifiers"},
    {NegationLabel::Contrary, "contrary", "Contrary", "Quantifiers"},
    {NegationLabel::Subcontradiction, "subcontradiction", "Subcontradiction", "Quantifiers"},
    {NegationLabel::Affixal, "affixal", "Affixal", "Logical operators"},
    {NegationLabel::Implicit, "implicit", "Implicit", "Lexical"},
    {NegationLabel::ImmediateAntonym, "immediate_antonym", "Immediate antonyms", "Contrasting"},
    {NegationLabel::MidAntonym, "mid_antonym", "Mid antonyms", "Contrasting"},
    {NegationLabel::PolarAntonym, "polar_antonym", "Polar antonyms", "Contrasting"},
    {NegationLabel::Other, "other", "Other", ""},
}};

struct Alias {
  std::string_view name;
  NegationLabel label;
};

constexpr std::array<Alias, 9> kAliases = {{
    {"exclusionary", NegationLabel::Exceptor},
    {"exceptors", NegationLabel::Exceptor},
    {"exclusion", NegationLabel::Exceptor},
    {"others", NegationLabel::Other},
    {"none", NegationLabel::Other},
    {"immediate", NegationLabel::ImmediateAntonym},
    {"mid", NegationLabel::MidAntonym},
    {"polar", NegationLabel::PolarAntonym},
    {"subcontrary", NegationLabel::Subcontradiction},
}};

std::string normalize_name(std::string_view name) {
  std::string out = to_lower(trim(name));
  for (char& c : out) {
    if (c == ' ' || c == '-') c = '_';
  }
  return out;
}

CueLexicon make(NegationLabel label, std::initializer_list<std::string_view> words,
                std::initializer_list<std::string_view> prefixes = {},
                std::initializer_list<std::string_view> suffixes = {}) {
  CueLexicon lex{label, {}};
  for (auto w : words) lex.cues.push_back({std::string(w), CueKind::Word});
  for (auto p : prefixes) lex.cues.push_back({std::string(p), CueKind::Prefix});
  for (auto s : suffixes) lex.cues.push_back({std::string(s), CueKind::Suffix});
  return lex;
}

bool operator_defined(NegationLabel l) {
  return l == NegationLabel::Sentential || l == NegationLabel::Exceptor ||
         l == NegationLabel::Affixal || l == NegationLabel::Implicit;
}

// Regular English inflections of a verb cue: refuse -> refuses, refused,
// refusing; deny -> denies, denied.
bool inflection_of(std::string_view token, std::string_view cue) {
  if (token == cue) return true;
  auto ends = [&](std::string_view stem, std::string_view suffix) {
    return token.size() == stem.size() + suffix.size() && token.substr(0, stem.size()) == stem &&
           token.substr(stem.size()) == suffix;
  };
  for (auto suf : {"s", "es", "ed", "ing"}) {
    if (ends(cue, suf)) return true;
  }
  if (cue.back() == 'e') {
    auto stem = cue.substr(0, cue.size() - 1);
    if (ends(stem, "ed") || ends(stem, "ing")) return true;
  }
  if (cue.back() == 'y') {
    auto stem = cue.substr(0, cue.size() - 1);
    if (ends(stem, "ies") || ends(stem, "ied")) return true;
  }
  return false;
}

struct RawToken {
  std::string norm;
  bool sentence_initial;
  bool after_comma;
};

std::vector<RawToken> scan(std::string_view text) {
  std::vector<RawToken> out;
  bool initial = true;
  bool comma = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (in >> raw) {
    std::string low = to_lower(raw);
    std::vector<std::string> parts;
    // "don't" -> "do" "not"
    auto pos = low.find("n't");
    if (pos == std::string::npos) pos = low.find("n’t");
    if (pos != std::string::npos && pos > 0) {
      parts.push_back(low.substr(0, pos));
      parts.emplace_back("not");
    } else {
      parts.push_back(low);
    }
    bool first_part = true;
    for (auto& p : parts) {
      auto toks = tokenize(p);
      for (auto& t : toks) {
        out.push_back({t, initial && first_part, comma && first_part});
        first_part = false;
      }
    }
    char last = raw.empty() ? ' ' : raw.back();
    initial = last == '.' || last == '!' || last == '?';
    comma = last == ',' || last == ';' || last == ':';
  }
  return out;
}

}  // namespace

std::string_view to_string(NegationLabel label) { return kInfo[label_index(label)].name; }

std::string_view display_name(NegationLabel label) { return kInfo[label_index(label)].display; }

std::string_view parent_category(NegationLabel label) { return kInfo[label_index(label)].parent; }

std::optional<NegationLabel> try_label_from_string(std::string_view name) {
  std::string n = normalize_name(name);
  for (const auto& info : kInfo) {
    if (info.name == n) return info.label;
  }
  for (const auto& a : kAliases) {
    if (a.name == n) return a.label;
  }
  std::string compact;
  for (char c : n) {
    if (c != '_') compact.push_back(c);
  }
  for (const auto& info : kInfo) {
    std::string cn;
    for (char c : info.name) {
      if (c != '_') cn.push_back(c);
    }
    if (cn == compact || cn + "s" == compact) return info.label;
  }
  return std::nullopt;
}

NegationLabel label_from_string(std::string_view name) {
  if (auto l = try_label_from_string(name)) return *l;
  throw Error(Errc::Usage, "unknown negation label '" + std::string(name) + "'");
}

std::string_view to_string(ScopeLevel level) {
  return level == ScopeLevel::Sentence ? "sentence" : "pair";
}

ScopeLevel scope_level(NegationLabel label) {
  switch (label) {
    case NegationLabel::Sentential:
    case NegationLabel::Exceptor:
    case NegationLabel::Affixal:
    case NegationLabel::Implicit:
      return ScopeLevel::Sentence;
    case NegationLabel::Contradiction:
    case NegationLabel::Contrary:
    case NegationLabel::Subcontradiction:
    case NegationLabel::ImmediateAntonym:
    case NegationLabel::MidAntonym:
    case NegationLabel::PolarAntonym:
      return ScopeLevel::Pair;
    case NegationLabel::Other:
      break;
  }
  throw Error(Errc::NoScope, "label 'other' has no scope level");
}

bool CueLexicon::contains(std::string_view text, CueKind kind) const {
  return std::any_of(cues.begin(), cues.end(),
                     [&](const Cue& c) { return c.kind == kind && c.text == text; });
}

const CueLexicons& CueLexicons::builtin() {
  static const CueLexicons lex = [] {
    CueLexicons l;
    l.lexicons_[NegationLabel::Sentential] =
        make(NegationLabel::Sentential,
             {"no", "not", "none", "never", "cannot", "nothing", "nobody", "nowhere", "neither",
              "nor"});
    l.lexicons_[NegationLabel::Exceptor] =
        make(NegationLabel::Exceptor, {"others", "besides", "but", "except"});
    l.lexicons_[NegationLabel::Affixal] =
        make(NegationLabel::Affixal, {},
             {"un", "in", "im", "il", "ir", "dis", "non", "mis", "ill"}, {"less", "free"});
    l.lexicons_[NegationLabel::Implicit] =
        make(NegationLabel::Implicit,
             {"refuse", "deny", "exclude", "reject", "avoid", "lack", "fail", "ignore"});
    return l;
  }();
  return lex;
}

CueLexicons CueLexicons::parse(std::string_view contents) {
  CueLexicons out = builtin();
  std::map<NegationLabel, CueLexicon> read;
  std::optional<NegationLabel> current;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw Error(Errc::Usage, "cue file line " + std::to_string(lineno) + ": bad section header");
      }
      NegationLabel l = label_from_string(t.substr(1, t.size() - 2));
      if (!operator_defined(l)) {
        throw Error(Errc::NoCueLexicon, "cue file line " + std::to_string(lineno) + ": label '" +
                                            std::string(to_string(l)) + "' has no cue lexicon");
      }
      current = l;
      read.try_emplace(l, CueLexicon{l, {}});
      continue;
    }
    if (!current) {
      throw Error(Errc::Usage, "cue file line " + std::to_string(lineno) + ": cue outside a section");
    }
    std::string cue = to_lower(t);
    Cue c{cue, CueKind::Word};
    if (cue.size() > 1 && cue.back() == '-') {
      c = {cue.substr(0, cue.size() - 1), CueKind::Prefix};
    } else if (cue.size() > 1 && cue.front() == '-') {
      c = {cue.substr(1), CueKind::Suffix};
    }
    auto& lex = read[*current];
    if (std::find(lex.cues.begin(), lex.cues.end(), c) == lex.cues.end()) lex.cues.push_back(c);
  }
  for (auto& [label, lex] : read) out.lexicons_[label] = std::move(lex);
  return out;
}

CueLexicons CueLexicons::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::ResourceError, "cannot open cue file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool CueLexicons::has_lexicon(NegationLabel label) const { return lexicons_.count(label) > 0; }

const CueLexicon& CueLexicons::lexicon(NegationLabel label) const {
  auto it = lexicons_.find(label);
  if (it == lexicons_.end()) {
    throw Error(Errc::NoCueLexicon,
                "label '" + std::string(to_string(label)) + "' is not cue-based");
  }
  return it->second;
}

std::vector<CueMatch> CueLexicons::find(std::string_view text, NegationLabel label) const {
  std::vector<CueMatch> out;
  const CueLexicon& lex = lexicon(label);
  auto toks = scan(text);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& tok = toks[i];
    for (const auto& cue : lex.cues) {
      bool hit = false;
      std::string note;
      switch (cue.kind) {
        case CueKind::Word:
          if (label == NegationLabel::Implicit) {
            hit = inflection_of(tok.norm, cue.text);
          } else {
            hit = tok.norm == cue.text;
          }
          if (hit && label == NegationLabel::Exceptor && cue.text == "but") {
            hit = !tok.sentence_initial && !tok.after_comma;
            note = "exceptive 'but' heuristic";
          }
          break;
        case CueKind::Prefix:
          hit = tok.norm.size() >= cue.text.size() + 2 && tok.norm.starts_with(cue.text);
          break;
        case CueKind::Suffix:
          hit = tok.norm.size() >= cue.text.size() + 2 && tok.norm.ends_with(cue.text);
          break;
      }
      if (hit) {
        out.push_back({label, cue, i, tok.norm, note});
        break;
      }
    }
  }
  return out;
}

std::vector<CueMatch> CueLexicons::find(std::string_view text) const {
  std::vector<CueMatch> out;
  for (const auto& [label, lex] : lexicons_) {
    auto m = find(text, label);
    out.insert(out.end(), m.begin(), m.end());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CueMatch& a, const CueMatch& b) { return a.token_index < b.token_index; });
  return out;
}

const CueLexicon& cue_lexicon(NegationLabel label) { return CueLexicons::builtin().lexicon(label); }

}  // namespace negtax
