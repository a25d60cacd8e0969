#include "negtax/lexnet.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "negtax/text.hpp"

namespace negtax::lexnet {

namespace {

struct PosFile {
  Pos pos;
  char tag;
  std::string_view suffix;
};

constexpr std::array<PosFile, 4> kFiles = {{
    {Pos::Noun, 'n', "noun"},
    {Pos::Verb, 'v', "verb"},
    {Pos::Adj, 'a', "adj"},
    {Pos::Adv, 'r', "adv"},
}};

struct Pointer {
  std::string symbol;
  std::string offset;
  char pos;
  int source;
  int target;
};

struct Synset {
  Pos pos;
  std::vector<std::string> words;
  std::vector<Pointer> pointers;
};

[[noreturn]] void corrupt(const std::filesystem::path& file, std::size_t line, const std::string& why) {
  throw Error(Errc::ResourceError,
              "malformed WordNet file " + file.string() + ":" + std::to_string(line) + ": " + why);
}

std::optional<Pos> pos_from_tag(char tag) {
  switch (tag) {
    case 'n': return Pos::Noun;
    case 'v': return Pos::Verb;
    case 'a':
    case 's': return Pos::Adj;
    case 'r': return Pos::Adv;
    default: return std::nullopt;
  }
}

template <typename Int>
bool parse_int(std::string_view s, Int& out, int base = 10) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && p == s.data() + s.size();
}

std::string synset_key(std::string_view offset, Pos pos) {
  std::string k(offset);
  k.push_back(static_cast<char>('0' + static_cast<int>(pos)));
  return k;
}

std::ifstream open_or_throw(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(Errc::ResourceError, "missing WordNet file " + p.string());
  return f;
}

void read_data(const std::filesystem::path& file, Pos pos,
               std::unordered_map<std::string, Synset>& synsets) {
  auto in = open_or_throw(file);
  std::string line;
  std::size_t lineno = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == ' ') continue;
    std::string_view head(line);
    if (auto bar = head.find('|'); bar != std::string_view::npos) head = head.substr(0, bar);
    std::vector<std::string_view> f;
    std::size_t i = 0;
    while (i < head.size()) {
      while (i < head.size() && head[i] == ' ') ++i;
      std::size_t j = i;
      while (j < head.size() && head[j] != ' ') ++j;
      if (j > i) f.push_back(head.substr(i, j - i));
      i = j;
    }
    if (f.size() < 5) corrupt(file, lineno, "too few fields");
    unsigned wcount = 0;
    if (!parse_int(f[3], wcount, 16)) corrupt(file, lineno, "bad word count");
    if (!pos_from_tag(f[2].empty() ? '?' : f[2][0])) corrupt(file, lineno, "bad synset type");
    std::size_t k = 4;
    Synset s{pos, {}, {}};
    for (unsigned w = 0; w < wcount; ++w) {
      if (k + 1 >= f.size()) corrupt(file, lineno, "truncated word list");
      s.words.push_back(normalize_lemma(f[k]));
      k += 2;
    }
    if (k >= f.size()) corrupt(file, lineno, "missing pointer count");
    unsigned pcount = 0;
    if (!parse_int(f[k], pcount)) corrupt(file, lineno, "bad pointer count");
    ++k;
    for (unsigned p = 0; p < pcount; ++p) {
      if (k + 3 >= f.size()) corrupt(file, lineno, "truncated pointer list");
      Pointer ptr;
      ptr.symbol = std::string(f[k]);
      ptr.offset = std::string(f[k + 1]);
      if (f[k + 2].size() != 1 || !pos_from_tag(f[k + 2][0])) corrupt(file, lineno, "bad pointer pos");
      ptr.pos = f[k + 2][0];
      std::string_view st = f[k + 3];
      if (st.size() != 4 || !parse_int(st.substr(0, 2), ptr.source, 16) ||
          !parse_int(st.substr(2, 2), ptr.target, 16)) {
        corrupt(file, lineno, "bad source/target field");
      }
      if (ptr.source > static_cast<int>(wcount)) corrupt(file, lineno, "pointer source out of range");
      s.pointers.push_back(std::move(ptr));
      k += 4;
    }
    synsets.emplace(synset_key(f[0], pos), std::move(s));
    ++records;
  }
  if (records == 0) throw Error(Errc::ResourceError, "WordNet file has no synsets: " + file.string());
}

void read_index(const std::filesystem::path& file, Pos pos,
                const std::unordered_map<std::string, Synset>& synsets, std::set<std::string>& lemmas) {
  auto in = open_or_throw(file);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == ' ') continue;
    std::istringstream ss(line);
    std::string lemma, tag;
    unsigned synset_cnt = 0, p_cnt = 0;
    if (!(ss >> lemma >> tag >> synset_cnt >> p_cnt)) corrupt(file, lineno, "bad index header");
    std::string skip;
    for (unsigned p = 0; p < p_cnt; ++p) ss >> skip;
    unsigned sense_cnt = 0, tagged = 0;
    if (!(ss >> sense_cnt >> tagged)) corrupt(file, lineno, "bad sense counts");
    for (unsigned s = 0; s < synset_cnt; ++s) {
      std::string off;
      if (!(ss >> off)) corrupt(file, lineno, "truncated offset list");
      if (!synsets.count(synset_key(off, pos))) corrupt(file, lineno, "offset " + off + " not in data file");
    }
    lemmas.insert(normalize_lemma(lemma));
  }
}

const std::set<std::string>& empty_set() {
  static const std::set<std::string> e;
  return e;
}

}  // namespace

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "noun";
    case Pos::Verb: return "verb";
    case Pos::Adj: return "adj";
    case Pos::Adv: return "adv";
  }
  return "";
}

std::string_view to_string(Evidence e) {
  switch (e) {
    case Evidence::Direct: return "direct";
    case Evidence::ViaSimilar: return "via_similar";
    case Evidence::No: return "no";
  }
  return "";
}

std::string normalize_lemma(std::string_view word) {
  std::string out = to_lower(trim(word));
  if (auto p = out.find('('); p != std::string::npos && out.back() == ')') out.resize(p);
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return out;
}

AntonymIndex AntonymIndex::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::ResourceError, "WordNet directory not found: " + dir.string());
  }
  std::unordered_map<std::string, Synset> synsets;
  for (const auto& pf : kFiles) {
    read_data(dir / ("data." + std::string(pf.suffix)), pf.pos, synsets);
  }
  AntonymIndex idx;
  for (const auto& pf : kFiles) {
    read_index(dir / ("index." + std::string(pf.suffix)), pf.pos, synsets, idx.lemmas_);
  }

  for (const auto& [key, s] : synsets) {
    for (const auto& ptr : s.pointers) {
      Pos tpos = *pos_from_tag(ptr.pos);
      auto it = synsets.find(synset_key(ptr.offset, tpos));
      if (it == synsets.end()) {
        throw Error(Errc::ResourceError, "dangling WordNet pointer to " + ptr.offset);
      }
      const Synset& t = it->second;
      auto words_of = [](const Synset& syn, int n) {
        std::vector<std::string> w;
        if (n == 0) return syn.words;
        if (n <= static_cast<int>(syn.words.size())) w.push_back(syn.words[n - 1]);
        return w;
      };
      if (ptr.symbol == "!") {
        for (const auto& a : words_of(s, ptr.source)) {
          for (const auto& b : words_of(t, ptr.target)) {
            idx.entries_[{a, s.pos}].insert(b);
            idx.entries_[{b, t.pos}].insert(a);
          }
        }
      } else if (ptr.symbol == "&" && s.pos == Pos::Adj) {
        for (const auto& a : s.words) {
          for (const auto& b : t.words) {
            if (a != b) idx.similar_[a].insert(b);
          }
        }
      } else if (ptr.symbol == "=" && s.pos == Pos::Adj) {
        for (const auto& a : s.words) {
          for (const auto& b : t.words) idx.attributes_[a].insert(b);
        }
      }
    }
  }
  return idx;
}

const std::set<std::string>& AntonymIndex::antonyms(std::string_view lemma, Pos pos) const {
  auto it = entries_.find({normalize_lemma(lemma), pos});
  return it == entries_.end() ? empty_set() : it->second;
}

const std::set<std::string>& AntonymIndex::similar_to(std::string_view lemma) const {
  auto it = similar_.find(normalize_lemma(lemma));
  return it == similar_.end() ? empty_set() : it->second;
}

const std::set<std::string>& AntonymIndex::attributes(std::string_view lemma) const {
  auto it = attributes_.find(normalize_lemma(lemma));
  return it == attributes_.end() ? empty_set() : it->second;
}

bool AntonymIndex::contains(std::string_view lemma) const {
  return lemmas_.count(normalize_lemma(lemma)) > 0;
}

AntonymCheck AntonymIndex::are_antonyms(std::string_view w1, std::string_view w2) const {
  std::string a = normalize_lemma(w1);
  std::string b = normalize_lemma(w2);
  if (a.empty() || b.empty() || a == b) return {};
  for (const auto& pf : kFiles) {
    if (antonyms(a, pf.pos).count(b)) return {Evidence::Direct, {}};
  }
  for (const auto& s : similar_to(a)) {
    if (s != b && antonyms(s, Pos::Adj).count(b)) return {Evidence::ViaSimilar, s};
  }
  return {};
}

NegationLabel AntonymIndex::antonym_subtype(std::string_view w1, std::string_view w2) const {
  AntonymCheck check = are_antonyms(w1, w2);
  switch (check.evidence) {
    case Evidence::ViaSimilar:
      return NegationLabel::MidAntonym;
    case Evidence::Direct: {
      const auto& attr_a = attributes(w1);
      const auto& attr_b = attributes(w2);
      bool shared = std::any_of(attr_a.begin(), attr_a.end(),
                                [&](const std::string& x) { return attr_b.count(x) > 0; });
      bool clustered = !similar_to(w1).empty() && !similar_to(w2).empty();
      return shared && clustered ? NegationLabel::PolarAntonym : NegationLabel::ImmediateAntonym;
    }
    case Evidence::No:
      break;
  }
  throw Error(Errc::NotAntonyms,
              "'" + std::string(w1) + "' and '" + std::string(w2) + "' are not antonyms");
}

}  // namespace negtax::lexnet
