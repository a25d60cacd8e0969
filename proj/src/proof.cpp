#include <algorithm>
#include <cctype>
#include <set>

#include "negtax/error.hpp"
#include "negtax/oracle.hpp"
#include "negtax/prompts.hpp"
#include "negtax/text.hpp"

namespace negtax::oracle {

namespace {

std::string norm_key(std::string_view k) {
  std::string out;
  for (char c : k) {
    auto u = static_cast<unsigned char>(c);
    if (c == ' ' || c == '-' || c == '/') out.push_back('_');
    else if (u < 0x80) out.push_back(static_cast<char>(std::tolower(u)));
    else out.push_back(c);
  }
  return out;
}

/// Recursively lowercases object keys and turns separators into '_'.
json normalize_keys(const json& v) {
  if (v.is_object()) {
    json out = json::object();
    for (auto it = v.begin(); it != v.end(); ++it) out[norm_key(it.key())] = normalize_keys(it.value());
    return out;
  }
  if (v.is_array()) {
    json out = json::array();
    for (const auto& e : v) out.push_back(normalize_keys(e));
    return out;
  }
  return v;
}

const json* find_key(const json& obj, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) return nullptr;
  for (const char* k : keys)
    if (auto it = obj.find(k); it != obj.end() && !it->is_null()) return &*it;
  return nullptr;
}

// "none" is also a sentential operator, so that bucket keeps it.
bool is_placeholder(const std::string& s, bool keep_none = false) {
  auto l = to_lower(s);
  return l.empty() || (l == "none" && !keep_none) || l == "n/a" || l == "null" || l == "-" || l == "[]";
}

std::vector<std::string> split_list(std::string s, bool keep_none = false) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    auto item = trim(std::string_view(s).substr(start, comma - start));
    if (item.size() >= 2 && (item.front() == '"' || item.front() == '\'') && item.back() == item.front())
      item = item.substr(1, item.size() - 2);
    if (!is_placeholder(item, keep_none)) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

std::string entry_text(const json& e) {
  if (e.is_string()) return trim(e.get<std::string>());
  if (e.is_object()) {
    if (auto* s = find_key(e, {"predicate", "word", "cue", "symbol", "term", "name"}); s && s->is_string())
      return trim(s->get<std::string>());
  }
  throw Error(Errc::ShapeError, "unreadable list entry " + e.dump());
}

std::vector<std::string> string_list(const json& v, const char* what, bool keep_none = false) {
  std::vector<std::string> out;
  if (v.is_null()) return out;
  if (v.is_string()) return split_list(v.get<std::string>(), keep_none);
  if (!v.is_array()) throw Error(Errc::ShapeError, std::string(what) + " must be a list");
  for (const auto& e : v) {
    auto s = entry_text(e);
    if (!is_placeholder(s, keep_none)) out.push_back(std::move(s));
  }
  return out;
}

logic::Quantifier quantifier_from(const std::string& raw) {
  auto s = to_lower(trim(raw));
  auto starts = [&](std::string_view p) { return s.rfind(p, 0) == 0; };
  if (starts("∀") || starts("forall") || starts("for all") || starts("universal") || s == "all" || s == "every" ||
      s == "each")
    return logic::Quantifier::Forall;
  if (starts("∃") || starts("exist") || starts("there exist") || s == "some" || s == "a" || s == "any")
    return logic::Quantifier::Exists;
  throw Error(Errc::ShapeError, "unknown quantifier '" + raw + "'");
}

LexiconEntry lexicon_entry_from_string(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) return {trim(s), "", ""};
  return {trim(s.substr(0, colon)), trim(s.substr(colon + 1)), ""};
}

std::vector<LexiconEntry> parse_lexicon(const json& v) {
  std::vector<LexiconEntry> out;
  auto from_object = [](const json& e) {
    LexiconEntry le;
    if (auto* s = find_key(e, {"symbol", "word", "name", "lexeme", "item", "predicate"}); s && s->is_string())
      le.symbol = trim(s->get<std::string>());
    if (auto* t = find_key(e, {"lambda_term", "lambda", "term", "λ_term", "expression", "λ"}); t && t->is_string())
      le.lambda_term = trim(t->get<std::string>());
    if (auto* t = find_key(e, {"type", "type_tag", "church_type", "type_annotation"}); t && t->is_string())
      le.type_tag = trim(t->get<std::string>());
    if (le.symbol.empty()) throw Error(Errc::ShapeError, "lexicon entry without a symbol: " + e.dump());
    return le;
  };
  if (v.is_null()) return out;
  if (v.is_string()) {
    for (auto& item : split_list(v.get<std::string>())) out.push_back(lexicon_entry_from_string(item));
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (e.is_string()) out.push_back(lexicon_entry_from_string(e.get<std::string>()));
      else if (e.is_object()) out.push_back(from_object(e));
      else throw Error(Errc::ShapeError, "unreadable lexicon entry " + e.dump());
    }
  } else if (v.is_object()) {
    // {"organism": "λx:e. Organism(x)"} or {"organism": {"lambda_term": ..}}
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (it.value().is_string()) {
        out.push_back({it.key(), trim(it.value().get<std::string>()), ""});
      } else if (it.value().is_object()) {
        json e = it.value();
        if (!find_key(e, {"symbol", "word", "name", "lexeme", "item", "predicate"})) e["symbol"] = it.key();
        out.push_back(from_object(e));
      } else {
        throw Error(Errc::ShapeError, "unreadable lexicon entry for '" + it.key() + "'");
      }
    }
  } else {
    throw Error(Errc::ShapeError, "lexicon must be a list or object");
  }
  return out;
}

/// Alphanumerics only, lowercased: "PerformAnoxygenicPhotosynthesis" and
/// "perform_anoxygenic_photosynthesis" compare equal.
std::string loose(std::string_view s) {
  std::string out;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalnum(u)) out.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
  }
  return out;
}

}  // namespace

LambdaProof LambdaProof::from_json(const json& raw) {
  if (!raw.is_object()) throw Error(Errc::ShapeError, "proof must be a JSON object");
  json v = normalize_keys(raw);
  LambdaProof p;

  if (auto* lex = find_key(v, {"lexicon"})) p.lexicon = parse_lexicon(*lex);

  const json* inv = find_key(v, {"semantic_inventory", "inventory"});
  const json* preds = find_key(v, {"predicates"});
  if (!preds && inv) preds = find_key(*inv, {"predicates"});
  if (preds) p.predicates = string_list(*preds, "predicates");
  const json* quants = find_key(v, {"quantifiers"});
  if (!quants && inv) quants = find_key(*inv, {"quantifiers"});
  if (quants)
    for (const auto& q : string_list(*quants, "quantifiers")) p.quantifiers.push_back(quantifier_from(q));

  const json* neg = find_key(v, {"negation_analysis", "negation", "negations"});
  if (!neg) throw Error(Errc::ShapeError, "missing negation_analysis");
  if (!neg->is_object()) throw Error(Errc::ShapeError, "negation_analysis must be an object");
  auto bucket = [&](std::initializer_list<const char*> keys, const char* what, bool keep_none = false) {
    const json* b = find_key(*neg, keys);
    return b ? string_list(*b, what, keep_none) : std::vector<std::string>{};
  };
  p.negation_analysis.sentential = bucket({"sentential"}, "sentential", true);
  p.negation_analysis.exclusionary =
      bucket({"exclusionary", "exceptor", "exceptors", "exclusion", "exclusive"}, "exclusionary");
  p.negation_analysis.affixal = bucket({"affixal", "affix"}, "affixal");
  p.negation_analysis.implicit = bucket({"implicit"}, "implicit");

  const json* ff = find_key(v, {"final_formula", "formula", "final", "lambda_formula"});
  if (!ff) throw Error(Errc::ShapeError, "missing final_formula");
  if (!ff->is_string()) throw Error(Errc::ShapeError, "final_formula must be a string");
  p.final_formula = trim(ff->get<std::string>());
  if (p.final_formula.empty()) throw Error(Errc::ShapeError, "final_formula is empty");
  (void)logic::parse_formula(p.final_formula);

  std::set<std::string> known;
  for (const auto& s : p.predicates) known.insert(loose(s));
  for (const auto& e : p.lexicon) known.insert(loose(e.symbol));
  auto check = [&](const std::vector<std::string>& items, const char* name) {
    for (const auto& s : items)
      if (!known.count(loose(s)))
        p.notes.push_back(std::string(name) + " entry '" + s + "' is not among the predicates or lexicon symbols");
  };
  check(p.negation_analysis.sentential, "sentential");
  check(p.negation_analysis.exclusionary, "exclusionary");
  check(p.negation_analysis.affixal, "affixal");
  check(p.negation_analysis.implicit, "implicit");
  return p;
}

json LambdaProof::to_json() const {
  json lex = json::array();
  for (const auto& e : lexicon)
    lex.push_back({{"symbol", e.symbol}, {"lambda_term", e.lambda_term}, {"type", e.type_tag}});
  json quants = json::array();
  for (auto q : quantifiers) quants.push_back(q == logic::Quantifier::Forall ? "∀" : "∃");
  json j{{"lexicon", std::move(lex)},
         {"predicates", predicates},
         {"quantifiers", std::move(quants)},
         {"negation_analysis",
          {{"sentential", negation_analysis.sentential},
           {"exclusionary", negation_analysis.exclusionary},
           {"affixal", negation_analysis.affixal},
           {"implicit", negation_analysis.implicit}}},
         {"final_formula", final_formula}};
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

logic::Formula LambdaProof::formula() const { return logic::parse_formula(final_formula); }

LambdaProof OracleClient::lambda_proof(std::string_view text) {
  if (trim(text).empty()) throw Error(Errc::Precondition, "lambda_proof needs nonempty text");
  json value;
  try {
    value = complete_json(prompts::lambda_proof(text), "lambda_proof", classification_params());
  } catch (const OracleError& e) {
    if (e.reason().rfind("final_formula:", 0) == 0)
      throw Error(Errc::ProofRejected, "final formula never parsed: " + e.reason());
    throw;
  }
  return LambdaProof::from_json(value);
}

}  // namespace negtax::oracle
