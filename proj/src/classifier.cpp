#include "negtax/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "negtax/error.hpp"
#include "negtax/text.hpp"

namespace negtax::classifier {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view to_string(Step step) {
  switch (step) {
    case Step::PredicateS1: return "predicate_s1";
    case Step::QuantifierS2: return "quantifier_s2";
    case Step::AntonymS3: return "antonym_s3";
    case Step::OtherS4: return "other_s4";
  }
  return "?";
}

Step step_from_string(std::string_view s) {
  for (auto st : {Step::PredicateS1, Step::QuantifierS2, Step::AntonymS3, Step::OtherS4})
    if (to_string(st) == s) return st;
  throw Error(Errc::ShapeError, "unknown step '" + std::string(s) + "'");
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Q1: return "q1";
    case Role::D1: return "d1";
    case Role::Q2: return "q2";
    case Role::D2: return "d2";
  }
  return "?";
}

const std::optional<LambdaProof>& ProofSet::get(Role role) const {
  switch (role) {
    case Role::Q1: return q1;
    case Role::D1: return d1;
    case Role::Q2: return q2;
    case Role::D2: return d2;
  }
  return q1;
}

ojson ClassificationTrace::to_json() const {
  ojson j;
  j["id"] = instance_id;
  j["label"] = std::string(negtax::to_string(label));
  j["step"] = std::string(to_string(step_fired));
  j["evidence"] = evidence;
  ojson proofs = ojson::object();
  for (const auto& [role, hash] : proofs_used) proofs[role] = hash;
  j["proofs"] = std::move(proofs);
  if (pattern) {
    j["pattern"] = {{"a", std::string(to_string(pattern->a))},
                    {"b", std::string(to_string(pattern->b))},
                    {"pattern", std::string(logic::to_string(pattern->pattern))}};
  }
  j["notes"] = notes;
  return j;
}

// ------------------------------------------------------------------ diff

std::vector<DiffHunk> token_diff(std::string_view a, std::string_view b) {
  auto x = tokenize(a);
  auto y = tokenize(b);
  const std::size_t n = x.size(), m = y.size();
  std::vector<std::vector<std::uint32_t>> lcs(n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      lcs[i][j] = x[i] == y[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);

  std::vector<DiffHunk> hunks;
  DiffHunk cur;
  auto flush = [&] {
    if (!cur.left.empty() || !cur.right.empty()) hunks.push_back(std::move(cur));
    cur = {};
  };
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && x[i] == y[j]) {
      flush();
      ++i;
      ++j;
    } else if (j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j])) {
      cur.right.push_back(y[j++]);
    } else {
      cur.left.push_back(x[i++]);
    }
  }
  flush();
  return hunks;
}

std::vector<std::pair<std::string, std::string>> antonym_candidates(const std::vector<DiffHunk>& hunks) {
  std::vector<std::pair<std::string, std::string>> out;
  auto units = [](const std::vector<std::string>& toks) {
    std::vector<std::string> u = toks;
    for (std::size_t k = 0; k + 1 < toks.size(); ++k) u.push_back(toks[k] + "_" + toks[k + 1]);
    return u;
  };
  for (const auto& h : hunks) {
    if (h.left.empty() || h.right.empty()) continue;
    for (const auto& l : units(h.left))
      for (const auto& r : units(h.right))
        if (l != r) out.emplace_back(l, r);
  }
  return out;
}

namespace {

/// Inflection-stripped forms that exist in the index, word itself first.
std::vector<std::string> base_forms(const std::string& w, const lexnet::AntonymIndex& idx) {
  static const std::pair<std::string_view, std::string_view> kRules[] = {
      {"ies", "y"}, {"ses", "s"}, {"xes", "x"}, {"zes", "z"}, {"ches", "ch"}, {"shes", "sh"}, {"men", "man"},
      {"es", "e"},  {"es", ""},   {"s", ""},    {"ied", "y"}, {"ed", "e"},    {"ed", ""},    {"ing", "e"},
      {"ing", ""},  {"er", ""},   {"est", ""},  {"er", "e"},  {"est", "e"},
  };
  std::vector<std::string> out{w};
  for (const auto& [suffix, repl] : kRules) {
    if (w.size() <= suffix.size() + 1 || w.compare(w.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    std::string base = w.substr(0, w.size() - suffix.size()) + std::string(repl);
    if (idx.contains(base) && std::find(out.begin(), out.end(), base) == out.end()) out.push_back(base);
  }
  return out;
}

struct AntonymHit {
  std::string a, b;
  lexnet::AntonymCheck check;
  std::string scope;
};

std::optional<AntonymHit> find_antonyms(const Instance& in, const lexnet::AntonymIndex& idx) {
  std::optional<AntonymHit> via;
  const std::pair<const std::string*, const std::string*> pairs[] = {{&in.q1, &in.q2}, {&in.d1, &in.d2}};
  const char* scopes[] = {"q1/q2", "d1/d2"};
  for (int p = 0; p < 2; ++p) {
    for (const auto& [l, r] : antonym_candidates(token_diff(*pairs[p].first, *pairs[p].second))) {
      for (const auto& a : base_forms(l, idx)) {
        for (const auto& b : base_forms(r, idx)) {
          for (int dir = 0; dir < 2; ++dir) {
            const auto& x = dir == 0 ? a : b;
            const auto& y = dir == 0 ? b : a;
            auto c = idx.are_antonyms(x, y);
            if (c.evidence == lexnet::Evidence::Direct) return AntonymHit{x, y, c, scopes[p]};
            if (c.evidence == lexnet::Evidence::ViaSimilar && !via) via = AntonymHit{x, y, c, scopes[p]};
          }
        }
      }
    }
  }
  return via;
}

NegationLabel pattern_label(logic::PairPattern p) {
  switch (p) {
    case logic::PairPattern::ForallExistsNot: return NegationLabel::Contradiction;
    case logic::PairPattern::ForallNotExists: return NegationLabel::Contrary;
    case logic::PairPattern::ExistsExistsNot: return NegationLabel::Subcontradiction;
  }
  return NegationLabel::Other;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

constexpr Role kAllRoles[] = {Role::Q1, Role::D1, Role::Q2, Role::D2};
constexpr std::pair<Role, Role> kOrderings[] = {
    {Role::Q1, Role::D2}, {Role::Q2, Role::D1}, {Role::D2, Role::Q1}, {Role::D1, Role::Q2}};

}  // namespace

ClassificationTrace classify(const Instance& instance, const ProofSet& proofs, const lexnet::AntonymIndex* antonyms) {
  ClassificationTrace t;
  t.instance_id = instance.id;
  for (auto role : kAllRoles) {
    const auto& p = proofs.get(role);
    if (!p) throw Error(Errc::ProofMissing, "instance " + instance.id + ": no proof for " + std::string(to_string(role)));
    t.proofs_used.emplace_back(std::string(to_string(role)), oracle::sha256_hex(p->to_json().dump()));
    for (const auto& n : p->notes) t.notes.push_back(std::string(to_string(role)) + ": " + n);
  }

  // Step 1: sentence-level buckets of the two queries
  std::optional<NegationLabel> s1;
  auto consider = [&](NegationLabel label, const std::vector<std::string>& bucket, Role role, const char* name) {
    if (bucket.empty()) return;
    t.evidence.push_back(std::string(to_string(role)) + "." + name + ": " + join(bucket));
    if (!s1 || label_index(label) < label_index(*s1)) s1 = label;
  };
  for (auto role : {Role::Q1, Role::Q2}) {
    const auto& na = proofs.get(role)->negation_analysis;
    // A bare "none" is a real cue only when the query contains it.
    std::vector<std::string> sentential;
    const auto tokens = tokenize(role == Role::Q1 ? instance.q1 : instance.q2);
    for (const auto& cue : na.sentential) {
      if (to_lower(trim(cue)) == "none" && std::find(tokens.begin(), tokens.end(), "none") == tokens.end()) {
        t.notes.push_back(std::string(to_string(role)) + ".sentential: \"none\" read as an empty bucket");
        continue;
      }
      sentential.push_back(cue);
    }
    consider(NegationLabel::Sentential, sentential, role, "sentential");
    consider(NegationLabel::Exceptor, na.exclusionary, role, "exclusionary");
    consider(NegationLabel::Affixal, na.affixal, role, "affixal");
    consider(NegationLabel::Implicit, na.implicit, role, "implicit");
  }
  if (s1) {
    t.step_fired = Step::PredicateS1;
    t.label = *s1;
    return t;
  }

  // Step 2: quantifier patterns across the pairs
  std::map<Role, logic::Formula> formulas;
  for (auto role : kAllRoles) {
    auto f = proofs.get(role)->formula();
    if (auto p = logic::intra_formula_pattern(f))
      t.notes.push_back(std::string(to_string(role)) + ": single-formula pattern " +
                        std::string(logic::to_string(*p)) + " (not used for labeling)");
    formulas.emplace(role, std::move(f));
  }
  for (auto [a, b] : kOrderings) {
    if (auto p = logic::match_pair_pattern(formulas.at(a), formulas.at(b))) {
      t.step_fired = Step::QuantifierS2;
      t.label = pattern_label(*p);
      t.pattern = PatternMatch{a, b, *p};
      t.evidence.push_back("(" + std::string(to_string(a)) + "," + std::string(to_string(b)) +
                           "): " + std::string(logic::to_string(*p)) + " " +
                           std::string(logic::to_string(logic::local_shape(formulas.at(a)))) + "/" +
                           std::string(logic::to_string(logic::local_shape(formulas.at(b)))));
      return t;
    }
  }

  // Step 3: antonyms among the tokens that differ
  if (!antonyms) {
    t.notes.push_back("antonym step skipped: no lexical index loaded");
  } else if (auto hit = find_antonyms(instance, *antonyms)) {
    t.step_fired = Step::AntonymS3;
    t.label = antonyms->antonym_subtype(hit->a, hit->b);
    std::string ev = hit->scope + ": " + hit->a + "/" + hit->b + " " +
                     std::string(lexnet::to_string(hit->check.evidence));
    if (!hit->check.bridge.empty()) ev += " via " + hit->check.bridge;
    t.evidence.push_back(std::move(ev));
    return t;
  }

  t.step_fired = Step::OtherS4;
  t.label = NegationLabel::Other;
  return t;
}

bool verify_pattern_evidence(const ClassificationTrace& trace, const ProofSet& proofs) {
  if (trace.step_fired != Step::QuantifierS2 || !trace.pattern) return false;
  const auto& a = proofs.get(trace.pattern->a);
  const auto& b = proofs.get(trace.pattern->b);
  if (!a || !b) return false;
  auto p = logic::match_pair_pattern(a->formula(), b->formula());
  return p && *p == trace.pattern->pattern && pattern_label(*p) == trace.label;
}

// ------------------------------------------------------------- proof sources

OracleProofSource::OracleProofSource(std::shared_ptr<oracle::OracleClient> client) : client_(std::move(client)) {}

LambdaProof OracleProofSource::proof(const std::string& text) {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(text); it != cache_.end()) return it->second;
  }
  auto p = client_->lambda_proof(text);
  std::lock_guard lock(mu_);
  return cache_.emplace(text, std::move(p)).first->second;
}

FixtureProofSource FixtureProofSource::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ResourceError, "cannot open proof fixtures " + path.string());
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  FixtureProofSource src;
  json whole = json::parse(data, nullptr, false);
  try {
    if (!whole.is_discarded() && whole.is_object() && !whole.contains("text")) {
      for (auto it = whole.begin(); it != whole.end(); ++it) src.add(it.key(), LambdaProof::from_json(it.value()));
      return src;
    }
    std::istringstream lines(data);
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
      ++n;
      if (trim(line).empty()) continue;
      json rec = json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.is_object() || !rec.contains("text") || !rec.contains("proof"))
        throw Error(Errc::ShapeError, path.string() + ":" + std::to_string(n) + ": expected {\"text\", \"proof\"}");
      src.add(rec["text"].get<std::string>(), LambdaProof::from_json(rec["proof"]));
    }
  } catch (const ParseError& e) {
    throw Error(Errc::ShapeError, path.string() + ": fixture formula does not parse: " + e.what());
  }
  return src;
}

void FixtureProofSource::add(std::string text, LambdaProof proof) { proofs_.insert_or_assign(std::move(text), std::move(proof)); }

LambdaProof FixtureProofSource::proof(const std::string& text) {
  auto it = proofs_.find(text);
  if (it == proofs_.end()) throw Error(Errc::ProofMissing, "no canned proof for \"" + text + "\"");
  return it->second;
}

ProofSet fetch_proofs(ProofSource& source, const Instance& in) {
  ProofSet p;
  p.q1 = source.proof(in.q1);
  p.d1 = source.proof(in.d1);
  p.q2 = source.proof(in.q2);
  p.d2 = source.proof(in.d2);
  return p;
}

// ------------------------------------------------------------------ metrics

ClassifierMetrics evaluate_classifier(const std::vector<NegationLabel>& pred, const std::vector<NegationLabel>& gold) {
  if (pred.size() != gold.size())
    throw Error(Errc::ShapeError, "pred has " + std::to_string(pred.size()) + " labels, gold has " +
                                      std::to_string(gold.size()));
  if (gold.empty()) throw Error(Errc::ShapeError, "no labels to evaluate");
  ClassifierMetrics m;
  for (std::size_t i = 0; i < gold.size(); ++i) ++m.confusion[label_index(gold[i])][label_index(pred[i])];

  std::size_t correct = 0;
  double recall_sum = 0.0, f1_sum = 0.0;
  std::size_t classes = 0;
  for (std::size_t c = 0; c < kLabelCount; ++c) {
    std::size_t tp = m.confusion[c][c], gold_n = 0, pred_n = 0;
    for (std::size_t k = 0; k < kLabelCount; ++k) {
      gold_n += m.confusion[c][k];
      pred_n += m.confusion[k][c];
    }
    correct += tp;
    if (gold_n == 0) {
      if (pred_n > 0)
        m.warnings.push_back("class '" + std::string(to_string(kAllLabels[c])) +
                             "' is predicted but has no gold instances; excluded from the means");
      continue;
    }
    double recall = static_cast<double>(tp) / static_cast<double>(gold_n);
    double f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(gold_n + pred_n);
    m.recall[c] = recall;
    m.f1[c] = f1;
    recall_sum += recall;
    f1_sum += f1;
    ++classes;
  }
  m.balanced_accuracy = recall_sum / static_cast<double>(classes);
  m.macro_f1 = f1_sum / static_cast<double>(classes);
  m.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
  return m;
}

ClassifierReport build_report(const std::vector<Instance>& instances, const std::vector<ClassificationTrace>& traces,
                              std::size_t skipped) {
  ClassifierReport r;
  r.instances = traces.size();
  r.skipped = skipped;
  std::map<std::string, const Instance*> by_id;
  for (const auto& in : instances) by_id.emplace(in.id, &in);
  std::vector<NegationLabel> pred, gold;
  for (const auto& t : traces) {
    ++r.distribution[label_index(t.label)];
    ++r.steps[t.step_fired];
    auto it = by_id.find(t.instance_id);
    if (it != by_id.end() && it->second->gold) {
      pred.push_back(t.label);
      gold.push_back(*it->second->gold);
    }
  }
  if (!gold.empty()) {
    r.metrics = evaluate_classifier(pred, gold);
    r.contrary_as_contradiction =
        r.metrics->confusion[label_index(NegationLabel::Contrary)][label_index(NegationLabel::Contradiction)];
  }
  return r;
}

ojson ClassifierReport::to_json() const {
  ojson j;
  j["instances"] = instances;
  j["skipped"] = skipped;
  ojson dist = ojson::object();
  for (auto l : kAllLabels) dist[std::string(negtax::to_string(l))] = distribution[label_index(l)];
  j["distribution"] = std::move(dist);
  ojson st = ojson::object();
  for (auto s : {Step::PredicateS1, Step::QuantifierS2, Step::AntonymS3, Step::OtherS4}) {
    auto it = steps.find(s);
    st[std::string(to_string(s))] = it == steps.end() ? 0 : it->second;
  }
  j["steps"] = std::move(st);
  if (metrics) {
    ojson m;
    m["labeled"] = [&] {
      std::size_t n = 0;
      for (const auto& row : metrics->confusion)
        for (auto v : row) n += v;
      return n;
    }();
    m["balanced_accuracy"] = metrics->balanced_accuracy;
    m["macro_f1"] = metrics->macro_f1;
    m["accuracy"] = metrics->accuracy;
    ojson per = ojson::object();
    for (auto l : kAllLabels) {
      auto c = label_index(l);
      if (!metrics->recall[c]) continue;
      per[std::string(negtax::to_string(l))] = {{"recall", *metrics->recall[c]}, {"f1", *metrics->f1[c]}};
    }
    m["per_class"] = std::move(per);
    ojson conf = ojson::object();
    for (auto g : kAllLabels) {
      ojson row = ojson::object();
      for (auto p : kAllLabels) row[std::string(negtax::to_string(p))] = metrics->confusion[label_index(g)][label_index(p)];
      conf[std::string(negtax::to_string(g))] = std::move(row);
    }
    m["confusion"] = std::move(conf);
    m["contrary_as_contradiction"] = contrary_as_contradiction.value_or(0);
    m["warnings"] = metrics->warnings;
    j["metrics"] = std::move(m);
  }
  return j;
}

namespace {
std::string fmt_fraction(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}
}  // namespace

std::string ClassifierReport::to_markdown() const {
  std::ostringstream os;
  os << "# Classification report\n\n";
  os << "Instances: " << instances << ", skipped: " << skipped << "\n\n";
  os << "| Type | Count |\n|---|---:|\n";
  for (auto l : kAllLabels) os << "| " << display_name(l) << " | " << distribution[label_index(l)] << " |\n";
  if (metrics) {
    os << "\n| Metric | Value |\n|---|---:|\n";
    os << "| Balanced accuracy | " << fmt_fraction(metrics->balanced_accuracy) << " |\n";
    os << "| Macro F1 | " << fmt_fraction(metrics->macro_f1) << " |\n";
    os << "| Accuracy | " << fmt_fraction(metrics->accuracy) << " |\n";
    os << "| Contrary predicted as contradiction | " << contrary_as_contradiction.value_or(0) << " |\n";
    os << "\nConfusion (rows gold, columns predicted):\n\n| gold \\ pred |";
    for (auto l : kAllLabels) os << ' ' << to_string(l) << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < kLabelCount; ++i) os << "---:|";
    os << '\n';
    for (auto g : kAllLabels) {
      os << "| " << to_string(g) << " |";
      for (auto p : kAllLabels) os << ' ' << metrics->confusion[label_index(g)][label_index(p)] << " |";
      os << '\n';
    }
    for (const auto& w : metrics->warnings) os << "\nWarning: " << w << '\n';
  }
  return os.str();
}

DatasetClassification classify_dataset(const std::vector<Instance>& instances, ProofSource& proofs,
                                       const lexnet::AntonymIndex* antonyms, unsigned workers) {
  struct Slot {
    std::optional<ClassificationTrace> trace;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(instances.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      {
        std::lock_guard lock(fatal_mu);
        if (fatal) return;
      }
      try {
        slots[i].trace = classify(instances[i], fetch_proofs(proofs, instances[i]), antonyms);
      } catch (const Error& e) {
        switch (e.code()) {
          case Errc::ProofMissing:
          case Errc::ProofRejected:
          case Errc::OracleError:
          case Errc::ShapeError:
          case Errc::ParseError:
            slots[i].error = std::string(errc_name(e.code())) + ": " + e.what();
            break;
          default: {
            std::lock_guard lock(fatal_mu);
            if (!fatal) fatal = std::current_exception();
            return;
          }
        }
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, instances.size()))));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (fatal) std::rethrow_exception(fatal);

  DatasetClassification out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].trace) out.traces.push_back(std::move(*slots[i].trace));
    else out.skipped.push_back({instances[i].id, slots[i].error.value_or("unknown error")});
  }
  out.report = build_report(instances, out.traces, out.skipped.size());
  return out;
}

std::optional<double> self_consistency(const std::vector<Instance>& instances, const DatasetClassification& result) {
  std::map<std::string, NegationLabel> gold;
  for (const auto& in : instances)
    if (in.gold) gold.emplace(in.id, *in.gold);
  std::size_t n = 0, agree = 0;
  for (const auto& t : result.traces) {
    auto it = gold.find(t.instance_id);
    if (it == gold.end()) continue;
    ++n;
    agree += it->second == t.label;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(agree) / static_cast<double>(n);
}

}  // namespace negtax::classifier
