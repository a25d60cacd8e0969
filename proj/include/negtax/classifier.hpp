#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "negtax/dataset.hpp"
#include "negtax/lexnet.hpp"
#include "negtax/logic.hpp"
#include "negtax/oracle.hpp"
#include "negtax/taxonomy.hpp"

namespace negtax::classifier {

using oracle::LambdaProof;

enum class Step { PredicateS1, QuantifierS2, AntonymS3, OtherS4 };

std::string_view to_string(Step step);
Step step_from_string(std::string_view s);

enum class Role { Q1, D1, Q2, D2 };

std::string_view to_string(Role role);

/// Proofs of the four texts of one instance.
struct ProofSet {
  std::optional<LambdaProof> q1, d1, q2, d2;

  const std::optional<LambdaProof>& get(Role role) const;
};

/// Which ordered pair fired Step 2 and with what pattern.
struct PatternMatch {
  Role a;
  Role b;
  logic::PairPattern pattern;
};

struct ClassificationTrace {
  std::string instance_id;
  Step step_fired = Step::OtherS4;
  NegationLabel label = NegationLabel::Other;
  std::vector<std::string> evidence;
  /// role -> sha256 of the proof's canonical JSON
  std::vector<std::pair<std::string, std::string>> proofs_used;
  std::optional<PatternMatch> pattern;
  /// Disagreements and single-formula quantifier notes; never change the label.
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const;
};

/// Runs the four-step cascade. `antonyms` may be null, which skips Step 3
/// (recorded in notes). Throws Errc::ProofMissing when any of the four
/// proofs is absent.
ClassificationTrace classify(const Instance& instance, const ProofSet& proofs,
                             const lexnet::AntonymIndex* antonyms);

/// Re-checks a Step 2 trace against the proofs it came from.
bool verify_pattern_evidence(const ClassificationTrace& trace, const ProofSet& proofs);

/// Token positions that differ between two texts, grouped into hunks.
struct DiffHunk {
  std::vector<std::string> left;
  std::vector<std::string> right;
};

/// LCS diff of the token sequences of `a` and `b`.
std::vector<DiffHunk> token_diff(std::string_view a, std::string_view b);

/// Candidate (left, right) lemma pairs for the antonym check: the cross
/// product within each hunk, plus underscore-joined bigrams.
std::vector<std::pair<std::string, std::string>> antonym_candidates(const std::vector<DiffHunk>& hunks);

// ------------------------------------------------------------- proof sources

class ProofSource {
 public:
  virtual ~ProofSource() = default;
  /// Throws Errc::ProofMissing (or oracle errors) when no proof can be had.
  virtual LambdaProof proof(const std::string& text) = 0;
};

/// Asks the oracle once per distinct text.
class OracleProofSource final : public ProofSource {
 public:
  explicit OracleProofSource(std::shared_ptr<oracle::OracleClient> client);
  LambdaProof proof(const std::string& text) override;

 private:
  std::shared_ptr<oracle::OracleClient> client_;
  std::mutex mu_;
  std::map<std::string, LambdaProof> cache_;
};

/// Canned proofs keyed by exact text. The file is either a JSON object
/// {text: proof} or JSONL lines {"text": ..., "proof": {...}}.
class FixtureProofSource final : public ProofSource {
 public:
  FixtureProofSource() = default;
  static FixtureProofSource load(const std::filesystem::path& path);
  void add(std::string text, LambdaProof proof);
  LambdaProof proof(const std::string& text) override;
  std::size_t size() const { return proofs_.size(); }

 private:
  std::map<std::string, LambdaProof> proofs_;
};

ProofSet fetch_proofs(ProofSource& source, const Instance& instance);

// ------------------------------------------------------------------ metrics

struct ClassifierMetrics {
  /// Over classes with at least one gold instance.
  double balanced_accuracy = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  /// confusion[gold][pred], indexed by label_index.
  std::array<std::array<std::size_t, kLabelCount>, kLabelCount> confusion{};
  std::array<std::optional<double>, kLabelCount> recall{};
  std::array<std::optional<double>, kLabelCount> f1{};
  std::vector<std::string> warnings;
};

/// Throws Errc::ShapeError on length mismatch or empty input.
ClassifierMetrics evaluate_classifier(const std::vector<NegationLabel>& pred, const std::vector<NegationLabel>& gold);

struct ClassifierReport {
  std::size_t instances = 0;
  std::size_t skipped = 0;
  std::array<std::size_t, kLabelCount> distribution{};
  std::map<Step, std::size_t> steps;
  std::optional<ClassifierMetrics> metrics;
  /// Only when gold labels are present: count of gold=contrary, pred=contradiction.
  std::optional<std::size_t> contrary_as_contradiction;

  nlohmann::ordered_json to_json() const;
  std::string to_markdown() const;
};

struct SkippedInstance {
  std::string id;
  std::string error;
};

struct DatasetClassification {
  /// One entry per classified instance, in input order.
  std::vector<ClassificationTrace> traces;
  std::vector<SkippedInstance> skipped;
  ClassifierReport report;
};

/// Classifies every instance with a bounded worker pool. Proof failures
/// skip the instance; transport failures propagate.
DatasetClassification classify_dataset(const std::vector<Instance>& instances, ProofSource& proofs,
                                       const lexnet::AntonymIndex* antonyms, unsigned workers = 1);

/// Fraction of instances whose predicted label equals their gold label,
/// over instances that carry a gold label and were classified.
std::optional<double> self_consistency(const std::vector<Instance>& instances, const DatasetClassification& result);

ClassifierReport build_report(const std::vector<Instance>& instances, const std::vector<ClassificationTrace>& traces,
                              std::size_t skipped);

}  // namespace negtax::classifier
