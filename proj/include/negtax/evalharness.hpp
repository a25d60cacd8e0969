#pragma once

#include <array>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "negtax/dataset.hpp"
#include "negtax/taxonomy.hpp"

namespace negtax::eval {

struct ScorePair {
  std::string query_id;
  std::string doc_id;
  std::string query;
  std::string doc;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  /// One score per pair, in request order.
  virtual std::vector<double> score(const std::vector<ScorePair>& batch) = 0;
};

// ------------------------------------------------------------------ BM25

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  /// Throws Errc::Precondition unless k1 > 0 and 0 <= b <= 1.
  void validate() const;
};

class Bm25Index {
 public:
  explicit Bm25Index(Bm25Params params = {});

  /// Adds or replaces a document.
  void add(const std::string& doc_id, std::string_view text);

  double idf(const std::string& term) const;
  /// Okapi BM25 summed over query tokens (repeats count). Throws
  /// Errc::NotIndexed for an unknown doc id.
  double score(std::string_view query, const std::string& doc_id) const;

  std::size_t size() const { return docs_.size(); }
  double average_length() const;

 private:
  struct Doc {
    std::map<std::string, std::size_t> tf;
    std::size_t length = 0;
  };
  Bm25Params params_;
  std::map<std::string, Doc> docs_;
  std::map<std::string, std::size_t> df_;
  std::size_t total_length_ = 0;
};

/// BM25 over a fixed document pool; pairs must reference pooled doc ids.
class Bm25Scorer final : public Scorer {
 public:
  explicit Bm25Scorer(Bm25Index index) : index_(std::move(index)) {}
  std::string name() const override { return "bm25"; }
  std::vector<double> score(const std::vector<ScorePair>& batch) override;
  const Bm25Index& index() const { return index_; }

 private:
  Bm25Index index_;
};

/// Pool of every d1 and d2 in the dataset, keyed by the ids pairwise
/// evaluation uses.
Bm25Index build_pool(const std::vector<Instance>& instances, Bm25Params params = {});

std::string query_id(const Instance& in, int which);  // which: 1 or 2
std::string doc_id(const Instance& in, int which);

// ------------------------------------------------------------- bridges

inline constexpr int kProtocolVersion = 1;

/// Line-delimited JSON bridge over a child process's stdin/stdout.
class SubprocessScorer final : public Scorer {
 public:
  /// Starts the process and performs the hello handshake. Throws
  /// BridgeProtocolError for a bad reply, Errc::BridgeTimeout when the
  /// reply does not arrive in time, Errc::TransportError when the process
  /// cannot be started or exits.
  SubprocessScorer(std::vector<std::string> argv, std::chrono::seconds timeout = std::chrono::seconds(120));
  ~SubprocessScorer() override;
  SubprocessScorer(const SubprocessScorer&) = delete;
  SubprocessScorer& operator=(const SubprocessScorer&) = delete;

  std::string name() const override { return name_; }
  std::vector<double> score(const std::vector<ScorePair>& batch) override;

 private:
  void send_line(const std::string& line);
  std::string read_line();
  void shutdown();

  std::vector<std::string> argv_;
  std::chrono::seconds timeout_;
  std::string name_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// Same protocol, each message POSTed to <base>/score.
class HttpScorer final : public Scorer {
 public:
  HttpScorer(std::string base_url, std::chrono::seconds timeout = std::chrono::seconds(120));
  std::string name() const override { return name_; }
  std::vector<double> score(const std::vector<ScorePair>& batch) override;

 private:
  std::string post(const std::string& body);
  std::string url_;
  std::chrono::seconds timeout_;
  std::string name_;
};

/// Validates a hello reply line and returns the bridge name.
std::string parse_hello(const std::string& line);

/// Validates a scores reply against the request batch and returns scores in
/// request order, matching replies by (qid, did).
std::vector<double> parse_scores(const std::string& line, const std::vector<ScorePair>& batch);

nlohmann::json score_request(const std::vector<ScorePair>& batch);

/// Splits "cmd:a b 'c d'" style argument strings with shell-like quoting.
std::vector<std::string> split_command(std::string_view command);

// ------------------------------------------------------------ evaluation

struct InstanceResult {
  std::string id;
  std::optional<NegationLabel> type;
  bool correct = false;
  bool tie = false;
  /// s(q1,d1), s(q1,d2), s(q2,d1), s(q2,d2)
  std::array<double, 4> scores{};
  std::optional<std::string> error;
};

struct TypeResult {
  std::size_t n = 0;
  std::size_t correct = 0;
  double pairwise_acc() const { return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0; }
};

struct EvalReport {
  std::string scorer;
  std::size_t instances = 0;
  std::size_t errored = 0;
  std::size_t ties = 0;
  std::size_t correct = 0;
  double overall_pairwise_acc = 0.0;
  std::map<NegationLabel, TypeResult> per_type;
  std::vector<InstanceResult> per_instance;

  nlohmann::ordered_json to_json() const;
  /// Inverse of to_json for the summary fields; per_instance is restored
  /// when present.
  static EvalReport from_json(const nlohmann::json& j);
};

/// True when s(q1,d1) > s(q1,d2) and s(q2,d2) > s(q2,d1).
bool pairwise_correct(const std::array<double, 4>& scores);

struct EvalOptions {
  std::size_t batch_size = 64;  // pairs per scorer call
};

/// Scores all four pairs of every instance. A failing scorer batch marks
/// its instances errored; BridgeProtocolError propagates.
EvalReport pairwise_accuracy(const std::vector<Instance>& instances, Scorer& scorer, const EvalOptions& options = {});

/// Rows are scorers, columns are All plus the taxonomy types in order.
std::string render_markdown(const std::vector<EvalReport>& reports);

/// Mean reciprocal rank of the first relevant doc within the top k.
/// Throws Errc::MissingQrels when a ranked query has no qrels entry.
double mrr_at_k(const std::map<std::string, std::vector<std::string>>& rankings,
                const std::map<std::string, std::set<std::string>>& qrels, std::size_t k = 10);

}  // namespace negtax::eval
