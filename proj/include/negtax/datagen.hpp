#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "negtax/dataset.hpp"
#include "negtax/http.hpp"
#include "negtax/oracle.hpp"
#include "negtax/taxonomy.hpp"

namespace negtax::datagen {

enum class GenerationMode { Free, Controlled };

std::string_view to_string(GenerationMode mode);
GenerationMode generation_mode_from_string(std::string_view s);

struct GenerationJob {
  GenerationMode mode = GenerationMode::Free;
  std::vector<NegationLabel> types;
  std::size_t topics_n = 100;
  std::size_t per_topic_instances = 1;
  std::int64_t seed = 0;

  /// Throws Errc::Precondition when a type is not a taxonomy leaf with a
  /// prompt, or topics_n / per_topic_instances is zero.
  void validate() const;
};

/// Every leaf label that has a generation prompt (all but Other).
std::vector<NegationLabel> default_generation_types();

struct TopicList {
  std::vector<std::string> topics;
  std::size_t shortfall = 0;
  std::size_t rounds = 0;
};

/// Asks for n distinct topics. Duplicates are re-requested for up to 3
/// further rounds; whatever is still missing is reported as shortfall.
TopicList generate_topics(oracle::OracleClient& oracle, std::size_t n);

// -------------------------------------------------------------- grounding

/// Plain HTTP GET, swappable in tests.
class HttpGetter {
 public:
  virtual ~HttpGetter() = default;
  virtual http::Response get(const std::string& url) = 0;
};

class DefaultHttpGetter final : public HttpGetter {
 public:
  explicit DefaultHttpGetter(std::chrono::seconds timeout = std::chrono::seconds(30)) : timeout_(timeout) {}
  http::Response get(const std::string& url) override;

 private:
  std::chrono::seconds timeout_;
};

inline constexpr std::string_view kDefaultWikiEndpoint = "https://en.wikipedia.org/w/api.php";

struct PageInfo {
  std::string title;
  bool exists = false;
  /// Plain-text page content; empty when the page does not exist.
  std::string extract;
};

/// Exact-title lookups against the wiki query API with the same
/// live/record/replay modes as the oracle. Cached responses live in the
/// oracle transcript store keyed on {"kind":"get","url":...}.
class WikiClient {
 public:
  WikiClient(std::string endpoint, oracle::TransportMode mode, oracle::TranscriptStore* store,
             std::shared_ptr<HttpGetter> getter, std::shared_ptr<oracle::Clock> clock = std::make_shared<oracle::SystemClock>(),
             int max_retries = 3, std::chrono::milliseconds backoff = std::chrono::milliseconds(1000));

  /// Throws Errc::GroundingError once all retries fail, ReplayMiss when a
  /// replayed lookup is not cached.
  PageInfo lookup(const std::string& title);

  std::string query_url(const std::string& title) const;

 private:
  std::string fetch(const std::string& url);

  std::string endpoint_;
  oracle::TransportMode mode_;
  oracle::TranscriptStore* store_;
  std::shared_ptr<HttpGetter> getter_;
  std::shared_ptr<oracle::Clock> clock_;
  int max_retries_;
  std::chrono::milliseconds backoff_;
};

/// Parses a query API response (formatversion 1 or 2).
PageInfo parse_page_response(const std::string& body, const std::string& requested_title);

/// Asks the oracle for a page title on the topic and checks that it
/// exists; a missing page gets one re-ask. Returns nullopt when the topic
/// should be dropped.
std::optional<PageInfo> ground_page(oracle::OracleClient& oracle, WikiClient& wiki, const std::string& topic);

// ------------------------------------------------------------- instances

/// Generates one instance of `label` from a grounded page. Variant k > 0
/// asks for a different query than earlier variants of the same page.
/// Throws Errc::GenerationRejected when the output never fits its schema
/// or yields an invalid instance.
Instance generate_instance(oracle::OracleClient& oracle, const PageInfo& page, NegationLabel label,
                           GenerationMode mode, std::string id, std::size_t variant = 0);

/// Judges (q1, d1) and (q2, d2); true only when both are relevant.
bool verify_relevance(oracle::OracleClient& oracle, const Instance& instance);

// ---------------------------------------------------------------- stats

struct DatasetStats {
  std::size_t size = 0;
  double mean_len_q1 = 0, mean_len_q2 = 0, mean_len_d1 = 0, mean_len_d2 = 0;
  std::map<NegationLabel, std::size_t> per_type;
  std::size_t untyped = 0;

  nlohmann::ordered_json to_json() const;
};

/// Throws Errc::EmptyDataset for an empty dataset.
DatasetStats dataset_stats(const std::vector<Instance>& instances);

// ------------------------------------------------------------- pipeline

struct GenerationEvent {
  std::string topic;
  std::string stage;  // grounding, generation, relevance
  std::string message;
};

struct GenerationResult {
  std::vector<Instance> instances;
  TopicList topics;
  std::vector<std::string> dropped_topics;
  std::size_t generated = 0;
  std::size_t rejected = 0;
  std::size_t filtered = 0;
  std::vector<GenerationEvent> events;

  nlohmann::ordered_json summary() const;
};

/// Topics, grounding, per-type generation and relevance filtering. Topics
/// are processed by `workers` threads; output order and ids depend only on
/// topic order, so replayed runs are byte-identical.
GenerationResult run_generation(const GenerationJob& job, oracle::OracleClient& oracle, WikiClient& wiki,
                                unsigned workers = 1);

}  // namespace negtax::datagen
