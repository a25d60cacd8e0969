#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "negtax/logic.hpp"

namespace negtax::oracle {

using json = nlohmann::json;

// ------------------------------------------------------------------ time

class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  using duration = std::chrono::steady_clock::duration;

  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_for(duration d) = 0;
};

class SystemClock final : public Clock {
 public:
  time_point now() override;
  void sleep_for(duration d) override;
};

/// Deterministic clock for tests: sleeping advances time instantly.
class ManualClock final : public Clock {
 public:
  time_point now() override;
  void sleep_for(duration d) override;
  void advance(duration d);
  /// Every sleep requested so far, in order.
  std::vector<duration> sleeps() const;

 private:
  mutable std::mutex mu_;
  time_point now_{};
  std::vector<duration> sleeps_;
};

/// Sliding one-minute window; acquire() blocks (via the clock) until a
/// request fits. A limit of 0 disables limiting.
class RateLimiter {
 public:
  RateLimiter(unsigned per_minute, std::shared_ptr<Clock> clock);
  void acquire();

 private:
  unsigned per_minute_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::deque<Clock::time_point> window_;
};

// ------------------------------------------------------------- transport

struct ChatMessage {
  std::string role;
  std::string content;
};

struct Prompt {
  std::string system;
  std::string user;
};

struct ChatRequest {
  std::string model;
  double temperature = 0.0;
  std::optional<std::int64_t> seed;
  std::vector<ChatMessage> messages;

  /// Chat-completions request body; also the content hashed for replay.
  json to_json() const;
};

/// Sends a chat-completions request and returns the raw response body.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string send(const ChatRequest& request) = 0;
};

/// Pulls choices[0].message.content out of a chat-completions response.
std::string extract_content(std::string_view response_body);

/// Wraps assistant content in a minimal chat-completions response body.
std::string make_chat_response(std::string_view content);

/// Lenient JSON extraction from model output: strips code fences and
/// surrounding prose. Returns nullopt when no JSON value can be read.
std::optional<json> parse_json_lenient(std::string_view text);

// ----------------------------------------------------------- transcripts

std::string sha256_hex(std::string_view data);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

struct OracleTranscript {
  std::string request_hash;
  json request;
  std::string response;
  std::string timestamp;
};

/// Content-addressed directory of `<request_hash>.json` files. Existing
/// entries are never rewritten.
class TranscriptStore {
 public:
  explicit TranscriptStore(std::filesystem::path dir);

  static std::string hash_request(const json& request);

  std::optional<OracleTranscript> get(const std::string& request_hash) const;
  /// Returns false (and leaves the file alone) when the hash is already stored.
  bool put(const OracleTranscript& transcript);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

enum class TransportMode { Live, Record, Replay };

std::string_view to_string(TransportMode mode);
TransportMode transport_mode_from_string(std::string_view s);

// ---------------------------------------------------------------- schemas

/// Returns an error description, or nullopt when the value is acceptable.
using SchemaValidator = std::function<std::optional<std::string>(const json&)>;

class SchemaRegistry {
 public:
  /// Registry preloaded with the schemas used by classification and generation.
  static const SchemaRegistry& builtin();

  void add(std::string id, SchemaValidator validator);
  std::optional<std::string> validate(std::string_view id, const json& value) const;
  bool has(std::string_view id) const;

 private:
  std::map<std::string, SchemaValidator, std::less<>> validators_;
};

// ---------------------------------------------------------------- proofs

struct LexiconEntry {
  std::string symbol;
  std::string lambda_term;
  std::string type_tag;
};

struct NegationAnalysis {
  std::vector<std::string> sentential;
  std::vector<std::string> exclusionary;
  std::vector<std::string> affixal;
  std::vector<std::string> implicit;

  bool empty() const {
    return sentential.empty() && exclusionary.empty() && affixal.empty() && implicit.empty();
  }
};

/// Structured typed lambda-calculus analysis of one text.
struct LambdaProof {
  std::vector<LexiconEntry> lexicon;
  std::vector<std::string> predicates;
  std::vector<logic::Quantifier> quantifiers;
  NegationAnalysis negation_analysis;
  std::string final_formula;
  /// Disagreements between the negation buckets and the inventory.
  std::vector<std::string> notes;

  /// Accepts the key spellings models produce ("LEXICON", "Negation
  /// Analysis", nested "semantic_inventory", ...). Throws Errc::ShapeError
  /// for missing pieces and ParseError when final_formula does not parse.
  static LambdaProof from_json(const json& value);
  json to_json() const;
  logic::Formula formula() const;
};

// ---------------------------------------------------------------- client

struct OracleConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  double classification_temperature = 0.0;
  double generation_temperature = 0.7;
  unsigned rate_limit_per_minute = 0;
  unsigned max_concurrency = 4;
  TransportMode mode = TransportMode::Replay;
  std::filesystem::path transcript_dir;
  std::optional<std::int64_t> seed;
  std::chrono::milliseconds backoff_base{1000};
  double backoff_factor = 2.0;
  int max_retries = 2;
};

struct CallParams {
  std::string model;
  double temperature = 0.0;
  int max_retries = 2;
};

inline constexpr std::string_view kJsonReminder = "Respond in JSON format.";

/// LLM client with record/replay. Shareable across threads.
class OracleClient {
 public:
  /// `transport` may be null in replay mode.
  OracleClient(OracleConfig config, std::shared_ptr<ChatTransport> transport,
               std::shared_ptr<Clock> clock = std::make_shared<SystemClock>());

  /// Sends the prompt and returns JSON accepted by the schema. Malformed
  /// output is retried up to max_retries times with exponential backoff,
  /// each retry appending a JSON reminder to the user message.
  /// Throws OracleError when retries run out, ReplayMiss on a replay
  /// cache miss, Errc::TransportError when the endpoint keeps failing.
  json complete_json(const Prompt& prompt, std::string_view schema_id, const CallParams& params);

  /// Typed lambda-calculus proof of a query or passage.
  /// Throws Errc::Precondition for empty text, Errc::ProofRejected when the
  /// final formula never parses.
  LambdaProof lambda_proof(std::string_view text);

  CallParams classification_params() const;
  CallParams generation_params() const;
  const OracleConfig& config() const { return config_; }
  TranscriptStore* store() { return store_.get(); }

  /// Number of requests sent over the transport (replay hits excluded).
  std::size_t live_requests() const;

 private:
  std::string fetch(const ChatRequest& request);

  OracleConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::shared_ptr<Clock> clock_;
  std::unique_ptr<TranscriptStore> store_;
  RateLimiter limiter_;
  std::counting_semaphore<1024> inflight_;
  mutable std::mutex stats_mu_;
  std::size_t live_requests_ = 0;
};

}  // namespace negtax::oracle
