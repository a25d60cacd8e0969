#include "negtax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "negtax/error.hpp"

namespace negtax::oracle {

// ------------------------------------------------------------------ time

Clock::time_point SystemClock::now() { return std::chrono::steady_clock::now(); }

void SystemClock::sleep_for(duration d) { std::this_thread::sleep_for(d); }

Clock::time_point ManualClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::sleep_for(duration d) {
  std::lock_guard lock(mu_);
  sleeps_.push_back(d);
  now_ += d;
}

void ManualClock::advance(duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

std::vector<Clock::duration> ManualClock::sleeps() const {
  std::lock_guard lock(mu_);
  return sleeps_;
}

RateLimiter::RateLimiter(unsigned per_minute, std::shared_ptr<Clock> clock)
    : per_minute_(per_minute), clock_(std::move(clock)) {}

void RateLimiter::acquire() {
  if (per_minute_ == 0) return;
  constexpr auto kWindow = std::chrono::minutes(1);
  std::lock_guard lock(mu_);
  for (;;) {
    auto now = clock_->now();
    while (!window_.empty() && now - window_.front() >= kWindow) window_.pop_front();
    if (window_.size() < per_minute_) {
      window_.push_back(now);
      return;
    }
    clock_->sleep_for(window_.front() + kWindow - now);
  }
}

// ------------------------------------------------------------- transport

json ChatRequest::to_json() const {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  json body{{"model", model},
            {"temperature", temperature},
            {"messages", std::move(msgs)},
            {"response_format", {{"type", "json_object"}}}};
  if (seed) body["seed"] = *seed;
  return body;
}

std::string extract_content(std::string_view response_body) {
  json body = json::parse(response_body, nullptr, false);
  if (body.is_discarded() || !body.is_object())
    throw Error(Errc::TransportError, "response body is not a JSON object");
  if (body.contains("error"))
    throw Error(Errc::TransportError, "endpoint returned error: " + body["error"].dump());
  const auto* choices = body.contains("choices") ? &body["choices"] : nullptr;
  if (!choices || !choices->is_array() || choices->empty())
    throw Error(Errc::TransportError, "response has no choices");
  const auto& msg = (*choices)[0].value("message", json::object());
  if (!msg.contains("content") || !msg["content"].is_string())
    throw Error(Errc::TransportError, "response choice has no string content");
  return msg["content"].get<std::string>();
}

std::string make_chat_response(std::string_view content) {
  json body{{"object", "chat.completion"},
            {"choices",
             json::array({{{"index", 0},
                           {"message", {{"role", "assistant"}, {"content", std::string(content)}}},
                           {"finish_reason", "stop"}}})}};
  return body.dump();
}

namespace {

std::string_view strip_fences(std::string_view s) {
  auto open = s.find("```");
  if (open == std::string_view::npos) return s;
  auto eol = s.find('\n', open);
  if (eol == std::string_view::npos) return s;
  auto close = s.find("```", eol);
  if (close == std::string_view::npos) return s.substr(eol + 1);
  return s.substr(eol + 1, close - eol - 1);
}

}  // namespace

std::optional<json> parse_json_lenient(std::string_view text) {
  for (auto candidate : {text, strip_fences(text)}) {
    json v = json::parse(candidate, nullptr, false);
    if (!v.is_discarded()) return v;
    // outermost object or array inside surrounding prose
    for (auto [open, close] : {std::pair{'{', '}'}, std::pair{'[', ']'}}) {
      auto a = candidate.find(open);
      auto b = candidate.rfind(close);
      if (a == std::string_view::npos || b == std::string_view::npos || b <= a) continue;
      json inner = json::parse(candidate.substr(a, b - a + 1), nullptr, false);
      if (!inner.is_discarded()) return inner;
    }
  }
  return std::nullopt;
}

// ----------------------------------------------------------- transcripts

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::ResourceError, "sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

TranscriptStore::TranscriptStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string TranscriptStore::hash_request(const json& request) {
  // json objects are key-sorted, so dump() is canonical
  return sha256_hex(request.dump());
}

std::optional<OracleTranscript> TranscriptStore::get(const std::string& request_hash) const {
  auto path = dir_ / (request_hash + ".json");
  std::lock_guard lock(mu_);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("response") || !j["response"].is_string())
    throw Error(Errc::ResourceError, "corrupt transcript " + path.string());
  OracleTranscript t;
  t.request_hash = j.value("request_hash", request_hash);
  t.request = j.value("request", json());
  t.response = j["response"].get<std::string>();
  t.timestamp = j.value("timestamp", "");
  return t;
}

bool TranscriptStore::put(const OracleTranscript& transcript) {
  auto path = dir_ / (transcript.request_hash + ".json");
  std::lock_guard lock(mu_);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) return false;
  std::filesystem::create_directories(dir_, ec);
  json j{{"request_hash", transcript.request_hash},
         {"request", transcript.request},
         {"response", transcript.response},
         {"timestamp", transcript.timestamp}};
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::ResourceError, "cannot write " + tmp.string());
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::ResourceError, "cannot store transcript: " + ec.message());
  return true;
}

std::string_view to_string(TransportMode mode) {
  switch (mode) {
    case TransportMode::Live: return "live";
    case TransportMode::Record: return "record";
    case TransportMode::Replay: return "replay";
  }
  return "?";
}

TransportMode transport_mode_from_string(std::string_view s) {
  if (s == "live") return TransportMode::Live;
  if (s == "record") return TransportMode::Record;
  if (s == "replay") return TransportMode::Replay;
  throw Error(Errc::Usage, "unknown transport mode '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- schemas

void SchemaRegistry::add(std::string id, SchemaValidator validator) {
  validators_[std::move(id)] = std::move(validator);
}

bool SchemaRegistry::has(std::string_view id) const { return validators_.find(id) != validators_.end(); }

std::optional<std::string> SchemaRegistry::validate(std::string_view id, const json& value) const {
  auto it = validators_.find(id);
  if (it == validators_.end()) throw Error(Errc::Usage, "unknown schema '" + std::string(id) + "'");
  return it->second(value);
}

namespace {

std::optional<std::string> require_strings(const json& v, std::initializer_list<const char*> keys) {
  if (!v.is_object()) return "expected a JSON object";
  for (const char* k : keys) {
    if (!v.contains(k)) return std::string("missing key '") + k + "'";
    const auto& s = v[k];
    if (!s.is_string() || s.get<std::string>().find_first_not_of(" \t\r\n") == std::string::npos)
      return std::string("key '") + k + "' must be a nonempty string";
  }
  return std::nullopt;
}

std::optional<std::string> require_string_list(const json& v, const char* key, std::size_t n) {
  if (!v.is_object() || !v.contains(key) || !v[key].is_array())
    return std::string("missing array '") + key + "'";
  const auto& a = v[key];
  if (n && a.size() != n) return std::string("array '") + key + "' must have " + std::to_string(n) + " items";
  if (a.empty()) return std::string("array '") + key + "' is empty";
  for (const auto& s : a)
    if (!s.is_string() || s.get<std::string>().empty())
      return std::string("array '") + key + "' must hold nonempty strings";
  return std::nullopt;
}

SchemaRegistry make_builtin() {
  SchemaRegistry r;
  r.add("lambda_proof", [](const json& v) -> std::optional<std::string> {
    try {
      (void)LambdaProof::from_json(v);
    } catch (const negtax::ParseError& e) {
      return std::string("final_formula: ") + e.what();
    } catch (const Error& e) {
      return e.what();
    }
    return std::nullopt;
  });
  r.add("topics", [](const json& v) { return require_string_list(v, "topics", 0); });
  r.add("page_title", [](const json& v) { return require_strings(v, {"title"}); });
  r.add("negation_pair", [](const json& v) {
    return require_strings(v, {"query", "passage", "positive_query", "positive_passage"});
  });
  r.add("contrasting_pair", [](const json& v) {
    return require_strings(v, {"word1", "word2", "query", "passage", "positive_query", "positive_passage"});
  });
  r.add("quantifier_set", [](const json& v) -> std::optional<std::string> {
    if (auto e = require_string_list(v, "queries", 4)) return e;
    return require_string_list(v, "passages", 4);
  });
  r.add("answer", [](const json& v) { return require_strings(v, {"passage"}); });
  r.add("relevance", [](const json& v) -> std::optional<std::string> {
    if (!v.is_object() || !v.contains("relevant")) return "missing key 'relevant'";
    const auto& r = v["relevant"];
    if (r.is_boolean()) return std::nullopt;
    if (r.is_string()) {
      auto s = r.get<std::string>();
      if (s == "yes" || s == "no" || s == "true" || s == "false") return std::nullopt;
    }
    return "key 'relevant' must be a boolean";
  });
  return r;
}

}  // namespace

const SchemaRegistry& SchemaRegistry::builtin() {
  static const SchemaRegistry registry = make_builtin();
  return registry;
}

// ---------------------------------------------------------------- client

std::string utc_timestamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

OracleClient::OracleClient(OracleConfig config, std::shared_ptr<ChatTransport> transport,
                           std::shared_ptr<Clock> clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      limiter_(config_.rate_limit_per_minute, clock_),
      inflight_(std::clamp<std::ptrdiff_t>(config_.max_concurrency, 1, 1024)) {
  if (config_.mode != TransportMode::Live) {
    if (config_.transcript_dir.empty())
      throw Error(Errc::Usage, std::string(to_string(config_.mode)) + " mode needs a transcript directory");
    if (config_.mode == TransportMode::Replay && !std::filesystem::is_directory(config_.transcript_dir))
      throw Error(Errc::ResourceError, "transcript directory not found: " + config_.transcript_dir.string());
    store_ = std::make_unique<TranscriptStore>(config_.transcript_dir);
  }
  if (config_.mode != TransportMode::Replay && !transport_)
    throw Error(Errc::Usage, "live and record modes need a transport");
}

CallParams OracleClient::classification_params() const {
  return {config_.model, config_.classification_temperature, config_.max_retries};
}

CallParams OracleClient::generation_params() const {
  return {config_.model, config_.generation_temperature, config_.max_retries};
}

std::size_t OracleClient::live_requests() const {
  std::lock_guard lock(stats_mu_);
  return live_requests_;
}

std::string OracleClient::fetch(const ChatRequest& request) {
  json req = request.to_json();
  std::string hash = TranscriptStore::hash_request(req);
  if (config_.mode == TransportMode::Replay) {
    auto t = store_->get(hash);
    if (!t) throw ReplayMiss(hash);
    return t->response;
  }
  if (config_.mode == TransportMode::Record) {
    // a stored response wins so that re-recording is idempotent
    if (auto t = store_->get(hash)) return t->response;
  }
  limiter_.acquire();
  inflight_.acquire();
  std::string body;
  try {
    body = transport_->send(request);
  } catch (...) {
    inflight_.release();
    throw;
  }
  inflight_.release();
  {
    std::lock_guard lock(stats_mu_);
    ++live_requests_;
  }
  if (config_.mode == TransportMode::Record) {
    // only keep responses that at least look like chat completions
    try {
      (void)extract_content(body);
      store_->put({hash, req, body, utc_timestamp()});
    } catch (const Error&) {
    }
  }
  return body;
}

json OracleClient::complete_json(const Prompt& prompt, std::string_view schema_id, const CallParams& params) {
  const auto& schemas = SchemaRegistry::builtin();
  if (!schemas.has(schema_id)) throw Error(Errc::Usage, "unknown schema '" + std::string(schema_id) + "'");

  std::string last_raw;
  std::string reason;
  bool transport_failed = false;
  const int attempts = 1 + std::max(0, params.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && config_.mode != TransportMode::Replay) {
      double ms = static_cast<double>(config_.backoff_base.count()) *
                  std::pow(config_.backoff_factor, attempt - 1);
      clock_->sleep_for(std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double, std::milli>(ms)));
    }
    ChatRequest req;
    req.model = params.model;
    req.temperature = params.temperature;
    req.seed = config_.seed;
    if (!prompt.system.empty()) req.messages.push_back({"system", prompt.system});
    std::string user = prompt.user;
    if (attempt > 0) user += "\n\n" + std::string(kJsonReminder);
    req.messages.push_back({"user", std::move(user)});

    std::string content;
    try {
      content = extract_content(fetch(req));
    } catch (const ReplayMiss&) {
      throw;
    } catch (const Error& e) {
      if (e.code() != Errc::TransportError) throw;
      transport_failed = true;
      reason = e.what();
      continue;
    }
    transport_failed = false;
    last_raw = content;
    auto value = parse_json_lenient(content);
    if (!value) {
      reason = "output is not JSON";
      continue;
    }
    auto err = schemas.validate(schema_id, *value);
    if (!err) return *value;
    reason = *err;
  }
  if (transport_failed) throw Error(Errc::TransportError, "oracle endpoint failed: " + reason);
  throw OracleError("oracle output rejected after " + std::to_string(attempts) + " attempts (" +
                        std::string(schema_id) + "): " + reason,
                    last_raw, reason);
}

}  // namespace negtax::oracle
