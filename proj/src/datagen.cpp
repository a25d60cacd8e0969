#include "negtax/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "negtax/error.hpp"
#include "negtax/prompts.hpp"
#include "negtax/text.hpp"

namespace negtax::datagen {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxTopicRerequests = 3;
constexpr std::size_t kMaxDocumentBytes = 12000;

bool is_quantifier(NegationLabel l) {
  return l == NegationLabel::Contradiction || l == NegationLabel::Contrary || l == NegationLabel::Subcontradiction;
}

std::string truncate_utf8(const std::string& s, std::size_t max_bytes) {
  if (s.size() <= max_bytes) return s;
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return s.substr(0, cut);
}

std::string field(const json& j, const char* key) { return trim(j.at(key).get<std::string>()); }

}  // namespace

std::string_view to_string(GenerationMode mode) { return mode == GenerationMode::Free ? "free" : "controlled"; }

GenerationMode generation_mode_from_string(std::string_view s) {
  auto l = to_lower(s);
  if (l == "free") return GenerationMode::Free;
  if (l == "controlled") return GenerationMode::Controlled;
  throw Error(Errc::Usage, "unknown generation mode '" + std::string(s) + "' (expected free or controlled)");
}

void GenerationJob::validate() const {
  if (topics_n == 0) throw Error(Errc::Precondition, "topics_n must be at least 1");
  if (per_topic_instances == 0) throw Error(Errc::Precondition, "per_topic_instances must be at least 1");
  if (types.empty()) throw Error(Errc::Precondition, "no negation types requested");
  for (auto t : types)
    if (t == NegationLabel::Other)
      throw Error(Errc::Precondition, "type 'other' is not a taxonomy leaf and has no generation prompt");
}

std::vector<NegationLabel> default_generation_types() { return {kTaxonomyLeaves.begin(), kTaxonomyLeaves.end()}; }

TopicList generate_topics(oracle::OracleClient& oracle, std::size_t n) {
  if (n == 0) throw Error(Errc::Precondition, "topic count must be at least 1");
  TopicList out;
  std::set<std::string> seen;
  for (std::size_t round = 0; round <= kMaxTopicRerequests && out.topics.size() < n; ++round) {
    std::string avoid;
    for (const auto& t : out.topics) avoid += (avoid.empty() ? "" : ", ") + t;
    auto reply = oracle.complete_json(prompts::topics(n - out.topics.size(), avoid), "topics", oracle.generation_params());
    ++out.rounds;
    for (const auto& v : reply.at("topics")) {
      auto topic = trim(v.get<std::string>());
      if (topic.empty() || !seen.insert(to_lower(topic)).second) continue;
      out.topics.push_back(std::move(topic));
      if (out.topics.size() == n) break;
    }
  }
  out.shortfall = n - out.topics.size();
  return out;
}

// -------------------------------------------------------------- grounding

http::Response DefaultHttpGetter::get(const std::string& url) {
  return http::request("GET", url, "", {{"User-Agent", "negtax/0.1 (dataset generation)"}}, timeout_);
}

WikiClient::WikiClient(std::string endpoint, oracle::TransportMode mode, oracle::TranscriptStore* store,
                       std::shared_ptr<HttpGetter> getter, std::shared_ptr<oracle::Clock> clock, int max_retries,
                       std::chrono::milliseconds backoff)
    : endpoint_(std::move(endpoint)),
      mode_(mode),
      store_(store),
      getter_(std::move(getter)),
      clock_(std::move(clock)),
      max_retries_(max_retries),
      backoff_(backoff) {
  if (mode_ != oracle::TransportMode::Live && !store_)
    throw Error(Errc::Precondition, "wiki lookups in " + std::string(oracle::to_string(mode_)) + " mode need a transcript store");
  if (mode_ != oracle::TransportMode::Replay && !getter_)
    throw Error(Errc::Precondition, "wiki lookups in " + std::string(oracle::to_string(mode_)) + " mode need an HTTP client");
}

std::string WikiClient::query_url(const std::string& title) const {
  return endpoint_ + "?action=query&format=json&formatversion=2&prop=extracts&explaintext=1&redirects=1&titles=" +
         http::url_encode(title);
}

std::string WikiClient::fetch(const std::string& url) {
  const json request = {{"kind", "get"}, {"url", url}};
  const auto hash = oracle::TranscriptStore::hash_request(request);
  if (mode_ != oracle::TransportMode::Live) {
    if (auto hit = store_->get(hash)) return hit->response;
    if (mode_ == oracle::TransportMode::Replay) throw ReplayMiss(hash);
  }
  std::string last;
  for (int attempt = 0; attempt <= max_retries_; ++attempt) {
    if (attempt > 0) clock_->sleep_for(backoff_ * (1 << (attempt - 1)));
    try {
      auto res = getter_->get(url);
      if (res.status >= 200 && res.status < 300) {
        if (mode_ == oracle::TransportMode::Record) store_->put({hash, request, res.body, oracle::utc_timestamp()});
        return res.body;
      }
      last = "HTTP " + std::to_string(res.status);
    } catch (const Error& e) {
      if (e.code() != Errc::TransportError) throw;
      last = e.what();
    }
  }
  throw Error(Errc::GroundingError,
              "wiki lookup failed after " + std::to_string(max_retries_) + " retries: " + last);
}

PageInfo parse_page_response(const std::string& body, const std::string& requested_title) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::GroundingError, "wiki response is not JSON");
  if (j.contains("error"))
    throw Error(Errc::GroundingError, "wiki API error: " + j["error"].value("info", j["error"].dump()));
  PageInfo info;
  info.title = requested_title;
  if (!j.contains("query") || !j["query"].contains("pages")) return info;
  const json& pages = j["query"]["pages"];
  const json* page = nullptr;
  if (pages.is_array() && !pages.empty()) page = &pages.front();
  if (pages.is_object() && !pages.empty()) page = &pages.begin().value();
  if (!page || !page->is_object()) return info;
  if (page->contains("title") && (*page)["title"].is_string()) info.title = (*page)["title"].get<std::string>();
  const bool missing = page->contains("missing") || page->contains("invalid");
  info.exists = !missing && page->contains("pageid");
  if (info.exists && page->contains("extract") && (*page)["extract"].is_string())
    info.extract = (*page)["extract"].get<std::string>();
  return info;
}

PageInfo WikiClient::lookup(const std::string& title) {
  if (trim(title).empty()) return PageInfo{title, false, {}};
  return parse_page_response(fetch(query_url(title)), title);
}

std::optional<PageInfo> ground_page(oracle::OracleClient& oracle, WikiClient& wiki, const std::string& topic) {
  std::string rejected;
  for (int ask = 0; ask < 2; ++ask) {
    auto reply = oracle.complete_json(prompts::page_title(topic, rejected), "page_title", oracle.generation_params());
    auto title = trim(reply.at("title").get<std::string>());
    auto page = wiki.lookup(title);
    if (page.exists && !trim(page.extract).empty()) return page;
    rejected = title;
  }
  return std::nullopt;
}

// ------------------------------------------------------------- instances

Instance generate_instance(oracle::OracleClient& oracle, const PageInfo& page, NegationLabel label,
                           GenerationMode mode, std::string id, std::size_t variant) {
  const auto document = truncate_utf8(page.extract, kMaxDocumentBytes);
  auto prompt = prompts::generation(label, document);
  if (variant > 0)
    prompt.user += "\n\nThis is variant " + std::to_string(variant + 1) +
                   " for this document. Choose a different fact than in earlier variants.";
  json out;
  try {
    out = oracle.complete_json(prompt, prompts::generation_schema(label), oracle.generation_params());
  } catch (const OracleError& e) {
    throw Error(Errc::GenerationRejected, std::string(to_string(label)) + " generation rejected: " + e.reason());
  }

  Instance in;
  in.id = std::move(id);
  in.gold = label;
  in.topic = page.title;
  in.source_page = page.title;
  if (is_quantifier(label)) {
    // Styles: 0 universal, 1 existential with inner negation, 2 negated existential, 3 existential.
    const auto& qs = out.at("queries");
    const auto& ps = out.at("passages");
    auto pick = [&](std::size_t a, std::size_t b) {
      in.q1 = trim(qs.at(a).get<std::string>());
      in.d1 = trim(ps.at(a).get<std::string>());
      in.q2 = trim(qs.at(b).get<std::string>());
      in.d2 = trim(ps.at(b).get<std::string>());
    };
    if (label == NegationLabel::Contradiction) pick(0, 1);
    else if (label == NegationLabel::Contrary) pick(0, 2);
    else pick(3, 1);
  } else {
    in.q1 = field(out, "query");
    in.d1 = field(out, "passage");
    in.q2 = field(out, "positive_query");
    in.d2 = field(out, "positive_passage");
  }
  if (mode == GenerationMode::Free) {
    try {
      auto reply = oracle.complete_json(prompts::answer(in.q2, document), "answer", oracle.generation_params());
      in.d2 = field(reply, "passage");
    } catch (const OracleError& e) {
      throw Error(Errc::GenerationRejected, "counterpart passage rejected: " + e.reason());
    }
  }
  try {
    in.validate();
  } catch (const Error& e) {
    if (e.code() != Errc::ShapeError) throw;
    throw Error(Errc::GenerationRejected, std::string(to_string(label)) + " instance rejected: " + e.what());
  }
  return in;
}

namespace {

bool judge(oracle::OracleClient& oracle, const std::string& query, const std::string& passage) {
  auto reply = oracle.complete_json(prompts::relevance(query, passage), "relevance", oracle.classification_params());
  const auto& v = reply.at("relevant");
  if (v.is_boolean()) return v.get<bool>();
  auto s = to_lower(trim(v.get<std::string>()));
  return s == "yes" || s == "true";
}

}  // namespace

bool verify_relevance(oracle::OracleClient& oracle, const Instance& instance) {
  const bool first = judge(oracle, instance.q1, instance.d1);
  const bool second = judge(oracle, instance.q2, instance.d2);
  return first && second;
}

// ---------------------------------------------------------------- stats

DatasetStats dataset_stats(const std::vector<Instance>& instances) {
  if (instances.empty()) throw Error(Errc::EmptyDataset, "dataset is empty");
  DatasetStats s;
  s.size = instances.size();
  double q1 = 0, q2 = 0, d1 = 0, d2 = 0;
  for (const auto& in : instances) {
    q1 += static_cast<double>(word_count(in.q1));
    q2 += static_cast<double>(word_count(in.q2));
    d1 += static_cast<double>(word_count(in.d1));
    d2 += static_cast<double>(word_count(in.d2));
    if (in.gold) ++s.per_type[*in.gold];
    else ++s.untyped;
  }
  const double n = static_cast<double>(s.size);
  s.mean_len_q1 = q1 / n;
  s.mean_len_q2 = q2 / n;
  s.mean_len_d1 = d1 / n;
  s.mean_len_d2 = d2 / n;
  return s;
}

ojson DatasetStats::to_json() const {
  ojson j;
  j["size"] = size;
  j["mean_len_q1"] = mean_len_q1;
  j["mean_len_d1"] = mean_len_d1;
  j["mean_len_q2"] = mean_len_q2;
  j["mean_len_d2"] = mean_len_d2;
  ojson types = ojson::object();
  for (auto l : kAllLabels)
    if (auto it = per_type.find(l); it != per_type.end()) types[std::string(to_string(l))] = it->second;
  j["per_type"] = std::move(types);
  if (untyped) j["untyped"] = untyped;
  return j;
}

// ------------------------------------------------------------- pipeline

ojson GenerationResult::summary() const {
  ojson j;
  j["topics"] = topics.topics.size();
  j["topic_shortfall"] = topics.shortfall;
  j["topics_dropped"] = dropped_topics.size();
  j["generated"] = generated;
  j["rejected"] = rejected;
  j["filtered"] = filtered;
  j["kept"] = instances.size();
  if (!instances.empty()) j["stats"] = dataset_stats(instances).to_json();
  return j;
}

namespace {

struct TopicOutcome {
  bool dropped = false;
  std::vector<Instance> kept;
  std::size_t generated = 0, rejected = 0, filtered = 0;
  std::vector<GenerationEvent> events;
};

TopicOutcome process_topic(const GenerationJob& job, oracle::OracleClient& oracle, WikiClient& wiki,
                           const std::string& topic) {
  TopicOutcome out;
  std::optional<PageInfo> page;
  try {
    page = ground_page(oracle, wiki, topic);
  } catch (const OracleError& e) {
    out.events.push_back({topic, "grounding", e.what()});
  }
  if (!page) {
    out.dropped = true;
    out.events.push_back({topic, "grounding", "no existing page found; topic dropped"});
    return out;
  }
  for (auto label : job.types) {
    for (std::size_t k = 0; k < job.per_topic_instances; ++k) {
      Instance in;
      try {
        in = generate_instance(oracle, *page, label, job.mode, "pending", k);
      } catch (const Error& e) {
        if (e.code() != Errc::GenerationRejected) throw;
        ++out.rejected;
        out.events.push_back({topic, "generation", e.what()});
        continue;
      }
      ++out.generated;
      in.topic = topic;
      if (verify_relevance(oracle, in)) {
        out.kept.push_back(std::move(in));
      } else {
        ++out.filtered;
        out.events.push_back({topic, "relevance", std::string(to_string(label)) + " instance failed relevance"});
      }
    }
  }
  return out;
}

}  // namespace

GenerationResult run_generation(const GenerationJob& job, oracle::OracleClient& oracle, WikiClient& wiki,
                                unsigned workers) {
  job.validate();
  GenerationResult result;
  result.topics = generate_topics(oracle, job.topics_n);
  const auto& topics = result.topics.topics;

  std::vector<TopicOutcome> outcomes(topics.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto work = [&] {
    for (;;) {
      {
        std::lock_guard lock(err_mu);
        if (first_error) return;
      }
      const std::size_t i = next.fetch_add(1);
      if (i >= topics.size()) return;
      try {
        outcomes[i] = process_topic(job, oracle, wiki, topics[i]);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(topics.size())));
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
  }
  if (first_error) std::rethrow_exception(first_error);

  const char prefix = job.mode == GenerationMode::Free ? 'f' : 'c';
  for (std::size_t i = 0; i < topics.size(); ++i) {
    auto& o = outcomes[i];
    if (o.dropped) result.dropped_topics.push_back(topics[i]);
    result.generated += o.generated;
    result.rejected += o.rejected;
    result.filtered += o.filtered;
    for (auto& e : o.events) result.events.push_back(std::move(e));
    for (auto& in : o.kept) {
      char id[32];
      std::snprintf(id, sizeof id, "%c%05zu", prefix, result.instances.size() + 1);
      in.id = id;
      result.instances.push_back(std::move(in));
    }
  }
  return result;
}

}  // namespace negtax::datagen
