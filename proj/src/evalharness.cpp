#include "negtax/evalharness.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "negtax/error.hpp"
#include "negtax/http.hpp"
#include "negtax/text.hpp"

extern char** environ;

namespace negtax::eval {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ------------------------------------------------------------------ BM25

void Bm25Params::validate() const {
  if (!(k1 > 0)) throw Error(Errc::Precondition, "bm25 k1 must be positive");
  if (!(b >= 0 && b <= 1)) throw Error(Errc::Precondition, "bm25 b must lie in [0, 1]");
}

Bm25Index::Bm25Index(Bm25Params params) : params_(params) { params_.validate(); }

void Bm25Index::add(const std::string& doc_id, std::string_view text) {
  if (auto old = docs_.find(doc_id); old != docs_.end()) {
    for (const auto& [t, _] : old->second.tf)
      if (--df_[t] == 0) df_.erase(t);
    total_length_ -= old->second.length;
    docs_.erase(old);
  }
  Doc d;
  for (auto& tok : tokenize(text)) {
    ++d.tf[tok];
    ++d.length;
  }
  for (const auto& [t, _] : d.tf) ++df_[t];
  total_length_ += d.length;
  docs_.emplace(doc_id, std::move(d));
}

double Bm25Index::average_length() const {
  return docs_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(docs_.size());
}

double Bm25Index::idf(const std::string& term) const {
  const double n = static_cast<double>(docs_.size());
  auto it = df_.find(term);
  const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

double Bm25Index::score(std::string_view query, const std::string& doc_id) const {
  auto it = docs_.find(doc_id);
  if (it == docs_.end()) throw Error(Errc::NotIndexed, "document '" + doc_id + "' is not indexed");
  const Doc& d = it->second;
  const double avgdl = average_length();
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * (avgdl > 0 ? static_cast<double>(d.length) / avgdl : 0.0));
  double s = 0.0;
  for (const auto& t : tokenize(query)) {
    auto f = d.tf.find(t);
    if (f == d.tf.end()) continue;
    const double tf = static_cast<double>(f->second);
    s += idf(t) * tf * (params_.k1 + 1.0) / (tf + norm);
  }
  return s;
}

std::vector<double> Bm25Scorer::score(const std::vector<ScorePair>& batch) {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& p : batch) out.push_back(index_.score(p.query, p.doc_id));
  return out;
}

std::string query_id(const Instance& in, int which) { return in.id + "#q" + std::to_string(which); }
std::string doc_id(const Instance& in, int which) { return in.id + "#d" + std::to_string(which); }

Bm25Index build_pool(const std::vector<Instance>& instances, Bm25Params params) {
  Bm25Index idx(params);
  for (const auto& in : instances) {
    idx.add(doc_id(in, 1), in.d1);
    idx.add(doc_id(in, 2), in.d2);
  }
  return idx;
}

// ------------------------------------------------------------- protocol

json score_request(const std::vector<ScorePair>& batch) {
  json items = json::array();
  for (const auto& p : batch) items.push_back({{"qid", p.query_id}, {"did", p.doc_id}, {"query", p.query}, {"doc", p.doc}});
  return {{"op", "score"}, {"batch", std::move(items)}};
}

std::string parse_hello(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BridgeProtocolError("hello reply is not a JSON object", line);
  if (j.value("op", "") != "hello") throw BridgeProtocolError("expected op \"hello\"", line);
  if (!j.contains("protocol") || !j["protocol"].is_number_integer() || j["protocol"].get<int>() != kProtocolVersion)
    throw BridgeProtocolError("unsupported protocol version", line);
  if (!j.contains("name") || !j["name"].is_string()) throw BridgeProtocolError("hello reply lacks a name", line);
  return j["name"].get<std::string>();
}

std::vector<double> parse_scores(const std::string& line, const std::vector<ScorePair>& batch) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BridgeProtocolError("scores reply is not valid JSON", line);
  if (j.value("op", "") != "scores") throw BridgeProtocolError("expected op \"scores\"", line);
  if (!j.contains("batch") || !j["batch"].is_array()) throw BridgeProtocolError("scores reply lacks a batch array", line);
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  for (std::size_t i = 0; i < batch.size(); ++i) slot.emplace(std::pair{batch[i].query_id, batch[i].doc_id}, i);
  std::vector<std::optional<double>> got(batch.size());
  for (const auto& e : j["batch"]) {
    if (!e.is_object() || !e.contains("qid") || !e.contains("did") || !e["qid"].is_string() || !e["did"].is_string())
      throw BridgeProtocolError("score entry lacks qid/did", line);
    if (!e.contains("score") || !e["score"].is_number()) throw BridgeProtocolError("score entry lacks a numeric score", line);
    double s = e["score"].get<double>();
    if (!std::isfinite(s)) throw BridgeProtocolError("non-finite score", line);
    auto it = slot.find({e["qid"].get<std::string>(), e["did"].get<std::string>()});
    if (it == slot.end()) throw BridgeProtocolError("score for an id pair that was not requested", line);
    if (got[it->second]) throw BridgeProtocolError("duplicate score for one id pair", line);
    got[it->second] = s;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (!got[i]) throw BridgeProtocolError("missing score for " + batch[i].query_id + "/" + batch[i].doc_id, line);
    out.push_back(*got[i]);
  }
  return out;
}

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> out;
  std::string cur;
  bool have = false;
  char quote = 0;
  for (std::size_t i = 0; i < command.size(); ++i) {
    char c = command[i];
    if (quote) {
      if (c == quote) quote = 0;
      else if (c == '\\' && quote == '"' && i + 1 < command.size()) cur.push_back(command[++i]);
      else cur.push_back(c);
    } else if (c == '\'' || c == '"') {
      quote = c;
      have = true;
    } else if (c == '\\' && i + 1 < command.size()) {
      cur.push_back(command[++i]);
      have = true;
    } else if (c == ' ' || c == '\t') {
      if (have) out.push_back(std::move(cur));
      cur.clear();
      have = false;
    } else {
      cur.push_back(c);
      have = true;
    }
  }
  if (quote) throw Error(Errc::Usage, "unterminated quote in command: " + std::string(command));
  if (have) out.push_back(std::move(cur));
  if (out.empty()) throw Error(Errc::Usage, "empty scorer command");
  return out;
}

// ------------------------------------------------------------ subprocess

SubprocessScorer::SubprocessScorer(std::vector<std::string> argv, std::chrono::seconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) throw Error(Errc::Usage, "empty scorer command");
  std::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(Errc::TransportError, std::string("pipe: ") + std::strerror(errno));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error(Errc::TransportError, std::string("pipe: ") + std::strerror(errno));
  }
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&fa, out_pipe[1], STDOUT_FILENO);
  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);
  pid_t pid = -1;
  int rc = posix_spawnp(&pid, args[0], &fa, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    throw Error(Errc::TransportError, "cannot start scorer '" + argv_[0] + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  try {
    send_line(json{{"op", "hello"}, {"protocol", kProtocolVersion}}.dump());
    name_ = parse_hello(read_line());
  } catch (...) {
    shutdown();
    throw;
  }
}

SubprocessScorer::~SubprocessScorer() { shutdown(); }

void SubprocessScorer::send_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::TransportError, "scorer '" + argv_[0] + "' closed its input");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SubprocessScorer::read_line() {
  auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0)
      throw Error(Errc::BridgeTimeout, "scorer '" + argv_[0] + "' did not answer within " +
                                           std::to_string(timeout_.count()) + " s");
    pollfd p{from_child_, POLLIN, 0};
    int rc = poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::TransportError, std::string("poll: ") + std::strerror(errno));
    }
    if (rc == 0) continue;
    char chunk[65536];
    ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::TransportError, std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (!trim(buffer_).empty()) {
        std::string line = std::move(buffer_);
        buffer_.clear();
        return line;
      }
      throw Error(Errc::TransportError, "scorer '" + argv_[0] + "' exited");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::vector<double> SubprocessScorer::score(const std::vector<ScorePair>& batch) {
  if (batch.empty()) return {};
  send_line(score_request(batch).dump());
  return parse_scores(read_line(), batch);
}

void SubprocessScorer::shutdown() {
  if (pid_ < 0) return;
  if (to_child_ >= 0) {
    try {
      send_line(R"({"op":"bye"})");
    } catch (const Error&) {
    }
    close(to_child_);
    to_child_ = -1;
  }
  int status = 0;
  for (int i = 0; i < 100; ++i) {
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  if (pid_ >= 0) {
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
}

// ------------------------------------------------------------------ http

HttpScorer::HttpScorer(std::string base_url, std::chrono::seconds timeout) : timeout_(timeout) {
  while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();
  url_ = base_url.size() >= 6 && base_url.compare(base_url.size() - 6, 6, "/score") == 0 ? base_url : base_url + "/score";
  name_ = parse_hello(post(json{{"op", "hello"}, {"protocol", kProtocolVersion}}.dump()));
}

std::string HttpScorer::post(const std::string& body) {
  auto res = http::request("POST", url_, body, {{"Content-Type", "application/json"}}, timeout_);
  if (res.status < 200 || res.status >= 300)
    throw Error(Errc::TransportError, "scorer endpoint returned HTTP " + std::to_string(res.status));
  auto line = res.body;
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  return line;
}

std::vector<double> HttpScorer::score(const std::vector<ScorePair>& batch) {
  if (batch.empty()) return {};
  return parse_scores(post(score_request(batch).dump()), batch);
}

// ------------------------------------------------------------ evaluation

bool pairwise_correct(const std::array<double, 4>& s) { return s[0] > s[1] && s[3] > s[2]; }

EvalReport pairwise_accuracy(const std::vector<Instance>& instances, Scorer& scorer, const EvalOptions& options) {
  EvalReport r;
  r.scorer = scorer.name();
  r.instances = instances.size();
  const std::size_t per_batch = std::max<std::size_t>(1, options.batch_size / 4);
  for (std::size_t start = 0; start < instances.size(); start += per_batch) {
    const std::size_t end = std::min(instances.size(), start + per_batch);
    std::vector<ScorePair> batch;
    for (std::size_t i = start; i < end; ++i) {
      const auto& in = instances[i];
      batch.push_back({query_id(in, 1), doc_id(in, 1), in.q1, in.d1});
      batch.push_back({query_id(in, 1), doc_id(in, 2), in.q1, in.d2});
      batch.push_back({query_id(in, 2), doc_id(in, 1), in.q2, in.d1});
      batch.push_back({query_id(in, 2), doc_id(in, 2), in.q2, in.d2});
    }
    std::vector<double> scores;
    std::optional<std::string> failure;
    try {
      scores = scorer.score(batch);
      if (scores.size() != batch.size())
        failure = "scorer returned " + std::to_string(scores.size()) + " scores for " + std::to_string(batch.size()) + " pairs";
    } catch (const BridgeProtocolError&) {
      throw;
    } catch (const Error& e) {
      failure = std::string(errc_name(e.code())) + ": " + e.what();
    }
    for (std::size_t i = start; i < end; ++i) {
      InstanceResult ir;
      ir.id = instances[i].id;
      ir.type = instances[i].gold;
      if (failure) {
        ir.error = *failure;
      } else {
        for (int k = 0; k < 4; ++k) ir.scores[k] = scores[(i - start) * 4 + k];
        if (!std::all_of(ir.scores.begin(), ir.scores.end(), [](double v) { return std::isfinite(v); })) ir.error = "non-finite score";
      }
      if (ir.error) {
        ++r.errored;
      } else {
        ir.correct = pairwise_correct(ir.scores);
        ir.tie = ir.scores[0] == ir.scores[1] || ir.scores[2] == ir.scores[3];
        r.ties += ir.tie;
        r.correct += ir.correct;
        if (ir.type) {
          auto& t = r.per_type[*ir.type];
          ++t.n;
          t.correct += ir.correct;
        }
      }
      r.per_instance.push_back(std::move(ir));
    }
  }
  const std::size_t scored = r.instances - r.errored;
  r.overall_pairwise_acc = scored ? static_cast<double>(r.correct) / static_cast<double>(scored) : 0.0;
  return r;
}

ojson EvalReport::to_json() const {
  ojson j;
  j["scorer"] = scorer;
  j["instances"] = instances;
  j["errored"] = errored;
  j["ties"] = ties;
  j["correct"] = correct;
  j["overall_pairwise_acc"] = overall_pairwise_acc;
  ojson types = ojson::object();
  for (auto l : kAllLabels) {
    auto it = per_type.find(l);
    if (it == per_type.end()) continue;
    types[std::string(to_string(l))] = {{"n", it->second.n}, {"correct", it->second.correct}, {"pairwise_acc", it->second.pairwise_acc()}};
  }
  j["per_type"] = std::move(types);
  ojson rows = ojson::array();
  for (const auto& ir : per_instance) {
    ojson row;
    row["id"] = ir.id;
    row["type"] = ir.type ? ojson(std::string(to_string(*ir.type))) : ojson(nullptr);
    if (ir.error) {
      row["error"] = *ir.error;
    } else {
      row["correct"] = ir.correct;
      row["scores"] = ir.scores;
    }
    rows.push_back(std::move(row));
  }
  j["per_instance"] = std::move(rows);
  return j;
}

EvalReport EvalReport::from_json(const json& j) {
  try {
    EvalReport r;
    r.scorer = j.at("scorer").get<std::string>();
    r.instances = j.at("instances").get<std::size_t>();
    r.errored = j.value("errored", std::size_t{0});
    r.ties = j.value("ties", std::size_t{0});
    r.correct = j.at("correct").get<std::size_t>();
    r.overall_pairwise_acc = j.at("overall_pairwise_acc").get<double>();
    for (const auto& [name, t] : j.at("per_type").items())
      r.per_type[label_from_string(name)] = {t.at("n").get<std::size_t>(), t.at("correct").get<std::size_t>()};
    if (j.contains("per_instance")) {
      for (const auto& row : j["per_instance"]) {
        InstanceResult ir;
        ir.id = row.at("id").get<std::string>();
        if (row.contains("type") && row["type"].is_string()) ir.type = label_from_string(row["type"].get<std::string>());
        if (row.contains("error")) {
          ir.error = row["error"].get<std::string>();
        } else {
          ir.correct = row.at("correct").get<bool>();
          ir.scores = row.at("scores").get<std::array<double, 4>>();
          ir.tie = ir.scores[0] == ir.scores[1] || ir.scores[2] == ir.scores[3];
        }
        r.per_instance.push_back(std::move(ir));
      }
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::ShapeError, std::string("not an evaluation report: ") + e.what());
  }
}

std::string render_markdown(const std::vector<EvalReport>& reports) {
  std::vector<NegationLabel> cols;
  for (auto l : kAllLabels)
    for (const auto& r : reports)
      if (r.per_type.count(l)) {
        cols.push_back(l);
        break;
      }
  auto pct = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << 100.0 * v;
    return os.str();
  };
  std::ostringstream os;
  os << "| Scorer | All |";
  for (auto l : cols) os << ' ' << display_name(l) << " |";
  os << "\n|---|---:|";
  for (std::size_t i = 0; i < cols.size(); ++i) os << "---:|";
  os << '\n';
  for (const auto& r : reports) {
    os << "| " << r.scorer << " | " << pct(r.overall_pairwise_acc) << " |";
    for (auto l : cols) {
      auto it = r.per_type.find(l);
      os << ' ' << (it == r.per_type.end() ? "-" : pct(it->second.pairwise_acc())) << " |";
    }
    os << '\n';
  }
  os << "\nPairwise accuracy in percent. Columns with n per type:";
  for (const auto& r : reports) {
    os << "\n- " << r.scorer << ": " << (r.instances - r.errored) << " scored, " << r.errored << " errored, " << r.ties
       << " with ties";
    for (auto l : cols)
      if (auto it = r.per_type.find(l); it != r.per_type.end()) os << ", " << to_string(l) << "=" << it->second.n;
  }
  os << '\n';
  return os.str();
}

double mrr_at_k(const std::map<std::string, std::vector<std::string>>& rankings,
                const std::map<std::string, std::set<std::string>>& qrels, std::size_t k) {
  if (rankings.empty()) throw Error(Errc::ShapeError, "no rankings");
  double sum = 0.0;
  for (const auto& [q, docs] : rankings) {
    auto it = qrels.find(q);
    if (it == qrels.end()) throw Error(Errc::MissingQrels, "query '" + q + "' has no qrels");
    for (std::size_t r = 0; r < docs.size() && r < k; ++r) {
      if (it->second.count(docs[r])) {
        sum += 1.0 / static_cast<double>(r + 1);
        break;
      }
    }
  }
  return sum / static_cast<double>(rankings.size());
}

}  // namespace negtax::eval
