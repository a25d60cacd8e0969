#include "support.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "negtax/cli.hpp"

namespace negtax::test {

namespace fs = std::filesystem;

fs::path fixture(const std::string& rel) { return fs::path(NEGTAX_FIXTURE_DIR) / rel; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

TempDir::TempDir() {
  std::random_device rd;
  std::mt19937_64 gen(rd());
  for (;;) {
    path_ = fs::temp_directory_path() / ("negtax-test-" + std::to_string(gen()));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ScriptedTransport::send(const oracle::ChatRequest& request) {
  const std::size_t call = calls_++;
  {
    std::lock_guard lock(mu_);
    requests_.push_back(request);
  }
  return oracle::make_chat_response(handler_(request, call));
}

std::vector<oracle::ChatRequest> ScriptedTransport::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::string user_message(const oracle::ChatRequest& request) {
  for (const auto& m : request.messages)
    if (m.role == "user") return m.content;
  return {};
}

std::string system_message(const oracle::ChatRequest& request) {
  for (const auto& m : request.messages)
    if (m.role == "system") return m.content;
  return {};
}

std::map<std::string, nlohmann::json> load_proof_map(const fs::path& path) {
  std::map<std::string, nlohmann::json> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    out[j.at("text").get<std::string>()] = j.at("proof");
  }
  return out;
}

std::vector<LabeledInstance> load_labeled(const fs::path& path) {
  std::vector<LabeledInstance> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    out.push_back({instance_from_record(j, DatasetFormat::Native), j.value("step", "")});
  }
  return out;
}

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.exit_code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace negtax::test

namespace negtax::test {

namespace {

std::string between(const std::string& s, const std::string& open, const std::string& close) {
  auto a = s.find(open);
  if (a == std::string::npos) return {};
  a += open.size();
  auto b = s.find(close, a);
  return s.substr(a, b == std::string::npos ? std::string::npos : b - a);
}

std::string url_decode(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out.push_back(static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(s[i] == '+' ? ' ' : s[i]);
    }
  }
  return out;
}

}  // namespace

std::string FakeWorld::answer(const oracle::ChatRequest& request) const {
  using nlohmann::json;
  const auto sys = system_message(request);
  const auto user = user_message(request);
  if (user.rfind("Query: ", 0) == 0 && sys.find("\"negation_analysis\"") != std::string::npos) {
    auto text = user.substr(7);
    auto it = proofs.find(text);
    if (it == proofs.end()) return "no proof for this text";
    return it->second.dump();
  }
  if (user.rfind("Generate ", 0) == 0) {
    const auto n = std::stoul(user.substr(9));
    json topics = json::array();
    for (std::size_t i = 0; i < n && i < topic_pool.size(); ++i) topics.push_back(topic_pool[i]);
    return json{{"topics", topics}}.dump();
  }
  if (user.rfind("Return the exact title", 0) == 0) {
    auto topic = between(user, "topic \"", "\"");
    auto rejected = between(user, "The title \"", "\"");
    return json{{"title", rejected.empty() ? topic : topic + " (disambiguation)"}}.dump();
  }
  if (sys.rfind("You judge search results", 0) == 0) {
    return json{{"relevant", between(user, "Query: ", "\n").find(irrelevant_marker) == std::string::npos}}.dump();
  }
  if (sys.find("key \"passage\"") != std::string::npos) {
    return json{{"passage", "Answer grounded in the page: " + between(user, "Query: ", "\n")}}.dump();
  }
  const auto page = between(user, "Document:\n", ".");
  const auto variant = between(user, "This is variant ", " ");
  const auto tag = page + (variant.empty() ? "" : " v" + variant);
  if (sys.find("\"queries\"") != std::string::npos) {
    return json{{"queries",
                 {"Do all parts of " + tag + " shine?", "Is some part of " + tag + " not shining?",
                  "Is no part of " + tag + " shining?", "Does some part of " + tag + " shine?"}},
                {"passages",
                 {"Every part of " + tag + " shines.", "One part of " + tag + " does not shine.",
                  "No part of " + tag + " shines.", "A part of " + tag + " shines."}}}
        .dump();
  }
  if (sys.find("\"word1\"") != std::string::npos) {
    return json{{"word1", "hot"}, {"word2", "cold"}, {"query", "Which parts of " + tag + " are hot?"},
                {"passage", "The core of " + tag + " is hot."}, {"positive_query", "Which parts of " + tag + " are cold?"},
                {"positive_passage", "The rim of " + tag + " is cold."}}
        .dump();
  }
  return json{{"query", "What is not true of " + tag + "?"}, {"passage", tag + " is not made of cheese."},
              {"positive_query", "What is true of " + tag + "?"}, {"positive_passage", tag + " is well documented."}}
      .dump();
}

std::string FakeWorld::page_json(const std::string& title) const {
  using nlohmann::json;
  json page{{"ns", 0}, {"title", title}};
  if (missing_pages.count(title) || title.find("(disambiguation)") != std::string::npos) {
    page["missing"] = true;
  } else {
    page["pageid"] = 1000 + title.size();
    page["extract"] = title + ". " + title + " is a well known subject with a long encyclopedic article.";
  }
  return json{{"batchcomplete", true}, {"query", {{"pages", json::array({page})}}}}.dump();
}

http::Response FakeWikiGetter::get(const std::string& url) {
  ++calls_;
  auto pos = url.find("titles=");
  auto title = url_decode(pos == std::string::npos ? "" : url.substr(pos + 7));
  return {200, world_.page_json(title)};
}

}  // namespace negtax::test
