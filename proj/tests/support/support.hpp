#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "negtax/classifier.hpp"
#include "negtax/dataset.hpp"
#include "negtax/datagen.hpp"
#include "negtax/oracle.hpp"

namespace negtax::test {

std::filesystem::path fixture(const std::string& rel);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Chat transport driven by a callback returning assistant content.
class ScriptedTransport final : public oracle::ChatTransport {
 public:
  using Handler = std::function<std::string(const oracle::ChatRequest&, std::size_t call)>;
  explicit ScriptedTransport(Handler handler) : handler_(std::move(handler)) {}
  std::string send(const oracle::ChatRequest& request) override;
  std::size_t calls() const { return calls_; }
  std::vector<oracle::ChatRequest> requests() const;

 private:
  Handler handler_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mu_;
  std::vector<oracle::ChatRequest> requests_;
};

/// The user message of a request.
std::string user_message(const oracle::ChatRequest& request);
std::string system_message(const oracle::ChatRequest& request);

/// Proof JSON keyed by text, read from a fixture proofs.jsonl.
std::map<std::string, nlohmann::json> load_proof_map(const std::filesystem::path& path);

/// Native JSONL instances carrying a gold type plus the expected cascade step.
struct LabeledInstance {
  Instance instance;
  std::string step;
};
std::vector<LabeledInstance> load_labeled(const std::filesystem::path& path);

/// Runs the negtax executable and captures its output.
struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};
RunResult run_cli(const std::vector<std::string>& args);

}  // namespace negtax::test

namespace negtax::test {

/// Scripted oracle and wiki answering every generation-pipeline prompt.
struct FakeWorld {
  std::vector<std::string> topic_pool{"Saturn", "Photosynthesis", "Tom Hanks", "Volcano", "Chess", "Coffee"};
  /// Topics whose page lookups report a missing page.
  std::set<std::string> missing_pages;
  /// Relevance judgments return false for queries containing this text.
  std::string irrelevant_marker = "IRRELEVANT";
  /// Canned proofs keyed by text, answered for lambda-proof prompts.
  std::map<std::string, nlohmann::json> proofs;

  std::string answer(const oracle::ChatRequest& request) const;
  std::string page_json(const std::string& title) const;
};

/// Serves FakeWorld pages as query API responses (formatversion 2).
class FakeWikiGetter final : public datagen::HttpGetter {
 public:
  explicit FakeWikiGetter(const FakeWorld& world) : world_(world) {}
  http::Response get(const std::string& url) override;
  std::size_t calls() const { return calls_; }

 private:
  const FakeWorld& world_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace negtax::test
