// Test double for the scorer bridge protocol.
// Usage: echo_bridge <mode>, mode one of length, nan, shuffle, badhello, silent, exit.
#include <algorithm>
#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

std::size_t overlap(const std::string& query, const std::string& doc) {
  std::size_t n = 0;
  std::string word;
  auto flush = [&] {
    if (!word.empty() && doc.find(word) != std::string::npos) ++n;
    word.clear();
  };
  for (char c : query) {
    if (c == ' ') flush();
    else word.push_back(c);
  }
  flush();
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "length";
  std::string line;
  while (std::getline(std::cin, line)) {
    auto msg = json::parse(line, nullptr, false);
    if (msg.is_discarded()) return 1;
    const auto op = msg.value("op", "");
    if (op == "bye") return 0;
    if (op == "hello") {
      if (mode == "silent") {
        std::this_thread::sleep_for(std::chrono::hours(1));
      }
      json reply{{"op", "hello"}, {"protocol", mode == "badhello" ? 2 : 1}, {"name", "echo-" + mode}};
      std::cout << reply.dump() << std::endl;
      if (mode == "exit") return 0;
      continue;
    }
    if (op != "score") return 1;
    json batch = json::array();
    for (const auto& item : msg["batch"]) {
      const auto query = item["query"].get<std::string>();
      const auto doc = item["doc"].get<std::string>();
      double score = static_cast<double>(overlap(query, doc)) - 1e-3 * static_cast<double>(doc.size());
      batch.push_back({{"qid", item["qid"]}, {"did", item["did"]}, {"score", score}});
    }
    if (mode == "shuffle") std::reverse(batch.begin(), batch.end());
    std::string out = json{{"op", "scores"}, {"batch", batch}}.dump();
    if (mode == "nan" && !batch.empty()) {
      auto pos = out.find("\"score\":");
      auto end = out.find_first_of(",}", pos);
      out = out.substr(0, pos + 8) + "NaN" + out.substr(end);
    }
    std::cout << out << std::endl;
  }
  return 0;
}
