#include <gtest/gtest.h>


#include "negtax/datagen.hpp"
#include "negtax/error.hpp"
#include "support.hpp"

namespace negtax::datagen {
namespace {

using nlohmann::json;
using oracle::ChatRequest;
using test::FakeWorld;
using test::ScriptedTransport;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Usage;
}

oracle::OracleConfig live_config() {
  oracle::OracleConfig cfg;
  cfg.mode = oracle::TransportMode::Live;
  cfg.seed = 0;
  return cfg;
}

struct Rig {
  FakeWorld world;
  std::shared_ptr<oracle::ManualClock> clock = std::make_shared<oracle::ManualClock>();
  std::shared_ptr<ScriptedTransport> transport;
  std::unique_ptr<oracle::OracleClient> client;
  std::shared_ptr<test::FakeWikiGetter> getter;
  std::unique_ptr<WikiClient> wiki;

  explicit Rig(ScriptedTransport::Handler override = nullptr) {
    transport = std::make_shared<ScriptedTransport>([this, override](const ChatRequest& r, std::size_t call) {
      if (override) {
        auto s = override(r, call);
        if (!s.empty()) return s;
      }
      return world.answer(r);
    });
    client = std::make_unique<oracle::OracleClient>(live_config(), transport, clock);
    getter = std::make_shared<test::FakeWikiGetter>(world);
    wiki = std::make_unique<WikiClient>(std::string(kDefaultWikiEndpoint), oracle::TransportMode::Live, nullptr, getter,
                                        clock);
  }
};

class FailingGetter final : public HttpGetter {
 public:
  http::Response get(const std::string&) override {
    ++calls;
    return {503, "unavailable"};
  }
  int calls = 0;
};

TEST(Job, Validation) {
  GenerationJob job;
  job.types = {NegationLabel::Sentential};
  EXPECT_NO_THROW(job.validate());
  job.topics_n = 0;
  EXPECT_EQ(code_of([&] { job.validate(); }), Errc::Precondition);
  job.topics_n = 1;
  job.types = {NegationLabel::Other};
  EXPECT_EQ(code_of([&] { job.validate(); }), Errc::Precondition);
  EXPECT_EQ(default_generation_types().size(), 10u);
  EXPECT_EQ(generation_mode_from_string("controlled"), GenerationMode::Controlled);
}

TEST(Topics, DuplicatesAreReRequestedThenShortfall) {
  Rig rig([](const ChatRequest& r, std::size_t) -> std::string {
    if (test::user_message(r).rfind("Generate ", 0) == 0) return R"({"topics": ["Saturn", "saturn", " Saturn ", "Chess"]})";
    return {};
  });
  auto t = generate_topics(*rig.client, 5);
  EXPECT_EQ(t.topics, (std::vector<std::string>{"Saturn", "Chess"}));
  EXPECT_EQ(t.shortfall, 3u);
  EXPECT_EQ(t.rounds, 4u);
  auto last = test::user_message(rig.transport->requests().back());
  EXPECT_NE(last.find("Do not repeat any of these topics: Saturn, Chess"), std::string::npos);
}

TEST(Topics, EnoughInOneRound) {
  Rig rig;
  auto t = generate_topics(*rig.client, 3);
  EXPECT_EQ(t.topics.size(), 3u);
  EXPECT_EQ(t.shortfall, 0u);
  EXPECT_EQ(t.rounds, 1u);
}

TEST(Wiki, QueryUrlAndParsing) {
  Rig rig;
  auto url = rig.wiki->query_url("Tom Hanks");
  EXPECT_EQ(url.rfind(std::string(kDefaultWikiEndpoint) + "?", 0), 0u);
  EXPECT_NE(url.find("titles=Tom%20Hanks"), std::string::npos);
  auto page = rig.wiki->lookup("Tom Hanks");
  EXPECT_TRUE(page.exists);
  EXPECT_NE(page.extract.find("Tom Hanks"), std::string::npos);

  auto v1 = parse_page_response(R"({"query":{"pages":{"-1":{"ns":0,"title":"Nope","missing":""}}}})", "Nope");
  EXPECT_FALSE(v1.exists);
  auto v1ok = parse_page_response(R"({"query":{"pages":{"12":{"pageid":12,"title":"Yes","extract":"Text."}}}})", "Yes");
  EXPECT_TRUE(v1ok.exists);
  EXPECT_EQ(v1ok.extract, "Text.");
  EXPECT_EQ(code_of([] { parse_page_response("not json", "x"); }), Errc::GroundingError);
}

TEST(Wiki, GroundingErrorAfterRetries) {
  auto clock = std::make_shared<oracle::ManualClock>();
  auto getter = std::make_shared<FailingGetter>();
  WikiClient wiki("http://wiki.invalid/api.php", oracle::TransportMode::Live, nullptr, getter, clock, 3,
                  std::chrono::milliseconds(100));
  EXPECT_EQ(code_of([&] { wiki.lookup("Saturn"); }), Errc::GroundingError);
  EXPECT_EQ(getter->calls, 4);
  EXPECT_EQ(clock->sleeps().size(), 3u);
}

TEST(Wiki, RecordThenReplay) {
  test::TempDir dir;
  oracle::TranscriptStore store(dir.path());
  FakeWorld world;
  auto getter = std::make_shared<test::FakeWikiGetter>(world);
  WikiClient rec("http://wiki.test/api.php", oracle::TransportMode::Record, &store, getter);
  auto a = rec.lookup("Saturn");
  WikiClient replay("http://wiki.test/api.php", oracle::TransportMode::Replay, &store, nullptr);
  auto b = replay.lookup("Saturn");
  EXPECT_EQ(a.extract, b.extract);
  EXPECT_EQ(getter->calls(), 1u);
  EXPECT_THROW(replay.lookup("Chess"), ReplayMiss);
}

TEST(Grounding, MissingPageGetsOneReask) {
  Rig rig;
  rig.world.missing_pages.insert("Volcano");
  auto page = ground_page(*rig.client, *rig.wiki, "Volcano");
  EXPECT_FALSE(page);
  EXPECT_EQ(rig.getter->calls(), 2u);
  auto reask = test::user_message(rig.transport->requests().back());
  EXPECT_NE(reask.find("The title \"Volcano\" does not exist"), std::string::npos);
  EXPECT_TRUE(ground_page(*rig.client, *rig.wiki, "Saturn"));
}

TEST(Instances, NegationPairFreeModeUsesAnswerPrompt) {
  Rig rig;
  PageInfo page{"Saturn", true, "Saturn. A planet with rings."};
  auto in = generate_instance(*rig.client, page, NegationLabel::Sentential, GenerationMode::Free, "x");
  EXPECT_EQ(in.gold, NegationLabel::Sentential);
  EXPECT_EQ(in.q1, "What is not true of Saturn?");
  EXPECT_EQ(in.d2, "Answer grounded in the page: What is true of Saturn?");
  auto controlled = generate_instance(*rig.client, page, NegationLabel::Sentential, GenerationMode::Controlled, "y");
  EXPECT_EQ(controlled.d2, "Saturn is well documented.");
  EXPECT_EQ(controlled.source_page, "Saturn");
}

TEST(Instances, QuantifierAssembly) {
  Rig rig;
  PageInfo page{"Sun", true, "Sun. A star."};
  auto mode = GenerationMode::Controlled;
  auto c = generate_instance(*rig.client, page, NegationLabel::Contradiction, mode, "a");
  EXPECT_EQ(c.q1, "Do all parts of Sun shine?");
  EXPECT_EQ(c.q2, "Is some part of Sun not shining?");
  auto r = generate_instance(*rig.client, page, NegationLabel::Contrary, mode, "b");
  EXPECT_EQ(r.q1, "Do all parts of Sun shine?");
  EXPECT_EQ(r.q2, "Is no part of Sun shining?");
  EXPECT_EQ(r.d2, "No part of Sun shines.");
  auto s = generate_instance(*rig.client, page, NegationLabel::Subcontradiction, mode, "c");
  EXPECT_EQ(s.q1, "Does some part of Sun shine?");
  EXPECT_EQ(s.q2, "Is some part of Sun not shining?");
}

TEST(Instances, VariantsAskForDifferentFacts) {
  Rig rig;
  PageInfo page{"Sun", true, "Sun. A star."};
  auto a = generate_instance(*rig.client, page, NegationLabel::Affixal, GenerationMode::Controlled, "a", 0);
  auto b = generate_instance(*rig.client, page, NegationLabel::Affixal, GenerationMode::Controlled, "b", 1);
  EXPECT_NE(a.q1, b.q1);
}

TEST(Instances, RejectedOutput) {
  Rig rig([](const ChatRequest& r, std::size_t) -> std::string {
    if (test::system_message(r).find("\"word1\"") != std::string::npos) return "not json";
    if (test::system_message(r).find("\"positive_query\"") != std::string::npos)
      return R"({"query":"same","passage":"p","positive_query":"same","positive_passage":"q"})";
    return {};
  });
  PageInfo page{"Sun", true, "Sun. A star."};
  EXPECT_EQ(code_of([&] { generate_instance(*rig.client, page, NegationLabel::PolarAntonym, GenerationMode::Controlled, "a"); }),
            Errc::GenerationRejected);
  EXPECT_EQ(code_of([&] { generate_instance(*rig.client, page, NegationLabel::Implicit, GenerationMode::Controlled, "a"); }),
            Errc::GenerationRejected);
}

TEST(Relevance, FilteringTwentyInstances) {
  Rig rig([](const ChatRequest& r, std::size_t) -> std::string {
    if (test::system_message(r).rfind("You judge search results", 0) != 0) return {};
    auto user = test::user_message(r);
    auto n = std::stoi(user.substr(user.find('#') + 1));
    return n % 4 == 0 ? R"({"relevant": "no"})" : R"({"relevant": true})";
  });
  std::size_t kept = 0;
  for (int i = 0; i < 20; ++i) {
    Instance in{"i", "query #" + std::to_string(i), "d", "other #" + std::to_string(i + 1), "e", {}, {}, {}};
    kept += verify_relevance(*rig.client, in);
  }
  // rejected when i or i + 1 is a multiple of 4
  EXPECT_EQ(kept, 10u);
}

TEST(Pipeline, EndToEndWithIdsInTopicOrder) {
  Rig rig;
  rig.world.missing_pages.insert("Tom Hanks");
  GenerationJob job;
  job.types = {NegationLabel::Sentential, NegationLabel::Contrary, NegationLabel::MidAntonym};
  job.topics_n = 4;
  job.mode = GenerationMode::Free;
  auto r = run_generation(job, *rig.client, *rig.wiki, 3);
  EXPECT_EQ(r.topics.topics.size(), 4u);
  EXPECT_EQ(r.dropped_topics, std::vector<std::string>{"Tom Hanks"});
  ASSERT_EQ(r.instances.size(), 9u);
  EXPECT_EQ(r.instances[0].id, "f00001");
  EXPECT_EQ(r.instances[8].id, "f00009");
  EXPECT_EQ(r.instances[0].topic, "Saturn");
  EXPECT_EQ(r.instances[3].topic, "Photosynthesis");
  EXPECT_EQ(r.generated, 9u);
  auto summary = r.summary();
  EXPECT_EQ(summary["kept"], 9);

  Rig serial_rig;
  serial_rig.world.missing_pages.insert("Tom Hanks");
  auto serial = run_generation(job, *serial_rig.client, *serial_rig.wiki, 1);
  ASSERT_EQ(serial.instances.size(), r.instances.size());
  for (std::size_t i = 0; i < r.instances.size(); ++i)
    EXPECT_EQ(serial.instances[i].to_json(), r.instances[i].to_json());
}

TEST(Stats, DatasetStats) {
  std::vector<Instance> data{
      {"a", "one two", "three", "four five six", "seven", NegationLabel::Sentential, {}, {}},
      {"b", "one", "two three", "four", "five six seven eight", NegationLabel::Affixal, {}, {}},
      {"c", "x y z", "w", "v u", "t", std::nullopt, {}, {}}};
  auto s = dataset_stats(data);
  EXPECT_EQ(s.size, 3u);
  EXPECT_DOUBLE_EQ(s.mean_len_q1, 2.0);
  EXPECT_DOUBLE_EQ(s.mean_len_d2, 2.0);
  EXPECT_EQ(s.per_type.at(NegationLabel::Sentential), 1u);
  EXPECT_EQ(s.untyped, 1u);
  EXPECT_EQ(code_of([] { dataset_stats({}); }), Errc::EmptyDataset);
}

}  // namespace
}  // namespace negtax::datagen
