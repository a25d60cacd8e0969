#include "negtax/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "negtax/classifier.hpp"
#include "negtax/datagen.hpp"
#include "negtax/dataset.hpp"
#include "negtax/error.hpp"
#include "negtax/http.hpp"
#include "negtax/lexnet.hpp"
#include "negtax/stats.hpp"
#include "negtax/text.hpp"

namespace negtax::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  is >> v;
  if (!is || !(is >> std::ws).eof()) throw Error(Errc::Usage, "config key '" + key + "' has an invalid value '" + text + "'");
  return v;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : fs::absolute(base / path).lexically_normal();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ResourceError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::ResourceError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::ResourceError, "failed writing " + path.string());
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

Config load_config(const fs::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    if (!fs::exists(path)) throw Error(Errc::ResourceError, "cannot open config " + path.string());
    throw Error(Errc::Usage, std::string("bad config file: ") + e.what());
  }
  const fs::path base = fs::absolute(path).parent_path();
  Config c;
  for (const auto& [key, node] : tree) {
    const auto value = node.get_value<std::string>();
    if (key == "seed") c.seed = parse_value<std::int64_t>(key, value);
    else if (key == "wordnet_dir") c.wordnet_dir = resolve(base, value);
    else if (key == "wikipedia_endpoint") c.wikipedia_endpoint = value;
    else if (key == "oracle") {
      for (const auto& [k, v] : node) {
        const auto s = v.get_value<std::string>();
        const auto full = "oracle." + k;
        if (k == "endpoint") c.oracle.endpoint = s;
        else if (k == "model") c.oracle.model = s;
        else if (k == "temperature") c.oracle.classification_temperature = parse_value<double>(full, s);
        else if (k == "generation_temperature") c.oracle.generation_temperature = parse_value<double>(full, s);
        else if (k == "rate_limit") c.oracle.rate_limit_per_minute = parse_value<unsigned>(full, s);
        else if (k == "max_concurrency") c.oracle.max_concurrency = parse_value<unsigned>(full, s);
        else if (k == "max_retries") c.oracle.max_retries = parse_value<int>(full, s);
        else if (k == "mode") c.oracle.mode = oracle::transport_mode_from_string(s);
        else if (k == "transcript_dir") c.oracle.transcript_dir = resolve(base, s);
        else throw Error(Errc::Usage, "unknown config key '" + full + "'");
      }
    } else if (key == "eval") {
      for (const auto& [k, v] : node) {
        const auto s = v.get_value<std::string>();
        const auto full = "eval." + k;
        if (k == "k1") c.bm25.k1 = parse_value<double>(full, s);
        else if (k == "b") c.bm25.b = parse_value<double>(full, s);
        else if (k == "batch_size") c.batch_size = parse_value<std::size_t>(full, s);
        else if (k == "timeout_s") c.timeout_s = parse_value<unsigned>(full, s);
        else throw Error(Errc::Usage, "unknown config key '" + full + "'");
      }
    } else {
      throw Error(Errc::Usage, "unknown config key '" + key + "'");
    }
  }
  return c;
}

int exit_code(Errc code) {
  switch (code) {
    case Errc::TransportError:
    case Errc::BridgeProtocolError:
    case Errc::BridgeTimeout:
    case Errc::GroundingError:
    case Errc::ReplayMiss:
      return 3;
    case Errc::OracleError:
    case Errc::ProofRejected:
    case Errc::GenerationRejected:
      return 4;
    default:
      return 2;
  }
}

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::string transcripts;
  std::string oracle_mode;
  std::string endpoint;
  std::string model;
  std::string wordnet;
  std::optional<unsigned> workers;
};

struct Context {
  Config config;
  unsigned workers = 1;
  std::ostream& out;
  std::ostream& err;
};

Config effective_config(const Globals& g) {
  Config c = g.config_path.empty() ? Config{} : load_config(g.config_path);
  if (g.seed) c.seed = *g.seed;
  if (!g.transcripts.empty()) c.oracle.transcript_dir = fs::absolute(g.transcripts).lexically_normal();
  if (!g.oracle_mode.empty()) c.oracle.mode = oracle::transport_mode_from_string(g.oracle_mode);
  if (!g.endpoint.empty()) c.oracle.endpoint = g.endpoint;
  if (!g.model.empty()) c.oracle.model = g.model;
  if (!g.wordnet.empty()) c.wordnet_dir = fs::absolute(g.wordnet).lexically_normal();
  c.oracle.seed = c.seed;
  return c;
}

std::shared_ptr<oracle::OracleClient> make_oracle(const Config& config, oracle::TransportMode mode) {
  auto oc = config.oracle;
  oc.mode = mode;
  std::shared_ptr<oracle::ChatTransport> transport;
  if (mode != oracle::TransportMode::Replay) {
    const char* key = std::getenv("NEGTAX_API_KEY");
    if (!key || !*key)
      throw Error(Errc::Usage, std::string(oracle::to_string(mode)) + " oracle mode needs NEGTAX_API_KEY in the environment");
    transport = std::make_shared<http::HttpChatTransport>(oc.endpoint, key);
  }
  return std::make_shared<oracle::OracleClient>(oc, transport);
}

std::optional<lexnet::AntonymIndex> load_wordnet(const Context& ctx) {
  if (ctx.config.wordnet_dir.empty()) {
    ctx.err << "warning: no WordNet directory configured; the antonym step is skipped\n";
    return std::nullopt;
  }
  return lexnet::AntonymIndex::load(ctx.config.wordnet_dir);
}

LoadedDataset load_input(const Context& ctx, const std::string& path, DatasetFormat format) {
  auto loaded = read_dataset(path, format);
  for (const auto& m : loaded.malformed) ctx.err << "warning: line " << m.line << " skipped: " << m.reason << "\n";
  return loaded;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string mode = "free";
  std::string types = "all";
  std::size_t topics = 100;
  std::size_t per_topic = 1;
  std::string out;
  std::string stats;
  std::string wiki_endpoint;
  bool self_check = false;
};

std::vector<NegationLabel> parse_types(const std::string& spec) {
  if (to_lower(trim(spec)) == "all") return datagen::default_generation_types();
  std::vector<NegationLabel> out;
  std::istringstream is(spec);
  std::string part;
  while (std::getline(is, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    auto l = try_label_from_string(part);
    if (!l) throw Error(Errc::Usage, "unknown negation type '" + part + "'");
    if (std::find(out.begin(), out.end(), *l) == out.end()) out.push_back(*l);
  }
  if (out.empty()) throw Error(Errc::Usage, "--types is empty");
  return out;
}

int cmd_generate(Context& ctx, const GenerateArgs& a) {
  datagen::GenerationJob job;
  job.mode = datagen::generation_mode_from_string(a.mode);
  job.types = parse_types(a.types);
  job.topics_n = a.topics;
  job.per_topic_instances = a.per_topic;
  job.seed = ctx.config.seed;
  job.validate();

  const auto mode = ctx.config.oracle.mode;
  auto client = make_oracle(ctx.config, mode);
  std::shared_ptr<datagen::HttpGetter> getter;
  if (mode != oracle::TransportMode::Replay) getter = std::make_shared<datagen::DefaultHttpGetter>();
  datagen::WikiClient wiki(a.wiki_endpoint.empty() ? ctx.config.wikipedia_endpoint : a.wiki_endpoint, mode,
                           client->store(), getter);

  auto result = datagen::run_generation(job, *client, wiki, ctx.workers);
  for (const auto& e : result.events) ctx.err << "note: [" << e.stage << "] " << e.topic << ": " << e.message << "\n";
  if (result.topics.shortfall)
    ctx.err << "warning: " << result.topics.shortfall << " topic(s) short after " << result.topics.rounds << " rounds\n";

  std::ostringstream data;
  write_dataset(data, result.instances);
  write_file(a.out, data.str());

  ojson summary;
  summary["mode"] = datagen::to_string(job.mode);
  summary["seed"] = job.seed;
  ojson types = ojson::array();
  for (auto t : job.types) types.push_back(std::string(to_string(t)));
  summary["types"] = std::move(types);
  const auto result_summary = result.summary();
  for (const auto& [k, v] : result_summary.items()) summary[k] = v;

  if (a.self_check && !result.instances.empty()) {
    auto index = load_wordnet(ctx);
    classifier::OracleProofSource proofs(client);
    auto cls = classifier::classify_dataset(result.instances, proofs, index ? &*index : nullptr, ctx.workers);
    auto sc = classifier::self_consistency(result.instances, cls);
    summary["self_consistency"] = sc ? ojson(*sc) : ojson(nullptr);
  }
  const auto stats_path = a.stats.empty() ? fs::path(a.out).replace_extension(".stats.json") : fs::path(a.stats);
  write_file(stats_path, dump(summary));
  ctx.out << dump(summary);
  return 0;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string in;
  std::string out;
  std::string report;
  std::string markdown;
  std::string format = "native";
  std::string proofs;
};

int cmd_classify(Context& ctx, const ClassifyArgs& a) {
  const auto format = dataset_format_from_string(a.format);
  auto loaded = load_input(ctx, a.in, format);

  std::unique_ptr<classifier::ProofSource> source;
  const std::string proofs = a.proofs.empty() ? std::string(oracle::to_string(ctx.config.oracle.mode)) : a.proofs;
  if (proofs.rfind("fixture:", 0) == 0) {
    source = std::make_unique<classifier::FixtureProofSource>(classifier::FixtureProofSource::load(proofs.substr(8)));
  } else {
    source = std::make_unique<classifier::OracleProofSource>(
        make_oracle(ctx.config, oracle::transport_mode_from_string(proofs)));
  }
  auto index = load_wordnet(ctx);
  auto result = classifier::classify_dataset(loaded.instances, *source, index ? &*index : nullptr, ctx.workers);
  for (const auto& s : result.skipped) ctx.err << "warning: instance " << s.id << " skipped: " << s.error << "\n";

  std::string traces;
  for (const auto& t : result.traces) traces += t.to_json().dump() + "\n";
  if (!a.out.empty()) write_file(a.out, traces);

  ojson report = result.report.to_json();
  ojson skipped = ojson::array();
  for (const auto& s : result.skipped) skipped.push_back({{"id", s.id}, {"error", s.error}});
  report["skipped_instances"] = std::move(skipped);
  ojson malformed = ojson::array();
  for (const auto& m : loaded.malformed) malformed.push_back({{"line", m.line}, {"reason", m.reason}});
  report["malformed_lines"] = std::move(malformed);
  if (!a.report.empty()) write_file(a.report, dump(report));
  const auto md = result.report.to_markdown();
  if (!a.markdown.empty()) write_file(a.markdown, md);
  ctx.out << md;
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string in;
  std::string format = "native";
  std::vector<std::string> scorers{"bm25"};
  std::string report;
  std::string markdown;
  std::optional<std::size_t> batch_size;
  std::optional<unsigned> timeout_s;
  std::optional<double> k1, b;
};

std::unique_ptr<eval::Scorer> make_scorer(const std::string& spec, const std::vector<Instance>& instances,
                                          const Config& config) {
  const std::chrono::seconds timeout(config.timeout_s);
  if (spec == "bm25") return std::make_unique<eval::Bm25Scorer>(eval::build_pool(instances, config.bm25));
  if (spec.rfind("cmd:", 0) == 0) return std::make_unique<eval::SubprocessScorer>(eval::split_command(spec.substr(4)), timeout);
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) return std::make_unique<eval::HttpScorer>(spec, timeout);
  if (spec.rfind("http:", 0) == 0) return std::make_unique<eval::HttpScorer>(spec.substr(5), timeout);
  throw Error(Errc::Usage, "unknown scorer '" + spec + "' (expected bm25, cmd:<argv> or http:<url>)");
}

int cmd_evaluate(Context& ctx, const EvaluateArgs& a) {
  auto config = ctx.config;
  if (a.batch_size) config.batch_size = *a.batch_size;
  if (a.timeout_s) config.timeout_s = *a.timeout_s;
  if (a.k1) config.bm25.k1 = *a.k1;
  if (a.b) config.bm25.b = *a.b;
  config.bm25.validate();
  if (config.batch_size < 4) throw Error(Errc::Usage, "batch size must be at least 4");

  auto loaded = load_input(ctx, a.in, dataset_format_from_string(a.format));
  std::vector<eval::EvalReport> reports;
  for (const auto& spec : a.scorers) {
    auto scorer = make_scorer(spec, loaded.instances, config);
    reports.push_back(eval::pairwise_accuracy(loaded.instances, *scorer, {config.batch_size}));
    if (reports.back().errored)
      ctx.err << "warning: " << reports.back().errored << " instance(s) errored with scorer " << reports.back().scorer << "\n";
  }
  if (!a.report.empty()) {
    ojson j;
    if (reports.size() == 1) {
      j = reports.front().to_json();
    } else {
      j = ojson::array();
      for (const auto& r : reports) j.push_back(r.to_json());
    }
    write_file(a.report, dump(j));
  }
  const auto md = eval::render_markdown(reports);
  if (!a.markdown.empty()) write_file(a.markdown, md);
  ctx.out << md;
  return 0;
}

// ------------------------------------------------------------------- stats

struct StatsArgs {
  std::string annotations;
  std::string groups;
  std::string test;
  double alpha = 0.05;
  std::string weighting = "linear";
};

stats::GroupedSamples read_groups(const std::string& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(Errc::ShapeError, path + " is not valid JSON");
  stats::GroupedSamples g;
  auto take = [&](const std::string& name, const json& values) {
    if (!values.is_array()) throw Error(Errc::ShapeError, "group '" + name + "' is not an array of numbers");
    auto& v = g[name];
    for (const auto& x : values) {
      if (!x.is_number()) throw Error(Errc::ShapeError, "group '" + name + "' holds a non-number");
      v.push_back(x.get<double>());
    }
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) take(k, v);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) take("g" + std::to_string(i + 1), j[i]);
  } else {
    throw Error(Errc::ShapeError, "groups must be a JSON object or array of arrays");
  }
  return g;
}

std::optional<bool> yes(const std::string& s) {
  auto l = to_lower(trim(s));
  if (l == "yes" || l == "y" || l == "true" || l == "1") return true;
  if (l == "no" || l == "n" || l == "false" || l == "0") return false;
  return std::nullopt;
}

ojson f1_report(const std::vector<stats::Annotation>& rows) {
  std::set<std::string> raters;
  for (const auto& r : rows) raters.insert(r.rater);
  if (raters.size() < 2) throw Error(Errc::ShapeError, "f1 needs two raters");
  const auto ref = *raters.begin();
  const auto other = *std::next(raters.begin());
  std::map<std::string, std::map<std::string, std::pair<std::optional<bool>, std::optional<bool>>>> by_question;
  std::set<std::string> non_binary;
  for (const auto& r : rows) {
    auto answer = yes(r.answer);
    if (!answer) {
      non_binary.insert(r.question);
      continue;
    }
    auto& cell = by_question[r.question][r.item];
    if (r.rater == ref) cell.first = answer;
    else if (r.rater == other) cell.second = answer;
  }
  ojson out;
  out["reference"] = ref;
  out["compared"] = other;
  ojson results = ojson::object();
  for (const auto& q : non_binary) results[q] = {{"skipped", "answers are not yes/no"}};
  for (const auto& [q, items] : by_question) {
    if (non_binary.count(q)) continue;
    std::vector<bool> gold, pred;
    for (const auto& [item, ab] : items)
      if (ab.first && ab.second) {
        gold.push_back(*ab.first);
        pred.push_back(*ab.second);
      }
    ojson e;
    e["n"] = gold.size();
    try {
      e["f1"] = stats::f1_binary(pred, gold);
    } catch (const Error& err) {
      e["f1"] = nullptr;
      e["error"] = std::string(errc_name(err.code())) + ": " + err.what();
    }
    results[q] = std::move(e);
  }
  if (results.empty()) throw Error(Errc::ShapeError, "no yes/no questions in the annotations");
  out["results"] = std::move(results);
  return out;
}

int cmd_stats(Context& ctx, const StatsArgs& a) {
  if (a.annotations.empty() == a.groups.empty()) throw Error(Errc::Usage, "give exactly one of --annotations or --groups");
  ojson out;
  out["test"] = a.test;
  if (a.test == "kappa" || a.test == "f1") {
    if (a.annotations.empty()) throw Error(Errc::ShapeError, "--test " + a.test + " needs --annotations CSV input");
    std::ifstream in(a.annotations);
    if (!in) throw Error(Errc::ResourceError, "cannot open " + a.annotations);
    auto rows = stats::read_annotations(in);
    if (a.test == "kappa") {
      const auto w = stats::weighting_from_string(a.weighting);
      out["ordinal_weighting"] = stats::to_string(w);
      out["results"] = stats::annotation_report(rows, w);
    } else {
      const auto f1 = f1_report(rows);
      for (const auto& [k, v] : f1.items()) out[k] = v;
    }
  } else if (a.test == "anova" || a.test == "tukey") {
    if (a.groups.empty()) throw Error(Errc::ShapeError, "--test " + a.test + " needs --groups JSON input");
    auto g = read_groups(a.groups);
    if (a.test == "anova") {
      auto r = stats::one_way_anova(g);
      out["f"] = std::isfinite(r.f) ? ojson(r.f) : ojson("inf");
      out["p"] = r.p;
      out["df_between"] = r.df_between;
      out["df_within"] = r.df_within;
      out["ss_between"] = r.ss_between;
      out["ss_within"] = r.ss_within;
      out["degenerate_variance"] = r.degenerate_variance;
    } else {
      out["alpha"] = a.alpha;
      ojson pairs = ojson::array();
      for (const auto& p : stats::tukey_hsd(g, a.alpha))
        pairs.push_back({{"a", p.a}, {"b", p.b}, {"mean_diff", p.mean_diff}, {"q", p.q}, {"p_adj", p.p_adj},
                         {"significant", p.significant}});
      out["pairs"] = std::move(pairs);
    }
  } else {
    throw Error(Errc::Usage, "unknown test '" + a.test + "'");
  }
  ctx.out << dump(out);
  return 0;
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  std::vector<std::string> evals;
  std::vector<std::string> datasets;
  std::string format = "native";
  std::string out;
};

std::string stats_markdown(const std::vector<std::pair<std::string, datagen::DatasetStats>>& sets) {
  auto f2 = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
  };
  std::ostringstream os;
  os << "| Dataset | Size | q1 | d1 | q2 | d2 |\n|---|---:|---:|---:|---:|---:|\n";
  for (const auto& [name, s] : sets)
    os << "| " << name << " | " << s.size << " | " << f2(s.mean_len_q1) << " | " << f2(s.mean_len_d1) << " | "
       << f2(s.mean_len_q2) << " | " << f2(s.mean_len_d2) << " |\n";
  os << "\nMean lengths in words.\n\n| Type |";
  for (const auto& [name, s] : sets) os << ' ' << name << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < sets.size(); ++i) os << "---:|";
  os << '\n';
  for (auto l : kAllLabels) {
    bool any = false;
    for (const auto& [name, s] : sets) any = any || s.per_type.count(l);
    if (!any) continue;
    os << "| " << display_name(l) << " |";
    for (const auto& [name, s] : sets) {
      auto it = s.per_type.find(l);
      os << ' ' << (it == s.per_type.end() ? 0 : it->second) << " |";
    }
    os << '\n';
  }
  return os.str();
}

int cmd_report(Context& ctx, const ReportArgs& a) {
  if (a.evals.empty() && a.datasets.empty()) throw Error(Errc::Usage, "give --eval and/or --dataset inputs");
  std::string md;
  if (!a.datasets.empty()) {
    std::vector<std::pair<std::string, datagen::DatasetStats>> sets;
    for (const auto& p : a.datasets)
      sets.emplace_back(fs::path(p).filename().string(),
                        datagen::dataset_stats(load_input(ctx, p, dataset_format_from_string(a.format)).instances));
    md += "## Datasets\n\n" + stats_markdown(sets);
  }
  if (!a.evals.empty()) {
    std::vector<eval::EvalReport> reports;
    for (const auto& p : a.evals) {
      json j = json::parse(read_file(p), nullptr, false);
      if (j.is_discarded()) throw Error(Errc::ShapeError, p + " is not valid JSON");
      if (j.is_array())
        for (const auto& r : j) reports.push_back(eval::EvalReport::from_json(r));
      else
        reports.push_back(eval::EvalReport::from_json(j));
    }
    if (!md.empty()) md += "\n";
    md += "## Pairwise accuracy\n\n" + eval::render_markdown(reports);
  }
  if (!a.out.empty()) write_file(a.out, md);
  ctx.out << md;
  return 0;
}

void report_error(std::ostream& err, const Error& e) {
  ojson j;
  j["error"] = errc_name(e.code());
  j["message"] = e.what();
  j["exit_code"] = exit_code(e.code());
  if (auto* p = dynamic_cast<const ParseError*>(&e)) j["offset"] = p->offset();
  if (auto* o = dynamic_cast<const OracleError*>(&e)) {
    j["reason"] = o->reason();
    j["last_raw"] = o->last_raw().substr(0, 2000);
  }
  if (auto* r = dynamic_cast<const ReplayMiss*>(&e)) j["request_hash"] = r->request_hash();
  if (auto* b = dynamic_cast<const BridgeProtocolError*>(&e)) j["line"] = b->line().substr(0, 2000);
  err << j.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Negation taxonomy toolkit: generate, classify and evaluate contrastive IR datasets.", "negtax"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed passed to the oracle");
  app.add_option("--transcripts", g.transcripts, "Oracle transcript directory");
  app.add_option("--oracle-mode", g.oracle_mode, "live, record or replay");
  app.add_option("--endpoint", g.endpoint, "Chat-completions endpoint");
  app.add_option("--model", g.model, "Oracle model name");
  app.add_option("--wordnet", g.wordnet, "WordNet 3.0 dict directory");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a synthetic contrastive dataset");
  gen->add_option("--mode", ga.mode, "free or controlled")->check(CLI::IsMember({"free", "controlled"}));
  gen->add_option("--types", ga.types, "Comma-separated negation types, or all");
  gen->add_option("--topics", ga.topics, "Number of topics")->check(CLI::PositiveNumber);
  gen->add_option("--per-topic", ga.per_topic, "Instances per type and topic")->check(CLI::PositiveNumber);
  gen->add_option("--out", ga.out, "Output dataset JSONL")->required();
  gen->add_option("--stats", ga.stats, "Stats JSON (default: <out>.stats.json)");
  gen->add_option("--wiki-endpoint", ga.wiki_endpoint, "Wiki query API endpoint");
  gen->add_flag("--self-check", ga.self_check, "Classify the generated instances and report self-consistency");

  ClassifyArgs ca;
  auto* cls = app.add_subcommand("classify", "Label each instance with its negation type");
  cls->add_option("--in", ca.in, "Input dataset")->required();
  cls->add_option("--out", ca.out, "Trace JSONL");
  cls->add_option("--report", ca.report, "Report JSON");
  cls->add_option("--markdown", ca.markdown, "Report Markdown");
  cls->add_option("--format", ca.format, "native, nevir or excluir")->check(CLI::IsMember({"native", "nevir", "excluir"}));
  cls->add_option("--proofs", ca.proofs, "live, record, replay or fixture:PATH");

  EvaluateArgs ea;
  auto* ev = app.add_subcommand("evaluate", "Pairwise accuracy of one or more scorers");
  ev->add_option("--in", ea.in, "Input dataset")->required();
  ev->add_option("--format", ea.format, "native, nevir or excluir")->check(CLI::IsMember({"native", "nevir", "excluir"}));
  ev->add_option("--scorer", ea.scorers, "bm25, cmd:<argv> or http:<url>; repeatable");
  ev->add_option("--report", ea.report, "Report JSON");
  ev->add_option("--markdown", ea.markdown, "Report Markdown");
  ev->add_option("--batch-size", ea.batch_size, "Pairs per scorer call");
  ev->add_option("--timeout", ea.timeout_s, "Scorer timeout in seconds")->check(CLI::PositiveNumber);
  ev->add_option("--k1", ea.k1, "BM25 k1");
  ev->add_option("--b", ea.b, "BM25 b");

  StatsArgs sa;
  auto* st = app.add_subcommand("stats", "Agreement and significance tests");
  auto* ann = st->add_option("--annotations", sa.annotations, "Annotation CSV");
  auto* grp = st->add_option("--groups", sa.groups, "Groups JSON");
  ann->excludes(grp);
  st->add_option("--test", sa.test, "kappa, anova, tukey or f1")
      ->required()
      ->check(CLI::IsMember({"kappa", "anova", "tukey", "f1"}));
  st->add_option("--alpha", sa.alpha, "Significance level for tukey");
  st->add_option("--weighting", sa.weighting, "Ordinal kappa weighting: none, linear or quadratic");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "Markdown tables from evaluation reports and datasets");
  rep->add_option("--eval", ra.evals, "Evaluation report JSON; repeatable");
  rep->add_option("--dataset", ra.datasets, "Dataset for length and type statistics; repeatable");
  rep->add_option("--format", ra.format, "Dataset format")->check(CLI::IsMember({"native", "nevir", "excluir"}));
  rep->add_option("--out", ra.out, "Markdown output");

  std::vector<std::string> argv_store;
  argv_store.push_back("negtax");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, Error(Errc::Usage, e.what()));
    return 2;
  }

  try {
    Context ctx{effective_config(g), 1, out, err};
    ctx.workers = g.workers.value_or(std::max(1u, ctx.config.oracle.max_concurrency));
    if (*gen) return cmd_generate(ctx, ga);
    if (*cls) return cmd_classify(ctx, ca);
    if (*ev) return cmd_evaluate(ctx, ea);
    if (*st) return cmd_stats(ctx, sa);
    return cmd_report(ctx, ra);
  } catch (const Error& e) {
    report_error(err, e);
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    report_error(err, Error(Errc::ResourceError, e.what()));
    return 2;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, Error(Errc::ShapeError, e.what()));
    return 2;
  }
}

}  // namespace negtax::cli
