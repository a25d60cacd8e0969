#include "negtax/dataset.hpp"

#include <fstream>
#include <sstream>

#include "negtax/error.hpp"
#include "negtax/text.hpp"

namespace negtax {

using json = nlohmann::json;

void Instance::validate() const {
  auto blank = [](const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; };
  if (id.empty()) throw Error(Errc::ShapeError, "instance without id");
  if (blank(q1) || blank(d1) || blank(q2) || blank(d2))
    throw Error(Errc::ShapeError, "instance " + id + " has an empty text");
  if (q1 == q2) throw Error(Errc::ShapeError, "instance " + id + " has q1 == q2");
  if (d1 == d2) throw Error(Errc::ShapeError, "instance " + id + " has d1 == d2");
}

nlohmann::ordered_json Instance::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["type"] = gold ? json(std::string(to_string(*gold))) : json(nullptr);
  j["q1"] = q1;
  j["d1"] = d1;
  j["q2"] = q2;
  j["d2"] = d2;
  j["topic"] = topic ? json(*topic) : json(nullptr);
  j["page"] = source_page ? json(*source_page) : json(nullptr);
  return j;
}

DatasetFormat dataset_format_from_string(std::string_view s) {
  if (s == "native") return DatasetFormat::Native;
  if (s == "nevir") return DatasetFormat::Nevir;
  if (s == "excluir") return DatasetFormat::Excluir;
  throw Error(Errc::Usage, "unknown dataset format '" + std::string(s) + "'");
}

std::string_view to_string(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::Native: return "native";
    case DatasetFormat::Nevir: return "nevir";
    case DatasetFormat::Excluir: return "excluir";
  }
  return "?";
}

namespace {

std::string text_field(const json& rec, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = rec.find(k);
    if (it == rec.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
    throw Error(Errc::ShapeError, std::string("column '") + k + "' is not a string");
  }
  std::string names;
  for (const char* k : keys) names += (names.empty() ? "" : "/") + std::string(k);
  throw Error(Errc::ShapeError, "missing column " + names);
}

std::optional<std::string> optional_field(const json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(Errc::ShapeError, std::string("column '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

Instance instance_from_record(const json& rec, DatasetFormat format) {
  if (!rec.is_object()) throw Error(Errc::ShapeError, "record is not a JSON object");
  Instance in;
  switch (format) {
    case DatasetFormat::Native:
      in.id = text_field(rec, {"id"});
      in.q1 = text_field(rec, {"q1"});
      in.d1 = text_field(rec, {"d1"});
      in.q2 = text_field(rec, {"q2"});
      in.d2 = text_field(rec, {"d2"});
      if (auto t = optional_field(rec, "type"); t && !t->empty()) in.gold = label_from_string(*t);
      in.topic = optional_field(rec, "topic");
      in.source_page = optional_field(rec, "page");
      break;
    case DatasetFormat::Nevir:
      // negation sits in the first pair
      in.id = text_field(rec, {"id", "pair_id"});
      in.q1 = text_field(rec, {"q1"});
      in.d1 = text_field(rec, {"doc1", "d1"});
      in.q2 = text_field(rec, {"q2"});
      in.d2 = text_field(rec, {"doc2", "d2"});
      break;
    case DatasetFormat::Excluir:
      // negation (exclusion) sits in the second pair; order is kept as is
      in.id = text_field(rec, {"id", "qid", "pair_id"});
      in.q1 = text_field(rec, {"query1", "q1", "question1"});
      in.d1 = text_field(rec, {"doc1", "d1", "passage1"});
      in.q2 = text_field(rec, {"query2", "q2", "question2"});
      in.d2 = text_field(rec, {"doc2", "d2", "passage2"});
      break;
  }
  in.validate();
  return in;
}

LoadedDataset read_dataset(std::istream& in, DatasetFormat format, bool csv, double max_malformed_fraction) {
  LoadedDataset out;
  auto take = [&](std::size_t line, const json& rec) {
    ++out.records;
    try {
      out.instances.push_back(instance_from_record(rec, format));
    } catch (const Error& e) {
      out.malformed.push_back({line, e.what()});
    }
  };
  if (csv) {
    auto rows = read_csv(in);
    if (rows.size() > 1) {
      const auto& header = rows[0];
      for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size()) {
          ++out.records;
          out.malformed.push_back({r + 1, "expected " + std::to_string(header.size()) + " columns"});
          continue;
        }
        json rec = json::object();
        for (std::size_t c = 0; c < header.size(); ++c) rec[trim(header[c])] = rows[r][c];
        take(r + 1, rec);
      }
    }
  } else {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (trim(line).empty()) continue;
      json rec = json::parse(line, nullptr, false);
      if (rec.is_discarded()) {
        ++out.records;
        out.malformed.push_back({n, "invalid JSON"});
        continue;
      }
      take(n, rec);
    }
  }
  if (out.records == 0) throw Error(Errc::EmptyDataset, "dataset has no records");
  if (static_cast<double>(out.malformed.size()) > max_malformed_fraction * static_cast<double>(out.records))
    throw Error(Errc::ShapeError, std::to_string(out.malformed.size()) + " of " + std::to_string(out.records) +
                                      " records are malformed (first at line " +
                                      std::to_string(out.malformed.front().line) + ": " +
                                      out.malformed.front().reason + ")");
  return out;
}

LoadedDataset read_dataset(const std::filesystem::path& path, DatasetFormat format, double max_malformed_fraction) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ResourceError, "cannot open dataset " + path.string());
  return read_dataset(in, format, path.extension() == ".csv", max_malformed_fraction);
}

void write_dataset(std::ostream& out, const std::vector<Instance>& instances) {
  for (const auto& in : instances) out << in.to_json().dump() << '\n';
}

void write_dataset(const std::filesystem::path& path, const std::vector<Instance>& instances) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::ResourceError, "cannot write " + path.string());
  write_dataset(out, instances);
}

}  // namespace negtax
