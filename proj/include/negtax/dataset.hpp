#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "negtax/taxonomy.hpp"

namespace negtax {

/// Contrastive quadruple: d1 answers q1, d2 answers q2.
struct Instance {
  std::string id;
  std::string q1, d1, q2, d2;
  std::optional<NegationLabel> gold;
  std::optional<std::string> topic;
  std::optional<std::string> source_page;

  /// Throws Errc::ShapeError when a text is empty or q1 == q2 / d1 == d2.
  void validate() const;

  /// One native JSONL record: id, type, q1, d1, q2, d2, topic, page.
  nlohmann::ordered_json to_json() const;
};

enum class DatasetFormat { Native, Nevir, Excluir };

DatasetFormat dataset_format_from_string(std::string_view s);
std::string_view to_string(DatasetFormat f);

/// Maps one record of the given layout to an Instance and validates it.
/// Throws Errc::ShapeError for missing columns or invalid instances.
Instance instance_from_record(const nlohmann::json& record, DatasetFormat format);

struct MalformedLine {
  std::size_t line;  // 1-based
  std::string reason;
};

struct LoadedDataset {
  std::vector<Instance> instances;
  std::vector<MalformedLine> malformed;
  std::size_t records = 0;
};

/// Reads JSONL (or CSV with a header row when the file ends in .csv).
/// Malformed records are skipped and listed. Throws Errc::EmptyDataset for
/// a file with no records, Errc::ShapeError when more than
/// `max_malformed_fraction` of the records are malformed, and
/// Errc::ResourceError when the file cannot be opened.
LoadedDataset read_dataset(const std::filesystem::path& path, DatasetFormat format,
                           double max_malformed_fraction = 0.10);
LoadedDataset read_dataset(std::istream& in, DatasetFormat format, bool csv = false,
                           double max_malformed_fraction = 0.10);

void write_dataset(std::ostream& out, const std::vector<Instance>& instances);
void write_dataset(const std::filesystem::path& path, const std::vector<Instance>& instances);

}  // namespace negtax
