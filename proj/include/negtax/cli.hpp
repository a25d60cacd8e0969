#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "negtax/evalharness.hpp"
#include "negtax/oracle.hpp"

namespace negtax::cli {

struct Config {
  oracle::OracleConfig oracle;
  std::filesystem::path wordnet_dir;
  std::string wikipedia_endpoint = "https://en.wikipedia.org/w/api.php";
  eval::Bm25Params bm25;
  std::size_t batch_size = 64;
  unsigned timeout_s = 120;
  std::int64_t seed = 0;
};

/// Reads an INI file: top-level seed / wordnet_dir / wikipedia_endpoint,
/// [oracle] endpoint, model, temperature, generation_temperature,
/// rate_limit, max_concurrency, max_retries, mode, transcript_dir, and
/// [eval] k1, b, batch_size, timeout_s. Relative paths resolve against the
/// file's directory. Throws Errc::Usage on unknown keys or bad values.
Config load_config(const std::filesystem::path& path);

/// Maps an error code to the process exit status: 2 usage or input shape,
/// 3 external service, 4 oracle exhaustion.
int exit_code(Errc code);

/// Runs one command. Results go to `out`, diagnostics and the error JSON
/// to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace negtax::cli
