#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace negtax {

/// Lowercases ASCII letters and deletes ASCII punctuation, then splits on
/// whitespace. Non-ASCII bytes pass through untouched.
std::vector<std::string> tokenize(std::string_view text);

/// Number of whitespace-separated tokens (punctuation is not removed).
std::size_t word_count(std::string_view text);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// RFC 4180 records: quoted fields may hold commas, doubled quotes and
/// newlines. Throws Errc::ShapeError on an unterminated quote.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace negtax
