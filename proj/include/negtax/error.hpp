#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace negtax {

enum class Errc {
  NoCueLexicon,
  NoScope,
  InvalidExclusion,
  ParseError,
  UnboundVar,
  Precondition,
  OracleError,
  ReplayMiss,
  ProofRejected,
  TransportError,
  ResourceError,
  NotAntonyms,
  ProofMissing,
  ShapeError,
  GenerationRejected,
  GroundingError,
  EmptyDataset,
  NotIndexed,
  BridgeProtocolError,
  BridgeTimeout,
  MissingQrels,
  UndefinedKappa,
  UndefinedMetric,
  Usage,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Byte offset into the input plus a description of what the parser wanted.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected)
      : Error(Errc::ParseError, "parse error at byte " + std::to_string(offset) +
                                    ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class OracleError : public Error {
 public:
  OracleError(const std::string& what, std::string last_raw, std::string reason)
      : Error(Errc::OracleError, what),
        last_raw_(std::move(last_raw)),
        reason_(std::move(reason)) {}

  const std::string& last_raw() const noexcept { return last_raw_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string last_raw_;
  std::string reason_;
};

class ReplayMiss : public Error {
 public:
  explicit ReplayMiss(std::string request_hash)
      : Error(Errc::ReplayMiss, "no stored transcript for request " + request_hash),
        request_hash_(std::move(request_hash)) {}

  const std::string& request_hash() const noexcept { return request_hash_; }

 private:
  std::string request_hash_;
};

class BridgeProtocolError : public Error {
 public:
  BridgeProtocolError(const std::string& what, std::string line)
      : Error(Errc::BridgeProtocolError, what + ": " + line), line_(std::move(line)) {}

  const std::string& line() const noexcept { return line_; }

 private:
  std::string line_;
};

}  // namespace negtax
