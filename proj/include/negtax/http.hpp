#pragma once

#include <chrono>
#include <map>
#include <string>

#include "negtax/oracle.hpp"

namespace negtax::http {

struct Url {
  std::string scheme;  // http or https
  std::string host;
  int port = 0;
  std::string path;  // includes any query string, starts with '/'
  std::string origin() const;
};

/// Throws Errc::Usage on anything but http(s)://host[:port][/path].
Url parse_url(std::string_view url);

struct Response {
  int status = 0;
  std::string body;
};

/// One blocking request. Connection failures throw Errc::TransportError;
/// HTTP error statuses are returned, not thrown.
Response request(const std::string& method, const std::string& url, const std::string& body,
                 const std::map<std::string, std::string>& headers, std::chrono::seconds timeout);

/// Percent-encodes a query-string component.
std::string url_encode(std::string_view s);

/// POSTs chat-completions requests with a bearer token.
class HttpChatTransport final : public oracle::ChatTransport {
 public:
  HttpChatTransport(std::string endpoint, std::string api_key,
                    std::chrono::seconds timeout = std::chrono::seconds(120));
  std::string send(const oracle::ChatRequest& request) override;

 private:
  std::string endpoint_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

}  // namespace negtax::http
