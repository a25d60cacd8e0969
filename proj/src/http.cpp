#include "negtax/http.hpp"

#include <cctype>

#include <httplib.h>

#include "negtax/error.hpp"

namespace negtax::http {

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

Url parse_url(std::string_view url_view) {
  // std::string rather than string_view: gcc 11 warns spuriously on find()
  const std::string url(url_view);
  Url u;
  auto sep = url.find("://");
  if (sep == std::string::npos) throw Error(Errc::Usage, "URL without scheme: " + url);
  u.scheme = url.substr(0, sep);
  if (u.scheme != "http" && u.scheme != "https")
    throw Error(Errc::Usage, "unsupported URL scheme: " + url);
  std::string rest = url.substr(sep + 3);
  auto slash = rest.find('/');
  std::string hostport = rest.substr(0, slash);
  u.path = slash == std::string::npos ? "/" : rest.substr(slash);
  auto colon = hostport.rfind(':');
  if (colon != std::string::npos) {
    u.host = hostport.substr(0, colon);
    try {
      u.port = std::stoi(hostport.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(Errc::Usage, "bad port in URL: " + url);
    }
  } else {
    u.host = hostport;
    u.port = u.scheme == "https" ? 443 : 80;
  }
  if (u.host.empty()) throw Error(Errc::Usage, "URL without host: " + url);
  return u;
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xf]);
    }
  }
  return out;
}

Response request(const std::string& method, const std::string& url, const std::string& body,
                 const std::map<std::string, std::string>& headers, std::chrono::seconds timeout) {
  Url u = parse_url(url);
  httplib::Client cli(u.origin());
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  cli.set_follow_location(true);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);

  httplib::Result res;
  if (method == "GET") {
    res = cli.Get(u.path, h);
  } else if (method == "POST") {
    auto type = headers.count("Content-Type") ? headers.at("Content-Type") : "application/json";
    h.erase("Content-Type");
    res = cli.Post(u.path, h, body, type);
  } else {
    throw Error(Errc::Usage, "unsupported HTTP method " + method);
  }
  if (!res) throw Error(Errc::TransportError, method + " " + url + " failed: " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

HttpChatTransport::HttpChatTransport(std::string endpoint, std::string api_key, std::chrono::seconds timeout)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)), timeout_(timeout) {}

std::string HttpChatTransport::send(const oracle::ChatRequest& req) {
  std::map<std::string, std::string> headers{{"Content-Type", "application/json"}};
  if (!api_key_.empty()) headers["Authorization"] = "Bearer " + api_key_;
  auto res = request("POST", endpoint_, req.to_json().dump(), headers, timeout_);
  if (res.status < 200 || res.status >= 300)
    throw Error(Errc::TransportError, "chat endpoint returned HTTP " + std::to_string(res.status));
  return res.body;
}

}  // namespace negtax::http
