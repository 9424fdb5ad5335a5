#pragma once

// Transport over real HTTP, backed by cpp-httplib. Kept out of korp.hpp so
// that library users who inject their own transport do not pull in httplib.
// Define CPPHTTPLIB_OPENSSL_SUPPORT (and link OpenSSL) for https endpoints.

#include <string>
#include <string_view>

#include "httplib.h"

#include "ctxdep/korp.hpp"

namespace ctxdep {

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(int timeout_seconds = 30) : timeout_seconds_(timeout_seconds) {}

  HttpResponse get(const RequestDescriptor& request) override {
    const auto [origin, target] = split_url(request.url);
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_follow_location(true);
    auto res = client.Get(target);
    if (!res) throw TransportError("GET " + request.url + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

  /// "http://host:port/a/b?x=1" -> {"http://host:port", "/a/b?x=1"}.
  static std::pair<std::string, std::string> split_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) throw ConfigError("not an absolute URL: " + std::string(url));
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string_view::npos) return {std::string(url), "/"};
    return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
  }

 private:
  int timeout_seconds_;
};

}  // namespace ctxdep
