#pragma once

// Small helpers shared by the HTTP clients. Not part of the public API.

#include <chrono>
#include <memory>
#include <string>

#include <httplib.h>

#include "ptx/error.hpp"

namespace ptx::detail {

struct Endpoint {
  /// scheme://host[:port]
  std::string origin;
  /// Path prefix without a trailing slash, possibly empty.
  std::string prefix;
};

inline Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  Endpoint e;
  e.origin = url.substr(0, slash);
  if (slash != std::string::npos) {
    e.prefix = url.substr(slash);
    while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  }
  return e;
}

inline std::unique_ptr<httplib::Client> make_client(const Endpoint& e, std::chrono::milliseconds timeout) {
  auto client = std::make_unique<httplib::Client>(e.origin);
  if (!client->is_valid()) throw ConfigError("unsupported endpoint: " + e.origin);
  const auto secs = static_cast<time_t>(timeout.count() / 1000);
  const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client->set_connection_timeout(secs, usecs);
  client->set_read_timeout(secs, usecs);
  client->set_write_timeout(secs, usecs);
  return client;
}

}  // namespace ptx::detail
