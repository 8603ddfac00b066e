#include "ptx/llm.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "http_util.hpp"
#include "ptx/error.hpp"

namespace ptx {

using json = nlohmann::json;

std::string_view system_prompt(std::string_view version) {
  if (version == "v1") {
    return "You restore text. Replace every '*' with the missing character or characters "
           "(a '*' may also hide a space splitting two words). Return only the restored text, "
           "nothing else.";
  }
  throw ConfigError("unknown prompt version: " + std::string(version));
}

namespace {

json post_json(const LlmConfig& cfg, const std::string& path, const json& body,
               const httplib::Headers& headers = {}) {
  const auto ep = detail::split_url(cfg.base_url);
  auto client = detail::make_client(ep, cfg.timeout);
  auto res = client->Post(ep.prefix + path, headers, body.dump(), "application/json");
  if (!res) throw EndpointUnavailable("request to " + cfg.base_url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw EndpointUnavailable("endpoint returned HTTP " + std::to_string(res->status));
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw MalformedReply(std::string("reply is not JSON: ") + e.what());
  }
}

class ChatTransport final : public LlmTransport {
 public:
  explicit ChatTransport(LlmConfig cfg) : cfg_(std::move(cfg)) {}

  std::string restore(const std::string& indicated) override {
    json body = {{"model", cfg_.model},
                 {"temperature", 0},
                 {"messages",
                  json::array({{{"role", "system"}, {"content", system_prompt(cfg_.prompt_version)}},
                               {{"role", "user"}, {"content", indicated}}})}};
    httplib::Headers headers;
    if (const char* token = std::getenv(cfg_.token_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    const auto reply = post_json(cfg_, "/chat/completions", body, headers);
    try {
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw MalformedReply(std::string("unexpected chat reply: ") + e.what());
    }
  }

 private:
  LlmConfig cfg_;
};

class SidecarTransport final : public LlmTransport {
 public:
  explicit SidecarTransport(LlmConfig cfg) : cfg_(std::move(cfg)) {}

  std::string restore(const std::string& indicated) override {
    const json body = {{"indicated", indicated}, {"prompt_version", cfg_.prompt_version}};
    const auto reply = post_json(cfg_, "/recover", body);
    try {
      return reply.at("restored").get<std::string>();
    } catch (const json::exception& e) {
      throw MalformedReply(std::string("unexpected sidecar reply: ") + e.what());
    }
  }

 private:
  LlmConfig cfg_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\n' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\n' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::unique_ptr<LlmTransport> make_transport(const LlmConfig& cfg) {
  system_prompt(cfg.prompt_version);  // reject unknown versions up front
  detail::split_url(cfg.base_url);
  if (cfg.transport == LlmTransportKind::ChatCompletions) return std::make_unique<ChatTransport>(cfg);
  return std::make_unique<SidecarTransport>(cfg);
}

std::vector<std::string> validate_reply(std::string_view indicated, std::string_view reply) {
  if (reply.find(kStar) != std::string_view::npos) throw MalformedReply("reply still contains '*'");
  for (char c : reply) {
    if (!is_supported_char(c)) throw MalformedReply("reply contains unsupported characters");
  }
  const bool has_stars = indicated.find(kStar) != std::string_view::npos;
  if (!has_stars) {
    if (reply != indicated) throw MalformedReply("reply altered a text without omissions");
    return {};
  }
  const std::size_t slack = (indicated.size() + 9) / 10;
  const std::size_t diff = reply.size() > indicated.size() ? reply.size() - indicated.size()
                                                           : indicated.size() - reply.size();
  if (diff > slack) throw MalformedReply("reply length differs by more than 10%");
  auto fills = align_restoration(indicated, reply);
  if (!fills) throw MalformedReply("reply changed characters that were received");
  return std::move(*fills);
}

LlmRecoverer::LlmRecoverer(LlmConfig cfg, const SpellIndex& fallback)
    : LlmRecoverer(cfg, fallback, make_transport(cfg)) {}

LlmRecoverer::LlmRecoverer(LlmConfig cfg, const SpellIndex& fallback, std::unique_ptr<LlmTransport> transport)
    : cfg_(std::move(cfg)),
      fallback_(&fallback),
      transport_(std::move(transport)),
      slots_(static_cast<std::ptrdiff_t>(std::clamp(cfg_.max_concurrency, 1u, 1024u))) {}

RecoveredText LlmRecoverer::recover(const IndicatedText& m) const {
  for (unsigned attempt = 0; attempt <= cfg_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(cfg_.backoff * (1u << std::min(attempt - 1, 16u)));
    std::string reply;
    try {
      slots_.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{slots_};
      reply = transport_->restore(m.chars);
    } catch (const EndpointUnavailable& e) {
      spdlog::warn("llm attempt {} failed: {}", attempt + 1, e.what());
      continue;
    } catch (const MalformedReply& e) {
      spdlog::warn("llm attempt {} malformed: {}", attempt + 1, e.what());
      continue;
    }
    const bool starless = m.chars.find(kStar) == std::string::npos;
    const std::string_view text = starless ? std::string_view(reply) : trim(reply);
    try {
      const auto fills = validate_reply(m.chars, text);
      RecoveredText out;
      out.chars = std::string(text);
      std::size_t f = 0;
      for (std::size_t i = 0; i < m.chars.size(); ++i) {
        if (m.chars[i] == kStar) out.resolutions.push_back({i, fills[f++], Backend::Llm, std::nullopt});
      }
      return out;
    } catch (const MalformedReply& e) {
      spdlog::warn("llm attempt {} rejected: {}", attempt + 1, e.what());
    }
  }
  auto out = recover_deterministic(m, *fallback_);
  out.fallback = true;
  for (auto& r : out.resolutions) r.backend = Backend::LlmFallback;
  return out;
}

}  // namespace ptx
