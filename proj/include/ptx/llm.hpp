#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>

#include "ptx/recover.hpp"

namespace ptx {

enum class LlmTransportKind {
  /// OpenAI-style POST {base}/chat/completions.
  ChatCompletions,
  /// Model sidecar POST {base}/recover.
  Sidecar,
};

struct LlmConfig {
  LlmTransportKind transport = LlmTransportKind::Sidecar;
  std::string base_url = "http://127.0.0.1:8765";
  std::string model = "gpt-3.5-turbo";
  /// Environment variable holding the bearer token (chat transport only).
  std::string token_env = "PTX_LLM_TOKEN";
  std::string prompt_version = "v1";
  unsigned retries = 3;
  std::chrono::milliseconds backoff{200};
  std::chrono::milliseconds timeout{30000};
  unsigned max_concurrency = 4;
};

/// System prompt of a versioned template. Throws ConfigError for unknown versions.
std::string_view system_prompt(std::string_view version);

/// One round trip to a model. Throws EndpointUnavailable on transport or
/// HTTP failure and MalformedReply when the body cannot be understood.
class LlmTransport {
 public:
  virtual ~LlmTransport() = default;
  virtual std::string restore(const std::string& indicated) = 0;
};

std::unique_ptr<LlmTransport> make_transport(const LlmConfig& cfg);

/// Checks a reply against the indicated text: no '*' left, only supported
/// characters, length within ceil(10%) of the indicated text, verbatim when
/// there was nothing to restore, and every non-star character kept in
/// place. Returns the per-star fills; throws MalformedReply.
std::vector<std::string> validate_reply(std::string_view indicated, std::string_view reply);

/// LLM backend with bounded concurrency, exponential backoff and a
/// deterministic fallback once retries are exhausted.
class LlmRecoverer final : public Recoverer {
 public:
  LlmRecoverer(LlmConfig cfg, const SpellIndex& fallback);
  /// Injects a transport (tests, custom clients).
  LlmRecoverer(LlmConfig cfg, const SpellIndex& fallback, std::unique_ptr<LlmTransport> transport);

  RecoveredText recover(const IndicatedText& m) const override;
  std::string name() const override { return "llm"; }

  const LlmConfig& config() const noexcept { return cfg_; }

 private:
  LlmConfig cfg_;
  const SpellIndex* fallback_;
  std::unique_ptr<LlmTransport> transport_;
  mutable std::counting_semaphore<1024> slots_;
};

}  // namespace ptx
