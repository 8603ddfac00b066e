#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "fixtures.hpp"
#include "mock_server.hpp"
#include "ptx/error.hpp"
#include "ptx/llm.hpp"

using namespace ptx;
using json = nlohmann::json;

namespace {

LlmConfig fast_config(const std::string& url, LlmTransportKind kind = LlmTransportKind::Sidecar) {
  LlmConfig cfg;
  cfg.transport = kind;
  cfg.base_url = url;
  cfg.retries = 2;
  cfg.backoff = std::chrono::milliseconds(1);
  cfg.timeout = std::chrono::milliseconds(2000);
  return cfg;
}

// Replies from a script; "!" throws EndpointUnavailable.
class ScriptedTransport final : public LlmTransport {
 public:
  explicit ScriptedTransport(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string restore(const std::string&) override {
    const auto i = calls++;
    const auto& r = replies_[std::min<std::size_t>(i, replies_.size() - 1)];
    if (r == "!") throw EndpointUnavailable("scripted failure");
    return r;
  }
  std::atomic<std::size_t> calls{0};

 private:
  std::vector<std::string> replies_;
};

class SlowTransport final : public LlmTransport {
 public:
  std::string restore(const std::string& indicated) override {
    const int now = ++in_flight;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --in_flight;
    std::string out = indicated;
    for (auto& c : out) {
      if (c == '*') c = 'a';
    }
    return out;
  }
  std::atomic<int> in_flight{0};
  std::atomic<int> peak{0};
};

}  // namespace

TEST_SUITE("llm.validate") {
  TEST_CASE("a faithful restoration is accepted with per-star fills") {
    CHECK(validate_reply("c*ramel c*ke", "caramel cake") == std::vector<std::string>{"a", "a"});
    CHECK(validate_reply("the*cat", "the cat") == std::vector<std::string>{" "});
    CHECK(validate_reply("no stars", "no stars").empty());
  }

  TEST_CASE("bad replies are rejected") {
    CHECK_THROWS_AS(validate_reply("c*ke", "c*ke"), MalformedReply);
    CHECK_THROWS_AS(validate_reply("c*ke", "c\tke"), MalformedReply);
    CHECK_THROWS_AS(validate_reply("no stars", "No stars"), MalformedReply);
    CHECK_THROWS_AS(validate_reply("c*ramel", "a very different and much longer text"), MalformedReply);
    CHECK_THROWS_AS(validate_reply("c*ramel", "cxramex"), MalformedReply);
    // ceil(10%) of 7 is 1 extra character.
    CHECK(validate_reply("c*ramel", "crxramel") == std::vector<std::string>{"rx"});
    CHECK_THROWS_AS(validate_reply("c*ramel", "caramels"), MalformedReply);
    CHECK_THROWS_AS(validate_reply("c*ramel", "crxyramel"), MalformedReply);
  }

  TEST_CASE("prompt versions") {
    CHECK_FALSE(system_prompt("v1").empty());
    CHECK_THROWS_AS(system_prompt("v999"), ConfigError);
    auto cfg = fast_config("http://127.0.0.1:1");
    cfg.prompt_version = "nope";
    CHECK_THROWS_AS(make_transport(cfg), ConfigError);
    CHECK_THROWS_AS(make_transport(fast_config("no-scheme")), ConfigError);
  }
}

TEST_SUITE("llm.http") {
  TEST_CASE("chat transport sends the model, temperature 0, prompt and bearer token") {
    MockServer mock;
    std::mutex mu;
    json seen;
    std::string auth;
    mock.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu);
      seen = json::parse(req.body);
      auth = req.get_header_value("Authorization");
      const json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", " caramel cake\n"}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    mock.start();
    ::setenv("PTX_TEST_TOKEN", "secret", 1);
    auto cfg = fast_config(mock.url() + "/v1", LlmTransportKind::ChatCompletions);
    cfg.token_env = "PTX_TEST_TOKEN";
    const LlmRecoverer rec(cfg, fixtures::index());
    const auto out = rec.recover(indicated_from_string("c*ramel c*ke"));
    CHECK(out.chars == "caramel cake");
    CHECK_FALSE(out.fallback);
    REQUIRE(out.resolutions.size() == 2);
    CHECK(out.resolutions[0].backend == Backend::Llm);
    CHECK(out.resolutions[0].chosen == "a");
    std::lock_guard lock(mu);
    CHECK(seen["temperature"] == 0);
    CHECK(seen["model"] == cfg.model);
    CHECK(seen["messages"][0]["role"] == "system");
    CHECK(seen["messages"][0]["content"] == std::string(system_prompt("v1")));
    CHECK(seen["messages"][1]["content"] == "c*ramel c*ke");
    CHECK(auth == "Bearer secret");
  }

  TEST_CASE("sidecar transport posts the indicated text and prompt version") {
    MockServer mock;
    std::mutex mu;
    json seen;
    mock.server.Post("/recover", [&](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu);
      seen = json::parse(req.body);
      res.set_content(json{{"restored", "the cat"}}.dump(), "application/json");
    });
    mock.start();
    const LlmRecoverer rec(fast_config(mock.url()), fixtures::index());
    CHECK(rec.recover(indicated_from_string("the*cat")).chars == "the cat");
    std::lock_guard lock(mu);
    CHECK(seen["indicated"] == "the*cat");
    CHECK(seen["prompt_version"] == "v1");
  }

  TEST_CASE("server errors exhaust the retries and fall back to the dictionary") {
    MockServer mock;
    std::atomic<int> hits{0};
    mock.server.Post("/recover", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 500;
    });
    mock.start();
    const LlmRecoverer rec(fast_config(mock.url()), fixtures::index());
    const auto out = rec.recover(indicated_from_string("c*ramel c*ke"));
    CHECK(out.chars == "caramel cake");
    CHECK(out.fallback);
    REQUIRE(out.resolutions.size() == 2);
    CHECK(out.resolutions[0].backend == Backend::LlmFallback);
    CHECK(hits == 3);
  }

  TEST_CASE("malformed JSON counts as a failed attempt") {
    MockServer mock;
    mock.server.Post("/recover", [&](const httplib::Request&, httplib::Response& res) {
      res.set_content("not json", "text/plain");
    });
    mock.start();
    const LlmRecoverer rec(fast_config(mock.url()), fixtures::index());
    CHECK(rec.recover(indicated_from_string("c*ke")).fallback);
  }

  TEST_CASE("an unreachable endpoint falls back") {
    auto cfg = fast_config("http://127.0.0.1:1");
    cfg.retries = 1;
    const LlmRecoverer rec(cfg, fixtures::index());
    const auto out = rec.recover(indicated_from_string("summ*r"));
    CHECK(out.fallback);
    CHECK(out.chars == "summer");
  }
}

TEST_SUITE("llm.policy") {
  TEST_CASE("retries until a valid reply arrives") {
    auto t = std::make_unique<ScriptedTransport>(std::vector<std::string>{"!", "c*ke", "cake"});
    auto* raw = t.get();
    const LlmRecoverer rec(fast_config("http://127.0.0.1:1"), fixtures::index(), std::move(t));
    const auto out = rec.recover(indicated_from_string("c*ke"));
    CHECK(out.chars == "cake");
    CHECK_FALSE(out.fallback);
    CHECK(raw->calls == 3);
  }

  TEST_CASE("backoff doubles between attempts") {
    auto cfg = fast_config("http://127.0.0.1:1");
    cfg.retries = 2;
    cfg.backoff = std::chrono::milliseconds(30);
    const LlmRecoverer rec(cfg, fixtures::index(), std::make_unique<ScriptedTransport>(std::vector<std::string>{"!"}));
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(rec.recover(indicated_from_string("c*ke")).fallback);
    CHECK(std::chrono::steady_clock::now() - t0 >= std::chrono::milliseconds(90));
  }

  TEST_CASE("a text without stars must come back verbatim, untrimmed") {
    const LlmRecoverer rec(fast_config("http://127.0.0.1:1"), fixtures::index(),
                           std::make_unique<ScriptedTransport>(std::vector<std::string>{" plain ", "plain"}));
    const auto out = rec.recover(indicated_from_string("plain"));
    CHECK(out.chars == "plain");
    CHECK_FALSE(out.fallback);
  }

  TEST_CASE("concurrent requests never exceed the configured cap") {
    auto cfg = fast_config("http://127.0.0.1:1");
    cfg.max_concurrency = 2;
    auto t = std::make_unique<SlowTransport>();
    auto* raw = t.get();
    const LlmRecoverer rec(cfg, fixtures::index(), std::move(t));
    std::vector<std::thread> threads;
    for (int i = 0; i < 12; ++i) {
      threads.emplace_back([&] { CHECK(rec.recover(indicated_from_string("c*ke")).chars == "cake"); });
    }
    for (auto& th : threads) th.join();
    CHECK(raw->peak <= 2);
    CHECK(raw->peak >= 1);
  }
}
