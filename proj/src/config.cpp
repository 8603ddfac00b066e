#include "ptx/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "ptx/corpus.hpp"
#include "ptx/error.hpp"

namespace ptx {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ConfigError("unterminated list: " + std::string(v));
    v = trim(v.substr(1, v.size() - 2));
  }
  std::vector<std::string_view> out;
  if (v.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = v.find(',', pos);
    out.push_back(trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  const std::string s(trim(v));
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + std::string(key) + ": " + s);
  }
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("bad integer for " + std::string(key) + ": " + std::string(v));
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for " + std::string(key) + ": " + std::string(v));
}

std::vector<double> to_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

std::filesystem::path to_path(std::string_view v, const std::filesystem::path& base) {
  std::filesystem::path p{std::string(trim(v))};
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.corpus = data_dir() / "corpus.txt";
  c.dictionary = data_dir() / "dictionary.txt";
  c.ldpc = data_dir() / "ldpc_648_r12.alist";
  return c;
}

void RunConfig::set(std::string_view key_in, std::string_view value, const std::filesystem::path& base) {
  const std::string key(trim(key_in));
  const std::string v(trim(value));
  if (key == "corpus") corpus = to_path(v, base);
  else if (key == "dictionary") dictionary = to_path(v, base);
  else if (key == "ldpc") ldpc = to_path(v, base);
  else if (key == "output") output = to_path(v, base);
  else if (key == "alpha") score.alpha = to_double(key, v);
  else if (key == "beta") score.beta = to_double(key, v);
  else if (key == "gamma") score.gamma = to_double(key, v);
  else if (key == "delta") score.delta = to_double(key, v);
  else if (key == "filter_length") filter_length = to_uint(key, v);
  else if (key == "filters" || key == "M") {
    filters.clear();
    for (auto item : split_list(v)) filters.push_back(to_uint(key, item));
  } else if (key == "keep_ratio") keep_ratios = to_doubles(key, v);
  else if (key == "snr_db") snr_db = to_doubles(key, v);
  else if (key == "symbols_per_char") symbols_per_char = to_doubles(key, v);
  else if (key == "word_ratio") word_ratios = to_doubles(key, v);
  else if (key == "arms") {
    proposed_arm = random_arm = false;
    for (auto item : split_list(v)) {
      if (item == "proposed") proposed_arm = true;
      else if (item == "random") random_arm = true;
      else throw ConfigError("unknown arm: " + std::string(item));
    }
  } else if (key == "seed") seed = to_uint(key, v);
  else if (key == "trials") trials = to_uint(key, v);
  else if (key == "workers") workers = static_cast<unsigned>(to_uint(key, v));
  else if (key == "max_iterations") max_iterations = static_cast<unsigned>(to_uint(key, v));
  else if (key == "bleu_max_n") bleu_max_n = static_cast<unsigned>(to_uint(key, v));
  else if (key == "record_text") record_text = to_bool(key, v);
  else if (key == "backend") {
    if (v == "dictionary") backend = RecoveryBackend::Dictionary;
    else if (v == "llm") backend = RecoveryBackend::Llm;
    else throw ConfigError("unknown backend: " + v);
  } else if (key == "llm.transport") {
    if (v == "sidecar") llm.transport = LlmTransportKind::Sidecar;
    else if (v == "chat") llm.transport = LlmTransportKind::ChatCompletions;
    else throw ConfigError("unknown llm transport: " + v);
  } else if (key == "llm.base_url") llm.base_url = v;
  else if (key == "llm.model") llm.model = v;
  else if (key == "llm.token_env") llm.token_env = v;
  else if (key == "llm.prompt_version") llm.prompt_version = v;
  else if (key == "llm.retries") llm.retries = static_cast<unsigned>(to_uint(key, v));
  else if (key == "llm.backoff_ms") llm.backoff = std::chrono::milliseconds(to_uint(key, v));
  else if (key == "llm.timeout_ms") llm.timeout = std::chrono::milliseconds(to_uint(key, v));
  else if (key == "llm.max_concurrency") llm.max_concurrency = static_cast<unsigned>(to_uint(key, v));
  else if (key == "embedding") {
    if (v == "none") embedding = EmbeddingKind::None;
    else if (v == "hashing") embedding = EmbeddingKind::Hashing;
    else if (v == "http") embedding = EmbeddingKind::Http;
    else throw ConfigError("unknown embedding provider: " + v);
  } else if (key == "embedding.url") embedding_url = v;
  else if (key == "embedding.timeout_ms") embedding_timeout_ms = static_cast<unsigned>(to_uint(key, v));
  else throw ConfigError("unknown configuration key: " + key);
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must be key=value: " + std::string(assignment));
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

RunConfig RunConfig::parse(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig c = defaults();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    c.set(s.substr(0, eq), s.substr(eq + 1), base_dir);
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse(in, path.parent_path());
}

void RunConfig::validate() const {
  try {
    score.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (filter_length == 0) throw ConfigError("filter_length must be at least 1");
  if (filters.empty() || keep_ratios.empty() || snr_db.empty()) {
    throw ConfigError("filters, keep_ratio and snr_db must be non-empty");
  }
  for (auto m : filters) {
    if (m == 0) throw ConfigError("filters must be at least 1");
    if (m > (std::size_t{1} << 15)) throw ConfigError("filters exceed the 4-bit index width field");
  }
  for (double k : keep_ratios) {
    if (!(k > 0.0 && k <= 1.0)) throw ConfigError("keep_ratio must lie in (0, 1]");
  }
  for (double s : snr_db) {
    if (std::isnan(s)) throw ConfigError("snr_db must be a number");
  }
  for (double s : symbols_per_char) {
    if (!(s > 0.0)) throw ConfigError("symbols_per_char must be positive");
  }
  for (double r : word_ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("word_ratio must lie in (0, 1]");
  }
  if (!proposed_arm && !random_arm && word_ratios.empty()) throw ConfigError("no arms selected");
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (bleu_max_n == 0) throw ConfigError("bleu_max_n must be at least 1");
}

std::filesystem::path RunConfig::aggregate_path() const {
  auto p = output;
  p.replace_extension(".csv");
  return p;
}

}  // namespace ptx
