#include "ptx/embedding.hpp"

#include <algorithm>
#include <functional>

#include <json.hpp>

#include "http_util.hpp"
#include "ptx/corpus.hpp"
#include "ptx/error.hpp"
#include "ptx/rng.hpp"

namespace ptx {

using json = nlohmann::json;

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string base_url, std::chrono::milliseconds timeout,
                                             unsigned max_concurrency)
    : base_url_(std::move(base_url)),
      timeout_(timeout),
      slots_(static_cast<std::ptrdiff_t>(std::clamp(max_concurrency, 1u, 1024u))) {
  detail::split_url(base_url_);
}

std::vector<Eigen::VectorXd> HttpEmbeddingProvider::embed(const std::vector<std::string>& texts) {
  const auto ep = detail::split_url(base_url_);
  httplib::Result res;
  {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<1024>& s;
      ~Release() { s.release(); }
    } release{slots_};
    auto client = detail::make_client(ep, timeout_);
    res = client->Post(ep.prefix + "/embed", json{{"texts", texts}}.dump(), "application/json");
  }
  if (!res) throw ProviderUnavailable("embedding request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw ProviderUnavailable("embedding endpoint returned HTTP " + std::to_string(res->status));

  std::vector<Eigen::VectorXd> out;
  std::size_t dim = 0;
  std::string model;
  try {
    const auto body = json::parse(res->body);
    const auto& vectors = body.at("vectors");
    dim = body.contains("dim") ? body.at("dim").get<std::size_t>()
                               : (vectors.empty() ? 0 : vectors.at(0).size());
    if (body.contains("model_id")) model = body.at("model_id").get<std::string>();
    for (const auto& v : vectors) {
      const auto values = v.get<std::vector<double>>();
      if (values.size() != dim) throw ProviderUnavailable("embedding dimension differs from the declared one");
      out.push_back(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
    }
  } catch (const json::exception& e) {
    throw ProviderUnavailable(std::string("malformed embedding reply: ") + e.what());
  }
  if (out.size() != texts.size()) throw ProviderUnavailable("embedding count differs from text count");

  std::lock_guard lock(mutex_);
  if (dim_ && *dim_ != dim) {
    throw ProviderUnavailable("embedding dimension changed from " + std::to_string(*dim_) + " to " +
                              std::to_string(dim));
  }
  dim_ = dim;
  if (!model.empty()) model_id_ = model;
  return out;
}

std::string HttpEmbeddingProvider::id() const {
  std::lock_guard lock(mutex_);
  return model_id_.empty() ? base_url_ : model_id_;
}

std::optional<std::size_t> HttpEmbeddingProvider::dimension() const {
  std::lock_guard lock(mutex_);
  return dim_;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void add_feature(Eigen::VectorXd& v, std::string_view feature, double weight) {
  const std::uint64_t h = mix64(fnv1a(feature));
  const auto slot = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(v.size()));
  v[slot] += (h >> 63) ? -weight : weight;
}

}  // namespace

std::vector<Eigen::VectorXd> HashingEmbeddingProvider::embed(const std::vector<std::string>& texts) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    const std::string lower = to_lower(text);
    std::size_t i = 0;
    while (i < lower.size()) {
      if (!is_alpha(lower[i])) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < lower.size() && is_alpha(lower[i])) ++i;
      const std::string word = "^" + lower.substr(start, i - start) + "$";
      add_feature(v, "w:" + word, 1.0);
      for (std::size_t j = 0; j + 3 <= word.size(); ++j) add_feature(v, "t:" + word.substr(j, 3), 0.5);
    }
    const double n = v.norm();
    if (n > 0.0) v /= n;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Eigen::VectorXd> FixedEmbeddingProvider::embed(const std::vector<std::string>& texts) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto it = table_.find(t);
    if (it == table_.end()) throw ProviderUnavailable("no fixed embedding for text");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace ptx
