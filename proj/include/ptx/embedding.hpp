#pragma once

#include <chrono>
#include <cstddef>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace ptx {

/// Cosine similarity clamped to [0, 1]; 0 if either vector has zero norm.
template <typename A, typename B>
double cosine_similarity(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = a.dot(b) / (na * nb);
  return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);
}

/// Sentence embedder B(.) used for the similarity metric.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// One vector per text, all of the same dimension. Throws ProviderUnavailable.
  virtual std::vector<Eigen::VectorXd> embed(const std::vector<std::string>& texts) = 0;
  virtual std::string id() const = 0;
};

/// POST {base}/embed with {"texts": [...]}, expecting {"vectors": [[...]], "dim": d}.
/// The dimension seen on the first successful call is enforced on later calls.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(std::string base_url,
                                 std::chrono::milliseconds timeout = std::chrono::seconds(30),
                                 unsigned max_concurrency = 4);

  std::vector<Eigen::VectorXd> embed(const std::vector<std::string>& texts) override;
  std::string id() const override;
  std::optional<std::size_t> dimension() const;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
  std::counting_semaphore<1024> slots_;
  mutable std::mutex mutex_;
  std::optional<std::size_t> dim_;
  std::string model_id_;
};

/// Deterministic offline embedder: signed feature hashing of lowercase words
/// and character trigrams.
class HashingEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dim = 256) : dim_(dim) {}
  std::vector<Eigen::VectorXd> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return "hashing-" + std::to_string(dim_); }

 private:
  std::size_t dim_;
};

/// Returns preset vectors; unknown texts raise ProviderUnavailable.
class FixedEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit FixedEmbeddingProvider(std::unordered_map<std::string, Eigen::VectorXd> table)
      : table_(std::move(table)) {}
  std::vector<Eigen::VectorXd> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return "fixed"; }

 private:
  std::unordered_map<std::string, Eigen::VectorXd> table_;
};

}  // namespace ptx
