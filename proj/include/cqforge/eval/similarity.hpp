#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cqforge {

using Vector = std::vector<double>;
using SimilarityMatrix = std::vector<std::vector<double>>;  // [a_index][b_index]

class SimilarityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Scores text pairs. score(a, a) == 1 and score(a, b) == score(b, a).
class SimilarityBackend {
  public:
    virtual ~SimilarityBackend() = default;

    virtual std::string id() const = 0;

    /// Full matrix of sim(a[i], b[j]).
    virtual SimilarityMatrix similarity(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b) const = 0;
};

/// Backends defined directly on pairs of strings.
class PairwiseBackend : public SimilarityBackend {
  public:
    virtual double score(const std::string& a, const std::string& b) const = 0;

    SimilarityMatrix similarity(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) const override;
};

/// 1 for identical strings, else 0.
class ExactMatchBackend final : public PairwiseBackend {
  public:
    std::string id() const override { return "exact"; }
    double score(const std::string& a, const std::string& b) const override { return a == b ? 1.0 : 0.0; }
};

/// |tokens(a) ∩ tokens(b)| / |tokens(a) ∪ tokens(b)| over whitespace tokens, case kept.
class TokenJaccardBackend final : public PairwiseBackend {
  public:
    std::string id() const override { return "jaccard"; }
    double score(const std::string& a, const std::string& b) const override;
};

/// Thread-safe text -> vector cache keyed by (backend id, exact text).
class EmbeddingCache {
  public:
    std::optional<Vector> find(const std::string& backend_id, const std::string& text) const;
    void store(const std::string& backend_id, const std::string& text, Vector v);
    std::size_t size() const;

  private:
    mutable std::mutex mutex_;
    std::map<std::pair<std::string, std::string>, Vector> entries_;
};

/// Backends that map texts to unit vectors; similarity is the dot product.
class EmbeddingBackend : public SimilarityBackend {
  public:
    explicit EmbeddingBackend(std::shared_ptr<EmbeddingCache> cache = std::make_shared<EmbeddingCache>())
        : cache_(std::move(cache)) {}

    /// One unit-norm vector per text, all of the same dimension.
    virtual std::vector<Vector> embed(const std::vector<std::string>& texts) const = 0;

    /// Like embed() but served from the cache where possible.
    std::vector<Vector> embed_cached(const std::vector<std::string>& texts) const;

    SimilarityMatrix similarity(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) const override;

    const EmbeddingCache& cache() const { return *cache_; }

  private:
    std::shared_ptr<EmbeddingCache> cache_;
};

/// Offline embedding: signed feature hashing of whitespace tokens, L2-normalized.
class HashedBagOfWordsBackend final : public EmbeddingBackend {
  public:
    explicit HashedBagOfWordsBackend(std::size_t dim = 64) : dim_(dim) {}

    std::string id() const override { return "hashed-bow-" + std::to_string(dim_); }
    std::vector<Vector> embed(const std::vector<std::string>& texts) const override;

  private:
    std::size_t dim_;
};

/// Client of the embedding service: POST {url}/embed {"texts": [...]} ->
/// {"vectors": [[...]], "dim": n}.
class HttpEmbeddingBackend final : public EmbeddingBackend {
  public:
    explicit HttpEmbeddingBackend(std::string base_url, std::size_t batch_size = 64, int timeout_seconds = 60);

    std::string id() const override { return "http-embed:" + base_url_; }
    std::vector<Vector> embed(const std::vector<std::string>& texts) const override;

  private:
    std::string base_url_;
    std::size_t batch_size_;
    int timeout_seconds_;
};

double dot(const Vector& a, const Vector& b);

}  // namespace cqforge
