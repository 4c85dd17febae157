#include "cqforge/eval/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cqforge/util/rng.hpp"
#include "httplib.h"

namespace cqforge {

SimilarityMatrix PairwiseBackend::similarity(const std::vector<std::string>& a,
                                             const std::vector<std::string>& b) const {
    SimilarityMatrix m(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) m[i][j] = score(a[i], b[j]);
    }
    return m;
}

namespace {

std::set<std::string> tokens(const std::string& text) {
    std::set<std::string> out;
    std::istringstream in(text);
    for (std::string tok; in >> tok;) out.insert(tok);
    return out;
}

}  // namespace

double TokenJaccardBackend::score(const std::string& a, const std::string& b) const {
    const auto ta = tokens(a);
    const auto tb = tokens(b);
    if (ta.empty() && tb.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& t : ta) common += tb.count(t);
    return static_cast<double>(common) / static_cast<double>(ta.size() + tb.size() - common);
}

std::optional<Vector> EmbeddingCache::find(const std::string& backend_id, const std::string& text) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find({backend_id, text});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void EmbeddingCache::store(const std::string& backend_id, const std::string& text, Vector v) {
    std::lock_guard lock(mutex_);
    entries_.insert_or_assign({backend_id, text}, std::move(v));
}

std::size_t EmbeddingCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw SimilarityError("embedding dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<Vector> EmbeddingBackend::embed_cached(const std::vector<std::string>& texts) const {
    const std::string key = id();
    std::vector<Vector> out(texts.size());
    std::vector<std::string> missing;
    std::vector<std::size_t> missing_at;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (auto hit = cache_->find(key, texts[i])) {
            out[i] = std::move(*hit);
        } else {
            missing.push_back(texts[i]);
            missing_at.push_back(i);
        }
    }
    if (!missing.empty()) {
        auto fresh = embed(missing);
        if (fresh.size() != missing.size()) throw SimilarityError("embedding backend returned wrong vector count");
        for (std::size_t k = 0; k < fresh.size(); ++k) {
            cache_->store(key, missing[k], fresh[k]);
            out[missing_at[k]] = std::move(fresh[k]);
        }
    }
    return out;
}

SimilarityMatrix EmbeddingBackend::similarity(const std::vector<std::string>& a,
                                              const std::vector<std::string>& b) const {
    const auto va = embed_cached(a);
    const auto vb = embed_cached(b);
    SimilarityMatrix m(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            // Identical texts share a vector; pin them to exactly 1 against rounding.
            m[i][j] = a[i] == b[j] ? 1.0 : std::clamp(dot(va[i], vb[j]), -1.0, 1.0);
        }
    }
    return m;
}

std::vector<Vector> HashedBagOfWordsBackend::embed(const std::vector<std::string>& texts) const {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        Vector v(dim_, 0.0);
        std::istringstream in(text);
        for (std::string tok; in >> tok;) {
            const std::uint64_t h = fnv1a(tok);
            v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
        }
        double norm = std::sqrt(dot(v, v));
        if (norm == 0.0) {
            v.assign(dim_, 0.0);
            v[0] = 1.0;
            norm = 1.0;
        }
        for (auto& x : v) x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(std::string base_url, std::size_t batch_size, int timeout_seconds)
    : base_url_(std::move(base_url)), batch_size_(std::max<std::size_t>(1, batch_size)), timeout_seconds_(timeout_seconds) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::vector<Vector> HttpEmbeddingBackend::embed(const std::vector<std::string>& texts) const {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);

    std::vector<Vector> out;
    out.reserve(texts.size());
    std::size_t dim = 0;
    for (std::size_t start = 0; start < texts.size(); start += batch_size_) {
        const std::size_t end = std::min(texts.size(), start + batch_size_);
        nlohmann::json body = {{"texts", std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                                                  texts.begin() + static_cast<std::ptrdiff_t>(end))}};
        auto res = client.Post("/embed", body.dump(), "application/json");
        if (!res) throw SimilarityError("embedding service unreachable at " + base_url_);
        if (res->status != 200) throw SimilarityError("embedding service returned HTTP " + std::to_string(res->status));
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
            auto vectors = reply.at("vectors").get<std::vector<Vector>>();
            const auto reply_dim = reply.at("dim").get<std::size_t>();
            if (vectors.size() != end - start) throw SimilarityError("embedding service returned wrong vector count");
            for (auto& v : vectors) {
                if (v.size() != reply_dim || (dim != 0 && v.size() != dim)) {
                    throw SimilarityError("embedding service returned inconsistent dimensions");
                }
                dim = v.size();
                if (std::abs(std::sqrt(dot(v, v)) - 1.0) > 1e-4) {
                    throw SimilarityError("embedding service returned a non-normalized vector");
                }
                out.push_back(std::move(v));
            }
        } catch (const nlohmann::json::exception& e) {
            throw SimilarityError(std::string("embedding service: malformed response: ") + e.what());
        }
    }
    return out;
}

}  // namespace cqforge
