#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace cqforge {

/// Transient or malformed-response failure; the caller may retry.
class BackendError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The backend cannot be reached at all. Not retried.
class BackendUnreachable : public BackendError {
  public:
    using BackendError::BackendError;
};

/// Text-generation service. Implementations must be safe to call concurrently.
class TextBackend {
  public:
    virtual ~TextBackend() = default;

    virtual std::string id() const = 0;

    /// `temperature` unset means the backend default.
    virtual std::string complete(const std::string& prompt, std::optional<double> temperature,
                                 std::uint64_t seed) const = 0;
};

/// Offline backend that answers from the prompt itself: CQ prompts get the
/// listed templates back in order, definition prompts get the axiom set restated.
/// Output depends only on the prompt.
class MockTextBackend final : public TextBackend {
  public:
    std::string id() const override { return "mock"; }
    std::string complete(const std::string& prompt, std::optional<double> temperature,
                         std::uint64_t seed) const override;
};

/// POSTs {"prompt", "temperature"?, "seed"} as JSON and reads {"text"} back.
/// An API key, when given, is sent as a bearer token.
class HttpTextBackend final : public TextBackend {
  public:
    /// `url` is http://host[:port]/path.
    explicit HttpTextBackend(std::string url, std::string api_key = {}, int timeout_seconds = 120);

    std::string id() const override { return "http:" + url_; }
    std::string complete(const std::string& prompt, std::optional<double> temperature,
                         std::uint64_t seed) const override;

  private:
    std::string url_;
    std::string origin_;
    std::string path_;
    std::string api_key_;
    int timeout_seconds_;
};

/// Splits http://host[:port]/path into ("http://host[:port]", "/path").
/// Throws std::invalid_argument for other schemes or malformed URLs.
std::pair<std::string, std::string> split_http_url(const std::string& url);

}  // namespace cqforge
