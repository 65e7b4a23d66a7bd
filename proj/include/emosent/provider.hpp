#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

namespace emosent {

/// Transport or protocol failure talking to an embedding backend.
class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Seam for any embedding backend: returns the contextual embedding of
/// `target` as it appears in `text`.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<double> embed(const std::string& text, const std::string& target) = 0;
};

struct ProviderConfig {
    std::string url;  ///< e.g. http://127.0.0.1:8080 ; the client POSTs to <url>/embed
    std::chrono::milliseconds timeout{10'000};
    int retries = 2;
};

/// JSON-over-HTTP client.
///
/// Request:  POST /embed  {"text": "<context>", "target": "<token or emoji>"}
/// Response: 200 {"vector": [<numbers>]}
///
/// Any non-200 status, connection error, timeout or malformed body counts as
/// a failed attempt; after 1 + retries failed attempts embed() throws
/// ProviderError.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(ProviderConfig config);
    std::vector<double> embed(const std::string& text, const std::string& target) override;

private:
    ProviderConfig config_;
    std::string host_;
    std::string base_path_;
};

}  // namespace emosent
