#include "emosent/provider.hpp"

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace emosent {

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderConfig config) : config_(std::move(config)) {
    if (config_.retries < 0) config_.retries = 0;
    auto scheme = config_.url.find("://");
    auto path_start = config_.url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
        host_ = config_.url;
    } else {
        host_ = config_.url.substr(0, path_start);
        base_path_ = config_.url.substr(path_start);
        while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
    }
    if (host_.empty()) throw ProviderError("empty provider URL");
}

std::vector<double> HttpEmbeddingProvider::embed(const std::string& text, const std::string& target) {
    const std::string body = nlohmann::json{{"text", text}, {"target", target}}.dump();
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        httplib::Client client(host_);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());

        auto res = client.Post(base_path_ + "/embed", body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        try {
            auto json = nlohmann::json::parse(res->body);
            const auto& vec = json.at("vector");
            if (!vec.is_array() || vec.empty()) throw std::runtime_error("'vector' must be a non-empty array");
            std::vector<double> out;
            out.reserve(vec.size());
            for (const auto& x : vec) {
                if (!x.is_number()) throw std::runtime_error("non-numeric vector entry");
                double v = x.get<double>();
                if (!std::isfinite(v)) throw std::runtime_error("non-finite vector entry");
                out.push_back(v);
            }
            return out;
        } catch (const std::exception& e) {
            last_error = std::string("bad response body: ") + e.what();
        }
    }
    throw ProviderError("embedding request for '" + target + "' failed after " +
                        std::to_string(config_.retries + 1) + " attempt(s): " + last_error);
}

}  // namespace emosent
