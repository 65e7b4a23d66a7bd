#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "emosent/provider.hpp"

using namespace emosent;

namespace {

struct LocalServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;

    LocalServer() = default;
    void start() {
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~LocalServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }
    std::string url(const std::string& path = "") const { return "http://127.0.0.1:" + std::to_string(port) + path; }
};

}  // namespace

TEST_CASE("http provider speaks the embed contract") {
    LocalServer s;
    nlohmann::json seen;
    s.server.Post("/api/embed", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        res.set_content(R"({"vector": [0.5, -1, 2e-3]})", "application/json");
    });
    s.start();
    HttpEmbeddingProvider p({s.url("/api"), std::chrono::milliseconds(2000), 0});
    auto v = p.embed("to the moon \xF0\x9F\x9A\x80", "\xF0\x9F\x9A\x80");
    CHECK(v == std::vector<double>{0.5, -1.0, 2e-3});
    CHECK(seen["text"] == "to the moon \xF0\x9F\x9A\x80");
    CHECK(seen["target"] == "\xF0\x9F\x9A\x80");
}

TEST_CASE("http provider retries then gives up") {
    LocalServer s;
    std::atomic<int> hits{0};
    s.server.Post("/embed", [&](const httplib::Request&, httplib::Response& res) {
        if (++hits < 3) {
            res.status = 503;
            return;
        }
        res.set_content(R"({"vector": [1]})", "application/json");
    });
    s.start();
    HttpEmbeddingProvider recovers({s.url(), std::chrono::milliseconds(2000), 2});
    CHECK(recovers.embed("x", "x") == std::vector<double>{1.0});
    CHECK(hits == 3);

    hits = -10;
    HttpEmbeddingProvider fails({s.url(), std::chrono::milliseconds(2000), 1});
    CHECK_THROWS_AS(fails.embed("x", "x"), ProviderError);
    CHECK(hits == -8);
}

TEST_CASE("http provider rejects bad bodies and timeouts") {
    LocalServer s;
    s.server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
        auto j = nlohmann::json::parse(req.body);
        const auto target = j["target"].get<std::string>();
        if (target == "slow") {
            std::this_thread::sleep_for(std::chrono::milliseconds(600));
            res.set_content(R"({"vector": [1]})", "application/json");
        } else if (target == "text") {
            res.set_content(R"({"vector": ["a"]})", "application/json");
        } else if (target == "empty") {
            res.set_content(R"({"vector": []})", "application/json");
        } else {
            res.set_content("garbage", "text/plain");
        }
    });
    s.start();
    HttpEmbeddingProvider p({s.url(), std::chrono::milliseconds(150), 0});
    CHECK_THROWS_AS(p.embed("x", "slow"), ProviderError);
    CHECK_THROWS_AS(p.embed("x", "text"), ProviderError);
    CHECK_THROWS_AS(p.embed("x", "empty"), ProviderError);
    CHECK_THROWS_AS(p.embed("x", "other"), ProviderError);
}

TEST_CASE("unreachable provider") {
    HttpEmbeddingProvider p({"http://127.0.0.1:1", std::chrono::milliseconds(200), 1});
    CHECK_THROWS_AS(p.embed("x", "y"), ProviderError);
}
