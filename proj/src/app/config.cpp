#include <filesystem>
#include <fstream>

#include <openssl/evp.h>

#include "emosent/app.hpp"
#include "emosent/error.hpp"

namespace emosent::app {

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["tweets"] = tweets;
    j["prices"] = prices;
    j["lexicon"] = lexicon;
    j["emoji_data"] = emoji_data;
    j["index"] = index;
    j["text_sentiment"] = text_sentiment;
    j["seed"] = seed;
    j["sample_size"] = sample_size;
    j["n_values"] = n_values;
    j["include_short"] = include_short;
    j["lag"] = lag;
    j["robust"] = robust;
    j["lambda"] = lambda;
    j["horizon"] = horizon;
    j["index_scale"] = index_scale;
    j["annualization"] = annualization;
    j["ewma_init"] = ewma_init;
    j["score_source"] = score_source;
    j["anchor_context"] = anchor_context;
    j["anchor_target"] = anchor_target;
    j["provider_url"] = provider_url;
    j["provider_timeout"] = provider_timeout;
    j["provider_retries"] = provider_retries;
    j["strategy_n"] = n;
    j["pace"] = pace;
    j["empty_window"] = empty_window;
    j["pace_min"] = pace_min;
    j["pace_max"] = pace_max;
    j["n_min"] = n_min;
    j["n_max"] = n_max;
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    try {
        get("tweets", c.tweets);
        get("prices", c.prices);
        get("lexicon", c.lexicon);
        get("emoji_data", c.emoji_data);
        get("index", c.index);
        get("text_sentiment", c.text_sentiment);
        get("seed", c.seed);
        get("sample_size", c.sample_size);
        get("n_values", c.n_values);
        get("include_short", c.include_short);
        get("lag", c.lag);
        get("robust", c.robust);
        get("lambda", c.lambda);
        get("horizon", c.horizon);
        get("index_scale", c.index_scale);
        get("annualization", c.annualization);
        get("ewma_init", c.ewma_init);
        get("score_source", c.score_source);
        get("anchor_context", c.anchor_context);
        get("anchor_target", c.anchor_target);
        get("provider_url", c.provider_url);
        get("provider_timeout", c.provider_timeout);
        get("provider_retries", c.provider_retries);
        get("strategy_n", c.n);
        get("pace", c.pace);
        get("empty_window", c.empty_window);
        get("pace_min", c.pace_min);
        get("pace_max", c.pace_max);
        get("n_min", c.n_min);
        get("n_max", c.n_max);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("manifest config: ") + e.what());
    }
    return c;
}

void RunConfig::validate() const {
    if (n_values.empty() || n_values.count(0)) throw InputError("n values must be positive");
    if (n == 0) throw InputError("strategy n must be positive");
    if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("lambda must lie in (0, 1)");
    if (horizon < 1) throw InputError("horizon must be >= 1");
    if (pace < 0) throw InputError("pace must be >= 0 (0 selects the cumulative benchmark)");
    if (pace_min < 1 || pace_max < pace_min) throw InputError("bad pace range");
    if (n_min < 1 || n_max < n_min) throw InputError("bad n range");
    if (empty_window != "no_trade" && empty_window != "trade") throw InputError("empty window must be no_trade or trade");
    if (ewma_init != "warmup_mean" && ewma_init != "first_squared")
        throw InputError("ewma init must be warmup_mean or first_squared");
    if (score_source != "lexicon" && score_source != "provider")
        throw InputError("score source must be lexicon or provider");
    if (score_source == "provider" && provider_url.empty()) throw InputError("provider scoring needs --provider-url");
    if (!(provider_timeout > 0.0) || provider_retries < 0) throw InputError("bad provider timeout/retries");
    for (const auto* path : {&tweets, &prices, &lexicon, &emoji_data, &index, &text_sentiment, &scored, &daily})
        if (!path->empty() && !std::filesystem::exists(*path)) throw InputError("no such file: " + *path);
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

}  // namespace emosent::app
