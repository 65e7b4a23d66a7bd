#include "emosent/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emosent/csv.hpp"
#include "emosent/error.hpp"
#include "emosent/series.hpp"
#include "embedded_data.hpp"

namespace emosent {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ModelError("cosine_similarity: empty vector");
    if (a.size() != b.size())
        throw ModelError("cosine_similarity: length mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    // Scale by the largest magnitude first so huge or tiny entries cannot
    // overflow or underflow the sums.
    double amax = 0.0, bmax = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw ModelError("cosine_similarity: non-finite entry");
        amax = std::max(amax, std::abs(a[i]));
        bmax = std::max(bmax, std::abs(b[i]));
    }
    if (amax == 0.0 || bmax == 0.0) throw ModelError("cosine_similarity: zero-norm vector");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i] / amax;
        const double y = b[i] / bmax;
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

// --- Lexicon ---------------------------------------------------------------

Lexicon Lexicon::parse(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("lexicon: ") + e.what());
    }
    if (!doc.is_array()) throw InputError("lexicon: top level must be an array");

    Lexicon lex;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        const std::string where = "lexicon entry " + std::to_string(i);
        if (!item.is_object() || !item.contains("emoji") || !item.contains("score"))
            throw InputError(where + ": expected {\"emoji\": ..., \"score\": ...}");
        if (!item["emoji"].is_string() || !item["score"].is_number())
            throw InputError(where + ": emoji must be a string and score a number");

        LexiconEntry entry;
        entry.emoji = item["emoji"].get<std::string>();
        entry.score = item["score"].get<double>();
        if (item.contains("comment")) {
            if (!item["comment"].is_string()) throw InputError(where + ": comment must be a string");
            entry.comment = item["comment"].get<std::string>();
        }
        if (!(entry.score >= -1.0 && entry.score <= 1.0))
            throw InputError(where + " (" + entry.emoji + "): score " + csv::shortest(entry.score) +
                             " outside [-1, 1]");

        auto cps = decode_utf8(entry.emoji);
        auto folded = normalize_emoji(cps);
        if (cps.empty() || folded.empty()) throw InputError(where + ": empty emoji key");
        if (lex.folded_.count(folded)) throw InputError(where + ": duplicate key " + entry.emoji);
        lex.exact_.emplace(cps, entry.score);
        lex.folded_.emplace(std::move(folded), entry.score);
        lex.entries_.push_back(std::move(entry));
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path) {
    try {
        return parse(csv::read_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

const Lexicon& Lexicon::bundled() {
    static const Lexicon lex = parse(embedded::default_lexicon());
    return lex;
}

std::optional<double> Lexicon::lookup(std::u32string_view cps) const {
    if (auto it = exact_.find(std::u32string(cps)); it != exact_.end()) return it->second;
    if (auto it = folded_.find(normalize_emoji(cps)); it != folded_.end()) return it->second;
    return std::nullopt;
}

std::string Lexicon::to_json() const {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        out << "  {\"emoji\": " << nlohmann::json(e.emoji).dump() << ", \"score\": " << csv::shortest(e.score);
        if (!e.comment.empty()) out << ", \"comment\": " << nlohmann::json(e.comment).dump();
        out << '}' << (i + 1 < entries_.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

void Lexicon::save(const std::string& path) const { csv::write_file(path, to_json()); }

void AnchorSpec::validate() const {
    if (target_token.empty() || context_phrase.find(target_token) == std::string::npos)
        throw InputError("anchor target '" + target_token + "' does not occur in context '" + context_phrase + "'");
}

// --- Scoring ---------------------------------------------------------------

std::size_t ScoredTweet::scored_count() const {
    return static_cast<std::size_t>(
        std::count_if(emoji_scores.begin(), emoji_scores.end(), [](const ScoredEmoji& s) { return s.score.has_value(); }));
}

EmojiScorer::EmojiScorer(const Lexicon* lexicon, std::shared_ptr<EmbeddingProvider> provider, ScorerOptions options)
    : lexicon_(lexicon), provider_(std::move(provider)), options_(std::move(options)),
      table_(options_.table ? options_.table : &EmojiTable::bundled()) {
    options_.anchor.validate();
    if (options_.source == ScoreSource::provider && !provider_)
        throw InputError("provider scoring requested but no provider configured");
    if (options_.source == ScoreSource::lexicon && !lexicon_ && !provider_)
        throw InputError("neither a lexicon nor a provider is configured");
}

void EmojiScorer::warn(std::string message) {
    std::lock_guard lock(warn_mutex_);
    warnings_.push_back(std::move(message));
}

std::vector<std::string> EmojiScorer::warnings() const {
    std::lock_guard lock(warn_mutex_);
    return warnings_;
}

std::size_t EmojiScorer::provider_calls() const {
    std::lock_guard lock(warn_mutex_);
    return provider_calls_;
}

std::optional<std::vector<double>> EmojiScorer::anchor_embedding() {
    std::call_once(anchor_once_, [this] {
        try {
            anchor_ = provider_->embed(options_.anchor.context_phrase, options_.anchor.target_token);
        } catch (const ProviderError& e) {
            warn(std::string("anchor embedding unavailable: ") + e.what());
        }
    });
    return anchor_;
}

std::optional<double> EmojiScorer::score_with_provider(const EmojiToken& token, const std::string& context) {
    auto key = std::make_pair(token.lexeme, context);
    {
        std::shared_lock lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }

    std::optional<double> score;
    if (auto anchor = anchor_embedding()) {
        try {
            {
                std::lock_guard lock(warn_mutex_);
                ++provider_calls_;
            }
            auto vec = provider_->embed(context, token.lexeme);
            score = cosine_similarity(vec, *anchor);
        } catch (const ProviderError& e) {
            warn(e.what());
        } catch (const ModelError& e) {
            warn("emoji " + token.lexeme + ": " + e.what());
        }
    }

    std::unique_lock lock(cache_mutex_);
    // A concurrent caller may have stored a value first; everyone returns
    // the stored one.
    auto [it, inserted] = cache_.emplace(std::move(key), score);
    return it->second;
}

std::optional<double> EmojiScorer::score_emoji(const EmojiToken& token, const std::string& context) {
    if (options_.source == ScoreSource::lexicon && lexicon_) {
        if (auto s = lexicon_->lookup(token.codepoints)) return s;
        if (!provider_) return std::nullopt;
    }
    return score_with_provider(token, context);
}

ScoredTweet EmojiScorer::score_tweet(const Tweet& tweet) {
    ScoredTweet out;
    out.tweet = tweet;
    std::vector<double> present;
    for (auto& token : extract_emojis(tweet.text, *table_)) {
        auto s = score_emoji(token, tweet.text);
        if (s) present.push_back(*s);
        out.emoji_scores.push_back({std::move(token), s});
    }
    if (!present.empty()) out.mean_score = bounded_mean(present);
    return out;
}

}  // namespace emosent
