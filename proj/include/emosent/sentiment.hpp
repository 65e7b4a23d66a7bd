#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "emosent/corpus.hpp"
#include "emosent/emoji.hpp"
#include "emosent/provider.hpp"

namespace emosent {

/// Cosine of the angle between two embeddings. Throws ModelError on empty
/// input, a length mismatch, a non-finite entry or a zero-norm vector. The
/// result is clamped to [-1, 1].
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct LexiconEntry {
    std::string emoji;        ///< UTF-8 sequence exactly as stored in the file
    double score = 0.0;       ///< in [-1, 1]
    std::string comment;      ///< optional free text, preserved on export
};

/// Emoji -> score table. Lookup tries the exact code point sequence first,
/// then the normalize_emoji() form. Immutable after construction.
class Lexicon {
public:
    Lexicon() = default;

    /// Throws InputError on malformed JSON, a score outside [-1, 1], or two
    /// entries whose normalized keys collide.
    static Lexicon parse(std::string_view json_text);
    static Lexicon load(const std::string& path);

    /// The default lexicon compiled into the library.
    static const Lexicon& bundled();

    std::optional<double> lookup(std::u32string_view cps) const;
    std::optional<double> lookup(std::string_view utf8) const { return lookup(decode_utf8(utf8)); }

    const std::vector<LexiconEntry>& entries() const { return entries_; }

    /// Canonical serialization: one entry per line, file order, shortest
    /// round-trip number formatting.
    std::string to_json() const;
    void save(const std::string& path) const;

private:
    std::vector<LexiconEntry> entries_;
    std::unordered_map<std::u32string, double> exact_;
    std::unordered_map<std::u32string, double> folded_;
};

inline Lexicon load_lexicon(const std::string& path) { return Lexicon::load(path); }
inline void export_lexicon(const Lexicon& lexicon, const std::string& path) { lexicon.save(path); }

/// Which embedding defines "positive": the target token inside a context phrase.
struct AnchorSpec {
    std::string context_phrase = "financially positive and optimistic";
    std::string target_token = "positive";

    /// Throws InputError unless target_token occurs in context_phrase.
    void validate() const;
};

enum class ScoreSource { lexicon, provider };

struct ScorerOptions {
    /// lexicon: look up, fall back to the provider (if any) for unknown emoji.
    /// provider: always embed.
    ScoreSource source = ScoreSource::lexicon;
    AnchorSpec anchor;
    const EmojiTable* table = nullptr;  ///< null: EmojiTable::bundled()
};

struct ScoredEmoji {
    EmojiToken token;
    std::optional<double> score;
};

struct ScoredTweet {
    Tweet tweet;
    std::vector<ScoredEmoji> emoji_scores;
    std::optional<double> mean_score;  ///< absent iff no emoji could be scored

    std::size_t scored_count() const;
};

/// Scores emoji and tweets against the lexicon and/or an embedding provider.
///
/// Provider results are memoized per (emoji lexeme, context) for the life of
/// the scorer, failures included, so a run never scores the same occurrence
/// two different ways. All public members are safe to call concurrently.
class EmojiScorer {
public:
    EmojiScorer(const Lexicon* lexicon, std::shared_ptr<EmbeddingProvider> provider, ScorerOptions options = {});

    std::optional<double> score_emoji(const EmojiToken& token, const std::string& context);
    ScoredTweet score_tweet(const Tweet& tweet);

    std::vector<std::string> warnings() const;
    std::size_t provider_calls() const;

private:
    std::optional<double> score_with_provider(const EmojiToken& token, const std::string& context);
    std::optional<std::vector<double>> anchor_embedding();
    void warn(std::string message);

    const Lexicon* lexicon_;
    std::shared_ptr<EmbeddingProvider> provider_;
    ScorerOptions options_;
    const EmojiTable* table_;

    struct KeyHash {
        std::size_t operator()(const std::pair<std::string, std::string>& k) const {
            return std::hash<std::string>{}(k.first) * 31 ^ std::hash<std::string>{}(k.second);
        }
    };
    mutable std::shared_mutex cache_mutex_;
    std::unordered_map<std::pair<std::string, std::string>, std::optional<double>, KeyHash> cache_;

    std::once_flag anchor_once_;
    std::optional<std::vector<double>> anchor_;

    mutable std::mutex warn_mutex_;
    std::vector<std::string> warnings_;
    std::size_t provider_calls_ = 0;
};

}  // namespace emosent
