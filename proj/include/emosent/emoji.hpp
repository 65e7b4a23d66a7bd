#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace emosent {

/// Decodes UTF-8 into scalar values. Ill-formed sequences decode to U+FFFD,
/// one replacement per maximal invalid subpart.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view cps);

/// One emoji occurrence. `begin`/`end` are scalar-value offsets into the
/// decoded source text, half open.
struct EmojiToken {
    std::u32string codepoints;
    std::string lexeme;
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==(const EmojiToken&, const EmojiToken&) = default;
};

/// Set of emoji sequences loaded from a Unicode `emoji-test.txt` file
/// (fully-qualified, minimally-qualified, unqualified and component lines).
/// Immutable once built; safe to share between threads.
class EmojiTable {
public:
    /// Parses the published `emoji-test.txt` format. Throws InputError on a
    /// malformed code point field or when no sequences are found.
    static EmojiTable parse(std::string_view emoji_test_text);
    static EmojiTable load(const std::string& path);

    /// The Unicode 15.1 snapshot compiled into the library.
    static const EmojiTable& bundled();

    bool contains(std::u32string_view seq) const;

    /// Length of the longest sequence in the table that starts at `pos`,
    /// or 0 when none does.
    std::size_t longest_match(std::u32string_view text, std::size_t pos) const;

    std::size_t size() const { return count_; }
    const std::string& version() const { return version_; }

private:
    struct Node {
        std::vector<std::pair<char32_t, std::uint32_t>> next;  // sorted by code point
        bool terminal = false;
    };

    void insert(std::u32string_view seq);
    std::uint32_t child(std::uint32_t node, char32_t cp) const;

    std::vector<Node> nodes_{1};
    std::size_t count_ = 0;
    std::string version_;
};

/// Left-to-right maximal-munch extraction of emoji sequences.
std::vector<EmojiToken> extract_emojis(std::string_view text, const EmojiTable& table = EmojiTable::bundled());

bool is_emoji_sequence(std::u32string_view cps, const EmojiTable& table = EmojiTable::bundled());

/// Lookup key with presentation selectors (U+FE0E, U+FE0F) and skin-tone
/// modifiers (U+1F3FB..U+1F3FF) removed.
std::u32string normalize_emoji(std::u32string_view cps);

/// Distinct emoji counts over a token stream, before and after
/// normalize_emoji folding.
struct EmojiInventory {
    std::size_t raw_distinct = 0;
    std::size_t normalized_distinct = 0;
};

EmojiInventory count_distinct(const std::vector<EmojiToken>& tokens);

}  // namespace emosent
