#include "emosent/emoji.hpp"

#include <algorithm>
#include <set>

#include "emosent/csv.hpp"
#include "emosent/error.hpp"
#include "embedded_data.hpp"

namespace emosent {

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        unsigned char b = s[i];
        if (b < 0x80) {
            out.push_back(b);
            ++i;
            continue;
        }
        int len;
        char32_t cp;
        unsigned char lo = 0x80, hi = 0xBF;
        if (b >= 0xC2 && b <= 0xDF) {
            len = 2;
            cp = b & 0x1F;
        } else if (b >= 0xE0 && b <= 0xEF) {
            len = 3;
            cp = b & 0x0F;
            if (b == 0xE0) lo = 0xA0;
            if (b == 0xED) hi = 0x9F;
        } else if (b >= 0xF0 && b <= 0xF4) {
            len = 4;
            cp = b & 0x07;
            if (b == 0xF0) lo = 0x90;
            if (b == 0xF4) hi = 0x8F;
        } else {
            out.push_back(U'\uFFFD');
            ++i;
            continue;
        }
        std::size_t j = 1;
        bool ok = true;
        for (; j < static_cast<std::size_t>(len); ++j) {
            if (i + j >= n) {
                ok = false;
                break;
            }
            unsigned char c = s[i + j];
            unsigned char l = (j == 1) ? lo : 0x80;
            unsigned char h = (j == 1) ? hi : 0xBF;
            if (c < l || c > h) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (c & 0x3F);
        }
        if (!ok) {
            out.push_back(U'\uFFFD');
            i += j;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size() * 4);
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

EmojiTable EmojiTable::parse(std::string_view text) {
    EmojiTable table;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;

        if (line.starts_with("# Version:")) {
            auto v = line.substr(10);
            while (!v.empty() && (v.front() == ' ')) v.remove_prefix(1);
            while (!v.empty() && (v.back() == ' ' || v.back() == '\r')) v.remove_suffix(1);
            table.version_ = std::string(v);
            continue;
        }
        auto hash = line.find('#');
        auto content = line.substr(0, hash);
        auto semi = content.find(';');
        if (semi == std::string_view::npos) continue;

        std::u32string seq;
        auto fields = content.substr(0, semi);
        std::size_t p = 0;
        while (p < fields.size()) {
            while (p < fields.size() && fields[p] == ' ') ++p;
            if (p >= fields.size()) break;
            std::size_t q = p;
            char32_t cp = 0;
            while (q < fields.size() && fields[q] != ' ') {
                char c = fields[q];
                int digit;
                if (c >= '0' && c <= '9') digit = c - '0';
                else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
                else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
                else throw InputError("emoji table line " + std::to_string(line_no) + ": bad code point");
                cp = cp * 16 + digit;
                ++q;
            }
            if (q - p > 6 || cp > 0x10FFFF)
                throw InputError("emoji table line " + std::to_string(line_no) + ": code point out of range");
            seq.push_back(cp);
            p = q;
        }
        if (!seq.empty()) table.insert(seq);
    }
    if (table.count_ == 0) throw InputError("emoji table contains no sequences");
    return table;
}

EmojiTable EmojiTable::load(const std::string& path) { return parse(csv::read_file(path)); }

const EmojiTable& EmojiTable::bundled() {
    static const EmojiTable table = parse(embedded::emoji_test());
    return table;
}

std::uint32_t EmojiTable::child(std::uint32_t node, char32_t cp) const {
    const auto& next = nodes_[node].next;
    auto it = std::lower_bound(next.begin(), next.end(), cp,
                               [](const auto& edge, char32_t c) { return edge.first < c; });
    if (it == next.end() || it->first != cp) return 0;
    return it->second;
}

void EmojiTable::insert(std::u32string_view seq) {
    std::uint32_t node = 0;
    for (char32_t cp : seq) {
        std::uint32_t c = child(node, cp);
        if (c == 0) {
            c = static_cast<std::uint32_t>(nodes_.size());
            nodes_.emplace_back();
            auto& next = nodes_[node].next;
            auto it = std::lower_bound(next.begin(), next.end(), cp,
                                       [](const auto& edge, char32_t x) { return edge.first < x; });
            next.insert(it, {cp, c});
        }
        node = c;
    }
    if (!nodes_[node].terminal) {
        nodes_[node].terminal = true;
        ++count_;
    }
}

bool EmojiTable::contains(std::u32string_view seq) const {
    if (seq.empty()) return false;
    std::uint32_t node = 0;
    for (char32_t cp : seq) {
        node = child(node, cp);
        if (node == 0) return false;
    }
    return nodes_[node].terminal;
}

std::size_t EmojiTable::longest_match(std::u32string_view text, std::size_t pos) const {
    std::size_t best = 0;
    std::uint32_t node = 0;
    for (std::size_t i = pos; i < text.size(); ++i) {
        node = child(node, text[i]);
        if (node == 0) break;
        if (nodes_[node].terminal) best = i + 1 - pos;
    }
    return best;
}

std::vector<EmojiToken> extract_emojis(std::string_view text, const EmojiTable& table) {
    std::vector<EmojiToken> tokens;
    const std::u32string cps = decode_utf8(text);
    std::size_t i = 0;
    while (i < cps.size()) {
        std::size_t len = table.longest_match(cps, i);
        if (len == 0) {
            ++i;
            continue;
        }
        EmojiToken tok;
        tok.codepoints = cps.substr(i, len);
        tok.lexeme = encode_utf8(tok.codepoints);
        tok.begin = i;
        tok.end = i + len;
        tokens.push_back(std::move(tok));
        i += len;
    }
    return tokens;
}

bool is_emoji_sequence(std::u32string_view cps, const EmojiTable& table) { return table.contains(cps); }

std::u32string normalize_emoji(std::u32string_view cps) {
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (cp == 0xFE0E || cp == 0xFE0F) continue;
        if (cp >= 0x1F3FB && cp <= 0x1F3FF) continue;
        out.push_back(cp);
    }
    return out;
}

EmojiInventory count_distinct(const std::vector<EmojiToken>& tokens) {
    std::set<std::u32string> raw, folded;
    for (const auto& t : tokens) {
        raw.insert(t.codepoints);
        folded.insert(normalize_emoji(t.codepoints));
    }
    return {raw.size(), folded.size()};
}

}  // namespace emosent
