#pragma once

// Syllable segmentation. A syllable is a run of non-delimiter codepoints;
// text splits on tsheg, shad and whitespace. Runs of delimiters collapse,
// and join() normalizes to a single tsheg between syllables, so
// join(segment(t)) == t exactly on single-tsheg-delimited text.

#include <string>
#include <string_view>
#include <vector>

#include "tispell/script_table.hpp"
#include "tispell/unicode.hpp"

namespace tispell {

struct Syllable {
    std::vector<Codepoint> chars;

    Syllable() = default;
    explicit Syllable(std::vector<Codepoint> c) : chars(std::move(c)) {}
    explicit Syllable(std::string_view utf8) : chars(decode_utf8(utf8)) {}

    size_t size() const { return chars.size(); }
    bool empty() const { return chars.empty(); }
    std::string str() const { return to_utf8(chars); }

    bool operator==(const Syllable& o) const { return chars == o.chars; }
    bool operator!=(const Syllable& o) const { return !(*this == o); }
    bool operator<(const Syllable& o) const { return chars < o.chars; }
};

struct SyllableSeq {
    std::vector<Syllable> items;
    bool trailing_delimiter = false;

    size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    Syllable& operator[](size_t i) { return items[i]; }
    const Syllable& operator[](size_t i) const { return items[i]; }

    bool operator==(const SyllableSeq& o) const {
        return items == o.items && trailing_delimiter == o.trailing_delimiter;
    }

    size_t total_chars() const {
        size_t n = 0;
        for (const auto& s : items) n += s.size();
        return n;
    }

    std::vector<std::string> strings() const {
        std::vector<std::string> out;
        out.reserve(items.size());
        for (const auto& s : items) out.push_back(s.str());
        return out;
    }
};

// Splits on any delimiter codepoint. Consecutive delimiters yield no empty
// syllables. Empty text gives an empty sequence.
inline SyllableSeq segment(std::string_view text, const ScriptTable& table) {
    SyllableSeq seq;
    std::vector<Codepoint> cur;
    bool last_was_delim = false;
    size_t i = 0;
    while (i < text.size()) {
        const Codepoint cp = decode_utf8_at(text, i);
        if (table.is_delimiter(cp)) {
            if (!cur.empty()) {
                seq.items.emplace_back(std::move(cur));
                cur.clear();
            }
            last_was_delim = true;
        } else {
            cur.push_back(cp);
            last_was_delim = false;
        }
    }
    if (!cur.empty()) seq.items.emplace_back(std::move(cur));
    seq.trailing_delimiter = last_was_delim && !seq.items.empty();
    return seq;
}

// Syllables joined by single tsheg; trailing tsheg restored iff recorded.
inline std::string join(const SyllableSeq& seq) {
    std::string out;
    bool first = true;
    for (const auto& s : seq.items) {
        if (!first) append_utf8(out, kTsheg);
        out += s.str();
        first = false;
    }
    if (seq.trailing_delimiter && !seq.items.empty()) append_utf8(out, kTsheg);
    return out;
}

inline SyllableSeq make_seq(std::initializer_list<std::string_view> sylls, bool trailing = false) {
    SyllableSeq seq;
    for (auto s : sylls) seq.items.emplace_back(s);
    seq.trailing_delimiter = trailing;
    return seq;
}

}  // namespace tispell
