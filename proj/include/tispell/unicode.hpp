#pragma once

// Minimal UTF-8 <-> codepoint conversion. Tibetan text lives in the BMP
// (U+0F00..U+0FFF) but the decoder handles the full scalar range.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tispell {

using Codepoint = char32_t;

struct Utf8Error : std::runtime_error {
    explicit Utf8Error(const std::string& what) : std::runtime_error(what) {}
};

inline void append_utf8(std::string& out, Codepoint cp) {
    const uint32_t c = static_cast<uint32_t>(cp);
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x110000) {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        throw Utf8Error("codepoint out of range");
    }
}

inline std::string to_utf8(Codepoint cp) {
    std::string s;
    append_utf8(s, cp);
    return s;
}

inline std::string to_utf8(const std::vector<Codepoint>& cps) {
    std::string s;
    for (Codepoint cp : cps) append_utf8(s, cp);
    return s;
}

// Decodes one scalar starting at byte offset `i`, advancing `i`.
// Throws Utf8Error on malformed input (overlong forms, stray continuation
// bytes, surrogates, truncated sequences).
inline Codepoint decode_utf8_at(std::string_view s, size_t& i) {
    const auto byte = [&](size_t k) { return static_cast<uint8_t>(s[k]); };
    const uint8_t b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len;
    uint32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        throw Utf8Error("invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    if (i + len > s.size()) throw Utf8Error("truncated UTF-8 sequence at offset " + std::to_string(i));
    for (int k = 1; k < len; ++k) {
        const uint8_t b = byte(i + k);
        if ((b & 0xC0) != 0x80) throw Utf8Error("invalid UTF-8 continuation at offset " + std::to_string(i + k));
        cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len]) throw Utf8Error("overlong UTF-8 encoding at offset " + std::to_string(i));
    if (cp >= 0xD800 && cp <= 0xDFFF) throw Utf8Error("surrogate codepoint at offset " + std::to_string(i));
    if (cp > 0x10FFFF) throw Utf8Error("codepoint out of range at offset " + std::to_string(i));
    i += len;
    return static_cast<Codepoint>(cp);
}

inline std::vector<Codepoint> decode_utf8(std::string_view s) {
    std::vector<Codepoint> out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) out.push_back(decode_utf8_at(s, i));
    return out;
}

inline bool is_valid_utf8(std::string_view s) {
    size_t i = 0;
    try {
        while (i < s.size()) decode_utf8_at(s, i);
    } catch (const Utf8Error&) {
        return false;
    }
    return true;
}

// "U+0F40" style spelling used by the script-table file format.
inline std::string codepoint_name(Codepoint cp) {
    static const char* hex = "0123456789ABCDEF";
    uint32_t v = static_cast<uint32_t>(cp);
    std::string digits;
    while (v) {
        digits.insert(digits.begin(), hex[v & 0xF]);
        v >>= 4;
    }
    while (digits.size() < 4) digits.insert(digits.begin(), '0');
    return "U+" + digits;
}

inline bool parse_codepoint_name(std::string_view tok, Codepoint& out) {
    if (tok.size() < 3 || tok.size() > 8) return false;
    if (tok[0] != 'U' || tok[1] != '+') return false;
    uint32_t v = 0;
    for (size_t k = 2; k < tok.size(); ++k) {
        const char c = tok[k];
        uint32_t d;
        if (c >= '0' && c <= '9') d = static_cast<uint32_t>(c - '0');
        else if (c >= 'A' && c <= 'F') d = static_cast<uint32_t>(c - 'A' + 10);
        else if (c >= 'a' && c <= 'f') d = static_cast<uint32_t>(c - 'a' + 10);
        else return false;
        v = v * 16 + d;
    }
    if (v > 0x10FFFF) return false;
    out = static_cast<Codepoint>(v);
    return true;
}

}  // namespace tispell
