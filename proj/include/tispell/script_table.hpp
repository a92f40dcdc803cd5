#pragma once

// Character classification data for Tibetan script: the 30 base consonants,
// the 4 dependent vowel signs, the base <-> subjoined consonant pairing
// (codepoint offset +0x50), curated homoglyph sets, and the delimiter set.
//
// The default table ships both compiled in (ScriptTable::builtin) and as a
// data file (data/tibetan_script.tbl) in the same line-oriented format that
// ScriptTable::load parses, so the inventory stays auditable and swappable.

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tispell/unicode.hpp"

namespace tispell {

enum class CharClass { Consonant, VowelSign, Subjoined, Delimiter, Other };

inline const char* char_class_name(CharClass c) {
    switch (c) {
        case CharClass::Consonant: return "consonant";
        case CharClass::VowelSign: return "vowel_sign";
        case CharClass::Subjoined: return "subjoined";
        case CharClass::Delimiter: return "delimiter";
        case CharClass::Other: return "other";
    }
    return "other";
}

constexpr Codepoint kTsheg = 0x0F0B;
constexpr Codepoint kShad = 0x0F0D;

struct ScriptTable {
    std::set<Codepoint> consonants;
    std::set<Codepoint> vowel_signs;
    std::map<Codepoint, Codepoint> subjoined_map;   // base -> subjoined
    std::map<Codepoint, Codepoint> subjoined_back;  // subjoined -> base
    std::vector<std::set<Codepoint>> homoglyph_sets;
    std::set<Codepoint> delimiters;

    bool is_delimiter(Codepoint c) const { return delimiters.count(c) > 0; }

    CharClass classify(Codepoint c) const {
        if (delimiters.count(c)) return CharClass::Delimiter;
        if (consonants.count(c)) return CharClass::Consonant;
        if (vowel_signs.count(c)) return CharClass::VowelSign;
        if (subjoined_back.count(c)) return CharClass::Subjoined;
        return CharClass::Other;
    }

    // Case-pair partner: base -> subjoined or subjoined -> base.
    bool case_partner(Codepoint c, Codepoint& out) const {
        if (auto it = subjoined_map.find(c); it != subjoined_map.end()) {
            out = it->second;
            return true;
        }
        if (auto it = subjoined_back.find(c); it != subjoined_back.end()) {
            out = it->second;
            return true;
        }
        return false;
    }

    // The homoglyph set containing c, or nullptr.
    const std::set<Codepoint>* homoglyphs_of(Codepoint c) const {
        for (const auto& s : homoglyph_sets)
            if (s.count(c)) return &s;
        return nullptr;
    }

    // Insertion alphabet for character-level corruption: consonants plus
    // vowel signs, in codepoint order.
    std::vector<Codepoint> alphabet() const {
        std::vector<Codepoint> a(consonants.begin(), consonants.end());
        a.insert(a.end(), vowel_signs.begin(), vowel_signs.end());
        std::sort(a.begin(), a.end());
        return a;
    }

    void add_subjoined_pair(Codepoint base, Codepoint sub) {
        subjoined_map[base] = sub;
        subjoined_back[sub] = base;
    }

    // Structural invariants. The count invariants (30 consonants, 4 vowel
    // signs) hold for the shipped Tibetan table; reduced tables used by the
    // synthetic fixture corpus satisfy everything else.
    void validate() const {
        std::set<Codepoint> dom, rng;
        for (const auto& [base, sub] : subjoined_map) {
            if (!rng.insert(sub).second) throw std::runtime_error("subjoined map not injective");
            dom.insert(base);
        }
        for (Codepoint d : dom)
            if (rng.count(d)) throw std::runtime_error("subjoined map domain and range overlap");
        for (const auto& [base, sub] : subjoined_map) {
            auto it = subjoined_back.find(sub);
            if (it == subjoined_back.end() || it->second != base)
                throw std::runtime_error("subjoined map round-trip broken");
        }
        std::set<Codepoint> seen;
        for (const auto& s : homoglyph_sets) {
            if (s.size() < 2) throw std::runtime_error("homoglyph set smaller than 2");
            for (Codepoint c : s) {
                if (!seen.insert(c).second) throw std::runtime_error("homoglyph sets overlap");
                if (delimiters.count(c)) throw std::runtime_error("delimiter inside homoglyph set");
            }
        }
        if (delimiters.empty()) throw std::runtime_error("delimiter set empty");
    }

    static ScriptTable builtin();
    static ScriptTable load(const std::string& path);
    std::string serialize() const;
};

inline ScriptTable ScriptTable::builtin() {
    ScriptTable t;
    // The 30 base consonants (ka through a); the gaps skip the letters used
    // only for transliterated Sanskrit.
    static constexpr Codepoint kConsonants[30] = {
        0x0F40, 0x0F41, 0x0F42, 0x0F44, 0x0F45, 0x0F46, 0x0F47, 0x0F49,
        0x0F4F, 0x0F50, 0x0F51, 0x0F53, 0x0F54, 0x0F55, 0x0F56, 0x0F58,
        0x0F59, 0x0F5A, 0x0F5B, 0x0F5D, 0x0F5E, 0x0F5F, 0x0F60, 0x0F61,
        0x0F62, 0x0F63, 0x0F64, 0x0F66, 0x0F67, 0x0F68,
    };
    for (Codepoint c : kConsonants) {
        t.consonants.insert(c);
        t.add_subjoined_pair(c, c + 0x50);
    }
    t.vowel_signs = {0x0F72, 0x0F74, 0x0F7A, 0x0F7C};
    // Visually confusable letter groups (curated; see README).
    t.homoglyph_sets = {
        {0x0F45, 0x0F59},          // ca / tsa
        {0x0F46, 0x0F5A},          // cha / tsha
        {0x0F47, 0x0F5B},          // ja / dza
        {0x0F51, 0x0F53},          // da / na
        {0x0F54, 0x0F55, 0x0F56},  // pa / pha / ba
        {0x0F5E, 0x0F64},          // zha / sha
    };
    t.delimiters = {kTsheg, kShad, ' ', '\t', '\n', '\r'};
    return t;
}

inline std::string ScriptTable::serialize() const {
    std::ostringstream out;
    out << "# tispell script table\nversion 1\n";
    out << "[consonants]\n";
    for (Codepoint c : consonants) out << codepoint_name(c) << "\n";
    out << "[vowels]\n";
    for (Codepoint c : vowel_signs) out << codepoint_name(c) << "\n";
    out << "[subjoined]\n";
    for (const auto& [base, sub] : subjoined_map)
        out << codepoint_name(base) << " " << codepoint_name(sub) << "\n";
    out << "[homoglyphs]\n";
    for (const auto& s : homoglyph_sets) {
        bool first = true;
        for (Codepoint c : s) {
            if (!first) out << " ";
            out << codepoint_name(c);
            first = false;
        }
        out << "\n";
    }
    out << "[delimiters]\n";
    for (Codepoint c : delimiters) out << codepoint_name(c) << "\n";
    return out.str();
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

}  // namespace detail

inline ScriptTable ScriptTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script table: " + path);
    ScriptTable t;
    std::string line, section;
    size_t lineno = 0;
    bool saw_version = false;
    const auto fail = [&](const std::string& why) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + why);
    };
    const auto parse_cp = [&](const std::string& tok) {
        Codepoint cp{};
        if (!parse_codepoint_name(tok, cp)) fail("bad codepoint '" + tok + "'");
        return cp;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        const auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "version") {
            if (toks.size() != 2 || toks[1] != "1") fail("unsupported table version");
            saw_version = true;
            continue;
        }
        if (toks[0].front() == '[') {
            if (toks.size() != 1) fail("malformed section header");
            section = toks[0];
            continue;
        }
        if (section == "[consonants]") {
            if (toks.size() != 1) fail("expected one codepoint per line");
            t.consonants.insert(parse_cp(toks[0]));
        } else if (section == "[vowels]") {
            if (toks.size() != 1) fail("expected one codepoint per line");
            t.vowel_signs.insert(parse_cp(toks[0]));
        } else if (section == "[subjoined]") {
            if (toks.size() != 2) fail("expected 'U+XXXX U+YYYY' pair");
            t.add_subjoined_pair(parse_cp(toks[0]), parse_cp(toks[1]));
        } else if (section == "[homoglyphs]") {
            std::set<Codepoint> s;
            for (const auto& tok : toks) s.insert(parse_cp(tok));
            t.homoglyph_sets.push_back(std::move(s));
        } else if (section == "[delimiters]") {
            if (toks.size() != 1) fail("expected one codepoint per line");
            t.delimiters.insert(parse_cp(toks[0]));
        } else {
            fail("content outside of a known section");
        }
    }
    if (!saw_version) throw std::runtime_error(path + ": missing version line");
    t.validate();
    return t;
}

}  // namespace tispell
