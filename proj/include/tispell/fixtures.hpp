#pragma once

// Synthetic fixture corpus: a seeded context-sensitive sentence grammar over
// a reduced Tibetan alphabet, so tests and the toy training task need no
// external data.
//
// The grammar is built for learnability and for exercising every corruption
// operator: lexicon words are 3-4 characters with pairwise edit distance
// >= 3 (single-character corruptions never collide with another word), each
// noun class selects its agreement particle deterministically, verbs agree
// with the subject class, and the sentence-final particle is a function of
// the verb. Those hard dependencies are what the n-gram and neural
// correctors can exploit.

#include <array>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tispell/edit_distance.hpp"
#include "tispell/rng.hpp"
#include "tispell/script_table.hpp"
#include "tispell/syllable.hpp"

namespace tispell {

// Reduced script table over 20 consonants. Keeps the fixture character
// inventory (including everything corruption can introduce) comfortably
// under 64 symbols while every operator still has eligible targets.
inline ScriptTable fixture_table() {
    ScriptTable t;
    static constexpr Codepoint kCons[20] = {
        0x0F40, 0x0F41, 0x0F42, 0x0F44, 0x0F45, 0x0F46, 0x0F47, 0x0F49, 0x0F4F, 0x0F50,
        0x0F51, 0x0F53, 0x0F54, 0x0F55, 0x0F56, 0x0F58, 0x0F59, 0x0F5A, 0x0F5B, 0x0F5D,
    };
    for (Codepoint c : kCons) t.consonants.insert(c);
    // Case pairs restricted to the first ten consonants.
    for (int i = 0; i < 10; ++i) t.add_subjoined_pair(kCons[i], kCons[i] + 0x50);
    t.vowel_signs = {0x0F72, 0x0F74, 0x0F7A, 0x0F7C};
    t.homoglyph_sets = {
        {0x0F45, 0x0F59},          // ca / tsa
        {0x0F46, 0x0F5A},          // cha / tsha
        {0x0F47, 0x0F5B},          // ja / dza
        {0x0F51, 0x0F53},          // da / na
        {0x0F54, 0x0F55, 0x0F56},  // pa / pha / ba
    };
    t.delimiters = {kTsheg, kShad, ' ', '\t', '\n', '\r'};
    t.validate();
    return t;
}

class FixtureGrammar {
public:
    static constexpr int kGenders = 4;
    static constexpr int kNounsPerGender = 4;
    static constexpr int kVerbsPerGender = 3;
    static constexpr int kAdjectives = 8;
    static constexpr int kEnders = 2;

    FixtureGrammar() : table_(fixture_table()) { build_lexicon(); }

    static const FixtureGrammar& instance() {
        static FixtureGrammar g;
        return g;
    }

    const ScriptTable& table() const { return table_; }

    const std::vector<std::string>& lexicon() const { return lexicon_; }
    const std::string& noun(int gender, int k) const {
        return lexicon_[static_cast<size_t>(gender * kNounsPerGender + k)];
    }
    const std::string& particle(int gender) const {
        return lexicon_[static_cast<size_t>(kGenders * kNounsPerGender + gender)];
    }
    const std::string& verb(int gender, int k) const {
        return lexicon_[static_cast<size_t>(kGenders * (kNounsPerGender + 1) +
                                            gender * kVerbsPerGender + k)];
    }
    const std::string& adjective(int k) const {
        return lexicon_[static_cast<size_t>(kGenders * (kNounsPerGender + 1 + kVerbsPerGender) + k)];
    }
    const std::string& ender(int k) const {
        return lexicon_[static_cast<size_t>(kGenders * (kNounsPerGender + 1 + kVerbsPerGender) +
                                            kAdjectives + k)];
    }

    // One sentence: 1-3 noun phrases, a verb agreeing with the first noun,
    // and the verb-determined final particle. Noun frequencies are skewed
    // (weights 4:3:2:1 within a class) so corpus counts differ.
    std::string sentence(Rng& rng) const {
        std::vector<std::string> sylls;
        const int phrases = pick_weighted(rng, {2, 5, 3});  // 1..3 noun phrases
        int subject_gender = 0;
        for (int p = 0; p <= phrases; ++p) {
            const int g = static_cast<int>(rng.index(kGenders));
            if (p == 0) subject_gender = g;
            sylls.push_back(noun(g, pick_weighted(rng, {4, 3, 2, 1})));
            if (rng.chance(0.4)) sylls.push_back(adjective(static_cast<int>(rng.index(kAdjectives))));
            sylls.push_back(particle(g));
        }
        const int v = pick_weighted(rng, {3, 2, 1});
        sylls.push_back(verb(subject_gender, v));
        sylls.push_back(ender(v % kEnders));
        SyllableSeq seq;
        for (const auto& s : sylls) seq.items.emplace_back(s);
        return join(seq);
    }

    std::vector<std::string> corpus(size_t sentences, uint64_t seed) const {
        Rng root(seed);
        std::vector<std::string> out;
        out.reserve(sentences);
        for (size_t i = 0; i < sentences; ++i) {
            Rng line = root.child(i);
            out.push_back(sentence(line));
        }
        return out;
    }

private:
    static int pick_weighted(Rng& rng, std::initializer_list<int> weights) {
        int total = 0;
        for (int w : weights) total += w;
        int64_t r = rng.range(0, total - 1);
        int k = 0;
        for (int w : weights) {
            r -= w;
            if (r < 0) return k;
            ++k;
        }
        return k - 1;
    }

    // Deterministic lexicon: greedily accept candidate words (shapes CVC,
    // CVCC, CCVC over the fixture alphabet) that stay at edit distance >= 3
    // from everything accepted so far.
    void build_lexicon() {
        const std::vector<Codepoint> cons(table_.consonants.begin(), table_.consonants.end());
        const std::vector<Codepoint> vows(table_.vowel_signs.begin(), table_.vowel_signs.end());
        constexpr size_t kWanted = kGenders * (kNounsPerGender + 1 + kVerbsPerGender) +
                                   kAdjectives + kEnders;  // 42
        Rng rng(0x5EEDF1C7u);  // fixed; the lexicon is part of the fixture definition
        std::vector<std::vector<Codepoint>> words;
        int guard = 0;
        while (words.size() < kWanted) {
            if (++guard > 1000000) throw std::runtime_error("fixture lexicon construction stalled");
            std::vector<Codepoint> w;
            switch (rng.index(3)) {
                case 0:  // C V C
                    w = {cons[rng.index(cons.size())], vows[rng.index(vows.size())],
                         cons[rng.index(cons.size())]};
                    break;
                case 1:  // C V C C
                    w = {cons[rng.index(cons.size())], vows[rng.index(vows.size())],
                         cons[rng.index(cons.size())], cons[rng.index(cons.size())]};
                    break;
                default:  // C C V C
                    w = {cons[rng.index(cons.size())], cons[rng.index(cons.size())],
                         vows[rng.index(vows.size())], cons[rng.index(cons.size())]};
                    break;
            }
            bool ok = true;
            for (const auto& prev : words) {
                if (levenshtein(prev, w) < 3) {
                    ok = false;
                    break;
                }
            }
            if (ok) words.push_back(std::move(w));
        }
        lexicon_.reserve(kWanted);
        for (const auto& w : words) lexicon_.push_back(to_utf8(w));
    }

    ScriptTable table_;
    std::vector<std::string> lexicon_;
};

inline void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& l : lines) out << l << "\n";
}

}  // namespace tispell
