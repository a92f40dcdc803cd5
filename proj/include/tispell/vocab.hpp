#pragma once

// Character-level vocabulary and fixed-length token sequences for the toy
// encoder. Tokens are single codepoints plus the reserved specials; the
// literal [MASK] surface string maps to the single [MASK] id so semi-mask
// labels tokenize the way the model is trained.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tispell/corruption.hpp"
#include "tispell/script_table.hpp"
#include "tispell/unicode.hpp"

namespace tispell {

struct Vocab {
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kBos = 2;
    static constexpr int kEos = 3;
    static constexpr int kMask = 4;
    static constexpr int kSpecials = 5;

    std::vector<std::string> id_to_token;
    std::map<std::string, int> token_to_id;

    int size() const { return static_cast<int>(id_to_token.size()); }

    int id_of(const std::string& token) const {
        const auto it = token_to_id.find(token);
        return it == token_to_id.end() ? kUnk : it->second;
    }

    static Vocab from_tokens(const std::vector<std::string>& char_tokens) {
        Vocab v;
        v.id_to_token = {"[PAD]", "[UNK]", "[BOS]", "[EOS]", "[MASK]"};
        for (const auto& t : char_tokens) v.id_to_token.push_back(t);
        for (size_t i = 0; i < v.id_to_token.size(); ++i) {
            if (!v.token_to_id.emplace(v.id_to_token[i], static_cast<int>(i)).second)
                throw std::runtime_error("duplicate vocab token: " + v.id_to_token[i]);
        }
        return v;
    }

    // Character inventory of a text collection, in codepoint order, tsheg
    // included as an ordinary token.
    static Vocab from_texts(const std::vector<std::string>& texts) {
        std::set<Codepoint> chars;
        for (const auto& t : texts) {
            size_t i = 0;
            while (i < t.size()) {
                if (t.compare(i, kMaskToken.size(), kMaskToken) == 0) {
                    i += kMaskToken.size();
                    continue;
                }
                chars.insert(decode_utf8_at(t, i));
            }
        }
        std::vector<std::string> toks;
        toks.reserve(chars.size());
        for (Codepoint c : chars) toks.push_back(to_utf8(c));
        return from_tokens(toks);
    }
};

struct TokenSeq {
    std::vector<int> ids;  // length L_max, right-padded with kPad
    size_t true_len = 0;   // includes [BOS] and [EOS]
    bool truncated = false;
};

inline TokenSeq tokenize(std::string_view text, const Vocab& vocab, size_t l_max,
                         size_t* unknown_counter = nullptr) {
    if (l_max < 2) throw std::runtime_error("L_max must be at least 2");
    std::vector<int> body;
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, kMaskToken.size(), kMaskToken) == 0) {
            body.push_back(Vocab::kMask);
            i += kMaskToken.size();
            continue;
        }
        const Codepoint cp = decode_utf8_at(text, i);
        const int id = vocab.id_of(to_utf8(cp));
        if (id == Vocab::kUnk && unknown_counter) ++*unknown_counter;
        body.push_back(id);
    }
    TokenSeq seq;
    if (body.size() > l_max - 2) {
        body.resize(l_max - 2);
        seq.truncated = true;
    }
    seq.ids.reserve(l_max);
    seq.ids.push_back(Vocab::kBos);
    seq.ids.insert(seq.ids.end(), body.begin(), body.end());
    seq.ids.push_back(Vocab::kEos);
    seq.true_len = seq.ids.size();
    seq.ids.resize(l_max, Vocab::kPad);
    return seq;
}

// Inverse of tokenize for in-vocabulary text: skips [BOS]/[PAD], stops at the
// first [EOS], renders specials by their surface strings.
inline std::string detokenize(const std::vector<int>& ids, const Vocab& vocab) {
    std::string out;
    for (int id : ids) {
        if (id == Vocab::kPad || id == Vocab::kBos) continue;
        if (id == Vocab::kEos) break;
        if (id >= 0 && id < vocab.size()) out += vocab.id_to_token[static_cast<size_t>(id)];
    }
    return out;
}

inline std::string detokenize(const TokenSeq& seq, const Vocab& vocab) {
    return detokenize(seq.ids, vocab);
}

}  // namespace tispell
