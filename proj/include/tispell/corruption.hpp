#pragma once

// The nine corruption operators and the mixed-corruption strategy.
//
// Every operator is a pure function of (sequence, rng, table). Operators
// share one contract: when the stated precondition fails they return the
// input unchanged and report changed=false (the early-return branches of
// the reference procedures). Exactly one edit is applied per invocation.
//
// Syllable-level random deletion additionally produces a semi-mask sequence:
// the source with the deleted syllable replaced by the literal [MASK] token,
// so segment(semi_mask) always has the source's length and each position is
// either the source syllable or [MASK].

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tispell/rng.hpp"
#include "tispell/script_table.hpp"
#include "tispell/syllable.hpp"

namespace tispell {

inline constexpr std::string_view kMaskToken = "[MASK]";

enum class CorruptionId : int {
    CharDelete = 0,
    CharInsert = 1,
    CaseSubst = 2,
    HomoglyphSubst = 3,
    AdjSyllCharTranspose = 4,
    InterSyllCharTranspose = 5,
    SyllDelete = 6,
    SyllTranspose = 7,
    SyllMerge = 8,
};

inline constexpr int kCorruptionCount = 9;

inline constexpr std::array<std::string_view, kCorruptionCount> kCorruptionNames = {
    "CharDelete",        "CharInsert",      "CaseSubst",
    "HomoglyphSubst",    "AdjSyllCharTranspose", "InterSyllCharTranspose",
    "SyllDelete",        "SyllTranspose",   "SyllMerge",
};

inline std::string_view corruption_name(CorruptionId id) {
    return kCorruptionNames[static_cast<size_t>(id)];
}

inline bool corruption_from_name(std::string_view name, CorruptionId& out) {
    for (int i = 0; i < kCorruptionCount; ++i) {
        if (kCorruptionNames[static_cast<size_t>(i)] == name) {
            out = static_cast<CorruptionId>(i);
            return true;
        }
    }
    return false;
}

inline bool is_syllable_level(CorruptionId id) {
    return static_cast<int>(id) >= static_cast<int>(CorruptionId::SyllDelete);
}

struct OpResult {
    SyllableSeq seq;
    std::optional<SyllableSeq> semi_mask;  // set by SyllDelete only
    bool changed = false;
};

namespace detail {

inline OpResult noop(const SyllableSeq& seq) { return {seq, std::nullopt, false}; }

// Positions of characters satisfying `pred`, as (syllable, char) pairs.
template <typename Pred>
std::vector<std::pair<size_t, size_t>> char_positions(const SyllableSeq& seq, Pred pred) {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t s = 0; s < seq.size(); ++s)
        for (size_t c = 0; c < seq[s].size(); ++c)
            if (pred(seq[s].chars[c])) out.emplace_back(s, c);
    return out;
}

}  // namespace detail

// --- Character-level operators -------------------------------------------

// Deletes one character from a randomly chosen syllable of length >= 2
// (never empties a syllable).
inline OpResult char_random_delete(const SyllableSeq& seq, Rng& rng, const ScriptTable&) {
    std::vector<size_t> eligible;
    for (size_t s = 0; s < seq.size(); ++s)
        if (seq[s].size() >= 2) eligible.push_back(s);
    if (eligible.empty()) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    Syllable& syl = r.seq[eligible[rng.index(eligible.size())]];
    syl.chars.erase(syl.chars.begin() + static_cast<ptrdiff_t>(rng.index(syl.size())));
    return r;
}

// Inserts one alphabet character at a uniform position within a randomly
// chosen syllable.
inline OpResult char_random_insert(const SyllableSeq& seq, Rng& rng, const ScriptTable& table) {
    if (seq.empty()) return detail::noop(seq);
    const auto alphabet = table.alphabet();
    if (alphabet.empty()) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    Syllable& syl = r.seq[rng.index(seq.size())];
    const Codepoint ch = alphabet[rng.index(alphabet.size())];
    const size_t pos = rng.index(syl.size() + 1);
    syl.chars.insert(syl.chars.begin() + static_cast<ptrdiff_t>(pos), ch);
    return r;
}

// Swaps one case-paired character for its partner (base <-> subjoined).
// Applying the operator twice at the same position restores the original.
inline OpResult char_case_substitution(const SyllableSeq& seq, Rng& rng, const ScriptTable& table) {
    Codepoint partner{};
    auto eligible = detail::char_positions(seq, [&](Codepoint c) {
        Codepoint tmp;
        return table.case_partner(c, tmp);
    });
    if (eligible.empty()) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    const auto [s, c] = eligible[rng.index(eligible.size())];
    table.case_partner(r.seq[s].chars[c], partner);
    r.seq[s].chars[c] = partner;
    return r;
}

// Replaces one homoglyph-set member with a different member of its set.
inline OpResult char_homoglyph_substitution(const SyllableSeq& seq, Rng& rng, const ScriptTable& table) {
    auto eligible = detail::char_positions(seq, [&](Codepoint c) {
        return table.homoglyphs_of(c) != nullptr;
    });
    if (eligible.empty()) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    const auto [s, c] = eligible[rng.index(eligible.size())];
    const Codepoint orig = r.seq[s].chars[c];
    const std::set<Codepoint>& set = *table.homoglyphs_of(orig);
    std::vector<Codepoint> others;
    for (Codepoint cand : set)
        if (cand != orig) others.push_back(cand);
    r.seq[s].chars[c] = others[rng.index(others.size())];
    return r;
}

// Swaps two distinct character positions inside one syllable of length > 2.
inline OpResult adjacent_syllable_char_transposition(const SyllableSeq& seq, Rng& rng,
                                                     const ScriptTable&) {
    std::vector<size_t> eligible;
    for (size_t s = 0; s < seq.size(); ++s)
        if (seq[s].size() > 2) eligible.push_back(s);
    if (eligible.empty()) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    Syllable& syl = r.seq[eligible[rng.index(eligible.size())]];
    const auto [i, j] = rng.two_distinct(syl.size());
    std::swap(syl.chars[i], syl.chars[j]);
    return r;
}

// Exchanges one character between two adjacent syllables.
inline OpResult inter_syllable_char_transposition(const SyllableSeq& seq, Rng& rng,
                                                  const ScriptTable&) {
    if (seq.size() < 2) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    const size_t left = rng.index(seq.size() - 1);
    Syllable& a = r.seq[left];
    Syllable& b = r.seq[left + 1];
    const size_t ia = rng.index(a.size());
    const size_t ib = rng.index(b.size());
    std::swap(a.chars[ia], b.chars[ib]);
    return r;
}

// --- Syllable-level operators --------------------------------------------

// Deletes one syllable and emits the semi-mask label: the input with that
// syllable replaced by [MASK]. On noop the semi-mask equals the input.
inline OpResult syllable_random_delete(const SyllableSeq& seq, Rng& rng) {
    if (seq.size() < 2) return {seq, seq, false};
    OpResult r{seq, seq, true};
    const size_t idx = rng.index(seq.size());
    r.seq.items.erase(r.seq.items.begin() + static_cast<ptrdiff_t>(idx));
    r.semi_mask->items[idx] = Syllable(kMaskToken);
    return r;
}

// Swaps two distinct syllable positions.
inline OpResult syllable_random_transposition(const SyllableSeq& seq, Rng& rng) {
    if (seq.size() < 2) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    const auto [i, j] = rng.two_distinct(seq.size());
    std::swap(r.seq.items[i], r.seq.items[j]);
    return r;
}

// Concatenates an adjacent pair into one syllable (the tsheg between them
// disappears).
inline OpResult syllable_random_merge(const SyllableSeq& seq, Rng& rng) {
    if (seq.size() < 2) return detail::noop(seq);
    OpResult r{seq, std::nullopt, true};
    const size_t idx = rng.index(seq.size() - 1);
    auto& chars = r.seq.items[idx].chars;
    const auto& next = r.seq.items[idx + 1].chars;
    chars.insert(chars.end(), next.begin(), next.end());
    r.seq.items.erase(r.seq.items.begin() + static_cast<ptrdiff_t>(idx) + 1);
    return r;
}

inline OpResult apply_corruption(CorruptionId id, const SyllableSeq& seq, Rng& rng,
                                 const ScriptTable& table) {
    switch (id) {
        case CorruptionId::CharDelete: return char_random_delete(seq, rng, table);
        case CorruptionId::CharInsert: return char_random_insert(seq, rng, table);
        case CorruptionId::CaseSubst: return char_case_substitution(seq, rng, table);
        case CorruptionId::HomoglyphSubst: return char_homoglyph_substitution(seq, rng, table);
        case CorruptionId::AdjSyllCharTranspose:
            return adjacent_syllable_char_transposition(seq, rng, table);
        case CorruptionId::InterSyllCharTranspose:
            return inter_syllable_char_transposition(seq, rng, table);
        case CorruptionId::SyllDelete: return syllable_random_delete(seq, rng);
        case CorruptionId::SyllTranspose: return syllable_random_transposition(seq, rng);
        case CorruptionId::SyllMerge: return syllable_random_merge(seq, rng);
    }
    return detail::noop(seq);
}

// --- Mixed corruption ------------------------------------------------------

struct MixedResult {
    SyllableSeq seq;
    SyllableSeq semi_mask;              // source with deleted syllables masked
    std::vector<CorruptionId> ops;      // in application order
    int noop_count = 0;
    bool changed = false;
};

// Draws i ~ U(0,8), rejecting repeats, until three distinct operator ids
// are collected; each accepted id is applied immediately to the evolving
// sequence. The semi-mask is tracked against source positions: syllable
// transposition moves provenance, merge clears it, and a deletion masks the
// source position its victim descended from.
inline MixedResult mixed_corrupt(const SyllableSeq& seq, Rng& rng, const ScriptTable& table) {
    MixedResult out{seq, seq, {}, 0, false};
    if (seq.size() < 2) return out;

    // provenance[k] = index into the source for the k-th evolving syllable,
    // or -1 once no single source syllable corresponds to it.
    std::vector<ptrdiff_t> provenance(seq.size());
    for (size_t k = 0; k < seq.size(); ++k) provenance[k] = static_cast<ptrdiff_t>(k);
    std::vector<bool> masked(seq.size(), false);

    std::set<int> ids;
    while (ids.size() < 3) {
        const int i = static_cast<int>(rng.below(kCorruptionCount));
        if (ids.count(i)) continue;
        ids.insert(i);
        const auto id = static_cast<CorruptionId>(i);
        out.ops.push_back(id);

        switch (id) {
            case CorruptionId::SyllDelete: {
                if (out.seq.size() < 2) {
                    ++out.noop_count;
                    break;
                }
                const size_t idx = rng.index(out.seq.size());
                if (provenance[idx] >= 0) masked[static_cast<size_t>(provenance[idx])] = true;
                out.seq.items.erase(out.seq.items.begin() + static_cast<ptrdiff_t>(idx));
                provenance.erase(provenance.begin() + static_cast<ptrdiff_t>(idx));
                out.changed = true;
                break;
            }
            case CorruptionId::SyllTranspose: {
                if (out.seq.size() < 2) {
                    ++out.noop_count;
                    break;
                }
                const auto [a, b] = rng.two_distinct(out.seq.size());
                std::swap(out.seq.items[a], out.seq.items[b]);
                std::swap(provenance[a], provenance[b]);
                out.changed = true;
                break;
            }
            case CorruptionId::SyllMerge: {
                if (out.seq.size() < 2) {
                    ++out.noop_count;
                    break;
                }
                const size_t idx = rng.index(out.seq.size() - 1);
                auto& chars = out.seq.items[idx].chars;
                const auto& next = out.seq.items[idx + 1].chars;
                chars.insert(chars.end(), next.begin(), next.end());
                out.seq.items.erase(out.seq.items.begin() + static_cast<ptrdiff_t>(idx) + 1);
                provenance[idx] = -1;
                provenance.erase(provenance.begin() + static_cast<ptrdiff_t>(idx) + 1);
                out.changed = true;
                break;
            }
            default: {
                OpResult r = apply_corruption(id, out.seq, rng, table);
                if (r.changed) {
                    out.seq = std::move(r.seq);
                    out.changed = true;
                } else {
                    ++out.noop_count;
                }
                break;
            }
        }
    }
    for (size_t k = 0; k < seq.size(); ++k)
        if (masked[k]) out.semi_mask.items[k] = Syllable(kMaskToken);
    return out;
}

// --- Records ----------------------------------------------------------------

// One synthesized training example.
struct CorruptionRecord {
    std::string id;
    std::string source;
    std::string corrupted;
    std::string semi_mask;
    std::vector<CorruptionId> ops;
    uint64_t seed = 0;
    int noop_count = 0;  // bookkeeping only; not serialized
};

}  // namespace tispell
