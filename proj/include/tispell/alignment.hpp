#pragma once

// Minimal-edit-distance alignment between reference and hypothesis syllable
// sequences. Needed because corrected outputs can differ in length from the
// reference after deletions and merges. Ties are broken deterministically:
// match > substitute > delete > insert, resolved left to right.

#include <cstddef>
#include <string>
#include <vector>

#include "tispell/syllable.hpp"

namespace tispell {

enum class AlignKind { Match, Substitute, Insert, Delete };

struct AlignOp {
    // ref_index/hyp_index are the consumed positions; npos when the op does
    // not consume on that side (Insert has no ref token, Delete no hyp token).
    static constexpr size_t npos = static_cast<size_t>(-1);
    size_t ref_index = npos;
    size_t hyp_index = npos;
    AlignKind kind = AlignKind::Match;
};

struct Alignment {
    std::vector<AlignOp> ops;
    size_t cost = 0;
};

inline Alignment align(const SyllableSeq& ref, const SyllableSeq& hyp) {
    const size_t n = ref.size(), m = hyp.size();
    // dist[i][j] = edit distance between ref[i..) and hyp[j..), so the
    // backtrace can walk forward applying the tie-break left to right.
    std::vector<std::vector<size_t>> dist(n + 1, std::vector<size_t>(m + 1));
    for (size_t j = 0; j <= m; ++j) dist[n][j] = m - j;
    for (size_t i = 0; i <= n; ++i) dist[i][m] = n - i;
    for (size_t i = n; i-- > 0;) {
        for (size_t j = m; j-- > 0;) {
            const size_t sub = dist[i + 1][j + 1] + (ref[i] == hyp[j] ? 0 : 1);
            const size_t del = dist[i + 1][j] + 1;
            const size_t ins = dist[i][j + 1] + 1;
            dist[i][j] = std::min({sub, del, ins});
        }
    }

    Alignment out;
    out.cost = dist[0][0];
    size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && ref[i] == hyp[j] && dist[i][j] == dist[i + 1][j + 1]) {
            out.ops.push_back({i, j, AlignKind::Match});
            ++i, ++j;
        } else if (i < n && j < m && ref[i] != hyp[j] && dist[i][j] == dist[i + 1][j + 1] + 1) {
            out.ops.push_back({i, j, AlignKind::Substitute});
            ++i, ++j;
        } else if (i < n && dist[i][j] == dist[i + 1][j] + 1) {
            out.ops.push_back({i, AlignOp::npos, AlignKind::Delete});
            ++i;
        } else {
            out.ops.push_back({AlignOp::npos, j, AlignKind::Insert});
            ++j;
        }
    }
    return out;
}

}  // namespace tispell
