#pragma once

// Plain Levenshtein distance over arbitrary element sequences, with an
// early-exit bounded variant for candidate verification in the dictionary
// corrector.

#include <algorithm>
#include <vector>

namespace tispell {

template <typename Seq>
size_t levenshtein(const Seq& a, const Seq& b) {
    const size_t n = a.size(), m = b.size();
    std::vector<size_t> row(m + 1);
    for (size_t j = 0; j <= m; ++j) row[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        size_t diag = row[0];
        row[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            const size_t up = row[j];
            const size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({sub, up + 1, row[j - 1] + 1});
            diag = up;
        }
    }
    return row[m];
}

// True iff levenshtein(a, b) <= bound. Band-limited rows keep this cheap
// when called once per candidate.
template <typename Seq>
bool within_edit_distance(const Seq& a, const Seq& b, size_t bound) {
    const size_t n = a.size(), m = b.size();
    const size_t big = bound + 1;
    if (n > m + bound || m > n + bound) return false;
    std::vector<size_t> row(m + 1, big);
    for (size_t j = 0; j <= std::min(m, bound); ++j) row[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        const size_t lo = i > bound ? i - bound : 1;
        const size_t hi = std::min(m, i + bound);
        size_t diag = lo > 1 ? row[lo - 1] : row[0];
        if (lo == 1) {
            diag = row[0];
            row[0] = i <= bound ? i : big;
        }
        size_t best = big;
        if (lo > 1) row[lo - 1] = big;
        for (size_t j = lo; j <= hi; ++j) {
            const size_t up = row[j];
            const size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            size_t v = std::min(sub, std::min(up, row[j - 1]) + 1);
            if (v > big) v = big;
            row[j] = v;
            diag = up;
            best = std::min(best, v);
        }
        if (hi < m) row[hi + 1] = big;
        if (best > bound) return false;
    }
    return row[m] <= bound;
}

}  // namespace tispell
