#pragma once

// Monotonic sequence alignment of remnants against candidate arguments.
// align() is a Needleman-Wunsch maximizer; brute_force_align() enumerates
// every monotonic matching and exists so the two can be checked against
// each other. Do not fold them together.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace udgap {

struct Alignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (g index, f index), ascending
    double score = 0.0;
};

namespace detail {

// ordering on candidate alignments: higher score, then more pairs, then
// the lexicographically smallest pair list
inline bool alignment_better(const Alignment& a, const Alignment& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pairs.size() != b.pairs.size()) return a.pairs.size() > b.pairs.size();
    return a.pairs < b.pairs;
}

}  // namespace detail

// global alignment of sequences of sizes n_g and n_f maximizing the summed
// pair scores plus gap_penalty for every unaligned element on either side
template <typename Scorer>
Alignment align(std::size_t n_g, std::size_t n_f, Scorer&& score, double gap_penalty) {
    // each cell keeps the best full value (score, pair count, pair list) of
    // an alignment of the prefixes; list comparison stays valid under a
    // shared continuation because tied candidates have lists of equal length
    std::vector<std::vector<Alignment>> dp(n_g + 1, std::vector<Alignment>(n_f + 1));
    for (std::size_t i = 0; i <= n_g; ++i) {
        for (std::size_t j = 0; j <= n_f; ++j) {
            if (i == 0 && j == 0) continue;
            bool have = false;
            Alignment best;
            auto consider = [&](Alignment cand) {
                if (!have || detail::alignment_better(cand, best)) {
                    best = std::move(cand);
                    have = true;
                }
            };
            if (i > 0 && j > 0) {
                Alignment cand = dp[i - 1][j - 1];
                cand.score += score(i - 1, j - 1);
                cand.pairs.emplace_back(i - 1, j - 1);
                consider(std::move(cand));
            }
            if (i > 0) {
                Alignment cand = dp[i - 1][j];
                cand.score += gap_penalty;
                consider(std::move(cand));
            }
            if (j > 0) {
                Alignment cand = dp[i][j - 1];
                cand.score += gap_penalty;
                consider(std::move(cand));
            }
            dp[i][j] = std::move(best);
        }
    }
    return dp[n_g][n_f];
}

// exhaustive reference implementation; sizes are capped because the search
// space grows like the Delannoy numbers
template <typename Scorer>
Alignment brute_force_align(std::size_t n_g, std::size_t n_f, Scorer&& score,
                            double gap_penalty) {
    if (n_g > 8 || n_f > 8)
        throw std::invalid_argument("brute_force_align is limited to sequences of at most 8");

    Alignment best;
    best.score = gap_penalty * static_cast<double>(n_g + n_f);
    bool have = false;

    std::vector<std::pair<std::size_t, std::size_t>> current;
    auto recurse = [&](auto&& self, std::size_t i, std::size_t j, double acc) -> void {
        if (i == n_g && j == n_f) {
            Alignment cand;
            cand.pairs = current;
            cand.score =
                acc + gap_penalty * static_cast<double>(n_g + n_f - 2 * current.size());
            if (!have || detail::alignment_better(cand, best)) {
                best = std::move(cand);
                have = true;
            }
            return;
        }
        if (i < n_g && j < n_f) {
            current.emplace_back(i, j);
            self(self, i + 1, j + 1, acc + score(i, j));
            current.pop_back();
        }
        if (i < n_g) self(self, i + 1, j, acc);
        if (j < n_f) self(self, i, j + 1, acc);
    };
    recurse(recurse, 0, 0, 0.0);
    return best;
}

}  // namespace udgap
