/**
 * @file dp_engine.hpp
 * @brief Dynamic program for Z_N(M_g; B_{v_1}, ..., B_{v_m}) = Tr(rho(g) L_{B_{v_m}} ... L_{B_{v_1}}).
 *
 * The product of left-multiplication operators is tracked as a coefficient
 * table C over Z_N^2 with P = sum_w C(w) e_w. One insertion v updates
 *
 *   C'(w) = t^{<v,w>} C(w - v) + t^{-<v,w>} C(w + v)     (indices mod N)
 *
 * in Theta(N^2), and the final trace pairs C with tau_g(w) = Tr(rho(g) L_{e_w}).
 */
#pragma once

#include "modular_rep.hpp"
#include "nct_algebra.hpp"
#include "sl2z.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wrtnct {

using InsertionList = std::vector<IntPair>;

class CoeffTable {
public:
    explicit CoeffTable(const Level &level)
        : level_(level), c_(static_cast<std::size_t>(level.dim())) {}

    const Level &level() const noexcept { return level_; }
    int size() const noexcept { return level_.dim(); }

    Complex &operator[](WeylIndex w) { return c_[static_cast<std::size_t>(w.flat(level_))]; }
    const Complex &operator[](WeylIndex w) const { return c_[static_cast<std::size_t>(w.flat(level_))]; }
    Complex &at_flat(int i) { return c_[static_cast<std::size_t>(i)]; }
    const Complex &at_flat(int i) const { return c_[static_cast<std::size_t>(i)]; }

    const std::vector<Complex> &values() const noexcept { return c_; }
    std::vector<Complex> &values() noexcept { return c_; }

    double l1_norm() const {
        double total = 0.0;
        for (const Complex &z : c_) total += std::abs(z);
        return total;
    }

    double max_abs_diff(const CoeffTable &other) const {
        if (!(level_ == other.level_)) throw std::invalid_argument("tables at different levels");
        double worst = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) worst = std::max(worst, std::abs(c_[i] - other.c_[i]));
        return worst;
    }

private:
    Level level_;
    std::vector<Complex> c_;
};

/// Delta table: C(0,0) = 1, zero elsewhere.
inline CoeffTable init_table(const Level &level) {
    CoeffTable table(level);
    table[WeylIndex{0, 0}] = 1.0;
    return table;
}

/// Phi(w) = t^{<v,w>} over all of Z_N^2, row-major.
inline std::vector<Complex> phase_grid(WeylIndex v, const Level &level) {
    const int n = level.value();
    std::vector<Complex> grid(static_cast<std::size_t>(level.dim()));
    for (int r = 0; r < n; ++r) {
        for (int u = 0; u < n; ++u) {
            grid[static_cast<std::size_t>(r * n + u)] =
                level.root(static_cast<std::int64_t>(v.p) * u - static_cast<std::int64_t>(v.s) * r);
        }
    }
    return grid;
}

/**
 * Gather form of one insertion: reads `in`, writes every cell of `out`.
 * `in` and `out` must be distinct tables (the update reads two shifted cells).
 * With a precomputed grid the phase is a lookup, otherwise it is accumulated
 * from integer exponents along each row.
 */
inline void dp_update_into(const CoeffTable &in, IntPair insertion, CoeffTable &out,
                           const std::vector<Complex> *grid = nullptr) {
    if (&in == &out) throw std::invalid_argument("dp_update_into: input and output must differ");
    const Level &level = in.level();
    const int n = level.value();
    const WeylIndex v = WeylIndex::reduce(insertion, level);
    for (int r = 0; r < n; ++r) {
        const int rm = (r - v.p + n) % n;
        const int rp = (r + v.p) % n;
        // <v,(r,u)> = p u - s r, stepped by p along the row
        int exponent = static_cast<int>(level.reduce(-static_cast<std::int64_t>(v.s) * r));
        for (int u = 0; u < n; ++u) {
            const int um = (u - v.s + n) % n;
            const int up = (u + v.s) % n;
            const Complex phi = grid ? (*grid)[static_cast<std::size_t>(r * n + u)] : level.root(exponent);
            out.at_flat(r * n + u) = phi * in.at_flat(rm * n + um) + std::conj(phi) * in.at_flat(rp * n + up);
            exponent += v.p;
            if (exponent >= n) exponent -= n;
        }
    }
}

inline CoeffTable dp_update(const CoeffTable &table, IntPair v) {
    CoeffTable out(table.level());
    dp_update_into(table, v, out);
    return out;
}

/// Runs every insertion in order v_1, ..., v_m, double-buffered.
inline CoeffTable run_dp(const InsertionList &insertions, const Level &level, bool precompute_grid = false) {
    CoeffTable cur = init_table(level);
    CoeffTable next(level);
    std::vector<Complex> grid;
    for (const IntPair &v : insertions) {
        if (precompute_grid) {
            grid = phase_grid(WeylIndex::reduce(v, level), level);
            dp_update_into(cur, v, next, &grid);
        } else {
            dp_update_into(cur, v, next);
        }
        std::swap(cur, next);
    }
    return cur;
}

inline constexpr std::size_t kMaxBruteForceInsertions = 20;

/**
 * Oracle: expands prod_i (e_{v_i} + e_{-v_i}) over all 2^m sign choices with
 * integer indices and integer phase exponents, reducing mod N only when binning.
 */
inline CoeffTable brute_force_table(const InsertionList &insertions, const Level &level) {
    if (insertions.size() > kMaxBruteForceInsertions) {
        throw std::length_error("brute_force_table: at most 20 insertions, got " + std::to_string(insertions.size()));
    }
    CoeffTable table(level);
    const std::size_t m = insertions.size();
    // iterative DFS; stack holds (depth, exponent, index)
    struct Frame {
        std::size_t depth;
        std::int64_t exponent;
        IntPair index;
    };
    std::vector<Frame> stack{{0, 0, {0, 0}}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.depth == m) {
            table[WeylIndex::reduce(f.index, level)] += level.root(f.exponent);
            continue;
        }
        for (const std::int64_t sign : {1, -1}) {
            const IntPair step = sign * insertions[f.depth];
            // e_step * e_index = t^{omega(step, index)} e_{step + index}
            stack.push_back({f.depth + 1, f.exponent + symplectic(step, f.index), step + f.index});
        }
    }
    return table;
}

/// Z = sum_w C(w) tau(w).
inline Complex pair_with_trace(const CoeffTable &table, const std::vector<Complex> &tau) {
    Complex z{};
    for (int i = 0; i < table.size(); ++i) z += table.at_flat(i) * tau[static_cast<std::size_t>(i)];
    return z;
}

struct WrtValue {
    Complex z;           ///< raw trace under the word-evaluation phase convention
    Complex normalized;  ///< z / N^2
    double magnitude;    ///< |z|, independent of the projective phase
};

inline WrtValue wrt_trace(const SL2Word &word, const InsertionList &insertions, const Level &level) {
    const CoeffTable table = run_dp(insertions, level);
    const Complex z = pair_with_trace(table, trace_pairing(rho(word, level), level));
    return {z, z / static_cast<double>(level.dim()), std::abs(z)};
}

inline WrtValue wrt_trace(const SL2Matrix &g, const InsertionList &insertions, const Level &level) {
    return wrt_trace(decompose(g), insertions, level);
}

}  // namespace wrtnct
