/**
 * @file nct_algebra.hpp
 * @brief Exact arithmetic in the non-commutative torus at t = exp(2*pi*i/N).
 *
 * Weyl basis elements e_{p,s} are indexed by Z_N x Z_N and multiply by a single
 * term, e_{p,s} e_{r,u} = t^{pu - sr} e_{p+r, s+u}. Every power of t is carried
 * as an integer exponent; complex numbers only appear when an operator is
 * materialized or a table is evaluated.
 *
 * Threaded skein elements (p,s)_T embed as e_{p,s} + e_{-p,-s}, and their
 * product follows the two-term Frohman-Gelca rule.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wrtnct {

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;

/// Least non-negative residue of x modulo n (n > 0), also for negative x.
constexpr std::int64_t mod_floor(std::int64_t x, std::int64_t n) {
    const std::int64_t r = x % n;
    return r < 0 ? r + n : r;
}

/**
 * The level N of the theory. N is odd and at least 3; t = exp(2*pi*i/N) is a
 * primitive N-th root of unity, and the powers t^0..t^{N-1} are tabulated once.
 */
class Level {
public:
    explicit Level(int n) : n_(n) {
        if (n < 3 || n % 2 == 0) {
            throw std::invalid_argument("level N must be odd and >= 3, got " + std::to_string(n));
        }
        roots_.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            roots_.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n));
        }
    }

    int value() const noexcept { return n_; }
    /// Dimension N^2 of the Weyl-basis register.
    int dim() const noexcept { return n_ * n_; }

    std::int64_t reduce(std::int64_t x) const noexcept { return mod_floor(x, n_); }

    /// t^k for any integer k.
    const Complex &root(std::int64_t k) const noexcept {
        return roots_[static_cast<std::size_t>(reduce(k))];
    }

    friend bool operator==(const Level &a, const Level &b) noexcept { return a.n_ == b.n_; }

private:
    int n_;
    std::vector<Complex> roots_;
};

/// Unreduced integer pair, used for threaded elements and integer-index work.
struct IntPair {
    std::int64_t p = 0;
    std::int64_t s = 0;

    friend constexpr IntPair operator+(IntPair a, IntPair b) { return {a.p + b.p, a.s + b.s}; }
    friend constexpr IntPair operator-(IntPair a, IntPair b) { return {a.p - b.p, a.s - b.s}; }
    friend constexpr IntPair operator-(IntPair a) { return {-a.p, -a.s}; }
    friend constexpr IntPair operator*(std::int64_t k, IntPair a) { return {k * a.p, k * a.s}; }
    friend constexpr auto operator<=>(const IntPair &, const IntPair &) = default;

    /// gcd(|p|, |s|); zero only for (0,0).
    std::int64_t gcd() const { return std::gcd(p, s); }
    bool primitive() const { return gcd() == 1; }
};

inline std::ostream &operator<<(std::ostream &os, const IntPair &v) {
    return os << '(' << v.p << ',' << v.s << ')';
}

/// Index (p,s) of a Weyl basis element, always a least non-negative residue pair.
struct WeylIndex {
    int p = 0;
    int s = 0;

    static WeylIndex reduce(IntPair v, const Level &level) {
        return {static_cast<int>(level.reduce(v.p)), static_cast<int>(level.reduce(v.s))};
    }

    IntPair as_pair() const { return {p, s}; }
    /// Row-major position in an N^2 register.
    int flat(const Level &level) const { return p * level.value() + s; }
    static WeylIndex from_flat(int idx, const Level &level) {
        return {idx / level.value(), idx % level.value()};
    }

    friend constexpr auto operator<=>(const WeylIndex &, const WeylIndex &) = default;
};

inline std::ostream &operator<<(std::ostream &os, const WeylIndex &w) {
    return os << "e(" << w.p << ',' << w.s << ')';
}

/// The scalar t^k, stored as its exponent k in [0, N).
struct PhaseExp {
    int k = 0;

    static PhaseExp reduce(std::int64_t k, const Level &level) {
        return {static_cast<int>(level.reduce(k))};
    }
    Complex value(const Level &level) const { return level.root(k); }

    friend constexpr auto operator<=>(const PhaseExp &, const PhaseExp &) = default;
};

/// Symplectic form omega((p,s),(r,u)) = p*u - s*r, exact and unreduced.
constexpr std::int64_t symplectic(IntPair v, IntPair w) noexcept { return v.p * w.s - v.s * w.p; }

struct WeylProduct {
    PhaseExp phase;
    WeylIndex index;
    friend constexpr bool operator==(const WeylProduct &, const WeylProduct &) = default;
};

/// e_v * e_w = t^{omega(v,w)} e_{v+w}.
inline WeylProduct weyl_mul(WeylIndex v, WeylIndex w, const Level &level) {
    return {PhaseExp::reduce(symplectic(v.as_pair(), w.as_pair()), level),
            WeylIndex::reduce(v.as_pair() + w.as_pair(), level)};
}

/// One term t^{exponent} (index)_T of a Frohman-Gelca expansion, exponent unreduced.
struct FgTerm {
    std::int64_t exponent = 0;
    IntPair index;
    friend constexpr bool operator==(const FgTerm &, const FgTerm &) = default;
};

/// (v)_T (w)_T = t^{omega(v,w)} (v+w)_T + t^{-omega(v,w)} (v-w)_T.
constexpr std::array<FgTerm, 2> fg_product(IntPair v, IntPair w) noexcept {
    const std::int64_t om = symplectic(v, w);
    return {FgTerm{om, v + w}, FgTerm{-om, v - w}};
}

/**
 * Formal integer combination of phased Weyl basis elements,
 * sum of c * t^k e_w. Terms with the same index but different phase are kept
 * apart, so equality is exact equality in the group ring Z[Z_N] x Z_N^2.
 */
class WeylSum {
public:
    using Key = std::pair<WeylIndex, PhaseExp>;

    explicit WeylSum(const Level &level) : level_(level) {}

    void add(WeylIndex w, PhaseExp k, std::int64_t coeff = 1) {
        if (coeff == 0) return;
        auto [it, inserted] = terms_.try_emplace(Key{w, k}, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::map<Key, std::int64_t> &terms() const noexcept { return terms_; }
    const Level &level() const noexcept { return level_; }
    bool empty() const noexcept { return terms_.empty(); }

    /// Total multiplicity, counting repeated terms.
    std::int64_t weight() const {
        std::int64_t total = 0;
        for (const auto &[key, c] : terms_) total += c < 0 ? -c : c;
        return total;
    }

    WeylSum operator*(const WeylSum &rhs) const {
        WeylSum out(level_);
        for (const auto &[lk, lc] : terms_) {
            for (const auto &[rk, rc] : rhs.terms_) {
                const WeylProduct prod = weyl_mul(lk.first, rk.first, level_);
                out.add(prod.index, PhaseExp::reduce(lk.second.k + rk.second.k + prod.phase.k, level_),
                        lc * rc);
            }
        }
        return out;
    }

    WeylSum operator+(const WeylSum &rhs) const {
        WeylSum out = *this;
        for (const auto &[k, c] : rhs.terms_) out.add(k.first, k.second, c);
        return out;
    }

    WeylSum operator-(const WeylSum &rhs) const {
        WeylSum out = *this;
        for (const auto &[k, c] : rhs.terms_) out.add(k.first, k.second, -c);
        return out;
    }

    /// Coefficient vector over the N^2 Weyl basis, phases evaluated.
    std::vector<Complex> evaluate() const {
        std::vector<Complex> out(static_cast<std::size_t>(level_.dim()));
        for (const auto &[k, c] : terms_) {
            out[static_cast<std::size_t>(k.first.flat(level_))] += static_cast<double>(c) * k.second.value(level_);
        }
        return out;
    }

    friend bool operator==(const WeylSum &a, const WeylSum &b) {
        return a.level_ == b.level_ && a.terms_ == b.terms_;
    }

private:
    Level level_;
    std::map<Key, std::int64_t> terms_;
};

/// Image of the threaded element (v)_T: e_{v mod N} + e_{-v mod N}; 2 e_{0,0} when v = 0 mod N.
inline WeylSum embed_threaded(IntPair v, const Level &level) {
    WeylSum out(level);
    out.add(WeylIndex::reduce(v, level), PhaseExp{0});
    out.add(WeylIndex::reduce(-v, level), PhaseExp{0});
    return out;
}

/// Left-regular operator L_{e_w}: |x> -> t^{omega(w,x)} |w + x> on the N^2 register.
inline DenseOperator left_regular(WeylIndex w, const Level &level) {
    const int d = level.dim();
    DenseOperator op = DenseOperator::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        const WeylIndex x = WeylIndex::from_flat(col, level);
        const WeylProduct prod = weyl_mul(w, x, level);
        op(prod.index.flat(level), col) = prod.phase.value(level);
    }
    return op;
}

/// Left-regular operator of a formal sum.
inline DenseOperator left_regular(const WeylSum &x) {
    const Level &level = x.level();
    DenseOperator op = DenseOperator::Zero(level.dim(), level.dim());
    for (const auto &[key, c] : x.terms()) {
        op += (static_cast<double>(c) * key.second.value(level)) * left_regular(key.first, level);
    }
    return op;
}

/**
 * Checks the threading identity T_d(phi(gamma)) = e_{d gamma} + e_{-d gamma} in the
 * left-regular operator model, with T_0 = 2, T_1 = x, T_{k+1} = x T_k - T_{k-1}.
 */
inline bool chebyshev_check(int d, IntPair gamma, const Level &level, double tol = 1e-9) {
    if (d < 0) throw std::invalid_argument("chebyshev_check: degree must be >= 0");
    if (!gamma.primitive()) throw std::invalid_argument("chebyshev_check: gamma must be primitive");

    const int dim = level.dim();
    const DenseOperator x = left_regular(embed_threaded(gamma, level));
    DenseOperator prev = 2.0 * DenseOperator::Identity(dim, dim);
    DenseOperator cur = x;
    if (d == 0) {
        cur = prev;
    } else {
        for (int k = 1; k < d; ++k) {
            DenseOperator next = x * cur - prev;
            prev = std::move(cur);
            cur = std::move(next);
        }
    }
    const DenseOperator expected = left_regular(embed_threaded(static_cast<std::int64_t>(d) * gamma, level));
    return (cur - expected).cwiseAbs().maxCoeff() < tol;
}

/// Canonical member of the orbit {w, -w} under the involution e_w -> e_{-w}.
struct SymmetricElement {
    WeylIndex orbit;
    friend constexpr auto operator<=>(const SymmetricElement &, const SymmetricElement &) = default;
};

inline SymmetricElement canonical_orbit(WeylIndex v, const Level &level) {
    const WeylIndex neg = WeylIndex::reduce(-v.as_pair(), level);
    return {std::min(v, neg)};
}

/// Number of involution orbits on Z_N^2, counted by enumeration.
inline int orbit_count(const Level &level) {
    std::vector<bool> seen(static_cast<std::size_t>(level.dim()), false);
    int count = 0;
    for (int i = 0; i < level.dim(); ++i) {
        const SymmetricElement o = canonical_orbit(WeylIndex::from_flat(i, level), level);
        const auto idx = static_cast<std::size_t>(o.orbit.flat(level));
        if (!seen[idx]) {
            seen[idx] = true;
            ++count;
        }
    }
    return count;
}

}  // namespace wrtnct
