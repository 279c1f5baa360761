// Independent reference implementations used only by the tests.
// Everything here is built from the defining formulas with plain loops and
// std::polar, without calling the library's phase tables or DP code.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline long long md(long long x, long long n) { return ((x % n) + n) % n; }

/// t^k with t = exp(2 pi i / N).
inline cd tp(long long k, int n) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(md(k, n)) / n);
}

inline int flat(long long p, long long s, int n) { return static_cast<int>(md(p, n) * n + md(s, n)); }

inline long long omega(long long p, long long s, long long r, long long u) { return p * u - s * r; }

/// <r,u| S |p,s> = (1/N) t^{2(pu - sr)}.
inline Mat S(int n) {
    Mat m(n * n, n * n);
    for (int p = 0; p < n; ++p)
        for (int s = 0; s < n; ++s)
            for (int r = 0; r < n; ++r)
                for (int u = 0; u < n; ++u) m(r * n + u, p * n + s) = tp(2LL * (p * u - s * r), n) / double(n);
    return m;
}

/// T^{k}|p,s> = t^{k s^2}|p + k s, s>, by repeated application of the k = +-1 formula.
inline Mat T(int n, int k = 1) {
    Mat one = Mat::Zero(n * n, n * n);
    const int sign = k >= 0 ? 1 : -1;
    for (int p = 0; p < n; ++p)
        for (int s = 0; s < n; ++s) one(flat(p + sign * s, s, n), p * n + s) = tp(sign * s * s, n);
    Mat out = Mat::Identity(n * n, n * n);
    for (int i = 0; i < std::abs(k); ++i) out = one * out;
    return out;
}

/// |p,s> -> |-p,-s>.
inline Mat parity(int n) {
    Mat m = Mat::Zero(n * n, n * n);
    for (int p = 0; p < n; ++p)
        for (int s = 0; s < n; ++s) m(flat(-p, -s, n), p * n + s) = 1.0;
    return m;
}

/// Left multiplication by e_w: |x> -> t^{omega(w,x)} |w + x>.
inline Mat L_e(long long wp, long long ws, int n) {
    Mat m = Mat::Zero(n * n, n * n);
    for (int r = 0; r < n; ++r)
        for (int u = 0; u < n; ++u) m(flat(wp + r, ws + u, n), r * n + u) += tp(omega(wp, ws, r, u), n);
    return m;
}

/// L_{B_v} = L_{e_v} + L_{e_{-v}}.
inline Mat L_B(long long p, long long s, int n) { return L_e(p, s, n) + L_e(-p, -s, n); }

/// Letters: 'S', 'T', 't' (= T^-1). rho(word) = rho(w_1) ... rho(w_l).
inline Mat rho(const std::vector<char> &word, int n) {
    Mat out = Mat::Identity(n * n, n * n);
    for (char c : word) out = out * (c == 'S' ? S(n) : (c == 'T' ? T(n, 1) : T(n, -1)));
    return out;
}

/// Tr(rho(word) L_{B_{v_m}} ... L_{B_{v_1}}) from dense matrices.
inline cd dense_trace(const std::vector<char> &word, const std::vector<std::pair<long long, long long>> &ins, int n) {
    Mat w = Mat::Identity(n * n, n * n);
    for (const auto &[p, s] : ins) w = L_B(p, s, n) * w;
    return (rho(word, n) * w).trace();
}

/// 2x2 integer matrix product along the word.
struct M2 {
    long long a, b, c, d;
};
inline M2 mul(M2 x, M2 y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}
inline M2 eval_word(const std::vector<char> &word) {
    M2 g{1, 0, 0, 1};
    for (char c : word) g = mul(g, c == 'S' ? M2{0, -1, 1, 0} : (c == 'T' ? M2{1, 1, 0, 1} : M2{1, -1, 0, 1}));
    return g;
}

/// Sign-vector count by direct recursion over {+-1}^m.
inline long long signed_count(const std::vector<long long> &a, long long z, std::size_t i = 0, long long acc = 0) {
    if (i == a.size()) return acc == z ? 1 : 0;
    return signed_count(a, z, i + 1, acc + a[i]) + signed_count(a, z, i + 1, acc - a[i]);
}

/// Same count with sums compared mod n.
inline long long signed_count_mod(const std::vector<long long> &a, long long z, long long n, std::size_t i = 0,
                                  long long acc = 0) {
    if (i == a.size()) return md(acc - z, n) == 0 ? 1 : 0;
    return signed_count_mod(a, z, n, i + 1, acc + a[i]) + signed_count_mod(a, z, n, i + 1, acc - a[i]);
}

/// Coefficients of prod_i (e_{v_i} + e_{-v_i}), later factors on the left, by recursion
/// over all 2^m sign choices with integer indices; row-major over Z_N^2.
inline std::vector<cd> expand_table(const std::vector<std::pair<long long, long long>> &ins, int n) {
    std::vector<cd> table(static_cast<std::size_t>(n * n));
    auto rec = [&](auto &&self, std::size_t i, long long p, long long s, long long k) -> void {
        if (i == ins.size()) {
            table[static_cast<std::size_t>(flat(p, s, n))] += tp(k, n);
            return;
        }
        for (int sign : {1, -1}) {
            const long long vp = sign * ins[i].first, vs = sign * ins[i].second;
            self(self, i + 1, p + vp, s + vs, k + omega(vp, vs, p, s));
        }
    };
    rec(rec, 0, 0, 0, 0);
    return table;
}

inline std::vector<char> random_word(std::mt19937_64 &rng, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len), letter(0, 2);
    std::vector<char> w(static_cast<std::size_t>(len(rng)));
    for (char &c : w) c = "STt"[letter(rng)];
    return w;
}

inline std::vector<std::pair<long long, long long>> random_insertions(std::mt19937_64 &rng, int max_m, int range) {
    std::uniform_int_distribution<int> len(0, max_m);
    std::uniform_int_distribution<long long> coord(-range, range);
    std::vector<std::pair<long long, long long>> ins(static_cast<std::size_t>(len(rng)));
    for (auto &v : ins) v = {coord(rng), coord(rng)};
    return ins;
}

inline double max_abs(const Mat &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
