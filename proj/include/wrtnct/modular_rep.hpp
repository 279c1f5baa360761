/**
 * @file modular_rep.hpp
 * @brief The modular action rho on the N^2-dimensional Weyl register, and the
 *        N x N clock-shift model.
 *
 * Generators, with |p,s> indexed row-major:
 *   rho(S)|p,s> = (1/N) sum_{r,u} t^{2(pu - sr)} |r,u>
 *   rho(T)|p,s> = t^{s^2} |p+s, s>
 * rho(g) is defined as the ordered product of generator operators along
 * decompose(g); that fixes the projective phase, and it is reported as is.
 */
#pragma once

#include "nct_algebra.hpp"
#include "sl2z.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace wrtnct {

inline DenseOperator rho_S(const Level &level) {
    const int n = level.value();
    const int d = level.dim();
    DenseOperator op(d, d);
    const double scale = 1.0 / n;
    for (int p = 0; p < n; ++p) {
        for (int s = 0; s < n; ++s) {
            for (int r = 0; r < n; ++r) {
                for (int u = 0; u < n; ++u) {
                    op(r * n + u, p * n + s) = scale * level.root(2 * (static_cast<std::int64_t>(p) * u - static_cast<std::int64_t>(s) * r));
                }
            }
        }
    }
    return op;
}

/// rho(T)^{power} for power = +1 or -1: |p,s> -> t^{power s^2} |p + power s, s>.
inline DenseOperator rho_T(const Level &level, int power = 1) {
    const int n = level.value();
    const int d = level.dim();
    DenseOperator op = DenseOperator::Zero(d, d);
    for (int p = 0; p < n; ++p) {
        for (int s = 0; s < n; ++s) {
            const auto target = static_cast<int>(level.reduce(p + static_cast<std::int64_t>(power) * s));
            op(target * n + s, p * n + s) = level.root(static_cast<std::int64_t>(power) * s * s);
        }
    }
    return op;
}

/// Dense matrix of one generator, straight from the defining formulas.
inline DenseOperator generator_operator(Letter l, const Level &level) {
    switch (l) {
        case Letter::S: return rho_S(level);
        case Letter::T: return rho_T(level, 1);
        case Letter::Tinv: return rho_T(level, -1);
    }
    return {};
}

/// QFT_N|j> = N^{-1/2} sum_k t^{2jk} |k>, applied to the first (register = 0) or second register.
inline void apply_qft(std::span<Complex> v, int reg, const Level &level, std::vector<Complex> &scratch) {
    const int n = level.value();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    scratch.assign(v.size(), Complex{});
    for (int a = 0; a < n; ++a) {
        for (int j = 0; j < n; ++j) {
            const Complex amp = reg == 0 ? v[static_cast<std::size_t>(j * n + a)] : v[static_cast<std::size_t>(a * n + j)];
            if (amp == Complex{}) continue;
            for (int k = 0; k < n; ++k) {
                const Complex term = amp * level.root(2 * static_cast<std::int64_t>(j) * k);
                if (reg == 0) scratch[static_cast<std::size_t>(k * n + a)] += term;
                else scratch[static_cast<std::size_t>(a * n + k)] += term;
            }
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * scratch[i];
}

/**
 * In-place action of one generator on an N^2 amplitude vector. S runs as
 * (QFT (x) QFT) o (NEG (x) I) o SWAP, i.e. |p,s> -> |-s,p> then a QFT on each
 * register; T and T^-1 are phased permutations.
 */
inline void apply_generator(std::span<Complex> v, Letter l, const Level &level, std::vector<Complex> &scratch) {
    const int n = level.value();
    scratch.assign(v.size(), Complex{});
    if (l == Letter::S) {
        for (int p = 0; p < n; ++p) {
            for (int s = 0; s < n; ++s) {
                scratch[static_cast<std::size_t>(((n - s) % n) * n + p)] = v[static_cast<std::size_t>(p * n + s)];
            }
        }
        std::copy(scratch.begin(), scratch.end(), v.begin());
        apply_qft(v, 0, level, scratch);
        apply_qft(v, 1, level, scratch);
        return;
    }
    const int power = l == Letter::T ? 1 : -1;
    for (int p = 0; p < n; ++p) {
        for (int s = 0; s < n; ++s) {
            const auto target = level.reduce(p + static_cast<std::int64_t>(power) * s);
            scratch[static_cast<std::size_t>(target * n + s)] =
                level.root(static_cast<std::int64_t>(power) * s * s) * v[static_cast<std::size_t>(p * n + s)];
        }
    }
    std::copy(scratch.begin(), scratch.end(), v.begin());
}

/// Ordered product rho(w_1) rho(w_2) ... rho(w_l), built column by column.
inline DenseOperator rho(const SL2Word &word, const Level &level) {
    const int d = level.dim();
    DenseOperator out = DenseOperator::Identity(d, d);
    std::vector<Complex> scratch;
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
        for (int col = 0; col < d; ++col) {
            apply_generator(std::span<Complex>(out.col(col).data(), static_cast<std::size_t>(d)), *it, level, scratch);
        }
    }
    return out;
}

inline DenseOperator rho(const SL2Matrix &g, const Level &level) { return rho(decompose(g), level); }

/// |p,s> -> |-p,-s>.
inline DenseOperator parity_operator(const Level &level) {
    const int d = level.dim();
    DenseOperator op = DenseOperator::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const WeylIndex w = WeylIndex::from_flat(i, level);
        op(WeylIndex::reduce(-w.as_pair(), level).flat(level), i) = 1.0;
    }
    return op;
}

/**
 * tau(w) = Tr(op * L_{e_w}) for every w, where L_{e_w}|x> = t^{omega(w,x)}|w+x>.
 * Uses Tr(op L) = sum_x <x|op|w+x> t^{omega(w,x)}; result indexed row-major.
 */
inline std::vector<Complex> trace_pairing(const DenseOperator &op, const Level &level) {
    const int d = level.dim();
    std::vector<Complex> tau(static_cast<std::size_t>(d));
    for (int wi = 0; wi < d; ++wi) {
        const WeylIndex w = WeylIndex::from_flat(wi, level);
        Complex acc{};
        for (int xi = 0; xi < d; ++xi) {
            const WeylProduct prod = weyl_mul(w, WeylIndex::from_flat(xi, level), level);
            acc += op(xi, prod.index.flat(level)) * prod.phase.value(level);
        }
        tau[static_cast<std::size_t>(wi)] = acc;
    }
    return tau;
}

inline std::vector<Complex> trace_pairing(const SL2Matrix &g, const Level &level) {
    return trace_pairing(rho(g, level), level);
}

/// max |op op^dagger - I|.
inline double unitarity_residual(const DenseOperator &op) {
    const auto d = op.rows();
    return (op * op.adjoint() - DenseOperator::Identity(d, d)).cwiseAbs().maxCoeff();
}

/// A ~ lambda B with lambda read off the largest-magnitude entry of A.
struct PhaseFit {
    Complex lambda{};
    double residual = std::numeric_limits<double>::infinity();
};

inline PhaseFit fit_global_phase(const DenseOperator &lhs, const DenseOperator &rhs) {
    Eigen::Index row = 0, col = 0;
    lhs.cwiseAbs().maxCoeff(&row, &col);
    PhaseFit fit;
    if (std::abs(rhs(row, col)) > 1e-12) fit.lambda = lhs(row, col) / rhs(row, col);
    fit.residual = (lhs - fit.lambda * rhs).cwiseAbs().maxCoeff();
    return fit;
}

/// U = shift |j> -> |j+1>, V = clock |j> -> t^{2j}|j>, so that V U = t^2 U V.
struct ClockShiftPair {
    DenseOperator U;
    DenseOperator V;
};

inline ClockShiftPair clock_shift_pair(const Level &level) {
    const int n = level.value();
    ClockShiftPair cs{DenseOperator::Zero(n, n), DenseOperator::Zero(n, n)};
    for (int j = 0; j < n; ++j) {
        cs.U((j + 1) % n, j) = 1.0;
        cs.V(j, j) = level.root(2 * j);
    }
    return cs;
}

inline DenseOperator matrix_power(const DenseOperator &m, int k) {
    DenseOperator out = DenseOperator::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
}

/**
 * Numerical rank of span{U^p V^s + U^-p V^-s : (p,s) in Z_N^2} inside Mat_N,
 * counting singular values above threshold.
 */
inline int clock_shift_rank(const Level &level, double threshold = 1e-8) {
    const int n = level.value();
    const ClockShiftPair cs = clock_shift_pair(level);
    std::vector<DenseOperator> upow, vpow;
    for (int k = 0; k < n; ++k) {
        upow.push_back(matrix_power(cs.U, k));
        vpow.push_back(matrix_power(cs.V, k));
    }
    DenseOperator rows(n * n, n * n);
    for (int p = 0; p < n; ++p) {
        for (int s = 0; s < n; ++s) {
            const DenseOperator elem = upow[static_cast<std::size_t>(p)] * vpow[static_cast<std::size_t>(s)] +
                                       upow[static_cast<std::size_t>((n - p) % n)] * vpow[static_cast<std::size_t>((n - s) % n)];
            rows.row(p * n + s) = Eigen::Map<const Eigen::RowVectorXcd>(elem.data(), elem.size());
        }
    }
    Eigen::JacobiSVD<DenseOperator> svd(rows);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > threshold) ++rank;
    }
    return rank;
}

}  // namespace wrtnct
