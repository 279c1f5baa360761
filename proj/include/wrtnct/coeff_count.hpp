/**
 * @file coeff_count.hpp
 * @brief Colinear Frohman-Gelca coefficient counting.
 *
 * For colinear inputs (a_i, 0) every FG phase is 1, so
 *   prod_i B_{(a_i,0)} = sum_{eps in {+-1}^m} B_{(sum eps_i a_i, 0)}
 * and the coefficient c(z) of B_{(z,0)} counts sign vectors with sum eps_i a_i = z.
 * The modular count c_N(z) agrees with c(z) whenever N > B = sum |a_i| + |z|.
 */
#pragma once

#include "nct_algebra.hpp"
#include "quantum_sim.hpp"
#include "sl2z.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wrtnct {

struct ColinearInstance {
    std::vector<std::int64_t> a;
    std::int64_t z = 0;

    std::size_t m() const noexcept { return a.size(); }
    /// A = sum |a_i|.
    std::int64_t abs_sum() const {
        std::int64_t total = 0;
        for (std::int64_t x : a) total += x < 0 ? -x : x;
        return total;
    }
};

struct CountResult {
    BigInt count;
    /// count / 2^m
    double normalized = 0.0;
};

inline CountResult make_count(BigInt count, std::size_t m) {
    const double normalized = std::ldexp(count.convert_to<double>(), -static_cast<int>(m));
    return {std::move(count), normalized};
}

/// B = sum |a_i| + |z|; any modulus N > B is wraparound-free.
inline std::int64_t no_wrap_bound(const ColinearInstance &inst) {
    return inst.abs_sum() + (inst.z < 0 ? -inst.z : inst.z);
}

inline constexpr std::size_t kMaxBruteForceTerms = 24;

/// Enumerates all 2^m sign vectors in Gray-code order.
inline CountResult brute_force_count(const ColinearInstance &inst) {
    const std::size_t m = inst.m();
    if (m > kMaxBruteForceTerms) {
        throw std::length_error("brute_force_count: at most 24 terms, got " + std::to_string(m));
    }
    std::int64_t sum = 0;
    for (std::int64_t x : inst.a) sum -= x;  // all signs -1
    std::uint64_t count = sum == inst.z ? 1 : 0;
    std::uint64_t gray = 0;
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int bit = __builtin_ctzll(k);
        gray ^= std::uint64_t{1} << bit;
        const std::int64_t ai = inst.a[static_cast<std::size_t>(bit)];
        sum += ((gray >> bit) & 1U) ? 2 * ai : -2 * ai;
        if (sum == inst.z) ++count;
    }
    return make_count(BigInt(count), m);
}

namespace detail {

template <typename Count>
Count modular_count(const ColinearInstance &inst, std::int64_t modulus) {
    const auto n = static_cast<std::size_t>(modulus);
    std::vector<Count> counts(n, Count(0)), next(n, Count(0));
    counts[0] = 1;
    for (std::int64_t ai : inst.a) {
        const auto shift = static_cast<std::size_t>(mod_floor(ai, modulus));
        for (std::size_t x = 0; x < n; ++x) {
            next[x] = counts[(x + n - shift) % n] + counts[(x + shift) % n];
        }
        std::swap(counts, next);
    }
    return counts[static_cast<std::size_t>(mod_floor(inst.z, modulus))];
}

}  // namespace detail

/**
 * c_N(z): sign vectors with sum eps_i a_i = z (mod N), by an O(mN) sweep over a
 * length-N count array. Counts fit in 64 bits for m < 64 and switch to
 * arbitrary precision beyond.
 */
inline BigInt dp_count_mod(const ColinearInstance &inst, std::int64_t modulus) {
    if (modulus < 1) throw std::invalid_argument("dp_count_mod: modulus must be >= 1");
    if (inst.m() < 64) return BigInt(detail::modular_count<std::uint64_t>(inst, modulus));
    return detail::modular_count<BigInt>(inst, modulus);
}

/// Subset-sum target t = (z + sum a_i) / 2, absent when the parity rules out any solution.
inline std::optional<std::int64_t> signed_to_subset(const ColinearInstance &inst) {
    std::int64_t total = inst.z;
    for (std::int64_t x : inst.a) total += x;
    if (total % 2 != 0) return std::nullopt;
    return total / 2;
}

/// Number of subsets S of the index set with sum_{i in S} a_i = target, by enumeration.
inline BigInt subset_sum_count(const std::vector<std::int64_t> &a, std::int64_t target) {
    if (a.size() > kMaxBruteForceTerms) throw std::length_error("subset_sum_count: at most 24 terms");
    std::uint64_t count = 0;
    const std::uint64_t total = std::uint64_t{1} << a.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if ((mask >> i) & 1U) sum += a[i];
        }
        if (sum == target) ++count;
    }
    return BigInt(count);
}

/// Is c(z) > 0? Exact through the modular count at N = B + 1.
inline bool decision_positive(const ColinearInstance &inst) {
    return dp_count_mod(inst, no_wrap_bound(inst) + 1) > 0;
}

/// Smallest odd level N >= 3 with N > B.
inline int safe_level(const ColinearInstance &inst) {
    std::int64_t n = no_wrap_bound(inst) + 1;
    if (n % 2 == 0) ++n;
    if (n < 3) n = 3;
    if (n > 1'000'000) throw std::length_error("safe_level: bound too large for a simulated register");
    return static_cast<int>(n);
}

struct CoefficientEstimate {
    double alpha = 0.0;  ///< estimate of 2^{-m} c(z)
    double ci_low = 0.0;
    double ci_high = 0.0;
    double scaled = 0.0;  ///< alpha * 2^m
    /// Rounded count, present when the interval pins down a single integer.
    std::optional<BigInt> recovered;
    /// The interval contains both 0 and 2^{-m}, so a rare target cannot be told from an absent one.
    bool rare_target_ambiguous = false;
    int level = 0;
    RunReport report;
};

/**
 * Estimates alpha = 2^{-m} c(z) with the coefficient Hadamard test at the
 * smallest safe odd level. Sample mode reports the Hoeffding interval alpha +- epsilon
 * at confidence 1 - delta; exact mode returns alpha itself.
 */
inline CoefficientEstimate estimate_coefficient(const ColinearInstance &inst, const SamplingPlan &plan, Mode mode,
                                                std::optional<int> level_override = std::nullopt) {
    const int n = level_override.value_or(safe_level(inst));
    const Level level(n);
    CoefficientEstimate est;
    est.level = n;
    est.report = hadamard_test_coeff(inst.a, inst.z, level, plan, mode);
    est.alpha = est.report.estimate_re;
    const double half_width = mode == Mode::exact ? 0.0 : plan.epsilon;
    est.ci_low = est.alpha - half_width;
    est.ci_high = est.alpha + half_width;
    const double unit = std::ldexp(1.0, -static_cast<int>(inst.m()));
    est.scaled = est.alpha / unit;
    const double nearest = std::round(est.scaled);
    const double slack = mode == Mode::exact ? 1e-9 : 0.5 - half_width / unit;
    if (std::abs(est.scaled - nearest) < slack && nearest >= 0.0) {
        est.recovered = BigInt(static_cast<std::int64_t>(nearest));
    }
    est.rare_target_ambiguous = est.ci_low <= 0.0 && est.ci_high >= unit;
    return est;
}

}  // namespace wrtnct
