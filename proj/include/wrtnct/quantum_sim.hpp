/**
 * @file quantum_sim.hpp
 * @brief Register-level statevector simulation of the LCU / Hadamard-test circuits.
 *
 * The state lives on (control qubit) x (m LCU ancillas) x (Z_N x Z_N data).
 * Amplitude index = q * N^2 + (p N + s), where the qubit word q carries
 * ancilla i in bit i and the Hadamard-test control in bit m. Data-register
 * operations act on whole Z_N registers (phased permutations, modular adds,
 * QFT_N), not on a qubit decomposition of them; op_count counts these
 * register-level operations and stands in for circuit depth.
 */
#pragma once

#include "dp_engine.hpp"
#include "modular_rep.hpp"
#include "nct_algebra.hpp"
#include "parallel.hpp"
#include "sl2z.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wrtnct {

inline int ceil_log2(std::uint64_t x) {
    int bits = 0;
    while ((std::uint64_t{1} << bits) < x) ++bits;
    return bits;
}

struct RegisterLayout {
    Level level;
    int ancillas = 0;

    int control_bit() const noexcept { return ancillas; }
    std::size_t qubit_states() const noexcept { return std::size_t{1} << (ancillas + 1); }
    std::size_t data_dim() const noexcept { return static_cast<std::size_t>(level.dim()); }
    std::size_t dim() const noexcept { return qubit_states() * data_dim(); }
    /// Qubit count of the hardware circuit: 2 ceil(log2 N) + m + 1.
    int reported_qubits() const {
        return 2 * ceil_log2(static_cast<std::uint64_t>(level.value())) + ancillas + 1;
    }
};

/// Largest state the simulator will allocate (amplitudes).
inline constexpr std::size_t kMaxStateDim = std::size_t{1} << 26;

/// Predicate on the qubit word: (q & mask) == value.
struct Condition {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;

    bool holds(std::uint64_t q) const noexcept { return (q & mask) == value; }

    Condition with(int bit, bool set) const {
        const std::uint64_t b = std::uint64_t{1} << bit;
        return {mask | b, set ? (value | b) : (value & ~b)};
    }
    static Condition always() { return {}; }
    static Condition on(int bit, bool set = true) { return Condition{}.with(bit, set); }
};

class SimState {
public:
    /// Basis state |qubits>|data>.
    SimState(const RegisterLayout &layout, std::uint64_t qubits, WeylIndex data) : layout_(layout) {
        if (layout.ancillas < 0 || layout.ancillas > 24) {
            throw std::length_error("simulator supports 0..24 ancillas, got " + std::to_string(layout.ancillas));
        }
        if (layout.dim() > kMaxStateDim) {
            throw std::length_error("state dimension " + std::to_string(layout.dim()) + " exceeds simulator limit");
        }
        amp_.assign(layout.dim(), Complex{});
        amp_[qubits * layout.data_dim() + static_cast<std::size_t>(data.flat(layout.level))] = 1.0;
    }

    const RegisterLayout &layout() const noexcept { return layout_; }
    const Level &level() const noexcept { return layout_.level; }
    const std::vector<Complex> &amplitudes() const noexcept { return amp_; }

    std::span<Complex> block(std::uint64_t q) {
        return {amp_.data() + q * layout_.data_dim(), layout_.data_dim()};
    }
    std::span<const Complex> block(std::uint64_t q) const {
        return {amp_.data() + q * layout_.data_dim(), layout_.data_dim()};
    }

    double norm() const {
        double total = 0.0;
        for (const Complex &a : amp_) total += std::norm(a);
        return std::sqrt(total);
    }

    /// Probability that qubit `bit` reads 0.
    double probability_zero(int bit) const {
        double total = 0.0;
        for (std::uint64_t q = 0; q < layout_.qubit_states(); ++q) {
            if ((q >> bit) & 1U) continue;
            for (const Complex &a : block(q)) total += std::norm(a);
        }
        return total;
    }

    std::size_t op_count() const noexcept { return ops_; }
    void count_op() noexcept { ++ops_; }

private:
    RegisterLayout layout_;
    std::vector<Complex> amp_;
    std::size_t ops_ = 0;
};

/// Hadamard on qubit `bit`, applied where `cond` holds (cond must not test `bit`).
inline void apply_hadamard(SimState &state, int bit, Condition cond = {}) {
    const double h = 1.0 / std::sqrt(2.0);
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t q = 0; q < state.layout().qubit_states(); ++q) {
        if ((q & b) || !cond.holds(q)) continue;
        auto lo = state.block(q);
        auto hi = state.block(q | b);
        for (std::size_t i = 0; i < lo.size(); ++i) {
            const Complex x = lo[i], y = hi[i];
            lo[i] = h * (x + y);
            hi[i] = h * (x - y);
        }
    }
    state.count_op();
}

/// diag(1, phase) on qubit `bit`.
inline void apply_phase(SimState &state, int bit, Complex phase, Condition cond = {}) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t q = 0; q < state.layout().qubit_states(); ++q) {
        if (!(q & b) || !cond.holds(q)) continue;
        for (Complex &a : state.block(q)) a *= phase;
    }
    state.count_op();
}

/// U_{sign v}: |r,u> -> t^{sign (p u - s r)} |r + sign p, u + sign s> on blocks where `cond` holds.
inline void apply_U(SimState &state, IntPair v, int sign, Condition cond = {}) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("apply_U: sign must be +1 or -1");
    const Level &level = state.level();
    const int n = level.value();
    const WeylIndex shift = WeylIndex::reduce(static_cast<std::int64_t>(sign) * v, level);
    std::vector<Complex> scratch(state.layout().data_dim());
    for (std::uint64_t q = 0; q < state.layout().qubit_states(); ++q) {
        if (!cond.holds(q)) continue;
        auto blk = state.block(q);
        for (int r = 0; r < n; ++r) {
            for (int u = 0; u < n; ++u) {
                const WeylProduct prod = weyl_mul(shift, WeylIndex{r, u}, level);
                scratch[static_cast<std::size_t>(prod.index.flat(level))] =
                    prod.phase.value(level) * blk[static_cast<std::size_t>(r * n + u)];
            }
        }
        std::copy(scratch.begin(), scratch.end(), blk.begin());
    }
    state.count_op();
}

/// Modular adder on the first data register: |p,s> -> |p + z, s>.
inline void apply_add(SimState &state, std::int64_t z, Condition cond = {}) {
    const Level &level = state.level();
    const int n = level.value();
    const auto shift = static_cast<int>(level.reduce(z));
    std::vector<Complex> scratch(state.layout().data_dim());
    for (std::uint64_t q = 0; q < state.layout().qubit_states(); ++q) {
        if (!cond.holds(q)) continue;
        auto blk = state.block(q);
        for (int p = 0; p < n; ++p) {
            for (int s = 0; s < n; ++s) {
                scratch[static_cast<std::size_t>(((p + shift) % n) * n + s)] = blk[static_cast<std::size_t>(p * n + s)];
            }
        }
        std::copy(scratch.begin(), scratch.end(), blk.begin());
    }
    state.count_op();
}

/**
 * Two-branch LCU for L_{B_v} = U_v + U_{-v} on ancilla `ancilla`:
 * H, U_v on ancilla = 0, U_{-v} on ancilla = 1, H. The ancilla-0 block is L_{B_v} / 2.
 */
inline void apply_lcu_block(SimState &state, IntPair v, int ancilla, Condition cond = {}) {
    if (ancilla < 0 || ancilla >= state.layout().ancillas) {
        throw std::out_of_range("apply_lcu_block: ancilla index out of range");
    }
    apply_hadamard(state, ancilla, cond);
    apply_U(state, v, +1, cond.with(ancilla, false));
    apply_U(state, v, -1, cond.with(ancilla, true));
    apply_hadamard(state, ancilla, cond);
}

/// rho(letter) on the data register where `cond` holds; S uses the QFT composite.
inline void apply_modular(SimState &state, Letter letter, Condition cond = {}) {
    std::vector<Complex> scratch;
    for (std::uint64_t q = 0; q < state.layout().qubit_states(); ++q) {
        if (!cond.holds(q)) continue;
        apply_generator(state.block(q), letter, state.level(), scratch);
    }
    state.count_op();
}

/// Convenience form: controlled on the Hadamard-test control qubit or unconditional.
inline void apply_modular(SimState &state, Letter letter, bool controlled) {
    apply_modular(state, letter, controlled ? Condition::on(state.layout().control_bit()) : Condition{});
}

/// Arbitrary dense unitary on the data register where `cond` holds.
inline void apply_dense(SimState &state, const DenseOperator &w, Condition cond = {}) {
    const auto d = static_cast<Eigen::Index>(state.layout().data_dim());
    if (w.rows() != d || w.cols() != d) throw std::invalid_argument("apply_dense: operator dimension mismatch");
    for (std::uint64_t q = 0; q < state.layout().qubit_states(); ++q) {
        if (!cond.holds(q)) continue;
        auto blk = state.block(q);
        Eigen::Map<Eigen::VectorXcd> v(blk.data(), d);
        const Eigen::VectorXcd out = w * v;
        v = out;
    }
    state.count_op();
}

/**
 * Ancilla-projected block <0_anc| circuit |0_anc> as a dense N^2 x N^2 matrix,
 * built by running the circuit on every data basis state (control qubit left at 0).
 */
inline DenseOperator ancilla_zero_block(const RegisterLayout &layout, const std::function<void(SimState &)> &circuit) {
    const auto d = static_cast<int>(layout.data_dim());
    DenseOperator out(d, d);
    for (int col = 0; col < d; ++col) {
        SimState st(layout, 0, WeylIndex::from_flat(col, layout.level));
        circuit(st);
        const auto blk = st.block(0);
        for (int row = 0; row < d; ++row) out(row, col) = blk[static_cast<std::size_t>(row)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hadamard tests
// ---------------------------------------------------------------------------

enum class Mode { exact, sample };

struct SamplingPlan {
    double epsilon = 0.05;
    double delta = 0.01;
    std::uint64_t seed = 0;

    /// n = ceil(2 ln(2/delta) / epsilon^2).
    std::size_t shots() const {
        if (!(epsilon > 0.0) || !(delta > 0.0) || !(delta < 1.0)) {
            throw std::invalid_argument("sampling plan needs epsilon > 0 and 0 < delta < 1");
        }
        const double n = std::ceil(2.0 * std::log(2.0 / delta) / (epsilon * epsilon));
        return static_cast<std::size_t>(std::max(1.0, n));
    }
};

struct RunReport {
    double estimate_re = 0.0;
    double estimate_im = 0.0;
    /// Exact expectation of the estimated observable, when computed.
    std::optional<Complex> exact_value;
    std::size_t shots_used = 0;
    double elapsed = 0.0;
    /// Register-level operations in one execution of the (real-part) circuit.
    std::size_t op_count = 0;
    std::uint64_t seed = 0;
    int qubits = 0;
    /// 2^{-m}: the trace circuit observes 2^{-m} Tr(W) / N^2.
    double attenuation = 1.0;
    /// Measured P(control = 0) for the real and imaginary circuits.
    double p0_re = 0.0;
    double p0_im = 0.0;
    std::vector<std::string> warnings;

    Complex estimate() const { return {estimate_re, estimate_im}; }
    /// Undo the LCU attenuation: estimate of Tr(W)/N^2.
    Complex normalized() const { return estimate() / attenuation; }
};

namespace detail {

/// One execution of the trace circuit on data basis state x; returns P(control = 0).
inline double trace_circuit_p0(const SL2Word &word, const InsertionList &insertions, const Level &level,
                               int data_index, bool imaginary, std::size_t *ops = nullptr) {
    const RegisterLayout layout{level, static_cast<int>(insertions.size())};
    SimState st(layout, 0, WeylIndex::from_flat(data_index, level));
    const int c = layout.control_bit();
    const Condition ctrl = Condition::on(c);
    apply_hadamard(st, c);
    // controlled-W with W = rho(g) L_{x_m} ... L_{x_1}: blocks first, then the generators right to left
    for (std::size_t i = 0; i < insertions.size(); ++i) {
        apply_lcu_block(st, insertions[i], static_cast<int>(i), ctrl);
    }
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) apply_modular(st, *it, ctrl);
    if (imaginary) apply_phase(st, c, Complex{0.0, -1.0});
    apply_hadamard(st, c);
    if (ops) *ops = st.op_count();
    return st.probability_zero(c);
}

inline double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline constexpr std::size_t kShotChunk = 1024;

/**
 * Draws `shots` Bernoulli outcomes; shot j picks a data state via `pick` and
 * succeeds with probability prob(state). Chunk k uses its own derived seed, so
 * the outcome does not depend on the worker count. Returns the success count.
 */
template <typename Pick, typename Prob>
std::size_t sample_successes(std::size_t shots, std::uint64_t seed, std::uint64_t stream, Pick &&pick, Prob &&prob) {
    std::size_t successes = 0;
    const std::size_t chunks = (shots + kShotChunk - 1) / kShotChunk;
    for (std::size_t k = 0; k < chunks; ++k) {
        std::mt19937_64 rng(derive_seed(seed, stream, k));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::size_t end = std::min(shots, (k + 1) * kShotChunk);
        for (std::size_t j = k * kShotChunk; j < end; ++j) {
            const int x = pick(rng);
            if (unit(rng) < prob(x)) ++successes;
        }
    }
    return successes;
}

}  // namespace detail

/**
 * Hadamard test on W = rho(g) L_{x_m} ... L_{x_1} with the data register maximally
 * mixed and the m LCU ancillas in |0>. P(0) = (1 + Re[2^{-m} Tr(W)/N^2]) / 2; the
 * imaginary part uses diag(1, -i) on the control before the last Hadamard.
 *
 * Exact mode averages P(0) over all N^2 data basis states. Sample mode draws a
 * data basis state per shot and a Bernoulli outcome on the control qubit; the
 * circuit output for each drawn basis state is simulated once and reused.
 * Estimates are of 2^{-m} Tr(W)/N^2; RunReport::normalized() rescales.
 */
inline RunReport hadamard_test_trace(const SL2Word &word, const InsertionList &insertions, const Level &level,
                                     const SamplingPlan &plan, Mode mode) {
    const auto start = std::chrono::steady_clock::now();
    const RegisterLayout layout{level, static_cast<int>(insertions.size())};
    if (layout.dim() > kMaxStateDim) throw std::length_error("hadamard_test_trace: state too large");

    RunReport rep;
    rep.seed = plan.seed;
    rep.qubits = layout.reported_qubits();
    rep.attenuation = std::ldexp(1.0, -static_cast<int>(insertions.size()));
    detail::trace_circuit_p0(word, insertions, level, 0, false, &rep.op_count);

    const auto d = static_cast<std::size_t>(level.dim());
    // per-basis-state probabilities, filled on demand
    std::vector<double> p_re(d, -1.0), p_im(d, -1.0);
    auto fill = [&](const std::vector<int> &needed) {
        parallel_for(needed.size(), [&](std::size_t i) {
            const auto x = static_cast<std::size_t>(needed[i]);
            p_re[x] = detail::trace_circuit_p0(word, insertions, level, needed[i], false);
            p_im[x] = detail::trace_circuit_p0(word, insertions, level, needed[i], true);
        });
    };

    if (mode == Mode::exact) {
        std::vector<int> all(d);
        for (std::size_t i = 0; i < d; ++i) all[i] = static_cast<int>(i);
        fill(all);
        double sre = 0.0, sim = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            sre += p_re[i];
            sim += p_im[i];
        }
        rep.p0_re = sre / static_cast<double>(d);
        rep.p0_im = sim / static_cast<double>(d);
        rep.estimate_re = 2.0 * rep.p0_re - 1.0;
        rep.estimate_im = 2.0 * rep.p0_im - 1.0;
        rep.exact_value = rep.estimate();
        rep.shots_used = 0;
    } else {
        const std::size_t n = plan.shots();
        auto data_dist = [d](std::mt19937_64 &rng) {
            return std::uniform_int_distribution<int>(0, static_cast<int>(d) - 1)(rng);
        };
        // first pass: which basis states are drawn
        std::vector<char> wanted(d, 0);
        auto mark = [&](std::uint64_t stream) {
            detail::sample_successes(n, plan.seed, stream,
                                     [&](std::mt19937_64 &rng) {
                                         const int x = data_dist(rng);
                                         wanted[static_cast<std::size_t>(x)] = 1;
                                         return x;
                                     },
                                     [](int) { return 0.0; });
        };
        mark(0);
        mark(1);
        std::vector<int> needed;
        for (std::size_t i = 0; i < d; ++i) {
            if (wanted[i]) needed.push_back(static_cast<int>(i));
        }
        fill(needed);
        auto pick = [&](std::mt19937_64 &rng) { return data_dist(rng); };
        const std::size_t hits_re = detail::sample_successes(
            n, plan.seed, 0, pick, [&](int x) { return p_re[static_cast<std::size_t>(x)]; });
        const std::size_t hits_im = detail::sample_successes(
            n, plan.seed, 1, pick, [&](int x) { return p_im[static_cast<std::size_t>(x)]; });
        rep.p0_re = static_cast<double>(hits_re) / static_cast<double>(n);
        rep.p0_im = static_cast<double>(hits_im) / static_cast<double>(n);
        rep.estimate_re = 2.0 * rep.p0_re - 1.0;
        rep.estimate_im = 2.0 * rep.p0_im - 1.0;
        rep.shots_used = 2 * n;
    }
    rep.elapsed = detail::elapsed_since(start);
    return rep;
}

inline RunReport hadamard_test_trace(const SL2Matrix &g, const InsertionList &insertions, const Level &level,
                                     const SamplingPlan &plan, Mode mode) {
    return hadamard_test_trace(decompose(g), insertions, level, plan, mode);
}

/**
 * Exact Hadamard test on a dense data-register unitary W with no LCU ancillas:
 * P(0) averaged over all data basis states, which equals (1 + Re[Tr(W)/N^2]) / 2,
 * or (1 + Im[Tr(W)/N^2]) / 2 with `imaginary`.
 */
inline double hadamard_p0(const DenseOperator &w, const Level &level, bool imaginary = false) {
    const RegisterLayout layout{level, 0};
    const int c = layout.control_bit();
    double total = 0.0;
    for (int x = 0; x < level.dim(); ++x) {
        SimState st(layout, 0, WeylIndex::from_flat(x, level));
        apply_hadamard(st, c);
        apply_dense(st, w, Condition::on(c));
        if (imaginary) apply_phase(st, c, Complex{0.0, -1.0});
        apply_hadamard(st, c);
        total += st.probability_zero(c);
    }
    return total / static_cast<double>(level.dim());
}

/// Guard on the number of LCU blocks in the coefficient circuit.
inline constexpr std::size_t kMaxCoeffBlocks = 24;

/**
 * Matrix-element Hadamard test: prepares (|0>|0_anc>|0,0> + |1>|0_anc>|z,0>)/sqrt(2)
 * with H and a controlled ADD_z, applies the colinear LCU blocks for a_1..a_m
 * anti-controlled on the control, and measures X on the control.
 * E[X] = Re <0_anc, z, 0| U |0_anc, 0, 0> = 2^{-m} c_N(z), equal to 2^{-m} c(z) once N > B.
 */
inline RunReport hadamard_test_coeff(const std::vector<std::int64_t> &a, std::int64_t z, const Level &level,
                                     const SamplingPlan &plan, Mode mode) {
    const auto start = std::chrono::steady_clock::now();
    if (a.size() > kMaxCoeffBlocks) {
        throw std::length_error("hadamard_test_coeff: at most 24 blocks, got " + std::to_string(a.size()));
    }
    const RegisterLayout layout{level, static_cast<int>(a.size())};
    RunReport rep;
    rep.seed = plan.seed;
    rep.qubits = layout.reported_qubits();
    rep.attenuation = std::ldexp(1.0, -static_cast<int>(a.size()));

    std::int64_t bound = z < 0 ? -z : z;
    for (std::int64_t ai : a) bound += ai < 0 ? -ai : ai;
    if (level.value() <= bound) {
        rep.warnings.push_back("N = " + std::to_string(level.value()) + " <= B = " + std::to_string(bound) +
                               ": modular wraparound may alias the integer coefficient");
    }

    SimState st(layout, 0, WeylIndex{0, 0});
    const int c = layout.control_bit();
    apply_hadamard(st, c);
    apply_add(st, z, Condition::on(c, true));
    const Condition anti = Condition::on(c, false);
    for (std::size_t i = 0; i < a.size(); ++i) apply_lcu_block(st, IntPair{a[i], 0}, static_cast<int>(i), anti);
    apply_hadamard(st, c);
    rep.op_count = st.op_count();

    const double p0 = st.probability_zero(c);
    const double exact = 2.0 * p0 - 1.0;
    if (mode == Mode::exact) {
        rep.p0_re = p0;
        rep.estimate_re = exact;
        rep.exact_value = Complex{exact, 0.0};
    } else {
        const std::size_t n = plan.shots();
        const std::size_t hits =
            detail::sample_successes(n, plan.seed, 2, [](std::mt19937_64 &) { return 0; }, [&](int) { return p0; });
        rep.p0_re = static_cast<double>(hits) / static_cast<double>(n);
        rep.estimate_re = 2.0 * rep.p0_re - 1.0;
        rep.shots_used = n;
    }
    rep.elapsed = detail::elapsed_since(start);
    return rep;
}

}  // namespace wrtnct
