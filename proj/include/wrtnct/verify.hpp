/**
 * @file verify.hpp
 * @brief Runtime invariant suite behind `wrtnct verify`.
 *
 * Each check is seeded and sized for a few seconds of total runtime, and
 * reports a pass flag plus a short human-readable detail string.
 */
#pragma once

#include "coeff_count.hpp"
#include "dp_engine.hpp"
#include "modular_rep.hpp"
#include "nct_algebra.hpp"
#include "quantum_sim.hpp"
#include "sl2z.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace wrtnct {

struct CheckRow {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

inline SL2Word random_word(std::mt19937_64 &rng, std::size_t length) {
    std::uniform_int_distribution<int> letter(0, 2);
    SL2Word w;
    for (std::size_t i = 0; i < length; ++i) w.letters.push_back(static_cast<Letter>(letter(rng)));
    return w;
}

inline InsertionList random_insertions(std::mt19937_64 &rng, int max_m, int range) {
    std::uniform_int_distribution<int> len(0, max_m);
    std::uniform_int_distribution<std::int64_t> coord(-range, range);
    InsertionList out(static_cast<std::size_t>(len(rng)));
    for (auto &v : out) v = {coord(rng), coord(rng)};
    return out;
}

inline double max_abs(const DenseOperator &m) { return m.cwiseAbs().maxCoeff(); }

inline DenseOperator identity_op(const Level &level) { return DenseOperator::Identity(level.dim(), level.dim()); }

}  // namespace detail

inline std::vector<CheckRow> run_invariant_suite(std::uint64_t seed = 2024) {
    using detail::sci;
    std::vector<CheckRow> rows;
    std::mt19937_64 rng(seed);
    const std::vector<int> small{3, 5, 7};
    const std::vector<int> weil{3, 5, 7, 11};

    auto run = [&](std::string name, const std::function<bool(std::string &)> &body) {
        CheckRow row;
        row.name = std::move(name);
        const auto start = std::chrono::steady_clock::now();
        try {
            row.pass = body(row.detail);
        } catch (const std::exception &e) {
            row.pass = false;
            row.detail = std::string("exception: ") + e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
    };

    run("weyl_mul associative, e_{0,0} unit", [&](std::string &d) {
        int bad = 0;
        for (int n : small) {
            const Level level(n);
            std::uniform_int_distribution<int> c(0, n - 1);
            for (int i = 0; i < 1000; ++i) {
                const WeylIndex a{c(rng), c(rng)}, b{c(rng), c(rng)}, e{c(rng), c(rng)};
                const auto ab = weyl_mul(a, b, level), ab_e = weyl_mul(ab.index, e, level);
                const auto be = weyl_mul(b, e, level), a_be = weyl_mul(a, be.index, level);
                if (ab_e.index != a_be.index || level.reduce(ab.phase.k + ab_e.phase.k) != level.reduce(be.phase.k + a_be.phase.k)) ++bad;
                const auto u = weyl_mul({0, 0}, a, level), v = weyl_mul(a, {0, 0}, level);
                if (u.index != a || v.index != a || u.phase.k != 0 || v.phase.k != 0) ++bad;
            }
        }
        d = "3000 triples, " + std::to_string(bad) + " mismatches";
        return bad == 0;
    });

    run("fg_product phases opposite, embedding multiplicative", [&](std::string &d) {
        int bad = 0;
        std::uniform_int_distribution<std::int64_t> c(-9, 9);
        for (int n : small) {
            const Level level(n);
            for (int i = 0; i < 200; ++i) {
                const IntPair v{c(rng), c(rng)}, w{c(rng), c(rng)};
                const auto terms = fg_product(v, w);
                if (terms[0].exponent != -terms[1].exponent) ++bad;
                WeylSum rhs(level);
                for (const FgTerm &t : terms) {
                    const WeylSum image = embed_threaded(t.index, level);
                    for (const auto &[key, coeff] : image.terms()) {
                        rhs.add(key.first, PhaseExp::reduce(key.second.k + t.exponent, level), coeff);
                    }
                }
                if (!(embed_threaded(v, level) * embed_threaded(w, level) == rhs)) ++bad;
            }
        }
        d = "600 pairs, " + std::to_string(bad) + " mismatches";
        return bad == 0;
    });

    run("Chebyshev threading d <= 10, |gamma| <= 4", [&](std::string &d) {
        int cases = 0, bad = 0;
        for (int n : small) {
            const Level level(n);
            for (int p = -4; p <= 4; ++p) {
                for (int s = -4; s <= 4; ++s) {
                    if (std::gcd(p, s) != 1) continue;
                    for (int deg = 0; deg <= 10; ++deg, ++cases) bad += !chebyshev_check(deg, {p, s}, level);
                }
            }
        }
        d = std::to_string(cases) + " cases, " + std::to_string(bad) + " failures";
        return bad == 0;
    });

    run("involution orbit count (N^2+1)/2", [&](std::string &d) {
        bool ok = true;
        for (int n : small) {
            const int count = orbit_count(Level(n));
            d += (d.empty() ? "" : ", ") + std::string("N=") + std::to_string(n) + ": " + std::to_string(count);
            ok = ok && count == (n * n + 1) / 2;
        }
        return ok;
    });

    run("SL2 round trip and homomorphism", [&](std::string &d) {
        int bad = 0;
        for (int i = 0; i < 1000; ++i) {
            const SL2Word w = detail::random_word(rng, 40);
            const SL2Matrix g = evaluate(w);
            if (!(evaluate(decompose(g)) == g)) ++bad;
            const SL2Word u = detail::random_word(rng, 10);
            if (!(evaluate(w + u) == g * evaluate(u))) ++bad;
        }
        d = "1000 random 40-letter words, " + std::to_string(bad) + " failures";
        return bad == 0;
    });

    run("rho(g) unitary", [&](std::string &d) {
        double worst = 0.0;
        for (int n : weil) {
            for (int i = 0; i < 5; ++i) worst = std::max(worst, unitarity_residual(rho(detail::random_word(rng, 20), Level(n))));
        }
        d = "max residual " + sci(worst);
        return worst < 1e-9;
    });

    run("rho(S)^4 = I", [&](std::string &d) {
        double worst = 0.0;
        for (int n : weil) {
            const Level level(n);
            const DenseOperator s = rho_S(level);
            const DenseOperator s2 = s * s;
            worst = std::max(worst, detail::max_abs(s2 * s2 - detail::identity_op(level)));
        }
        d = "residual " + sci(worst);
        return worst < 1e-9;
    });

    run("rho(S)^2 = parity |p,s> -> |-p,-s>", [&](std::string &d) {
        double worst = 0.0, to_identity = 0.0;
        for (int n : weil) {
            const Level level(n);
            const DenseOperator s = rho_S(level);
            const DenseOperator s2 = s * s;
            worst = std::max(worst, detail::max_abs(s2 - parity_operator(level)));
            to_identity = std::max(to_identity, detail::max_abs(s2 - detail::identity_op(level)));
        }
        d = "residual " + sci(worst) + " (distance to identity " + sci(to_identity) + ")";
        return worst < 1e-9;
    });

    run("(rho(S) rho(T))^3 = lambda rho(S)^2", [&](std::string &d) {
        double worst = 0.0, lambda_dev = 0.0;
        for (int n : weil) {
            const Level level(n);
            const DenseOperator st = rho_S(level) * rho_T(level);
            const DenseOperator lhs = st * st * st;
            const DenseOperator s = rho_S(level);
            const PhaseFit fit = fit_global_phase(lhs, s * s);
            worst = std::max(worst, fit.residual);
            lambda_dev = std::max(lambda_dev, std::abs(std::abs(fit.lambda) - 1.0));
        }
        d = "residual " + sci(worst) + ", ||lambda|-1| " + sci(lambda_dev);
        return worst < 1e-9 && lambda_dev < 1e-9;
    });

    run("structured S equals dense S", [&](std::string &d) {
        double worst = 0.0;
        for (int n : {3, 5, 7, 9, 11}) {
            const Level level(n);
            worst = std::max(worst, detail::max_abs(rho(parse_word("S"), level) - rho_S(level)));
        }
        d = "max deviation " + sci(worst);
        return worst < 1e-12;
    });

    run("word independence up to phase", [&](std::string &d) {
        double worst = 0.0;
        for (int n : small) {
            const Level level(n);
            for (int i = 0; i < 5; ++i) {
                const SL2Word w = detail::random_word(rng, 10);
                for (const char *extra : {"T Tinv", "Tinv T", "S S S S"}) {
                    SL2Word longer;
                    const auto cut = static_cast<long>(w.length() / 2);
                    longer.letters.assign(w.letters.begin(), w.letters.begin() + cut);
                    longer = longer + parse_word(extra);
                    longer.letters.insert(longer.letters.end(), w.letters.begin() + cut, w.letters.end());
                    worst = std::max(worst, fit_global_phase(rho(longer, level), rho(w, level)).residual);
                }
            }
        }
        d = "max residual " + sci(worst);
        return worst < 1e-9;
    });

    run("clock-shift span rank", [&](std::string &d) {
        bool ok = true;
        for (int n : small) {
            const int r = clock_shift_rank(Level(n));
            d += (d.empty() ? "" : ", ") + std::string("N=") + std::to_string(n) + ": " + std::to_string(r);
            ok = ok && r == (n * n + 1) / 2;
        }
        return ok;
    });

    run("DP table equals 2^m expansion, l1 <= 2^m", [&](std::string &d) {
        double worst = 0.0;
        bool norm_ok = true;
        for (int n : small) {
            const Level level(n);
            for (int i = 0; i < 50; ++i) {
                const InsertionList ins = detail::random_insertions(rng, 10, 12);
                const CoeffTable t = run_dp(ins, level);
                worst = std::max(worst, t.max_abs_diff(brute_force_table(ins, level)));
                norm_ok = norm_ok && t.l1_norm() <= std::ldexp(1.0, static_cast<int>(ins.size())) + 1e-9;
            }
        }
        d = "max deviation " + sci(worst) + (norm_ok ? "" : ", l1 bound violated");
        return worst < 1e-9 && norm_ok;
    });

    run("LCU block encoding 2^-m prod L", [&](std::string &d) {
        double worst = 0.0;
        for (int n : small) {
            const Level level(n);
            const InsertionList ins = detail::random_insertions(rng, 3, 8);
            const int m = static_cast<int>(ins.size());
            const DenseOperator block = ancilla_zero_block(RegisterLayout{level, m}, [&](SimState &st) {
                for (int k = 0; k < m; ++k) apply_lcu_block(st, ins[static_cast<std::size_t>(k)], k);
            });
            DenseOperator expected = detail::identity_op(level);
            for (const IntPair &v : ins) expected = left_regular(embed_threaded(v, level)) * expected;
            worst = std::max(worst, detail::max_abs(block - std::ldexp(1.0, -m) * expected));
        }
        d = "max deviation " + sci(worst);
        return worst < 1e-10;
    });

    run("Hadamard test (exact) equals DP", [&](std::string &d) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Level level(small[static_cast<std::size_t>(i) % small.size()]);
            const SL2Word w = detail::random_word(rng, 8);
            const InsertionList ins = detail::random_insertions(rng, 3, 8);
            const RunReport r = hadamard_test_trace(w, ins, level, {}, Mode::exact);
            const Complex expected = r.attenuation * wrt_trace(w, ins, level).normalized;
            worst = std::max(worst, std::abs(r.p0_re - 0.5 * (1.0 + expected.real())));
            worst = std::max(worst, std::abs(r.estimate() - expected));
        }
        d = "20 configurations, max deviation " + sci(worst);
        return worst < 1e-9;
    });

    run("modular count equals integer count above B", [&](std::string &d) {
        std::uniform_int_distribution<int> len(0, 16);
        std::uniform_int_distribution<std::int64_t> val(-50, 50), tgt(-100, 100);
        int bad = 0;
        for (int i = 0; i < 500; ++i) {
            ColinearInstance x;
            x.a.resize(static_cast<std::size_t>(len(rng)));
            for (auto &a : x.a) a = val(rng);
            x.z = tgt(rng);
            if (dp_count_mod(x, no_wrap_bound(x) + 1) != brute_force_count(x).count) ++bad;
        }
        for (std::int64_t n : {3, 5, 7}) {
            const ColinearInstance x{{n}, 0};
            if (dp_count_mod(x, n) != 2 || brute_force_count(x).count != 0) ++bad;
        }
        d = "500 instances + counterexamples, " + std::to_string(bad) + " failures";
        return bad == 0;
    });

    run("subset-sum parsimony, conservation, symmetry", [&](std::string &d) {
        std::uniform_int_distribution<int> len(0, 10);
        std::uniform_int_distribution<std::int64_t> val(-9, 9);
        int bad = 0;
        for (int i = 0; i < 50; ++i) {
            ColinearInstance x;
            x.a.resize(static_cast<std::size_t>(len(rng)));
            for (auto &a : x.a) a = val(rng);
            BigInt total = 0;
            const std::int64_t span = x.abs_sum();
            for (std::int64_t z = -span; z <= span; ++z) {
                x.z = z;
                const BigInt c = brute_force_count(x).count;
                total += c;
                const auto t = signed_to_subset(x);
                if (c != (t ? subset_sum_count(x.a, *t) : BigInt(0))) ++bad;
                ColinearInstance neg = x;
                neg.z = -z;
                if (c != brute_force_count(neg).count) ++bad;
            }
            if (total != (BigInt(1) << x.m())) ++bad;
        }
        d = std::to_string(bad) + " failures";
        return bad == 0;
    });

    run("coefficient Hadamard test is 2^-m c(z)", [&](std::string &d) {
        std::uniform_int_distribution<int> len(0, 8);
        std::uniform_int_distribution<std::int64_t> val(-3, 3);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            ColinearInstance x;
            x.a.resize(static_cast<std::size_t>(len(rng)));
            for (auto &a : x.a) a = val(rng);
            x.z = val(rng);
            const CoefficientEstimate e = estimate_coefficient(x, {}, Mode::exact);
            worst = std::max(worst, std::abs(e.scaled - brute_force_count(x).count.convert_to<double>()));
        }
        d = "20 instances, max |alpha 2^m - c| " + sci(worst);
        return worst < 1e-9;
    });

    return rows;
}

}  // namespace wrtnct
