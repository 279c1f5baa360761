// wrtnct: command-line front end.
//
// Exit codes: 0 ok, 1 verify failure, 2 usage/parse/input error,
// 3 cross-check mismatch or non-finite result.

#include <wrtnct/wrtnct.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace wrtnct;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string format = "json";
};

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

/// Count as a JSON number when it fits in 64 bits, else as a decimal string.
json count_json(const BigInt &c) {
    if (c >= 0 && c <= BigInt(std::numeric_limits<std::uint64_t>::max())) return c.convert_to<std::uint64_t>();
    return c.str();
}

json insertions_json(const InsertionList &ins) {
    json out = json::array();
    for (const IntPair &v : ins) out.push_back({v.p, v.s});
    return out;
}

bool all_finite(const json &j) {
    if (j.is_number_float()) return std::isfinite(j.get<double>());
    if (j.is_structured()) {
        for (const auto &item : j) {
            if (!all_finite(item)) return false;
        }
    }
    return true;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

/// Prints the document and applies the finite-value rule.
int emit(const json &doc, const Common &common, int code) {
    std::cout << (common.format == "compact" ? doc.dump() : doc.dump(2)) << '\n';
    if (!all_finite(doc)) {
        std::cerr << "error: non-finite value in result document\n";
        return kExitMismatch;
    }
    return code;
}

Level make_level(int n) {
    try {
        return Level(n);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

SL2Matrix monodromy_or_usage(const std::string &text) {
    try {
        return parse_monodromy(text);
    } catch (const std::invalid_argument &e) {
        throw UsageError(std::string("--monodromy: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

struct WrtArgs {
    int level = 0;
    std::string monodromy = "1,0,0,1";
    std::string insertions;
    std::string method = "dp";
    double epsilon = 0.05;
    double delta = 0.01;
    std::uint64_t seed = 0;
};

int cmd_wrt(const WrtArgs &args, const Common &common) {
    const Level level = make_level(args.level);
    const SL2Matrix g = monodromy_or_usage(args.monodromy);
    InsertionList ins;
    try {
        ins = parse_insertions(args.insertions);
    } catch (const ParseError &e) {
        throw UsageError(std::string("--insertions: ") + e.what());
    }
    const SamplingPlan plan{args.epsilon, args.delta, args.seed};
    const bool want_dp = args.method == "dp" || args.method == "all";
    const bool want_exact = args.method == "sim-exact" || args.method == "all";
    const bool want_sample = args.method == "sim-sample" || args.method == "all";
    if (want_sample) {
        try {
            (void)plan.shots();
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
    }

    const SL2Word word = decompose(g);
    const double n2 = static_cast<double>(level.dim());
    const double attenuation = std::ldexp(1.0, -static_cast<int>(ins.size()));

    json doc;
    doc["command"] = "wrt";
    doc["config"] = {{"level", level.value()},   {"monodromy", g.str()},      {"insertions", insertions_json(ins)},
                     {"method", args.method},    {"epsilon", args.epsilon},   {"delta", args.delta},
                     {"seed", args.seed}};
    doc["word"] = word.str();
    doc["word_length"] = word.length();
    json methods = json::object();
    json timings = json::object();

    std::optional<Complex> z_dp, z_exact, z_sample;
    if (want_dp) {
        const auto t0 = std::chrono::steady_clock::now();
        const WrtValue v = wrt_trace(word, ins, level);
        timings["dp"] = seconds_since(t0);
        z_dp = v.z;
        methods["dp"] = {{"Z", complex_json(v.z)}, {"Z_normalized", complex_json(v.normalized)}, {"abs_Z", v.magnitude}};
    }
    if (want_exact) {
        const RunReport r = hadamard_test_trace(word, ins, level, plan, Mode::exact);
        timings["sim_exact"] = r.elapsed;
        z_exact = r.normalized() * n2;
        methods["sim_exact"] = {{"estimate", complex_json(r.estimate())},
                                {"Z_normalized", complex_json(r.normalized())},
                                {"Z", complex_json(*z_exact)},
                                {"p0_re", r.p0_re},
                                {"p0_im", r.p0_im},
                                {"attenuation", r.attenuation},
                                {"op_count", r.op_count},
                                {"qubits", r.qubits}};
    }
    if (want_sample) {
        const RunReport r = hadamard_test_trace(word, ins, level, plan, Mode::sample);
        timings["sim_sample"] = r.elapsed;
        z_sample = r.normalized() * n2;
        json block = {{"estimate", complex_json(r.estimate())},
                      {"interval_re", {r.estimate_re - plan.epsilon, r.estimate_re + plan.epsilon}},
                      {"interval_im", {r.estimate_im - plan.epsilon, r.estimate_im + plan.epsilon}},
                      {"confidence", 1.0 - plan.delta},
                      {"Z_normalized", complex_json(r.normalized())},
                      {"attenuation", r.attenuation},
                      {"shots", r.shots_used},
                      {"seed", r.seed},
                      {"op_count", r.op_count},
                      {"qubits", r.qubits}};
        // reference value of the sampled observable, 2^{-m} Z / N^2
        const Complex reference = attenuation * (z_dp ? *z_dp : wrt_trace(word, ins, level).z) / n2;
        block["reference"] = complex_json(reference);
        block["within_interval"] = std::abs(r.estimate_re - reference.real()) <= plan.epsilon &&
                                   std::abs(r.estimate_im - reference.imag()) <= plan.epsilon;
        methods["sim_sample"] = block;
    }

    const Complex z = z_dp ? *z_dp : (z_exact ? *z_exact : *z_sample);
    doc["Z"] = complex_json(z);
    doc["Z_normalized"] = complex_json(z / n2);
    doc["abs_Z"] = std::abs(z);
    doc["methods"] = methods;

    int code = kExitOk;
    if (z_dp && z_exact) {
        const double diff = std::abs(*z_dp - *z_exact);
        const bool pass = diff <= 1e-6;
        doc["cross_check"] = {{"dp_vs_sim_exact", diff}, {"tolerance", 1e-6}, {"pass", pass}};
        if (!pass) {
            std::cerr << "error: dp and sim-exact disagree by " << diff << '\n';
            code = kExitMismatch;
        }
    }
    doc["timings"] = timings;
    return emit(doc, common, code);
}

// ---------------------------------------------------------------------------

struct CoeffArgs {
    std::string a;
    std::int64_t z = 0;
    std::string method = "all";
    std::optional<std::int64_t> modulus;
    std::optional<int> level;
    double epsilon = 0.05;
    double delta = 0.01;
    std::uint64_t seed = 0;
};

int cmd_coeff(const CoeffArgs &args, const Common &common) {
    ColinearInstance inst;
    try {
        inst.a = parse_int_list(args.a);
    } catch (const ParseError &e) {
        throw UsageError(std::string("--a: ") + e.what());
    }
    inst.z = args.z;
    const bool want_exact = args.method == "exact" || args.method == "all";
    const bool want_mod = args.method == "mod" || args.method == "all";
    const bool want_estimate = args.method == "estimate" || args.method == "all";
    const std::int64_t bound = no_wrap_bound(inst);
    if (args.modulus && *args.modulus < 1) throw UsageError("--modulus must be >= 1");
    const SamplingPlan plan{args.epsilon, args.delta, args.seed};
    if (want_estimate) {
        try {
            (void)plan.shots();
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
        if (args.level) (void)make_level(*args.level);
    }

    json doc;
    doc["command"] = "coeff";
    doc["config"] = {{"a", inst.a},
                     {"z", inst.z},
                     {"method", args.method},
                     {"modulus", args.modulus ? json(*args.modulus) : json(nullptr)},
                     {"level", args.level ? json(*args.level) : json(nullptr)},
                     {"epsilon", args.epsilon},
                     {"delta", args.delta},
                     {"seed", args.seed}};
    doc["m"] = inst.m();
    doc["A"] = inst.abs_sum();
    doc["B"] = bound;
    json timings = json::object();
    int code = kExitOk;

    std::optional<BigInt> exact;
    if (want_exact) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string how;
        if (inst.m() <= kMaxBruteForceTerms) {
            exact = brute_force_count(inst).count;
            how = "enumeration";
        } else {
            exact = dp_count_mod(inst, bound + 1);
            how = "modular_dp_above_bound";
        }
        timings["exact"] = seconds_since(t0);
        const CountResult cr = make_count(*exact, inst.m());
        const auto t = signed_to_subset(inst);
        doc["exact"] = {{"count", count_json(cr.count)},
                        {"alpha", cr.normalized},
                        {"algorithm", how},
                        {"subset_sum_target", t ? json(*t) : json(nullptr)},
                        {"positive", cr.count > 0}};
    }
    if (want_mod) {
        const std::int64_t modulus = args.modulus.value_or(bound + 1);
        const auto t0 = std::chrono::steady_clock::now();
        const BigInt c = dp_count_mod(inst, modulus);
        timings["mod"] = seconds_since(t0);
        const bool aliasing = modulus <= bound;
        json block = {{"modulus", modulus}, {"count", count_json(c)}, {"aliasing_possible", aliasing}};
        if (exact) {
            const bool agree = c == *exact;
            block["agrees_with_exact"] = agree;
            if (!agree && !aliasing) {
                std::cerr << "error: modular count differs from exact count above the no-wrap bound\n";
                code = kExitMismatch;
            }
            if (!agree && aliasing) std::cerr << "note: modulus " << modulus << " <= B = " << bound << ", counts alias\n";
        }
        doc["mod"] = block;
    }
    if (want_estimate) {
        const CoefficientEstimate exact_run = estimate_coefficient(inst, plan, Mode::exact, args.level);
        const CoefficientEstimate e = estimate_coefficient(inst, plan, Mode::sample, args.level);
        timings["estimate"] = exact_run.report.elapsed + e.report.elapsed;
        json warnings = e.report.warnings;
        for (const auto &w : warnings) std::cerr << "warning: " << w.get<std::string>() << '\n';
        doc["estimate"] = {{"level", e.level},
                           {"alpha_exact", exact_run.alpha},
                           {"alpha", e.alpha},
                           {"interval", {e.ci_low, e.ci_high}},
                           {"confidence", 1.0 - plan.delta},
                           {"scaled", e.scaled},
                           {"recovered", e.recovered ? count_json(*e.recovered) : json(nullptr)},
                           {"rare_target_ambiguous", e.rare_target_ambiguous},
                           {"shots", e.report.shots_used},
                           {"seed", e.report.seed},
                           {"op_count", e.report.op_count},
                           {"qubits", e.report.qubits},
                           {"warnings", warnings}};
    }
    doc["timings"] = timings;
    return emit(doc, common, code);
}

// ---------------------------------------------------------------------------

int cmd_decompose(const std::string &monodromy, const Common &common) {
    const SL2Matrix g = monodromy_or_usage(monodromy);
    const auto t0 = std::chrono::steady_clock::now();
    const SL2Word w = decompose(g);
    const bool ok = evaluate(w) == g;
    json doc;
    doc["command"] = "decompose";
    doc["config"] = {{"monodromy", g.str()}};
    doc["word"] = w.str();
    doc["length"] = w.length();
    doc["max_entry"] = g.max_entry().str();
    doc["round_trip"] = ok;
    doc["timings"] = {{"decompose", seconds_since(t0)}};
    return emit(doc, common, ok ? kExitOk : kExitMismatch);
}

// ---------------------------------------------------------------------------

int cmd_verify(std::uint64_t seed, const Common &common) {
    const std::vector<CheckRow> rows = run_invariant_suite(seed);
    bool ok = true;
    if (common.format == "json" || common.format == "compact") {
        json doc;
        doc["command"] = "verify";
        doc["seed"] = seed;
        json checks = json::array();
        json timings = json::object();
        for (const CheckRow &r : rows) {
            checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
            timings[r.name] = r.seconds;
            ok = ok && r.pass;
        }
        doc["checks"] = checks;
        doc["all_pass"] = ok;
        doc["timings"] = timings;
        return emit(doc, common, ok ? kExitOk : kExitVerify);
    }
    std::size_t width = 0;
    for (const CheckRow &r : rows) width = std::max(width, r.name.size());
    for (const CheckRow &r : rows) {
        std::printf("%-4s  %-*s  %s\n", r.pass ? "PASS" : "FAIL", static_cast<int>(width), r.name.c_str(),
                    r.detail.c_str());
        ok = ok && r.pass;
    }
    std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
    return ok ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string out;
    bool quick = false;
    double min_time = 0.02;
};

/// Mean seconds per call, repeating until min_time has elapsed.
template <typename Fn>
std::pair<double, int> time_it(Fn &&fn, double min_time) {
    fn();  // warm-up
    int reps = 0;
    const auto t0 = std::chrono::steady_clock::now();
    double elapsed = 0.0;
    do {
        fn();
        ++reps;
        elapsed = seconds_since(t0);
    } while (elapsed < min_time);
    return {elapsed / reps, reps};
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_bench(const BenchArgs &args) {
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) throw UsageError("cannot open " + args.out);
    }
    std::ostream &os = args.out.empty() ? std::cout : file;
    const std::vector<int> levels = args.quick ? std::vector<int>{11, 21, 31} : std::vector<int>{11, 15, 19, 23, 27, 31};
    const std::vector<int> ms = args.quick ? std::vector<int>{8, 32, 64} : std::vector<int>{8, 16, 24, 32, 48, 64};
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> coord(-50, 50);
    auto insertions = [&](int m) {
        InsertionList ins(static_cast<std::size_t>(m));
        for (auto &v : ins) v = {coord(rng), coord(rng)};
        return ins;
    };

    os << "record,N,m,l,seconds,reps\n";
    std::map<int, std::vector<double>> by_m;  // m -> times over levels
    std::map<int, std::vector<double>> by_n;  // N -> times over m
    for (int n : levels) {
        const Level level(n);
        for (int m : ms) {
            const InsertionList ins = insertions(m);
            const auto [sec, reps] = time_it([&] { (void)run_dp(ins, level); }, args.min_time);
            os << "dp," << n << ',' << m << ",," << sec << ',' << reps << '\n';
            by_m[m].push_back(sec);
            by_n[n].push_back(sec);
        }
    }
    std::vector<double> xs_n(levels.begin(), levels.end()), xs_m(ms.begin(), ms.end());
    double sum_n = 0.0, sum_m = 0.0;
    for (int m : ms) {
        const double e = loglog_slope(xs_n, by_m[m]);
        sum_n += e;
        os << "fit_exponent_N,," << m << ",," << e << ",\n";
    }
    for (int n : levels) {
        const double e = loglog_slope(xs_m, by_n[n]);
        sum_m += e;
        os << "fit_exponent_m," << n << ",,," << e << ",\n";
    }
    const double mean_n = sum_n / static_cast<double>(ms.size());
    const double mean_m = sum_m / static_cast<double>(levels.size());
    os << "fit_exponent_N_mean,,,," << mean_n << ",\n";
    os << "fit_exponent_m_mean,,,," << mean_m << ",\n";

    // pairing cost against word length at fixed N
    const Level pair_level(11);
    for (int l : {4, 8, 16, 32, 64}) {
        SL2Word w;
        std::uniform_int_distribution<int> letter(0, 2);
        for (int i = 0; i < l; ++i) w.letters.push_back(static_cast<Letter>(letter(rng)));
        const InsertionList ins = insertions(8);
        const auto [sec, reps] = time_it([&] { (void)wrt_trace(w, ins, pair_level); }, args.min_time);
        os << "wrt_trace,11,8," << l << ',' << sec << ',' << reps << '\n';
    }
    // exact simulation grows like 2^m N^2 per basis state
    for (int n : {3, 5, 7}) {
        const Level level(n);
        for (int m = 0; m <= (args.quick ? 2 : 4); ++m) {
            const InsertionList ins = insertions(m);
            const SL2Word w = parse_word("S T");
            const auto [sec, reps] = time_it([&] { (void)hadamard_test_trace(w, ins, level, {}, Mode::exact); }, args.min_time);
            os << "sim_exact," << n << ',' << m << ",2," << sec << ',' << reps << '\n';
        }
    }
    std::cerr << "dp time exponent in N: " << mean_n << " (expected about 2)\n";
    std::cerr << "dp time exponent in m: " << mean_m << " (expected about 1)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"WRT traces of torus bundles with skein insertions, and Frohman-Gelca coefficient counting"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: WRTNCT_THREADS or hardware)")->check(CLI::NonNegativeNumber);
    auto *format_opt = app.add_option("--format", common.format, "json (default), compact, or text (verify table)")
                           ->check(CLI::IsMember({"json", "compact", "text"}));

    WrtArgs wrt;
    auto *wrt_cmd = app.add_subcommand("wrt", "compute Z_N(M_g; B_v1..B_vm)");
    wrt_cmd->add_option("--level,-N", wrt.level, "odd level N >= 3")->required();
    wrt_cmd->add_option("--monodromy,-g", wrt.monodromy, "a,b,c,d with ad - bc = 1")->capture_default_str();
    wrt_cmd->add_option("--insertions,-i", wrt.insertions, "p1,s1;p2,s2;... (empty = none)");
    wrt_cmd->add_option("--method", wrt.method)->check(CLI::IsMember({"dp", "sim-exact", "sim-sample", "all"}))->capture_default_str();
    wrt_cmd->add_option("--epsilon", wrt.epsilon)->capture_default_str();
    wrt_cmd->add_option("--delta", wrt.delta)->capture_default_str();
    wrt_cmd->add_option("--seed", wrt.seed)->capture_default_str();

    CoeffArgs coeff;
    auto *coeff_cmd = app.add_subcommand("coeff", "count sign vectors with sum eps_i a_i = z");
    coeff_cmd->add_option("--a", coeff.a, "a1,a2,... (empty = none)")->required();
    coeff_cmd->add_option("--z", coeff.z)->capture_default_str();
    coeff_cmd->add_option("--method", coeff.method)->check(CLI::IsMember({"exact", "mod", "estimate", "all"}))->capture_default_str();
    coeff_cmd->add_option("--modulus", coeff.modulus, "modulus for the modular count (default B + 1)");
    coeff_cmd->add_option("--level", coeff.level, "simulator level for the estimate (default: smallest odd N > B)");
    coeff_cmd->add_option("--epsilon", coeff.epsilon)->capture_default_str();
    coeff_cmd->add_option("--delta", coeff.delta)->capture_default_str();
    coeff_cmd->add_option("--seed", coeff.seed)->capture_default_str();

    std::string decompose_g;
    auto *dec_cmd = app.add_subcommand("decompose", "write g as a word in S, T, Tinv");
    dec_cmd->add_option("--monodromy,-g", decompose_g, "a,b,c,d")->required();

    std::uint64_t verify_seed = 2024;
    auto *verify_cmd = app.add_subcommand("verify", "run the invariant suite");
    verify_cmd->add_option("--seed", verify_seed)->capture_default_str();

    BenchArgs bench;
    auto *bench_cmd = app.add_subcommand("bench", "timing sweep, CSV output");
    bench_cmd->add_option("--out,-o", bench.out, "CSV path (default stdout)");
    bench_cmd->add_flag("--quick", bench.quick, "smaller grid");
    bench_cmd->add_option("--min-time", bench.min_time, "seconds per cell")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }
    if (threads > 0) set_thread_count(threads);
    if (*verify_cmd && format_opt->count() == 0) common.format = "text";

    try {
        if (*wrt_cmd) return cmd_wrt(wrt, common);
        if (*coeff_cmd) return cmd_coeff(coeff, common);
        if (*dec_cmd) return cmd_decompose(decompose_g, common);
        if (*verify_cmd) return cmd_verify(verify_seed, common);
        if (*bench_cmd) return cmd_bench(bench);
    } catch (const std::exception &e) {
        // bad input, oversized requests and determinant failures all land here
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
