#pragma once

// Command implementations behind the tqkd CLI. Each returns an OutputRecord;
// the executable only parses flags and writes the record.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tqkd/distill.hpp"
#include "tqkd/infotheory.hpp"
#include "tqkd/model.hpp"
#include "tqkd/report.hpp"
#include "tqkd/simulator.hpp"

namespace tqkd {

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

/// Shortest round-trip text for a double.
inline std::string echo(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : format_number(v, 17);
}

inline std::string echo(std::int64_t v) { return std::to_string(v); }
inline std::string echo(std::uint64_t v) { return std::to_string(v); }
inline std::string echo(int v) { return std::to_string(v); }

/// `count` beta0 values evenly spaced in (1/n, 1], the last one equal to 1.
inline std::vector<double> beta0_grid(Dimension n, int count) {
    std::vector<double> out;
    const double lo = n.inverse();
    for (int i = 1; i <= count; ++i) out.push_back(i == count ? 1.0 : lo + (1.0 - lo) * i / count);
    return out;
}

/// `count` eta0 values strictly inside (1/n, 1) at fractions (2i+1)/(2 count).
inline std::vector<double> eta0_grid(Dimension n, int count) {
    std::vector<double> out;
    const double lo = n.inverse();
    for (int i = 0; i < count; ++i) out.push_back(lo + (1.0 - lo) * (2.0 * i + 1.0) / (2.0 * count));
    return out;
}

inline OutputRecord cmd_triple_point(int n_value) {
    const Dimension n(n_value);
    const auto report = threshold_report(n);
    OutputRecord rec;
    rec.command = "triple-point";
    rec.parameters = {{"n", echo(n_value)}};
    rec.columns = {"n", "ed_beta0", "triple_beta0", "triple_eta0", "ck_beta0", "ck_eta0"};
    rec.add_row({std::int64_t{n_value}, report.ed_beta0, report.triple.beta0, report.triple.eta0,
                 report.ck.beta0, report.ck.eta0});
    return rec;
}

inline OutputRecord cmd_curves(int n_value, int grid) {
    const Dimension n(n_value);
    OutputRecord rec;
    rec.command = "curves";
    rec.parameters = {{"n", echo(n_value)}, {"grid", echo(grid)}};
    rec.columns = {"curve", "eta0", "beta0"};
    for (const auto& p : curve_data(n, grid)) rec.add_row({p.curve, p.eta0, p.beta0});
    return rec;
}

/// Rows L = 1..L_max of exact post-distillation statistics. Step ratios are
/// X_{L+1}/X_L; a zero numerator and denominator yields 0.
inline OutputRecord cmd_ad_table(int n_value, double beta0, int L_max, const ExactLimits& limits = {}) {
    const Dimension n(n_value);
    if (L_max < 1) throw std::invalid_argument("L-max must be >= 1");
    const auto b = bob_channel(n, beta0);
    const auto e = eve_from_bob(b);
    const auto log_e = log_eve_error_sequence(e, L_max + 1, limits);
    const auto limits_row = ratio_limits(b, e);

    auto step = [](double log_next, double log_cur) {
        if (std::isinf(log_cur) && log_cur < 0) return 0.0;
        return std::exp(log_next - log_cur);
    };

    OutputRecord rec;
    rec.command = "ad-table";
    rec.parameters = {{"n", echo(n_value)}, {"beta0", echo(beta0)}, {"L_max", echo(L_max)}};
    rec.columns = {"L", "B_L", "E_L", "accept_rate", "bob_step_ratio", "eve_step_ratio", "bob_ratio_limit",
                   "eve_ratio_limit"};
    for (int L = 1; L <= L_max; ++L) {
        const auto i = static_cast<std::size_t>(L);
        rec.add_row({std::int64_t{L}, bob_error_after_ad(b, L), std::exp(log_e[i]), accept_rate(b, L),
                     step(log_bob_error_after_ad(b, L + 1), log_bob_error_after_ad(b, L)),
                     step(log_e[i + 1], log_e[i]), limits_row.bob_ratio, limits_row.eve_ratio});
    }
    return rec;
}

struct SimulateResult {
    OutputRecord record;
    SimReport report;
};

inline constexpr double kSigmaBand = 3.0;

inline SimulateResult cmd_simulate(int n_value, double beta0, int L, std::uint64_t blocks, std::uint64_t seed,
                                   unsigned workers = 1) {
    const ProtocolConfig cfg{Dimension(n_value), beta0, L, blocks, seed};
    auto report = run_ad_simulation(cfg, workers);
    const auto yield = distilled_ck_estimate(report);

    OutputRecord rec;
    rec.command = "simulate";
    // Worker count is left out: it does not change the result.
    rec.parameters = {{"n", echo(n_value)},       {"beta0", echo(beta0)}, {"L", echo(L)},
                      {"blocks", echo(blocks)},   {"seed", echo(seed)}};
    rec.columns = {"quantity", "count", "trials", "empirical", "std_error", "exact", "sigma", "deviation_sigmas",
                   "pass"};
    auto add = [&](const std::string& name, const Estimate& est) {
        const double dev = est.sigma > 0 ? (est.rate - est.exact) / est.sigma
                                         : (est.rate == est.exact ? 0.0 : std::nan(""));
        rec.add_row({name, static_cast<std::int64_t>(est.count), static_cast<std::int64_t>(est.trials), est.rate,
                     est.std_error, est.exact, est.sigma, dev, est.within(kSigmaBand)});
    };
    add("acceptance", report.acceptance);
    add("bob_wrong", report.bob_wrong);
    add("eve_conditional_error", report.eve_conditional);
    const bool same_sign = (yield.empirical.nu > 0) == (yield.exact.nu > 0);
    rec.add_row({std::string("distilled_ck_yield"), std::monostate{}, std::monostate{}, yield.empirical.nu,
                 std::monostate{}, yield.exact.nu, std::monostate{}, std::monostate{}, same_sign});
    return SimulateResult{std::move(rec), std::move(report)};
}

/// One oracle cross-check: the largest residual seen and its tolerance.
struct VerifyCheck {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    int cases = 0;

    void observe(double residual) {
        max_residual = std::isnan(residual) ? residual : std::max(max_residual, residual);
        ++cases;
    }
    [[nodiscard]] bool passed() const { return !std::isnan(max_residual) && max_residual <= tolerance; }
};

struct VerifySuite {
    std::vector<int> srm_dimensions;
    int srm_grid;
    std::vector<int> ad_dimensions;
    int ad_max_L;
    int ad_eta_count;
    std::vector<int> series_dimensions;
    std::vector<double> series_t;
    int series_terms;
    std::vector<int> coincidence_dimensions;
};

inline VerifySuite verify_suite(const std::string& level) {
    if (level == "quick") {
        return VerifySuite{{2, 3}, 10, {2, 3}, 4, 3, {2, 3}, {0.5, 1.0}, 40, {2, 3}};
    }
    if (level == "full") {
        return VerifySuite{{2, 3, 4, 5, 6, 7, 8, 9, 10}, 50, {2, 3, 4}, 6, 5, {2, 3}, {0.5, 1.0, 2.0, 3.0}, 40,
                           {2, 3, 4, 5, 6, 7, 8, 9, 10}};
    }
    throw std::invalid_argument("unknown verify level '" + level + "' (expected quick or full)");
}

inline std::vector<VerifyCheck> run_verify(const VerifySuite& suite) {
    VerifyCheck srm{"srm_vs_closed_form", 0, 1e-12};
    VerifyCheck relation{"closed_form_relation", 0, 1e-12};
    for (int nv : suite.srm_dimensions) {
        const Dimension n(nv);
        for (double beta0 : beta0_grid(n, suite.srm_grid)) {
            const auto b = bob_channel(n, beta0);
            const auto closed = eve_from_bob(b);
            const auto oracle = srm_eve_oracle(b);
            srm.observe(std::max(std::fabs(closed.eta0 - oracle.eta0), std::fabs(closed.eta1 - oracle.eta1)));
            relation.observe(std::max(
                std::fabs(std::sqrt(closed.eta0) - std::sqrt(closed.eta1) - std::sqrt(b.error_ratio())),
                std::fabs(closed.eta0 + (nv - 1) * closed.eta1 - 1.0)));
        }
    }

    VerifyCheck exact{"exact_vs_bruteforce", 0, 1e-12};
    VerifyCheck closure{"success_failure_closure", 0, 1e-12};
    for (int nv : suite.ad_dimensions) {
        const Dimension n(nv);
        for (double eta0 : eta0_grid(n, suite.ad_eta_count)) {
            const auto e = eve_channel(n, eta0);
            const auto seq = eve_error_sequence(e, suite.ad_max_L);
            for (int L = 1; L <= suite.ad_max_L; ++L) {
                const auto brute = eve_bruteforce_tally(e, L);
                const double e_L = seq[static_cast<std::size_t>(L)];
                exact.observe(std::fabs(e_L - brute.e_L));
                closure.observe(std::max(std::fabs(brute.total_probability - 1.0),
                                         std::fabs(eve_success_exact(e, L) + (nv - 1) * e_L - 1.0)));
            }
        }
    }

    VerifyCheck series{"series_vs_generating_function", 0, 1e-8};
    for (int nv : suite.series_dimensions) {
        const Dimension n(nv);
        for (double eta0 : eta0_grid(n, 3)) {
            const auto e = eve_channel(n, eta0);
            for (double t : suite.series_t) {
                series.observe(std::fabs(eve_gen_series(e, t, suite.series_terms) - eve_gen_function(e, t)));
            }
        }
    }

    VerifyCheck coincidence{"ad_flip_at_ed_threshold", 0, 1e-9};
    for (int nv : suite.coincidence_dimensions) {
        const Dimension n(nv);
        const auto [lo, hi] = ad_flip_bracket(n, 1e-10);
        const double ed = ed_threshold(n);
        const double miss = ed < lo ? lo - ed : (ed > hi ? ed - hi : 0.0);
        coincidence.observe(std::max(miss, hi - lo));
    }

    return {srm, relation, exact, closure, series, coincidence};
}

inline OutputRecord cmd_verify(const std::string& level) {
    const auto checks = run_verify(verify_suite(level));
    OutputRecord rec;
    rec.command = "verify";
    rec.parameters = {{"level", level}};
    rec.columns = {"check", "cases", "max_residual", "tolerance", "pass"};
    bool all = true;
    for (const auto& c : checks) {
        rec.add_row({c.name, std::int64_t{c.cases}, c.max_residual, c.tolerance, c.passed()});
        all = all && c.passed();
    }
    rec.exit_code = all ? kExitOk : kExitVerifyFailed;
    return rec;
}

}  // namespace tqkd
