// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tqkd/tqkd.hpp"

namespace {

using namespace tqkd;

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double max_seconds;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

constexpr std::uint64_t kSeed = 20030331;

Outcome triple_point_five() {
    const auto p = triple_point(Dimension(5));
    const double expected_eta0 = (11.0 + 4.0 * std::sqrt(6.0)) / 25.0;
    const bool pass = p.beta0 == 1.0 / 3.0 && std::fabs(p.eta0 - expected_eta0) <= 1e-10;
    return {pass, fmt("beta0=%.17g eta0=%.17g |d eta0|=%.2e", p.beta0, p.eta0, std::fabs(p.eta0 - expected_eta0))};
}

Outcome ck_intersection_five() {
    const auto p = ck_intersection(Dimension(5));
    const bool pass = std::fabs(p.beta0 - 0.708) <= 0.001 && std::fabs(p.eta0 - 0.470) <= 0.001;
    return {pass, fmt("beta0=%.6f eta0=%.6f", p.beta0, p.eta0)};
}

Outcome three_fold_coincidence() {
    int mismatches = 0;
    int ties = 0;
    double worst_width = 0.0;
    double worst_miss = 0.0;
    for (int nv = 2; nv <= 10; ++nv) {
        const Dimension n(nv);
        const double ed = 2.0 / (nv + 1.0);
        for (double beta0 : beta0_grid(n, 50)) {
            // A grid point on the threshold itself is an equality case; rounding picks the side.
            if (std::fabs(beta0 - ed) < 1e-12) {
                ++ties;
                continue;
            }
            const auto b = bob_channel(n, beta0);
            if (ad_threshold_satisfied(b, eve_from_bob(b)) != (beta0 > ed)) ++mismatches;
        }
        const auto [lo, hi] = ad_flip_bracket(n, 5e-10);
        worst_width = std::fmax(worst_width, hi - lo);
        worst_miss = std::fmax(worst_miss, ed < lo ? lo - ed : (ed > hi ? ed - hi : 0.0));
    }
    const bool pass = mismatches == 0 && worst_width < 1e-9 && worst_miss == 0.0;
    return {pass, fmt("grid mismatches=%d (%d points on the threshold skipped) max bracket width=%.2e max miss=%.2e",
                      mismatches, ties, worst_width, worst_miss)};
}

Outcome srm_equivalence() {
    double worst = 0.0;
    for (int nv = 2; nv <= 10; ++nv) {
        const Dimension n(nv);
        for (double beta0 : beta0_grid(n, 50)) {
            const auto b = bob_channel(n, beta0);
            const auto closed = eve_from_bob(b);
            const auto srm = srm_eve_oracle(b);
            worst = std::fmax(worst, std::fmax(std::fabs(closed.eta0 - srm.eta0), std::fabs(closed.eta1 - srm.eta1)));
        }
    }
    return {worst <= 1e-12, fmt("max |closed - srm|=%.2e", worst)};
}

Outcome ad_equivalence() {
    double worst = 0.0;
    for (int nv : {2, 3, 4}) {
        const Dimension n(nv);
        for (double eta0 : eta0_grid(n, 5)) {
            const auto e = eve_channel(n, eta0);
            for (int L = 1; L <= 6; ++L) {
                worst = std::fmax(worst, std::fabs(eve_error_exact(e, L) - eve_error_bruteforce(e, L)));
            }
        }
    }
    return {worst <= 1e-12, fmt("max |exact - brute force|=%.2e", worst)};
}

Outcome asymptotic_convergence() {
    bool pass = true;
    std::string detail;
    for (int nv : {2, 3, 5}) {
        const Dimension n(nv);
        const auto e = eve_from_bob(bob_channel(n, ed_threshold(n)));
        const double limit = eve_decay_ratio(e);
        const auto logs = log_eve_error_sequence(e, 61);
        auto gap = [&](int L) {
            return std::fabs(std::exp(logs[static_cast<std::size_t>(L + 1)] - logs[static_cast<std::size_t>(L)]) - limit);
        };
        bool shrinking = true;
        int first_growth = -1;
        for (int L = 20; L < 60; ++L) {
            if (!(gap(L + 1) < gap(L))) {
                shrinking = false;
                if (first_growth < 0) first_growth = L + 1;
            }
        }
        const bool ok = gap(60) < 0.02 && shrinking;
        pass = pass && ok;
        detail += fmt("n=%d: gap(60)=%.4f %s%s; ", nv, gap(60), shrinking ? "shrinking" : "not shrinking",
                      first_growth > 0 ? fmt(" (grows at L=%d)", first_growth).c_str() : "");
        if (nv == 2) {
            // Two-step rate sqrt(E_{L+2}/E_L), for context only.
            const double two_step = std::exp(0.5 * (logs[61] - logs[59]));
            detail += fmt("n=2 two-step rate at L=59: %.4f vs %.4f; ", two_step, limit);
        }
    }
    return {pass, detail};
}

Outcome generating_function_consistency() {
    double worst = 0.0;
    for (int nv : {2, 3}) {
        const Dimension n(nv);
        std::vector<double> etas = eta0_grid(n, 3);
        etas.push_back(triple_point(n).eta0);
        for (double eta0 : etas) {
            const auto e = eve_channel(n, eta0);
            for (double t : {0.5, 1.0, 2.0, 3.0}) {
                worst = std::fmax(worst, std::fabs(eve_gen_series(e, t, 40) - eve_gen_function(e, t)));
            }
        }
    }
    return {worst <= 1e-8, fmt("max |series - E(t)|=%.2e", worst)};
}

Outcome monte_carlo_validation() {
    struct Case {
        int n;
        double beta0;
        int L;
    };
    bool pass = true;
    std::string detail;
    for (const auto& c : {Case{2, 0.9, 3}, Case{3, 0.55, 2}, Case{5, 0.4, 2}}) {
        const auto r = run_ad_simulation({Dimension(c.n), c.beta0, c.L, 1'000'000, kSeed}, 4);
        auto z = [](const Estimate& est) { return est.sigma > 0 ? (est.rate - est.exact) / est.sigma : 0.0; };
        const bool ok = r.acceptance.within(3.0) && r.bob_wrong.within(3.0) && r.eve_conditional.within(3.0);
        pass = pass && ok;
        detail += fmt("(%d,%.2f,%d) z=[%.2f %.2f %.2f]; ", c.n, c.beta0, c.L, z(r.acceptance), z(r.bob_wrong),
                      z(r.eve_conditional));
    }
    return {pass, detail};
}

Outcome determinism() {
    auto text = [](unsigned workers) {
        const auto res = cmd_simulate(3, 0.55, 2, 1'000'000, kSeed, workers);
        return render(res.record, OutputFormat::csv) + render(res.record, OutputFormat::json);
    };
    const auto reference = text(1);
    bool same = true;
    for (unsigned w : {1u, 2u, 8u}) same = same && text(w) == reference;
    return {same, fmt("%zu bytes compared across 1, 1, 2 and 8 workers", reference.size())};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "triple point n=5", 1.0, triple_point_five},
        {2, "CK intersection n=5", 1.0, ck_intersection_five},
        {3, "three-fold coincidence", 1.0, three_fold_coincidence},
        {4, "SRM oracle equivalence", 1.0, srm_equivalence},
        {5, "AD exact vs brute force", 30.0, ad_equivalence},
        {6, "asymptotic ratio convergence", 60.0, asymptotic_convergence},
        {7, "generating-function consistency", 30.0, generating_function_consistency},
        {8, "Monte Carlo validation", 30.0, monte_carlo_validation},
        {9, "determinism across workers", 120.0, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        const auto outcome = c.run();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = outcome.pass && secs <= c.max_seconds;
        failures += pass ? 0 : 1;
        std::printf("[%s] %d. %s (%.3f s, limit %.0f s): %s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                    c.max_seconds, outcome.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
