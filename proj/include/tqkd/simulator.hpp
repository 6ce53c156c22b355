#pragma once

// Seeded Monte Carlo run of the classical advantage-distillation protocol:
// die cast and mod-n announcement by Alice, homogeneity test by Bob, and
// Eve's subtract-then-majority-vote decision.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tqkd/distill.hpp"
#include "tqkd/infotheory.hpp"
#include "tqkd/model.hpp"

namespace tqkd {

struct ProtocolConfig {
    Dimension n;
    double beta0;
    int L;
    std::uint64_t num_blocks;
    std::uint64_t seed;
};

/// One raw position: Alice's and Bob's nits plus Eve's inferred value.
/// When Bob's nit differs from Alice's, Eve identifies both exactly.
struct SymbolTriple {
    int alice;
    int bob;
    int eve;
    bool eve_certain;
};

/// Engine for block `index`: an independent mt19937_64 seeded by mixing
/// (seed, index) through two SplitMix64 finalizer rounds.
using BlockEngine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline BlockEngine block_engine(std::uint64_t seed, std::uint64_t index) {
    return BlockEngine{splitmix64(splitmix64(seed) ^ index)};
}

/// Uniform double in [0, 1) from the top 53 bits.
template <class Engine>
double uniform01(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform symbol in [0, count).
template <class Engine>
int uniform_symbol(Engine& rng, int count) {
    const int s = static_cast<int>(uniform01(rng) * count);
    return std::min(s, count - 1);
}

template <class Engine>
SymbolTriple sample_triple(Engine& rng, const BobChannel& b, const EveChannel& e) {
    const int n = b.n.value();
    const int alice = uniform_symbol(rng, n);
    const int bob = uniform01(rng) < b.beta0 ? alice : (alice + 1 + uniform_symbol(rng, n - 1)) % n;
    if (bob != alice) return SymbolTriple{alice, bob, alice, true};
    const int eve = uniform01(rng) < e.eta0 ? alice : (alice + 1 + uniform_symbol(rng, n - 1)) % n;
    return SymbolTriple{alice, bob, eve, false};
}

struct BlockOutcome {
    bool accepted = false;
    bool bob_correct = false;
    bool eve_correct = false;
    bool eve_tied = false;
};

/// Plays one block of the protocol on `rng`.
template <class Engine>
BlockOutcome play_block(Engine& rng, const BobChannel& b, const EveChannel& e, int L,
                        std::vector<SymbolTriple>& triples, std::vector<int>& counts) {
    const int n = b.n.value();
    triples.resize(static_cast<std::size_t>(L));
    for (auto& t : triples) t = sample_triple(rng, b, e);

    const int die = uniform_symbol(rng, n);
    auto announced = [&](const SymbolTriple& t) { return (t.alice + die) % n; };

    BlockOutcome out;
    const int bob_value = (announced(triples[0]) - triples[0].bob + n) % n;
    out.accepted = std::all_of(triples.begin(), triples.end(), [&](const SymbolTriple& t) {
        return (announced(t) - t.bob + n) % n == bob_value;
    });
    if (!out.accepted) return out;
    out.bob_correct = bob_value == die;

    counts.assign(static_cast<std::size_t>(n), 0);
    for (const auto& t : triples) ++counts[static_cast<std::size_t>((announced(t) - t.eve + n) % n)];
    const int top = *std::max_element(counts.begin(), counts.end());
    const auto tied = static_cast<int>(std::count(counts.begin(), counts.end(), top));
    int pick = tied > 1 ? uniform_symbol(rng, tied) : 0;
    int guess = 0;
    for (int s = 0; s < n; ++s) {
        if (counts[static_cast<std::size_t>(s)] == top && pick-- == 0) {
            guess = s;
            break;
        }
    }
    out.eve_tied = tied > 1;
    out.eve_correct = guess == die;
    return out;
}

/// Accept decision from raw symbols alone (all a_i - b_i equal mod n),
/// drawing the same triples as play_block.
template <class Engine>
bool shortcut_accept(Engine& rng, const BobChannel& b, const EveChannel& e, int L) {
    const int n = b.n.value();
    int offset = -1;
    bool same = true;
    for (int i = 0; i < L; ++i) {
        const auto t = sample_triple(rng, b, e);
        const int d = (t.alice - t.bob + n) % n;
        if (offset < 0) offset = d;
        same = same && d == offset;
    }
    return same;
}

/// Empirical rate of a binomial count next to its exact value.
struct Estimate {
    std::uint64_t count = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    double std_error = 0.0;  // sqrt(rate (1-rate) / trials)
    double exact = 0.0;
    double sigma = 0.0;  // sqrt(exact (1-exact) / trials)

    [[nodiscard]] bool within(double k) const noexcept {
        if (trials == 0) return false;
        return std::fabs(rate - exact) <= k * sigma;
    }
};

inline Estimate make_estimate(std::uint64_t count, std::uint64_t trials, double exact) {
    Estimate est;
    est.count = count;
    est.trials = trials;
    est.exact = exact;
    if (trials > 0) {
        const auto t = static_cast<double>(trials);
        est.rate = static_cast<double>(count) / t;
        est.std_error = std::sqrt(est.rate * (1.0 - est.rate) / t);
        est.sigma = std::sqrt(exact * (1.0 - exact) / t);
    } else {
        est.rate = std::nan("");
    }
    return est;
}

struct BlockTally {
    std::uint64_t blocks = 0;
    std::uint64_t accepted = 0;
    std::uint64_t bob_wrong = 0;
    std::uint64_t eve_wrong_given_bob_correct = 0;
    std::uint64_t eve_ties = 0;

    BlockTally& operator+=(const BlockTally& o) noexcept {
        blocks += o.blocks;
        accepted += o.accepted;
        bob_wrong += o.bob_wrong;
        eve_wrong_given_bob_correct += o.eve_wrong_given_bob_correct;
        eve_ties += o.eve_ties;
        return *this;
    }
};

struct SimReport {
    ProtocolConfig config;
    BobChannel bob;
    EveChannel eve;
    BlockTally tally;
    Estimate acceptance;       // exact: beta0^L + (n-1) beta1^L
    Estimate bob_wrong;        // per accepted block; exact: (n-1) B_L
    Estimate eve_conditional;  // per Bob-correct block; exact: (n-1) E_L

    [[nodiscard]] std::uint64_t bob_correct_blocks() const noexcept { return tally.accepted - tally.bob_wrong; }
};

inline BlockTally simulate_range(const ProtocolConfig& cfg, const BobChannel& b, const EveChannel& e,
                                 std::uint64_t first, std::uint64_t last) {
    BlockTally tally;
    std::vector<SymbolTriple> triples;
    std::vector<int> counts;
    for (std::uint64_t i = first; i < last; ++i) {
        auto rng = block_engine(cfg.seed, i);
        const auto out = play_block(rng, b, e, cfg.L, triples, counts);
        ++tally.blocks;
        if (!out.accepted) continue;
        ++tally.accepted;
        if (!out.bob_correct) {
            ++tally.bob_wrong;
            continue;
        }
        if (!out.eve_correct) ++tally.eve_wrong_given_bob_correct;
        if (out.eve_tied) ++tally.eve_ties;
    }
    return tally;
}

/// Runs cfg.num_blocks blocks split into contiguous ranges over `workers`
/// threads. Block i always draws from block_engine(seed, i), so the report
/// does not depend on the worker count.
inline SimReport run_ad_simulation(const ProtocolConfig& cfg, unsigned workers = 1,
                                   const ExactLimits& limits = {}) {
    if (cfg.L < 1) throw std::invalid_argument("block length must be >= 1");
    if (cfg.num_blocks < 1) throw std::invalid_argument("num_blocks must be >= 1");
    workers = std::max(1u, workers);

    const BobChannel b = bob_channel(cfg.n, cfg.beta0);
    const EveChannel e = eve_from_bob(b);

    std::vector<BlockTally> parts(workers);
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = cfg.num_blocks / workers;
        const std::uint64_t extra = cfg.num_blocks % workers;
        std::uint64_t first = 0;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t last = first + chunk + (w < extra ? 1 : 0);
            pool.emplace_back([&, w, first, last] { parts[w] = simulate_range(cfg, b, e, first, last); });
            first = last;
        }
    }
    BlockTally tally;
    for (const auto& p : parts) tally += p;

    const double nm1 = cfg.n.as_double() - 1.0;
    SimReport report{cfg, b, e, tally, {}, {}, {}};
    report.acceptance = make_estimate(tally.accepted, tally.blocks, accept_rate(b, cfg.L));
    report.bob_wrong = make_estimate(tally.bob_wrong, tally.accepted, nm1 * bob_error_after_ad(b, cfg.L));
    report.eve_conditional = make_estimate(tally.eve_wrong_given_bob_correct, report.bob_correct_blocks(),
                                           nm1 * eve_error_exact(e, cfg.L, limits));
    return report;
}

struct DistilledYield {
    CKYield empirical;
    CKYield exact;
};

/// CK yield of the distilled key from the empirical post-AD rates, next to
/// the exact value from post_ad_channels.
inline DistilledYield distilled_ck_estimate(const SimReport& report, const ExactLimits& limits = {}) {
    if (report.tally.accepted == 0) throw std::invalid_argument("distilled_ck_estimate: no accepted blocks");
    const double beta0 = 1.0 - report.bob_wrong.rate;
    const double eta0 = report.eve_conditional.trials > 0 ? 1.0 - report.eve_conditional.rate : 1.0;
    const auto [bob, eve] = post_ad_channels(report.bob, report.eve, report.config.L, limits);
    return DistilledYield{ck_yield(report.config.n, beta0, eta0), ck_yield(bob, eve)};
}

}  // namespace tqkd
