#pragma once

/**
 * @file distill.hpp
 * @brief Exact and asymptotic advantage-distillation statistics.
 *
 * Blocks of L raw nits are kept by Bob only when they decode homogeneously.
 * After distillation Bob holds a particular wrong value with probability B_L
 * and Eve, deciding by majority vote over her own block, holds a particular
 * wrong value with probability E_L (given Bob is right).
 *
 * E_L is obtained by coefficient extraction from products of truncated
 * exponential series: for Eve's count m of correct symbols the remaining
 * D = L - m symbols are spread over the n - 1 wrong values, and the
 * coefficient of x^D/D! in
 *
 *     [ (y x)^M / M! ]^l [ sum_{k<M} (y x)^k / k! ]^(n-1-l)
 *
 * counts the arrangements in which exactly l wrong values reach the top count
 * M and the rest stay below it. All arithmetic is done on exponential
 * coefficients with y = 1/(n-1), so every intermediate is a probability.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tqkd/infotheory.hpp"
#include "tqkd/model.hpp"

namespace tqkd {

/// Raised when a request would exceed the configured workload bounds.
class size_limit_error : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Workload bounds for the exact E_L computation, O(n^2 L^3) at worst.
struct ExactLimits {
    int max_block_length = 200;
    int max_dimension = 16;
};

/// Enumeration bound for the brute-force oracle.
inline constexpr std::uint64_t kMaxBruteForceBlocks = 10'000'000;

struct ADExact {
    int L;
    double b_L;
    double e_L;
    double accept_rate;
};

struct RatioLimits {
    double bob_ratio;
    double eve_ratio;
};

namespace detail {

/// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Pascal triangle of doubles, rows 0..max_row.
class BinomialTable {
public:
    explicit BinomialTable(int max_row) : rows_(static_cast<std::size_t>(max_row) + 1) {
        for (int r = 0; r <= max_row; ++r) {
            auto& row = rows_[static_cast<std::size_t>(r)];
            row.assign(static_cast<std::size_t>(r) + 1, 1.0);
            for (int k = 1; k < r; ++k) {
                const auto& prev = rows_[static_cast<std::size_t>(r - 1)];
                row[static_cast<std::size_t>(k)] =
                    prev[static_cast<std::size_t>(k - 1)] + prev[static_cast<std::size_t>(k)];
            }
        }
    }

    [[nodiscard]] double operator()(int r, int k) const {
        if (k < 0 || k > r) return 0.0;
        return rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
    }

private:
    std::vector<std::vector<double>> rows_;
};

using Series = std::vector<double>;  // exponential coefficients a_d of sum a_d x^d / d!

/// Product of two exponential series, truncated to the length of a.
inline Series egf_multiply(const Series& a, const Series& b, const BinomialTable& binom) {
    Series out(a.size(), 0.0);
    for (std::size_t d = 0; d < a.size(); ++d) {
        double acc = 0.0;
        for (std::size_t i = 0; i <= d; ++i) {
            if (a[i] == 0.0 || b[d - i] == 0.0) continue;
            acc += binom(static_cast<int>(d), static_cast<int>(i)) * a[i] * b[d - i];
        }
        out[d] = acc;
    }
    return out;
}

/// Per top count M, the coefficient tables indexed by D (number of wrong
/// symbols in the block).
struct TopCountTables {
    // sum_{l>=1} C(n-1,l) coef(M,l,D): some wrong value reaches exactly M.
    std::vector<double> reaches;
    // sum_{l>=1} C(n-1,l) l/(l+1) coef(M,l,D): Eve loses a tie at M.
    std::vector<double> tie_loss;
    // (1/n) sum_{l>=0} C(n,l+1) coef(M,l,D): Eve wins with M correct symbols.
    std::vector<double> success;
};

/// Builds the tables for every top count M = 0..L.
inline std::vector<TopCountTables> top_count_tables(int n, int L, const BinomialTable& binom) {
    const double share = 1.0 / static_cast<double>(n - 1);
    const auto len = static_cast<std::size_t>(L) + 1;
    std::vector<TopCountTables> tables(len);

    for (int M = 0; M <= L; ++M) {
        // Powers of the truncated series sum_{k<M} (share x)^k / k!.
        Series below(len, 0.0);
        for (int k = 0; k < std::min(M, L + 1); ++k) below[static_cast<std::size_t>(k)] = std::pow(share, k);
        std::vector<Series> powers(static_cast<std::size_t>(n));
        powers[0].assign(len, 0.0);
        powers[0][0] = 1.0;
        for (int j = 1; j < n; ++j) {
            powers[static_cast<std::size_t>(j)] = egf_multiply(powers[static_cast<std::size_t>(j - 1)], below, binom);
        }

        auto& t = tables[static_cast<std::size_t>(M)];
        t.reaches.assign(len, 0.0);
        t.tie_loss.assign(len, 0.0);
        t.success.assign(len, 0.0);

        // Exponential coefficient of [(share x)^M / M!]^l at x^{lM}.
        double top = 1.0;
        for (int l = 0; l <= n - 1; ++l) {
            if (l > 0) {
                if (l * M > L) break;
                top *= binom(l * M, M) * std::pow(share, M);
            }
            const auto& rest = powers[static_cast<std::size_t>(n - 1 - l)];
            const double choose_wrong = binom(n - 1, l);
            const double choose_all = binom(n, l + 1) / static_cast<double>(n);
            for (int D = l * M; D <= L; ++D) {
                const double coef =
                    binom(D, l * M) * top * rest[static_cast<std::size_t>(D - l * M)];
                if (coef == 0.0) continue;
                const auto d = static_cast<std::size_t>(D);
                t.success[d] += choose_all * coef;
                if (l >= 1) {
                    t.reaches[d] += choose_wrong * coef;
                    t.tie_loss[d] += choose_wrong * coef * static_cast<double>(l) / static_cast<double>(l + 1);
                }
            }
        }
    }
    return tables;
}

inline void check_exact_limits(const EveChannel& e, int L, const ExactLimits& limits) {
    if (L > limits.max_block_length || e.n.value() > limits.max_dimension) {
        throw size_limit_error("exact E_L limited to L <= " + std::to_string(limits.max_block_length) +
                               ", n <= " + std::to_string(limits.max_dimension) + " (got L = " +
                               std::to_string(L) + ", n = " + std::to_string(e.n.value()) + ")");
    }
}

inline double log_sum_exp(const std::vector<double>& logs) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : logs) peak = std::max(peak, v);
    if (!std::isfinite(peak)) return peak;
    CompensatedSum acc;
    for (double v : logs) acc.add(std::exp(v - peak));
    return peak + std::log(acc.value());
}

/// log of C(L,m) eta0^m ((n-1) eta1)^(L-m), the probability that Eve has
/// exactly m correct symbols.
inline double log_correct_count_weight(const EveChannel& e, int L, int m) {
    const double wrong = static_cast<double>(e.n.value() - 1) * e.eta1;
    const int D = L - m;
    auto xlog = [](int k, double p) {
        if (k == 0) return 0.0;
        return p > 0.0 ? k * std::log(p) : -std::numeric_limits<double>::infinity();
    };
    return std::lgamma(L + 1.0) - std::lgamma(m + 1.0) - std::lgamma(D + 1.0) + xlog(m, e.eta0) +
           xlog(D, wrong);
}

/// log of (n-1) E_L, Eve's total failure probability, for every block
/// length 0..max_L. One set of coefficient tables serves all lengths since
/// truncation at max_L leaves the lower coefficients unchanged.
inline std::vector<double> log_eve_failure_table(const EveChannel& e, int max_L, const ExactLimits& limits = {}) {
    check_exact_limits(e, max_L, limits);
    const auto len = static_cast<std::size_t>(max_L) + 1;
    if (e.eta1 == 0.0) {
        std::vector<double> out(len, -std::numeric_limits<double>::infinity());
        out[0] = std::log(1.0 - e.n.inverse());
        return out;
    }
    const int n = e.n.value();
    const BinomialTable binom(std::max(max_L, n));
    const auto tables = top_count_tables(n, max_L, binom);

    std::vector<double> out(len);
    std::vector<double> logs;
    for (int L = 0; L <= max_L; ++L) {
        logs.clear();
        for (int m = 0; m <= L; ++m) {
            const int D = L - m;
            const auto d = static_cast<std::size_t>(D);
            CompensatedSum fail;
            for (int M = m + 1; M <= D; ++M) fail.add(tables[static_cast<std::size_t>(M)].reaches[d]);
            fail.add(tables[static_cast<std::size_t>(m)].tie_loss[d]);
            const double f = fail.value();
            if (f <= 0.0) continue;
            logs.push_back(log_correct_count_weight(e, L, m) + std::log(f));
        }
        out[static_cast<std::size_t>(L)] = log_sum_exp(logs);
    }
    return out;
}

inline double log_eve_failure(const EveChannel& e, int L, const ExactLimits& limits = {}) {
    return log_eve_failure_table(e, L, limits).back();
}

}  // namespace detail

/// B_L = beta1^L / (beta0^L + (n-1) beta1^L), evaluated as r^L / (1 + (n-1) r^L).
inline double bob_error_after_ad(const BobChannel& b, int L) {
    if (L < 1) throw std::invalid_argument("block length must be >= 1");
    const double rL = std::pow(b.error_ratio(), L);
    return rL / (1.0 + (b.n.as_double() - 1.0) * rL);
}

/// log B_L; -inf for a noiseless channel.
inline double log_bob_error_after_ad(const BobChannel& b, int L) {
    if (L < 1) throw std::invalid_argument("block length must be >= 1");
    if (b.beta1 == 0.0) return -std::numeric_limits<double>::infinity();
    const double log_rL = L * std::log(b.error_ratio());
    return log_rL - std::log1p((b.n.as_double() - 1.0) * std::exp(log_rL));
}

/// Fraction of blocks Bob keeps: beta0^L + (n-1) beta1^L.
inline double accept_rate(const BobChannel& b, int L) {
    return std::pow(b.beta0, L) + (b.n.as_double() - 1.0) * std::pow(b.beta1, L);
}

/// log E_L from the exact coefficient extraction.
inline double log_eve_error_exact(const EveChannel& e, int L, const ExactLimits& limits = {}) {
    if (L < 1) throw std::invalid_argument("block length must be >= 1");
    return detail::log_eve_failure(e, L, limits) - std::log(e.n.as_double() - 1.0);
}

/// E_L: probability that Eve's majority vote lands on a particular wrong
/// value. Summed over failure configurations so that small E_L keeps full
/// relative precision.
inline double eve_error_exact(const EveChannel& e, int L, const ExactLimits& limits = {}) {
    if (e.eta1 == 0.0) {
        if (L < 1) throw std::invalid_argument("block length must be >= 1");
        return 0.0;
    }
    return std::exp(log_eve_error_exact(e, L, limits));
}

/// Majority-vote success probability 1 - (n-1) E_L summed term by term in
/// the form sum_m C(L,m) eta0^m (d/dx)^(L-m) (1/n) sum_l C(n,l+1) [...]^l [...]^(n-1-l).
inline double eve_success_exact(const EveChannel& e, int L, const ExactLimits& limits = {}) {
    if (L < 1) throw std::invalid_argument("block length must be >= 1");
    detail::check_exact_limits(e, L, limits);
    if (e.eta1 == 0.0) return 1.0;
    const int n = e.n.value();
    const detail::BinomialTable binom(std::max(L, n));
    const auto tables = detail::top_count_tables(n, L, binom);
    detail::CompensatedSum total;
    for (int m = 0; m <= L; ++m) {
        const double s = tables[static_cast<std::size_t>(m)].success[static_cast<std::size_t>(L - m)];
        if (s == 0.0) continue;
        total.add(std::exp(detail::log_correct_count_weight(e, L, m)) * s);
    }
    return total.value();
}

struct BruteForceResult {
    double success;
    double failure;
    double total_probability;
    double e_L;
};

/// Enumerates all n^L residue blocks Eve can hold and scores her majority
/// vote exactly, ties shared 1/(number of tied maxima). Accepts L >= 0.
inline BruteForceResult eve_bruteforce_tally(const EveChannel& e, int L) {
    if (L < 0) throw std::invalid_argument("block length must be >= 0");
    const int n = e.n.value();
    std::uint64_t blocks = 1;
    for (int i = 0; i < L; ++i) {
        blocks *= static_cast<std::uint64_t>(n);
        if (blocks > kMaxBruteForceBlocks) {
            throw size_limit_error("brute force limited to n^L <= 1e7");
        }
    }

    std::vector<int> digits(static_cast<std::size_t>(L), 0);
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    detail::CompensatedSum success;
    detail::CompensatedSum failure;
    detail::CompensatedSum total;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int d : digits) ++counts[static_cast<std::size_t>(d)];
        const int correct = counts[0];
        const double prob = std::pow(e.eta0, correct) * std::pow(e.eta1, L - correct);
        const int top_wrong = *std::max_element(counts.begin() + 1, counts.end());
        total.add(prob);
        if (top_wrong > correct) {
            failure.add(prob);
        } else if (top_wrong == correct) {
            const auto tied = std::count(counts.begin() + 1, counts.end(), correct);
            success.add(prob / static_cast<double>(tied + 1));
            failure.add(prob * static_cast<double>(tied) / static_cast<double>(tied + 1));
        } else {
            success.add(prob);
        }
        // odometer increment
        for (auto& d : digits) {
            if (++d < n) break;
            d = 0;
        }
    }
    const double fail = failure.value();
    return BruteForceResult{success.value(), fail, total.value(), fail / (n - 1.0)};
}

inline double eve_error_bruteforce(const EveChannel& e, int L) {
    if (L < 1) throw std::invalid_argument("block length must be >= 1");
    return eve_bruteforce_tally(e, L).e_L;
}

/// Generating function E(t) = sum_L t^L E_L / L!, evaluated directly as
///
///   e^t/(n-1) sum_m Pois(m; eta0 t) (1 - [w_m^n - w_{m-1}^n] / (n [w_m - w_{m-1}]))
///
/// with w_m(x) the partial Poisson sum at x = eta1 t and w_{-1} = 0. The
/// divided difference is expanded as sum_i w_m^i w_{m-1}^(n-1-i).
inline double eve_gen_function(const EveChannel& e, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("eve_gen_function: t must be >= 0");
    const int n = e.n.value();
    const double mean0 = e.eta0 * t;
    const double x = e.eta1 * t;
    auto log_poisson = [](int m, double mean) {
        if (mean == 0.0) return m == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
        return m * std::log(mean) - std::lgamma(m + 1.0) - mean;
    };

    detail::CompensatedSum sum;
    double w_prev = 0.0;
    double w_cur = 0.0;
    double peak = 0.0;
    for (int m = 0;; ++m) {
        w_prev = w_cur;
        w_cur = std::fmin(1.0, w_prev + std::exp(log_poisson(m, x)));
        const double weight = std::exp(log_poisson(m, mean0));
        peak = std::fmax(peak, weight);

        double divided = 0.0;
        double a_pow = 1.0;
        for (int i = 0; i < n; ++i) {
            divided += a_pow * std::pow(w_prev, n - 1 - i);
            a_pow *= w_cur;
        }
        sum.add(weight * (1.0 - divided / n));

        if (static_cast<double>(m) > mean0 && weight < 1e-18 * peak) break;
        if (mean0 == 0.0) break;
    }
    return std::exp(t) / (n - 1.0) * sum.value();
}

/// Truncated series sum_{L=0}^{terms} t^L E_L / L! with the empty-block
/// value E_0 = 1/n (Eve guesses uniformly).
inline double eve_gen_series(const EveChannel& e, double t, int terms, const ExactLimits& limits = {}) {
    if (!(t >= 0.0)) throw std::invalid_argument("eve_gen_series: t must be >= 0");
    detail::CompensatedSum sum;
    sum.add(e.n.inverse());
    if (t == 0.0 || terms < 1) return sum.value();
    const auto log_fail = detail::log_eve_failure_table(e, terms, limits);
    const double log_t = std::log(t);
    const double log_wrong_kinds = std::log(e.n.as_double() - 1.0);
    for (int L = 1; L <= terms; ++L) {
        const double log_e = log_fail[static_cast<std::size_t>(L)] - log_wrong_kinds;
        sum.add(std::exp(L * log_t - std::lgamma(L + 1.0) + log_e));
    }
    return sum.value();
}

/// E_1..E_max_L in one pass; element 0 holds the empty-block value 1/n.
inline std::vector<double> eve_error_sequence(const EveChannel& e, int max_L, const ExactLimits& limits = {}) {
    if (max_L < 1) throw std::invalid_argument("block length must be >= 1");
    const auto log_fail = detail::log_eve_failure_table(e, max_L, limits);
    const double log_wrong_kinds = std::log(e.n.as_double() - 1.0);
    std::vector<double> out(log_fail.size());
    for (std::size_t L = 0; L < out.size(); ++L) out[L] = std::exp(log_fail[L] - log_wrong_kinds);
    return out;
}

/// log E_0..log E_max_L in one pass.
inline std::vector<double> log_eve_error_sequence(const EveChannel& e, int max_L, const ExactLimits& limits = {}) {
    auto out = detail::log_eve_failure_table(e, max_L, limits);
    const double log_wrong_kinds = std::log(e.n.as_double() - 1.0);
    for (auto& v : out) v -= log_wrong_kinds;
    return out;
}

inline RatioLimits ratio_limits(const BobChannel& b, const EveChannel& e) {
    return RatioLimits{b.error_ratio(), eve_decay_ratio(e)};
}

inline ADExact ad_exact(const BobChannel& b, const EveChannel& e, int L, const ExactLimits& limits = {}) {
    return ADExact{L, bob_error_after_ad(b, L), eve_error_exact(e, L, limits), accept_rate(b, L)};
}

/// Channels seen by the distilled key: beta1' = B_L, eta1' = E_L.
inline std::pair<BobChannel, EveChannel> post_ad_channels(const BobChannel& b, const EveChannel& e, int L,
                                                          const ExactLimits& limits = {}) {
    const double b_L = bob_error_after_ad(b, L);
    const double e_L = eve_error_exact(e, L, limits);
    const double nm1 = b.n.as_double() - 1.0;
    const double rL = std::pow(b.error_ratio(), L);
    const double beta0 = 1.0 / (1.0 + nm1 * rL);
    if (!(beta0 > b.n.inverse())) throw std::invalid_argument("post-AD beta0 must exceed 1/n");
    return {BobChannel{b.n, beta0, b_L}, EveChannel{e.n, 1.0 - nm1 * e_L, e_L}};
}

}  // namespace tqkd
