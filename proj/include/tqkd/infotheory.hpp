#pragma once

// Csiszar-Korner yield, the ED/AD threshold predicates and the solvers that
// trace the four curves of the (beta0, eta0) threshold diagram.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tqkd/model.hpp"

namespace tqkd {

/// Secret nits extractable per raw nit (log base n).
struct CKYield {
    double nu;
};

/// A (beta0, eta0) coordinate in the threshold diagram.
struct DiagramPoint {
    double beta0;
    double eta0;
};

namespace detail {

/// p * log_n p with 0 log 0 = 0.
inline double xlogn(double p, double log_n) {
    return p > 0.0 ? p * std::log(p) / log_n : 0.0;
}

/// sum_k p_k log_n p_k for the symmetric distribution (p0, p1, ..., p1).
inline double neg_entropy(int n, double p0, double p1) {
    const double log_n = std::log(static_cast<double>(n));
    return xlogn(p0, log_n) + (n - 1) * xlogn(p1, log_n);
}

inline double bisect(double lo, double hi, double tol, auto&& is_low) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (is_low(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Yield on raw parameters. Accepts anything in [0,1]; used for empirical
/// post-distillation rates that may not form a valid channel.
inline CKYield ck_yield(Dimension n, double beta0, double eta0) {
    const double nd = n.as_double();
    const double beta1 = std::fmax(0.0, (1.0 - beta0) / (nd - 1.0));
    const double eta1 = std::fmax(0.0, (1.0 - eta0) / (nd - 1.0));
    const int k = n.value();
    return CKYield{detail::neg_entropy(k, beta0, beta1) - beta0 * detail::neg_entropy(k, eta0, eta1)};
}

inline CKYield ck_yield(const BobChannel& b, const EveChannel& e) {
    if (!(b.n == e.n)) throw std::invalid_argument("ck_yield: channel dimensions differ");
    const int k = b.n.value();
    return CKYield{detail::neg_entropy(k, b.beta0, b.beta1) -
                   b.beta0 * detail::neg_entropy(k, e.eta0, e.eta1)};
}

/// beta0 at which beta0 = 2 beta1.
inline double ed_threshold(Dimension n) { return 2.0 / (n.as_double() + 1.0); }

/// 1 - (sqrt(eta0) - sqrt(eta1))^2, the asymptotic per-symbol decay of Eve's
/// post-distillation error.
inline double eve_decay_ratio(const EveChannel& e) {
    const double gap = std::sqrt(e.eta0) - std::sqrt(e.eta1);
    return 1.0 - gap * gap;
}

inline bool ad_threshold_satisfied(const BobChannel& b, const EveChannel& e) {
    if (!(b.n == e.n)) throw std::invalid_argument("ad_threshold_satisfied: channel dimensions differ");
    return b.error_ratio() < eve_decay_ratio(e);
}

/// Eve's eta0 on curve a for a given beta0 in [1/n, 1].
inline double curve_a_eta0(Dimension n, double beta0) {
    return eve_from_bob(bob_channel_limit(n, beta0)).eta0;
}

/// Inverse of curve a: the beta0 whose Eve channel has the given eta0.
/// From beta1/beta0 = q with q = (sqrt(eta0) - sqrt(eta1))^2.
inline double curve_a_beta0(const EveChannel& e) {
    const double gap = std::sqrt(e.eta0) - std::sqrt(e.eta1);
    return 1.0 / (1.0 + (e.n.as_double() - 1.0) * gap * gap);
}

/// Curve c: the beta0 where beta1/beta0 equals Eve's decay ratio.
inline double curve_c_beta0(const EveChannel& e) {
    return 1.0 / (1.0 + (e.n.as_double() - 1.0) * eve_decay_ratio(e));
}

inline constexpr double kRootTolerance = 1e-10;

/// Curve d: beta0 in (1/n, 1] with nu(beta0, eta0) = 0, eta0 held fixed.
///
/// nu is strictly increasing in beta0 on (1/n, 1], so the root is unique when
/// it exists. For a perfect Eve (eta0 = 1) nu(1) = 0 and the root is the
/// boundary beta0 = 1. Returns nullopt when nu < 0 on the whole interval.
inline std::optional<double> ck_boundary_beta0(const EveChannel& e, double tol = kRootTolerance) {
    const Dimension n = e.n;
    auto nu_at = [&](double beta0) { return ck_yield(n, beta0, e.eta0).nu; };
    if (nu_at(1.0) < 0.0) return std::nullopt;
    if (e.eta1 == 0.0) return 1.0;
    return detail::bisect(n.inverse(), 1.0, tol, [&](double b0) { return nu_at(b0) < 0.0; });
}

/// Where curve a crosses curve d: nu = 0 with Eve given by the Bob -> Eve map.
inline DiagramPoint ck_intersection(Dimension n, double tol = kRootTolerance) {
    auto nu_on_a = [&](double b0) {
        const auto b = bob_channel_limit(n, b0);
        return ck_yield(b, eve_from_bob(b)).nu;
    };
    const double beta0 = detail::bisect(n.inverse(), 1.0, tol, [&](double b0) { return nu_on_a(b0) < 0.0; });
    return DiagramPoint{beta0, curve_a_eta0(n, beta0)};
}

/// Intersection of curves a, b and c.
inline DiagramPoint triple_point(Dimension n) {
    const double beta0 = ed_threshold(n);
    return DiagramPoint{beta0, eve_from_bob(bob_channel(n, beta0)).eta0};
}

/// Bracket [lo, hi] around the beta0 at which the AD predicate, evaluated on
/// curve a, switches from false to true.
inline std::pair<double, double> ad_flip_bracket(Dimension n, double width) {
    auto satisfied = [&](double b0) {
        const auto b = bob_channel_limit(n, b0);
        return ad_threshold_satisfied(b, eve_from_bob(b));
    };
    double lo = n.inverse();
    double hi = 1.0;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (satisfied(mid) ? hi : lo) = mid;
    }
    return {lo, hi};
}

struct ThresholdReport {
    Dimension n;
    double ed_beta0;
    DiagramPoint triple;
    DiagramPoint ck;
};

inline ThresholdReport threshold_report(Dimension n) {
    return ThresholdReport{n, ed_threshold(n), triple_point(n), ck_intersection(n)};
}

/// One sampled point of a labeled curve. Curve labels: "a", "b", "c", "d".
struct CurvePoint {
    std::string curve;
    double eta0;
    double beta0;
};

/// Samples curves a-d on an eta0 grid spanning [1/n, 1] (endpoints included).
/// Curve d points with no root are omitted.
inline std::vector<CurvePoint> curve_data(Dimension n, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("curve_data: grid_size must be >= 2");
    std::vector<double> grid(static_cast<std::size_t>(grid_size));
    const double lo = n.inverse();
    for (int i = 0; i < grid_size; ++i) {
        grid[static_cast<std::size_t>(i)] =
            i + 1 == grid_size ? 1.0 : lo + (1.0 - lo) * static_cast<double>(i) / (grid_size - 1);
    }

    std::vector<CurvePoint> out;
    out.reserve(4 * grid.size());
    const double ed = ed_threshold(n);
    for (double eta0 : grid) out.push_back({"a", eta0, curve_a_beta0(eve_channel(n, eta0))});
    for (double eta0 : grid) out.push_back({"b", eta0, ed});
    for (double eta0 : grid) out.push_back({"c", eta0, curve_c_beta0(eve_channel(n, eta0))});
    for (double eta0 : grid) {
        if (auto root = ck_boundary_beta0(eve_channel(n, eta0))) out.push_back({"d", eta0, *root});
    }
    return out;
}

}  // namespace tqkd
