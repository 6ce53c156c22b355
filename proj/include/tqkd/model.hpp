#pragma once

/**
 * @file model.hpp
 * @brief Channel parameters for the tomographic qunit protocol.
 *
 * Alice and Bob share n-level pairs and keep matched-basis outcomes as nits.
 * Bob's view of Alice's nit is the symmetric channel (beta0, beta1): correct
 * with probability beta0, any particular wrong value with beta1. When Bob is
 * correct, Eve's square-root measurement on her ancillas gives her the
 * symmetric channel (eta0, eta1). The two are tied by
 *
 *     sqrt(eta0) - sqrt(eta1) = sqrt(beta1 / beta0).
 *
 * Two independent routes to that relation live here: a closed-form solution
 * of the quadratic, and a square root of the ancilla Gram matrix.
 */

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqkd {

/// Normalization slack accepted when constructing channels from raw numbers.
inline constexpr double kNormalizationTolerance = 1e-12;

/// Alphabet size of the qunit, n >= 2.
class Dimension {
public:
    explicit Dimension(int n) : n_(n) {
        if (n < 2) {
            throw std::invalid_argument("dimension must be >= 2, got " + std::to_string(n));
        }
    }

    [[nodiscard]] constexpr int value() const noexcept { return n_; }
    [[nodiscard]] constexpr double as_double() const noexcept { return static_cast<double>(n_); }
    [[nodiscard]] constexpr double inverse() const noexcept { return 1.0 / static_cast<double>(n_); }

    friend constexpr bool operator==(Dimension, Dimension) = default;

private:
    int n_;
};

/// Bob's symmetric channel. beta0 + (n-1) beta1 = 1.
struct BobChannel {
    Dimension n;
    double beta0;
    double beta1;

    /// beta1 / beta0; zero for the noiseless channel.
    [[nodiscard]] double error_ratio() const noexcept { return beta1 / beta0; }
};

/// Eve's symmetric channel, conditioned on Bob holding Alice's value.
struct EveChannel {
    Dimension n;
    double eta0;
    double eta1;
};

namespace detail {

inline BobChannel make_bob(Dimension n, double beta0, bool allow_uncorrelated) {
    const double lower = n.inverse();
    const bool above_lower = allow_uncorrelated ? beta0 >= lower : beta0 > lower;
    if (!(above_lower && beta0 <= 1.0 + kNormalizationTolerance)) {
        throw std::invalid_argument("beta0 = " + std::to_string(beta0) + " outside " +
                                    (allow_uncorrelated ? "[1/n, 1]" : "(1/n, 1]"));
    }
    beta0 = std::fmin(beta0, 1.0);
    return BobChannel{n, beta0, (1.0 - beta0) / (n.as_double() - 1.0)};
}

}  // namespace detail

/// Key-analysis channel: requires 1/n < beta0 <= 1.
inline BobChannel bob_channel(Dimension n, double beta0) {
    return detail::make_bob(n, beta0, false);
}

/// Same as bob_channel but also admits the uncorrelated limit beta0 = 1/n.
inline BobChannel bob_channel_limit(Dimension n, double beta0) {
    return detail::make_bob(n, beta0, true);
}

/// Eve channel from eta0 in [1/n, 1]; eta1 follows from normalization.
inline EveChannel eve_channel(Dimension n, double eta0) {
    if (!(eta0 >= n.inverse() - kNormalizationTolerance && eta0 <= 1.0 + kNormalizationTolerance)) {
        throw std::invalid_argument("eta0 = " + std::to_string(eta0) + " outside [1/n, 1]");
    }
    const double clamped = std::fmin(eta0, 1.0);
    return EveChannel{n, clamped, std::fmax(0.0, (1.0 - clamped) / (n.as_double() - 1.0))};
}

/// Closed-form Bob -> Eve map.
///
/// With s = sqrt(beta1/beta0) and r = sqrt(n - (n-1) s^2) the root with
/// eta0 >= 1/n is sqrt(eta0) = ((n-1) s + r) / n, sqrt(eta1) = (r - s) / n.
/// Writing eta1 through (r - s) keeps it accurate near the perfect-Eve end.
inline EveChannel eve_from_bob(const BobChannel& b) {
    const double n = b.n.as_double();
    const double s2 = b.error_ratio();
    const double s = std::sqrt(s2);
    const double r = std::sqrt(n - (n - 1.0) * s2);
    const double root0 = ((n - 1.0) * s + r) / n;
    const double root1 = std::fmax(0.0, (r - s) / n);
    return EveChannel{b.n, root0 * root0, root1 * root1};
}

/// Overlaps of Eve's ancilla states <E_kk|E_ll>: unit diagonal and a constant
/// off-diagonal g = 1 - beta1/beta0.
struct GramMatrix {
    Dimension n;
    double off_diagonal;

    /// Eigenvalue on the uniform vector (multiplicity one).
    [[nodiscard]] double uniform_eigenvalue() const noexcept {
        return 1.0 + (n.as_double() - 1.0) * off_diagonal;
    }
    /// Eigenvalue on the complement of the uniform vector (multiplicity n-1).
    [[nodiscard]] double complement_eigenvalue() const noexcept { return 1.0 - off_diagonal; }

    [[nodiscard]] double at(int row, int col) const noexcept {
        return row == col ? 1.0 : off_diagonal;
    }
};

inline GramMatrix ancilla_gram(const BobChannel& b) {
    return GramMatrix{b.n, 1.0 - b.error_ratio()};
}

/// Entries of the square root of a circulant matrix a*I + c*J.
struct CirculantRoot {
    double diagonal;
    double off_diagonal;
};

/// Square root of G/n (equal priors) through the circulant eigendecomposition:
///   sqrt(G/n) = sqrt(mu_u) J/n + sqrt(mu_c) (I - J/n).
inline CirculantRoot prior_weighted_gram_root(const GramMatrix& g) {
    const double n = g.n.as_double();
    const double mu_u = std::fmax(0.0, g.uniform_eigenvalue()) / n;
    const double mu_c = std::fmax(0.0, g.complement_eigenvalue()) / n;
    const double ru = std::sqrt(mu_u);
    const double rc = std::sqrt(mu_c);
    return CirculantRoot{ru / n + rc * (1.0 - 1.0 / n), (ru - rc) / n};
}

/// Eve's channel from the square-root measurement on the ancilla ensemble:
/// P(guess j | state k) = n * |sqrt(G/n)_{jk}|^2.
inline EveChannel srm_eve_oracle(const BobChannel& b) {
    const auto root = prior_weighted_gram_root(ancilla_gram(b));
    const double n = b.n.as_double();
    return EveChannel{b.n, n * root.diagonal * root.diagonal,
                      n * root.off_diagonal * root.off_diagonal};
}

}  // namespace tqkd
