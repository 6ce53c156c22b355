#include "tqkd/model.hpp"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

namespace {

using tqkd::bob_channel;
using tqkd::bob_channel_limit;
using tqkd::Dimension;
using tqkd::eve_from_bob;
using tqkd::srm_eve_oracle;

TEST(Dimension, RejectsBelowTwo) {
    EXPECT_THROW(Dimension(1), std::invalid_argument);
    EXPECT_THROW(Dimension(0), std::invalid_argument);
    EXPECT_EQ(Dimension(2).value(), 2);
}

TEST(BobChannel, Normalization) {
    EXPECT_DOUBLE_EQ(bob_channel(Dimension(5), 1.0 / 3.0).beta1, 1.0 / 6.0);
    EXPECT_EQ(bob_channel(Dimension(2), 1.0).beta1, 0.0);
    EXPECT_NEAR(bob_channel(Dimension(3), 0.9).beta1, 0.05, 1e-15);
}

TEST(BobChannel, RejectsOutsideRegime) {
    EXPECT_THROW(bob_channel(Dimension(5), 0.2), std::invalid_argument);
    EXPECT_THROW(bob_channel(Dimension(5), 0.1), std::invalid_argument);
    EXPECT_THROW(bob_channel(Dimension(5), 1.0000001), std::invalid_argument);
    EXPECT_EQ(bob_channel(Dimension(5), 1.0 + 1e-15).beta0, 1.0);
    EXPECT_NO_THROW(bob_channel_limit(Dimension(5), 0.2));
    EXPECT_THROW(bob_channel_limit(Dimension(5), 0.19), std::invalid_argument);
}

TEST(EveFromBob, NoiselessBobLeavesEveRandom) {
    for (int n = 2; n <= 10; ++n) {
        const auto e = eve_from_bob(bob_channel(Dimension(n), 1.0));
        EXPECT_NEAR(e.eta0, 1.0 / n, 1e-15) << n;
        EXPECT_NEAR(e.eta1, 1.0 / n, 1e-15) << n;
    }
}

TEST(EveFromBob, UncorrelatedBobGivesPerfectEve) {
    for (int n = 2; n <= 10; ++n) {
        const auto e = eve_from_bob(bob_channel_limit(Dimension(n), 1.0 / n));
        EXPECT_NEAR(e.eta0, 1.0, 1e-15) << n;
        EXPECT_NEAR(e.eta1, 0.0, 1e-15) << n;
    }
}

TEST(EveFromBob, TriplePointForFive) {
    const auto e = eve_from_bob(bob_channel(Dimension(5), 1.0 / 3.0));
    EXPECT_NEAR(e.eta0, (11.0 + 4.0 * std::sqrt(6.0)) / 25.0, 1e-14);
    EXPECT_NEAR(e.eta0, 0.831918, 1e-6);
}

TEST(EveFromBob, RelationAndNormalizationOnGrid) {
    for (int n = 2; n <= 10; ++n) {
        for (int i = 1; i <= 200; ++i) {
            const double beta0 = 1.0 / n + (1.0 - 1.0 / n) * i / 200.0;
            const auto b = bob_channel(Dimension(n), beta0);
            const auto e = eve_from_bob(b);
            EXPECT_NEAR(std::sqrt(e.eta0) - std::sqrt(e.eta1), std::sqrt(b.beta1 / b.beta0), 1e-12);
            EXPECT_NEAR(e.eta0 + (n - 1) * e.eta1, 1.0, 1e-12);
            EXPECT_GE(e.eta0, 1.0 / n - 1e-15);
        }
    }
}

TEST(EveFromBob, StrictlyDecreasingInBeta0) {
    for (int n = 2; n <= 10; ++n) {
        double prev = 2.0;
        for (int i = 0; i <= 100; ++i) {
            const double beta0 = 1.0 / n + (1.0 - 1.0 / n) * i / 100.0;
            const double eta0 = eve_from_bob(bob_channel_limit(Dimension(n), beta0)).eta0;
            EXPECT_LT(eta0, prev) << "n=" << n << " beta0=" << beta0;
            prev = eta0;
        }
    }
}

TEST(SrmOracle, LimitingGramMatrices) {
    // All-ones Gram: identical ancillas, Eve can only guess.
    const auto random = srm_eve_oracle(bob_channel(Dimension(4), 1.0));
    EXPECT_NEAR(random.eta0, 0.25, 1e-15);
    // Identity Gram: orthogonal ancillas.
    const auto perfect = srm_eve_oracle(bob_channel_limit(Dimension(4), 0.25));
    EXPECT_NEAR(perfect.eta0, 1.0, 1e-15);
    EXPECT_NEAR(perfect.eta1, 0.0, 1e-15);
}

TEST(SrmOracle, AgreesWithClosedForm) {
    for (int n = 2; n <= 10; ++n) {
        for (int i = 0; i <= 50; ++i) {
            const double beta0 = 1.0 / n + (1.0 - 1.0 / n) * i / 50.0;
            const auto b = bob_channel_limit(Dimension(n), beta0);
            const auto closed = eve_from_bob(b);
            const auto oracle = srm_eve_oracle(b);
            EXPECT_NEAR(closed.eta0, oracle.eta0, 1e-12);
            EXPECT_NEAR(closed.eta1, oracle.eta1, 1e-12);
        }
    }
}

TEST(SrmOracle, RootSquaresBackToGram) {
    // sqrt(G/n)^2 = G/n on a circulant: check one diagonal and one off-diagonal entry.
    for (int n : {2, 3, 7}) {
        const auto g = tqkd::ancilla_gram(bob_channel(Dimension(n), 0.8));
        const auto r = tqkd::prior_weighted_gram_root(g);
        const double diag_sq = r.diagonal * r.diagonal + (n - 1) * r.off_diagonal * r.off_diagonal;
        const double off_sq = 2 * r.diagonal * r.off_diagonal + (n - 2) * r.off_diagonal * r.off_diagonal;
        EXPECT_NEAR(diag_sq, g.at(0, 0) / n, 1e-15);
        EXPECT_NEAR(off_sq, g.at(0, 1) / n, 1e-15);
    }
}

TEST(GramMatrix, EigenvaluesNonnegative) {
    for (int n = 2; n <= 10; ++n) {
        for (int i = 0; i <= 50; ++i) {
            const double beta0 = 1.0 / n + (1.0 - 1.0 / n) * i / 50.0;
            const auto g = tqkd::ancilla_gram(bob_channel_limit(Dimension(n), beta0));
            EXPECT_GE(g.uniform_eigenvalue(), 0.0);
            EXPECT_GE(g.complement_eigenvalue(), 0.0);
        }
    }
}

TEST(EveChannel, ValidatesRange) {
    EXPECT_THROW(tqkd::eve_channel(Dimension(3), 0.2), std::invalid_argument);
    EXPECT_THROW(tqkd::eve_channel(Dimension(3), 1.1), std::invalid_argument);
    const auto e = tqkd::eve_channel(Dimension(3), 0.8);
    EXPECT_NEAR(e.eta1, 0.1, 1e-16);
}

}  // namespace
