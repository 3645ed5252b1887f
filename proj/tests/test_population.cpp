#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "iws/error.hpp"
#include "iws/population.hpp"
#include "test_support.hpp"

using namespace iws;

namespace {

void expect_validation_error(auto&& fn, const std::string& fragment) {
  try {
    fn();
    FAIL() << "expected a validation error containing `" << fragment << "`";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(ValidatePopulation, AcceptsNormalizedInput) {
  const Population pop = validate_population({0.5, 0.3, 0.2}, std::vector<double>{1, 1, 1});
  EXPECT_EQ(pop.size(), 3u);
  EXPECT_TRUE(pop.perfect_recognition());
  EXPECT_EQ(pop.id(0), "1");
  EXPECT_EQ(pop.id(2), "3");
}

TEST(ValidatePopulation, DefaultsRecognitionToOne) {
  const Population pop = validate_population({0.25, 0.75});
  EXPECT_EQ(pop.s(0), 1.0);
  EXPECT_EQ(pop.s(1), 1.0);
}

TEST(ValidatePopulation, RenormalizesSmallDeviations) {
  const Population pop = validate_population({0.5 + 4e-7, 0.3, 0.2});
  EXPECT_NEAR(pop.p(0) + pop.p(1) + pop.p(2), 1.0, 1e-15);
  EXPECT_LT(pop.p(0), 0.5 + 4e-7);
}

TEST(ValidatePopulation, RejectsLargeSumDeviation) {
  expect_validation_error([] { validate_population({0.5, 0.3, 0.19}); }, "sum");
}

TEST(ValidatePopulation, RejectsNonPositivePrior) {
  expect_validation_error([] { validate_population({0.5, 0.5, 0.0}); }, "p_3");
}

TEST(ValidatePopulation, RejectsRecognitionOutsideUnitInterval) {
  expect_validation_error([] { validate_population({0.5, 0.5}, std::vector<double>{1.0, 0.0}); }, "s_2");
  expect_validation_error([] { validate_population({0.5, 0.5}, std::vector<double>{1.2, 0.5}); }, "s_1");
}

TEST(ValidatePopulation, RejectsLengthMismatchAndEmpty) {
  EXPECT_THROW(validate_population({0.5, 0.5}, std::vector<double>{1.0}), Error);
  EXPECT_THROW(validate_population({}), Error);
  EXPECT_THROW(validate_population({0.5, 0.5}, std::nullopt, {"a"}), Error);
}

TEST(ValidatePopulation, KeepsExternalIds) {
  const Population pop = validate_population({0.2, 0.8}, std::nullopt, {"left", "right"});
  EXPECT_EQ(pop.id(1), "right");
}

TEST(InspectionWeights, RejectsNonPositiveEntries) {
  EXPECT_THROW(InspectionWeights({0.5, 0.5, 0.0}), Error);
  EXPECT_THROW(InspectionWeights({0.7, 0.7}), Error);
  EXPECT_NO_THROW(InspectionWeights::uniform(4));
}

// ---------------------------------------------------------------------------

TEST(BayesUpdate, UniformLikelihoodIsIdentity) {
  const Population pop = validate_population({0.5, 0.3, 0.2});
  const std::vector<double> L{1, 1, 1};
  const Population post = bayes_update(pop, L);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(post.p(i), pop.p(i), 1e-12);
}

TEST(BayesUpdate, HandExample) {
  const Population pop = validate_population({0.5, 0.5});
  const std::vector<double> L{0.2, 0.1};
  const Population post = bayes_update(pop, L);
  EXPECT_NEAR(post.p(0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(post.p(1), 1.0 / 3.0, 1e-15);
}

TEST(BayesUpdate, DegeneratePosterior) {
  const Population pop = validate_population({0.5, 0.5});
  const std::vector<double> L{0.0, 0.0};
  expect_validation_error([&] { bayes_update(pop, L); }, "degenerate posterior");
}

TEST(BayesUpdate, ZeroPosteriorNamesTheItems) {
  const Population pop = validate_population({0.5, 0.3, 0.2}, std::nullopt, {"x", "y", "z"});
  const std::vector<double> L{1.0, 0.0, 1.0};
  expect_validation_error([&] { bayes_update(pop, L); }, "{y}");
}

TEST(BayesUpdate, KeepsRecognitionAndIds) {
  const Population pop = validate_population({0.5, 0.5}, std::vector<double>{0.4, 0.9}, {"a", "b"});
  const std::vector<double> L{3.0, 1.0};
  const Population post = bayes_update(pop, L);
  EXPECT_EQ(post.s(0), 0.4);
  EXPECT_EQ(post.id(1), "b");
}

TEST(BayesUpdate, PropertyUpdatesCompose) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = fixtures::random_size(rng, 1, 9);
    const Population pop = fixtures::random_population(n, rng);
    std::vector<double> a(n), b(n), ab(n), flat(n, unif(rng));
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = unif(rng);
      b[i] = unif(rng);
      ab[i] = a[i] * b[i];
    }
    const Population twice = bayes_update(bayes_update(pop, a), b);
    const Population once = bayes_update(pop, ab);
    const Population same = bayes_update(pop, flat);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(twice.p(i), once.p(i), 1e-12);
      EXPECT_NEAR(same.p(i), pop.p(i), 1e-12);
    }
  }
}

// ---------------------------------------------------------------------------

TEST(ProfileToWeights, Examples) {
  const InspectionWeights even = profile_to_weights(ProfileDecomposition({0.5, 0.5}, {1, 1}));
  EXPECT_NEAR(even[0], 0.5, 1e-15);
  const InspectionWeights skew = profile_to_weights(ProfileDecomposition({0.8, 0.2}, {0.25, 1}));
  EXPECT_NEAR(skew[0], 0.5, 1e-15);
  EXPECT_NEAR(skew[1], 0.5, 1e-15);
  const InspectionWeights scaled = profile_to_weights(ProfileDecomposition({0.5, 0.5}, {0.3 * 0.4, 0.3 * 0.9}));
  const InspectionWeights base = profile_to_weights(ProfileDecomposition({0.5, 0.5}, {0.4, 0.9}));
  EXPECT_NEAR(scaled[0], base[0], 1e-15);
}

TEST(ProfileDecomposition, RejectsInvalidPi) {
  EXPECT_THROW(ProfileDecomposition({0.5, 0.5}, {1.2, 0.5}), Error);
  EXPECT_THROW(ProfileDecomposition({0.5, 0.5}, {0.0, 0.5}), Error);
  EXPECT_THROW(ProfileDecomposition({0.5, 0.5}, {0.5}), Error);
}

TEST(SolveConditionalInspection, UniformIsAllOnes) {
  const std::vector<double> lambda(4, 0.25);
  const ProfileDecomposition d = solve_conditional_inspection(lambda, InspectionWeights::uniform(4));
  for (double pi : d.pi()) EXPECT_NEAR(pi, 1.0, 1e-15);
}

TEST(SolveConditionalInspection, InvertsTheProfileMap) {
  const std::vector<double> lambda{0.8, 0.2};
  const ProfileDecomposition d = solve_conditional_inspection(lambda, InspectionWeights({0.5, 0.5}));
  EXPECT_NEAR(d.pi()[0], 0.25, 1e-15);
  EXPECT_NEAR(d.pi()[1], 1.0, 1e-15);
}

TEST(SolveConditionalInspection, HighAttentionMeansLowPi) {
  const InspectionWeights q({0.5, 0.5});
  const std::vector<double> heavy{0.9, 0.1}, light{0.1, 0.9};
  EXPECT_LT(solve_conditional_inspection(heavy, q).pi()[0], solve_conditional_inspection(light, q).pi()[0]);
}

TEST(SolveConditionalInspection, ScaleOutsideUnitIntervalIsImpossible) {
  const std::vector<double> lambda{0.5, 0.5};
  expect_validation_error([&] { solve_conditional_inspection(lambda, InspectionWeights({0.5, 0.5}), 1.5); },
                          "impossible decomposition");
  EXPECT_THROW(solve_conditional_inspection(lambda, InspectionWeights({0.5, 0.5}), 0.0), Error);
}

TEST(SolveConditionalInspection, RatePinnedVariant) {
  const std::vector<double> lambda{0.5, 0.5};
  const InspectionWeights q({0.7, 0.3});
  const ProfileDecomposition d = solve_conditional_inspection_for_rate(lambda, q, 0.6);
  EXPECT_NEAR(d.inspection_rate(), 0.6, 1e-15);
  EXPECT_NEAR(d.pi()[0], 0.84, 1e-15);
  expect_validation_error([&] { solve_conditional_inspection_for_rate(lambda, q, 0.9); }, "impossible decomposition");
}

TEST(SolveConditionalInspection, PropertyRoundTripAndScaleFreedom) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(1e-3, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = fixtures::random_size(rng, 1, 10);
    const std::vector<double> lambda = fixtures::random_simplex(n, rng);
    const InspectionWeights q(fixtures::random_simplex(n, rng));
    const InspectionWeights back = profile_to_weights(solve_conditional_inspection(lambda, q));
    const InspectionWeights scaled = profile_to_weights(solve_conditional_inspection(lambda, q, unif(rng)));
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(back[i], q[i], 1e-12);
      EXPECT_NEAR(scaled[i], q[i], 1e-12);
    }
  }
}

TEST(SolveConditionalInspection, PropertyMoreAttentionNeverRaisesPi) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = fixtures::random_size(rng, 2, 6);
    const InspectionWeights q(fixtures::random_simplex(n, rng));
    std::vector<double> lambda = fixtures::random_simplex(n, rng);
    const ProfileDecomposition before = solve_conditional_inspection(lambda, q);
    const double total = 1.0 + lambda[0];
    lambda[0] *= 2.0;
    for (double& x : lambda) x /= total;
    const ProfileDecomposition after = solve_conditional_inspection(lambda, q);
    EXPECT_LE(after.pi()[0], before.pi()[0]);
    if (before.pi()[0] < 1.0) {
      EXPECT_LT(after.pi()[0], before.pi()[0]);
    }
  }
}
