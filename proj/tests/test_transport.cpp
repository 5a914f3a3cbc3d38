#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace qmi {
namespace {

CouplingProblem isolated_point(std::vector<double> alpha, std::vector<double> beta) {
  CouplingProblem p{std::move(alpha), std::move(beta), std::vector<char>(25, 0)};
  p.allowed[0 * 5 + 1] = 1;
  p.allowed[1 * 5 + 0] = 1;
  p.allowed[3 * 5 + 4] = 1;
  p.allowed[4 * 5 + 3] = 1;
  return p;
}

std::vector<double> random_simplex(int n, std::mt19937_64& rng, double zero_prob) {
  std::exponential_distribution<double> expo;
  std::bernoulli_distribution zero(zero_prob);
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) {
    x = zero(rng) ? 0.0 : expo(rng);
    s += x;
  }
  if (s == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (auto& x : v) x /= s;
  return v;
}

TEST(Transport, PermutationSupportRoutesUniquely) {
  const Permutation sigma = {2, 0, 1};
  CouplingProblem p{{0.5, 0.3, 0.2}, {0.3, 0.2, 0.5}, std::vector<char>(9, 0)};
  for (int i = 0; i < 3; ++i) p.allowed[i * 3 + sigma[i]] = 1;
  const auto r = solve_transport(p);
  ASSERT_TRUE(std::holds_alternative<TransportPlan>(r));
  const auto& lambda = std::get<TransportPlan>(r).lambda;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(lambda(i, j), j == sigma[i] ? p.alpha[i] : 0.0, 1e-15);
  }
}

TEST(Transport, AllAllowedIsFeasible) {
  CouplingProblem p{{0.1, 0.9}, {0.6, 0.4}, std::vector<char>(4, 1)};
  EXPECT_TRUE(std::holds_alternative<TransportPlan>(solve_transport(p)));
  EXPECT_FALSE(hall_check(p).has_value());
}

TEST(Transport, IsolatedPointWithoutMassIsFeasible) {
  const auto p = isolated_point({0.2, 0.3, 0, 0.25, 0.25}, {0.3, 0.2, 0, 0.25, 0.25});
  const auto r = solve_transport(p);
  ASSERT_TRUE(std::holds_alternative<TransportPlan>(r));
  const auto& plan = std::get<TransportPlan>(r);
  EXPECT_NEAR(plan.lambda(0, 1), 0.2, 1e-15);
  EXPECT_NEAR(plan.lambda(1, 0), 0.3, 1e-15);
  EXPECT_NEAR(plan.lambda(3, 4), 0.25, 1e-15);
  EXPECT_NEAR(plan.lambda(4, 3), 0.25, 1e-15);
  EXPECT_NEAR(plan.lambda.sum(), 1.0, 1e-15);
  EXPECT_FALSE(hall_check(p).has_value());
}

TEST(Transport, IsolatedPointCutCertificate) {
  const auto p = isolated_point({0.2, 0.3, 0.2, 0.15, 0.15}, {0.3, 0.2, 0, 0.25, 0.25});
  const auto r = solve_transport(p);
  ASSERT_TRUE(std::holds_alternative<CutCertificate>(r));
  const auto& cut = std::get<CutCertificate>(r);
  EXPECT_NE(std::find(cut.z.begin(), cut.z.end(), 2), cut.z.end());
  EXPECT_NEAR(cut.deficit, 0.2, 1e-12);
  const auto hall = hall_check(p);
  ASSERT_TRUE(hall.has_value());
  EXPECT_EQ(hall->z, std::vector<int>{2});
  EXPECT_NEAR(hall->deficit, 0.2, 1e-12);
}

TEST(Transport, InvalidProblems) {
  EXPECT_QMI_ERROR(solve_transport({{}, {}, {}}), ErrorKind::InvalidProblem);
  EXPECT_QMI_ERROR(solve_transport({{1.0}, {0.5, 0.5}, std::vector<char>(1, 1)}), ErrorKind::LengthMismatch);
  EXPECT_QMI_ERROR(solve_transport({{0.5, 0.5}, {0.5, 0.5}, std::vector<char>(3, 1)}), ErrorKind::Shape);
  EXPECT_QMI_ERROR(solve_transport({{1.5, -0.5}, {0.5, 0.5}, std::vector<char>(4, 1)}), ErrorKind::InvalidProblem,
                   std::vector<int>{2});
  EXPECT_QMI_ERROR(solve_transport({{0.5, 0.4}, {0.5, 0.5}, std::vector<char>(4, 1)}), ErrorKind::InvalidProblem);
}

TEST(Transport, MatchesExhaustiveHall) {
  std::mt19937_64 rng(77);
  std::bernoulli_distribution edge(0.35);
  int infeasible = 0;
  for (int t = 0; t < 600; ++t) {
    const int n = 1 + t % 6;
    CouplingProblem p{random_simplex(n, rng, 0.2), random_simplex(n, rng, 0.2),
                      std::vector<char>(static_cast<std::size_t>(n) * n)};
    for (auto& a : p.allowed) a = edge(rng);
    const double eps = kDefaultTolerance;
    const double worst = oracle::max_hall_deficit(p);
    const bool oracle_feasible = worst <= n * eps;
    const auto r = solve_transport(p, eps);
    const auto hall = hall_check(p, eps);
    ASSERT_EQ(std::holds_alternative<TransportPlan>(r), oracle_feasible) << t;
    ASSERT_EQ(!hall.has_value(), oracle_feasible) << t;
    if (oracle_feasible) {
      EXPECT_TRUE(plan_satisfies(p, std::get<TransportPlan>(r), eps));
      continue;
    }
    ++infeasible;
    const auto& cut = std::get<CutCertificate>(r);
    EXPECT_GT(cut.deficit, n * eps);
    EXPECT_NEAR(cut.deficit, recompute_deficit(p, cut.z), 1e-15);
    EXPECT_NEAR(hall->deficit, worst, n * eps);
    // No smaller subset reaches the maximum.
    for (int mask = 1; mask < (1 << n); ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) >= static_cast<int>(hall->z.size())) continue;
      std::vector<int> z;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1) z.push_back(i);
      }
      EXPECT_LT(recompute_deficit(p, z), worst - n * eps);
    }
  }
  EXPECT_GT(infeasible, 100);
}

TEST(Transport, SolveIsDeterministic) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 5;
    CouplingProblem p{random_simplex(n, rng, 0.0), random_simplex(n, rng, 0.0),
                      std::vector<char>(static_cast<std::size_t>(n) * n, 1)};
    const auto a = solve_transport(p);
    const auto b = solve_transport(p);
    ASSERT_TRUE(std::holds_alternative<TransportPlan>(a));
    EXPECT_EQ(std::get<TransportPlan>(a).lambda, std::get<TransportPlan>(b).lambda);
  }
}

TEST(Transport, LargeProblemFallsBackToFlowCut) {
  const int n = kHallExhaustiveLimit + 2;
  CouplingProblem p{std::vector<double>(n, 1.0 / n), std::vector<double>(n, 1.0 / n),
                    std::vector<char>(static_cast<std::size_t>(n) * n, 0)};
  for (int i = 0; i < n; ++i) p.allowed[i * n + (i + 1) % n] = 1;
  EXPECT_FALSE(hall_check(p).has_value());
  p.allowed[0 * n + 1] = 0;
  const auto hall = hall_check(p);
  ASSERT_TRUE(hall.has_value());
  EXPECT_NEAR(hall->deficit, 1.0 / n, 1e-12);
}

TEST(Transport, PairDiagonalPlan) {
  const auto a = two_block_quantum(testing::hadamard_projection(), testing::diag10());
  const auto space = testing::two_cluster();
  const State omega = State::tracial(2);
  const auto r = coupling_for_pair(a, space, omega, 0, 0);
  ASSERT_TRUE(std::holds_alternative<TransportPlan>(r));
  const auto& lambda = std::get<TransportPlan>(r).lambda;
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(lambda(i, i), state_expect(omega, a(0, i)).real(), 1e-12);
  }
}

TEST(Transport, PairAcrossClusters) {
  const auto a = two_block_quantum(testing::hadamard_projection(), testing::diag10());
  const auto space = testing::two_cluster();
  const auto prob = pair_problem(a, space, State::tracial(2), 0, 2);
  EXPECT_EQ(prob.alpha, (std::vector<double>{0.5, 0.5, 0, 0}));
  EXPECT_EQ(prob.beta, (std::vector<double>{0, 0, 0.5, 0.5}));
  const auto r = solve_transport(prob);
  ASSERT_TRUE(std::holds_alternative<TransportPlan>(r));
  const auto& lambda = std::get<TransportPlan>(r).lambda;
  EXPECT_NEAR(lambda(0, 2) + lambda(0, 3), 0.5, 1e-12);
  EXPECT_TRUE(plan_satisfies(prob, std::get<TransportPlan>(r)));
}

TEST(Transport, PermutationPairIsPointMass) {
  const auto space = testing::square();
  const Permutation sigma = {1, 2, 3, 0};
  const auto a = from_permutation(sigma);
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const auto r = coupling_for_pair(a, space, State::tracial(1), x, y);
      ASSERT_TRUE(std::holds_alternative<TransportPlan>(r));
      const auto& lambda = std::get<TransportPlan>(r).lambda;
      EXPECT_NEAR(lambda(sigma[x], sigma[y]), 1.0, 1e-15);
      EXPECT_NEAR(lambda.sum(), 1.0, 1e-15);
    }
  }
}

TEST(Transport, PairProblemErrors) {
  const auto a = from_permutation({0, 1, 2});
  EXPECT_QMI_ERROR(pair_problem(a, testing::two_cluster(), State::tracial(1), 0, 1), ErrorKind::PointCountMismatch);
  EXPECT_QMI_ERROR(pair_problem(a, testing::path3(), State::tracial(2), 0, 1), ErrorKind::DimMismatch);
  EXPECT_QMI_ERROR(pair_problem(a, testing::path3(), State::tracial(1), 0, 3), ErrorKind::Index);
}

}  // namespace
}  // namespace qmi
