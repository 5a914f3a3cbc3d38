#pragma once

// The 1-isometry inequality L_d((iota (x) omega) alpha(f)) <= L_d(f).
//
// For a magic unitary a the pushforward of f under a state omega is
//   g(j) = sum_i f(i) omega(a_ji).
// Commutation a d = d a is equivalent to the inequality holding for every
// state and every f. This module certifies the inequality pair by pair with
// transport plans when a commutes with d, and searches for a violating
// (state, function) pair when it does not.

#include <algorithm>
#include <array>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qmi/error.hpp"
#include "qmi/magic_unitary.hpp"
#include "qmi/matrix_core.hpp"
#include "qmi/metric_space.hpp"
#include "qmi/transport.hpp"

namespace qmi {

inline ComplexFunction pushforward(const MagicUnitary& a, const State& omega,
                                   const ComplexFunction& f) {
  if (f.size() != a.n()) throw Error(ErrorKind::SizeMismatch, {int(f.size()), a.n()});
  if (omega.dim() != a.dim()) throw Error(ErrorKind::DimMismatch, {omega.dim(), a.dim()});
  ComplexFunction g = ComplexFunction::Zero(a.n());
  for (int j = 0; j < a.n(); ++j) {
    for (int i = 0; i < a.n(); ++i) g[j] += f[i] * state_expect(omega, a(j, i));
  }
  return g;
}

inline double lipdefect(const MagicUnitary& a, const FiniteMetricSpace& space,
                        const State& omega, const ComplexFunction& f) {
  if (a.n() != space.size()) throw Error(ErrorKind::PointCountMismatch, {a.n(), space.size()});
  return lipnorm(space, pushforward(a, omega, f)) - lipnorm(space, f);
}

/// Slack for re-checking stored inequalities.
inline constexpr double kCertificateSlack = 1e-10;

/// The chain |g(x) - g(y)| <= sum lambda_ij |f(i) - f(j)| <= L_d(f) d(x,y)
/// evaluated on one transport plan.
struct PairCertificate {
  int x = 0;
  int y = 0;
  TransportPlan plan;
  double lhs = 0.0;        // |g(x) - g(y)|
  double transported = 0.0;  // sum_ij lambda_ij |f(i) - f(j)|
  double bound = 0.0;      // L_d(f) * d(x,y)
  double mass = 0.0;       // sum_ij lambda_ij

  bool holds() const {
    return lhs <= transported + kCertificateSlack && transported <= bound + kCertificateSlack;
  }
};

namespace detail {

inline PairCertificate certify_pair_unchecked(const MagicUnitary& a, const FiniteMetricSpace& space,
                                              const State& omega, const ComplexFunction& f,
                                              int x, int y, double eps) {
  auto result = coupling_for_pair(a, space, omega, x, y, eps);
  if (auto* cut = std::get_if<CutCertificate>(&result)) {
    std::vector<int> z1;
    for (int i : cut->z) z1.push_back(i + 1);
    throw Error(ErrorKind::Inconsistent, z1,
                "commuting grid produced an infeasible coupling for pair (" +
                    std::to_string(x + 1) + "," + std::to_string(y + 1) + ")");
  }
  PairCertificate cert;
  cert.x = x;
  cert.y = y;
  cert.plan = std::get<TransportPlan>(std::move(result));
  const auto g = pushforward(a, omega, f);
  cert.lhs = std::abs(g[x] - g[y]);
  const int n = a.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cert.transported += cert.plan.lambda(i, j) * std::abs(f[i] - f[j]);
      cert.mass += cert.plan.lambda(i, j);
    }
  }
  cert.bound = lipnorm(space, f) * space(x, y);
  return cert;
}

}  // namespace detail

/// Requires a to commute with d; throws CommutationRequired otherwise.
inline PairCertificate certify_pair(const MagicUnitary& a, const FiniteMetricSpace& space,
                                    const State& omega, const ComplexFunction& f, int x, int y,
                                    double eps = kDefaultTolerance) {
  if (!check_commutation(a, space, eps).commutes) throw Error(ErrorKind::CommutationRequired, {});
  return detail::certify_pair_unchecked(a, space, omega, f, x, y, eps);
}

enum class TestFunctionKind { Distance, SphereIndicator };

struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::Distance;
  int point = 0;   // m in D_m or in V_m^gamma
  int level = -1;  // gamma for sphere indicators
  ComplexFunction values;
};

/// D_m for every m, then (optionally) indicators of V_m^gamma by (m, gamma).
inline std::vector<TestFunction> candidate_functions(const FiniteMetricSpace& space,
                                                     bool include_spheres) {
  std::vector<TestFunction> out;
  for (int m = 0; m < space.size(); ++m) {
    out.push_back({TestFunctionKind::Distance, m, -1, distance_function(space, m)});
  }
  if (!include_spheres) return out;
  const auto levels = distance_levels(space);
  for (int m = 0; m < space.size(); ++m) {
    for (int gamma = 0; gamma < levels.size(); ++gamma) {
      ComplexFunction ind = ComplexFunction::Zero(space.size());
      for (int j : sphere(space, levels, m, gamma)) ind[j] = 1.0;
      out.push_back({TestFunctionKind::SphereIndicator, m, gamma, std::move(ind)});
    }
  }
  return out;
}

enum class WitnessRoute { QuadrupleEigenvector, RandomState };

struct Witness {
  State omega;
  TestFunction f;
  double defect = 0.0;
  WitnessRoute route = WitnessRoute::QuadrupleEigenvector;
  /// Violating quadruple (0-based) the state was built from, if any.
  std::optional<std::array<int, 4>> quadruple;
};

struct WitnessOptions {
  double eps = kDefaultTolerance;
  bool include_spheres = true;
  int random_states = 50;
  std::uint64_t seed = 0;
};

/// Searches conjugated eigenvector states for each violating quadruple, then
/// seeded random pure states, against the candidate functions. A returned
/// witness has been re-evaluated. nullopt means no candidate violated the
/// inequality, which is not a proof of isometry.
inline std::optional<Witness> witness_search(const MagicUnitary& a, const FiniteMetricSpace& space,
                                             const WitnessOptions& opts = {}) {
  const auto report = check_commutation(a, space, opts.eps);
  const auto candidates = candidate_functions(space, opts.include_spheres);

  auto try_state = [&](const State& omega) -> std::optional<std::pair<TestFunction, double>> {
    for (const auto& f : candidates) {
      const double defect = lipdefect(a, space, omega, f.values);
      if (defect > opts.eps) return std::make_pair(f, defect);
    }
    return std::nullopt;
  };
  auto finish = [&](Witness w) {
    const double again = lipdefect(a, space, w.omega, w.f.values);
    if (std::abs(again - w.defect) > kCertificateSlack || !(again > opts.eps)) {
      throw Error(ErrorKind::Inconsistent, {}, "witness did not re-verify");
    }
    return w;
  };

  for (const auto& q : report.violations) {
    const CMatrix& aij = a(q[0], q[1]);
    const CMatrix sandwich = aij * a(q[2], q[3]) * aij;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sandwich + sandwich.adjoint()));
    const CVector top = es.eigenvectors().col(a.dim() - 1);
    const State base = State::pure(top);
    if (!(state_expect(base, aij).real() > opts.eps)) continue;
    const State omega = conjugate_state(base, aij, opts.eps);
    if (auto hit = try_state(omega)) {
      return finish({omega, hit->first, hit->second, WitnessRoute::QuadrupleEigenvector, q});
    }
  }

  std::mt19937_64 rng(opts.seed);
  for (int s = 0; s < opts.random_states; ++s) {
    const State omega = random_pure_state(a.dim(), rng);
    if (auto hit = try_state(omega)) {
      return finish({omega, hit->first, hit->second, WitnessRoute::RandomState, std::nullopt});
    }
  }
  return std::nullopt;
}

struct DecideOptions {
  double eps = kDefaultTolerance;
  int samples = 200;
  int random_states = 50;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct IsometryVerdict {
  bool isometric = false;
  CommutationReport commutation;
  /// Corroboration when isometric.
  int samples = 0;
  double max_sampled_defect = 0.0;
  std::vector<PairCertificate> certificates;
  /// Refutation when not isometric.
  std::optional<Witness> witness;
};

template <class Rng>
ComplexFunction random_function(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexFunction f(n);
  for (int i = 0; i < n; ++i) f[i] = cplx(normal(rng), normal(rng));
  return f;
}

/// Verdict from commutation, corroborated by sampled defects and pair
/// certificates (isometric) or a witness search (not isometric). Throws
/// Inconsistent if the corroboration contradicts the verdict.
inline IsometryVerdict decide_isometric(const MagicUnitary& a, const FiniteMetricSpace& space,
                                        const DecideOptions& opts = {}) {
  IsometryVerdict verdict;
  verdict.commutation = check_commutation(a, space, opts.eps);
  verdict.isometric = verdict.commutation.commutes;

  if (!verdict.isometric) {
    verdict.witness = witness_search(
        a, space, {opts.eps, /*include_spheres=*/true, opts.random_states, opts.seed});
    return verdict;
  }

  // Samples are drawn sequentially so the set does not depend on `jobs`.
  std::mt19937_64 rng(opts.seed);
  std::vector<State> states;
  std::vector<ComplexFunction> functions;
  for (int s = 0; s < opts.samples; ++s) {
    states.push_back(random_pure_state(a.dim(), rng));
    if (s % 2 == 0) {
      functions.push_back(random_function(a.n(), rng));
    } else {
      functions.push_back(distance_function(space, (s / 2) % a.n()));
    }
  }

  auto sweep = [&](int begin, int end) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = begin; s < end; ++s) {
      worst = std::max(worst, lipdefect(a, space, states[s], functions[s]));
    }
    return worst;
  };
  const int jobs = std::max(1, std::min(opts.jobs, opts.samples));
  double worst = opts.samples > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
  if (jobs == 1) {
    if (opts.samples > 0) worst = sweep(0, opts.samples);
  } else {
    std::vector<std::future<double>> parts;
    const int chunk = (opts.samples + jobs - 1) / jobs;
    for (int b = 0; b < opts.samples; b += chunk) {
      parts.push_back(std::async(std::launch::async, sweep, b, std::min(opts.samples, b + chunk)));
    }
    for (auto& p : parts) worst = std::max(worst, p.get());
  }
  verdict.samples = opts.samples;
  verdict.max_sampled_defect = worst;
  if (worst > opts.eps) {
    throw Error(ErrorKind::Inconsistent, {},
                "commuting grid has sampled defect " + std::to_string(worst));
  }

  const State omega = states.empty() ? State::tracial(a.dim()) : states.front();
  const ComplexFunction f = functions.empty() ? distance_function(space, 0) : functions.front();
  for (int x = 0; x < a.n(); ++x) {
    for (int y = x + 1; y < a.n(); ++y) {
      auto cert = detail::certify_pair_unchecked(a, space, omega, f, x, y, opts.eps);
      if (!cert.holds()) throw Error(ErrorKind::Inconsistent, {x + 1, y + 1}, "certificate chain fails");
      verdict.certificates.push_back(std::move(cert));
    }
  }
  return verdict;
}

}  // namespace qmi
