#pragma once

// Couplings with prescribed marginals and support.
//
// Given alpha, beta (probability vectors) and a relation allowed(i,j), a plan
// lambda >= 0 with row sums alpha, column sums beta and support inside the
// relation exists iff Hall's condition holds:
//
//   sum_{i in Z} alpha_i <= sum_{j in N(Z)} beta_j   for every Z,
//
// with N(Z) the allowed neighbours of Z. solve_transport decides this with a
// max flow on the network
//
//   s --alpha_i--> l_i --1--> r_j --beta_j--> t     (edge l_i r_j iff allowed)
//
// and returns either the flow on the middle edges or the cut found in the
// final residual graph. hall_check enumerates subsets directly and is kept
// independent of the flow code.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "qmi/error.hpp"
#include "qmi/magic_unitary.hpp"
#include "qmi/matrix_core.hpp"
#include "qmi/metric_space.hpp"

namespace qmi {

struct CouplingProblem {
  std::vector<double> alpha;
  std::vector<double> beta;
  /// Row-major n x n relation; allowed[i * n + j] <=> j in V_i.
  std::vector<char> allowed;

  int n() const { return static_cast<int>(alpha.size()); }
  bool is_allowed(int i, int j) const { return allowed[static_cast<std::size_t>(i) * n() + j] != 0; }
};

struct TransportPlan {
  Eigen::MatrixXd lambda;
};

struct CutCertificate {
  /// Left indices, ascending, 0-based.
  std::vector<int> z;
  /// sum_{i in Z} alpha_i - sum_{j in N(Z)} beta_j; positive.
  double deficit = 0.0;
};

using TransportResult = std::variant<TransportPlan, CutCertificate>;

inline void validate_problem(const CouplingProblem& prob, double eps = kDefaultTolerance) {
  const int n = prob.n();
  if (n == 0) throw Error(ErrorKind::InvalidProblem, {}, "empty problem");
  if (static_cast<int>(prob.beta.size()) != n) {
    throw Error(ErrorKind::LengthMismatch, {n, int(prob.beta.size())});
  }
  if (prob.allowed.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorKind::Shape, {}, "allowed relation must be n x n");
  }
  double sa = 0.0;
  double sb = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(prob.alpha[i] >= -eps)) throw Error(ErrorKind::InvalidProblem, {i + 1}, "negative alpha");
    if (!(prob.beta[i] >= -eps)) throw Error(ErrorKind::InvalidProblem, {i + 1}, "negative beta");
    sa += prob.alpha[i];
    sb += prob.beta[i];
  }
  if (std::abs(sa - 1.0) > n * eps) throw Error(ErrorKind::InvalidProblem, {}, "alpha does not sum to 1");
  if (std::abs(sb - 1.0) > n * eps) throw Error(ErrorKind::InvalidProblem, {}, "beta does not sum to 1");
}

/// Union of allowed neighbours of Z.
inline std::vector<int> neighbourhood(const CouplingProblem& prob, const std::vector<int>& z) {
  std::vector<int> out;
  for (int j = 0; j < prob.n(); ++j) {
    for (int i : z) {
      if (prob.is_allowed(i, j)) {
        out.push_back(j);
        break;
      }
    }
  }
  return out;
}

inline double recompute_deficit(const CouplingProblem& prob, const std::vector<int>& z) {
  double d = 0.0;
  for (int i : z) d += prob.alpha[i];
  for (int j : neighbourhood(prob, z)) d -= prob.beta[j];
  return d;
}

namespace detail {

// Fixed-order residual network; edges are stored in insertion order and
// visited in that order by the BFS, which makes the result deterministic.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adj_(nodes) {}

  int add_edge(int from, int to, double cap) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, cap, 0.0});
    edges_.push_back({from, 0.0, 0.0});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  double flow_on(int edge) const { return edges_[edge].flow; }

  /// Shortest-augmenting-path max flow.
  double max_flow(int s, int t) {
    double total = 0.0;
    std::vector<int> parent_edge(adj_.size());
    while (true) {
      std::fill(parent_edge.begin(), parent_edge.end(), -1);
      std::deque<int> queue{s};
      std::vector<bool> seen(adj_.size(), false);
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        const int u = queue.front();
        queue.pop_front();
        for (int id : adj_[u]) {
          const int v = edges_[id].to;
          if (!seen[v] && residual(id) > kResidualFloor) {
            seen[v] = true;
            parent_edge[v] = id;
            queue.push_back(v);
          }
        }
      }
      if (!seen[t]) break;
      double push = std::numeric_limits<double>::infinity();
      for (int v = t; v != s; v = edges_[parent_edge[v] ^ 1].to) {
        push = std::min(push, residual(parent_edge[v]));
      }
      for (int v = t; v != s; v = edges_[parent_edge[v] ^ 1].to) {
        edges_[parent_edge[v]].flow += push;
        edges_[parent_edge[v] ^ 1].flow -= push;
      }
      total += push;
    }
    return total;
  }

  /// Nodes reachable from s in the residual graph.
  std::vector<bool> reachable(int s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<int> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int id : adj_[u]) {
        const int v = edges_[id].to;
        if (!seen[v] && residual(id) > kResidualFloor) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    int to;
    double cap;
    double flow;
  };
  static constexpr double kResidualFloor = 1e-15;

  double residual(int id) const { return edges_[id].cap - edges_[id].flow; }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

struct FlowOutcome {
  double value = 0.0;
  Eigen::MatrixXd lambda;
  std::vector<int> source_side_left;
};

inline FlowOutcome run_flow(const CouplingProblem& prob) {
  const int n = prob.n();
  const int s = 0;
  const int t = 2 * n + 1;
  auto left = [](int i) { return 1 + i; };
  auto right = [n](int j) { return 1 + n + j; };
  FlowNetwork net(2 * n + 2);
  for (int i = 0; i < n; ++i) net.add_edge(s, left(i), std::max(0.0, prob.alpha[i]));
  std::vector<int> middle(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (prob.is_allowed(i, j)) middle[i * n + j] = net.add_edge(left(i), right(j), 1.0);
    }
  }
  for (int j = 0; j < n; ++j) net.add_edge(right(j), t, std::max(0.0, prob.beta[j]));

  FlowOutcome out;
  out.value = net.max_flow(s, t);
  out.lambda = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (middle[i * n + j] >= 0) out.lambda(i, j) = std::max(0.0, net.flow_on(middle[i * n + j]));
    }
  }
  const auto seen = net.reachable(s);
  for (int i = 0; i < n; ++i) {
    if (seen[left(i)]) out.source_side_left.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Max-flow decision. Feasible iff the flow value reaches 1 - n * eps.
inline TransportResult solve_transport(const CouplingProblem& prob, double eps = kDefaultTolerance) {
  validate_problem(prob, eps);
  auto flow = detail::run_flow(prob);
  if (flow.value >= 1.0 - prob.n() * eps) return TransportPlan{std::move(flow.lambda)};
  CutCertificate cert;
  cert.z = std::move(flow.source_side_left);
  cert.deficit = recompute_deficit(prob, cert.z);
  return cert;
}

/// Largest problem size for exhaustive subset enumeration.
inline constexpr int kHallExhaustiveLimit = 20;

/// Returns nullopt when Hall's condition holds (every deficit <= n * eps).
/// Otherwise returns a maximum-deficit subset; among subsets whose deficit is
/// within n * eps of the maximum, the smallest, then the lexicographically
/// least. Above kHallExhaustiveLimit the subset comes from the min cut.
inline std::optional<CutCertificate> hall_check(const CouplingProblem& prob,
                                                double eps = kDefaultTolerance) {
  validate_problem(prob, eps);
  const int n = prob.n();
  const double tol = n * eps;
  if (n > kHallExhaustiveLimit) {
    auto flow = detail::run_flow(prob);
    CutCertificate cert{flow.source_side_left, 0.0};
    cert.deficit = recompute_deficit(prob, cert.z);
    if (cert.deficit <= tol) return std::nullopt;
    return cert;
  }

  const std::uint32_t full = 1u << n;
  std::vector<std::uint32_t> nbr(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (prob.is_allowed(i, j)) nbr[i] |= 1u << j;
    }
  }
  // Subset sums by peeling the lowest bit.
  std::vector<double> alpha_sum(full, 0.0);
  std::vector<double> beta_sum(full, 0.0);
  std::vector<std::uint32_t> union_nbr(full, 0);
  for (std::uint32_t m = 1; m < full; ++m) {
    const int low = std::countr_zero(m);
    const std::uint32_t rest = m & (m - 1);
    alpha_sum[m] = alpha_sum[rest] + prob.alpha[low];
    beta_sum[m] = beta_sum[rest] + prob.beta[low];
    union_nbr[m] = union_nbr[rest] | nbr[low];
  }
  auto deficit = [&](std::uint32_t m) { return alpha_sum[m] - beta_sum[union_nbr[m]]; };

  double best = 0.0;
  for (std::uint32_t m = 1; m < full; ++m) best = std::max(best, deficit(m));
  if (best <= tol) return std::nullopt;

  auto members = [n](std::uint32_t m) {
    std::vector<int> z;
    for (int i = 0; i < n; ++i) {
      if (m >> i & 1u) z.push_back(i);
    }
    return z;
  };
  std::optional<std::vector<int>> chosen;
  for (std::uint32_t m = 1; m < full; ++m) {
    if (deficit(m) < best - tol) continue;
    auto z = members(m);
    if (!chosen || z.size() < chosen->size() || (z.size() == chosen->size() && z < *chosen)) {
      chosen = std::move(z);
    }
  }
  CutCertificate cert{std::move(*chosen), 0.0};
  cert.deficit = recompute_deficit(prob, cert.z);
  return cert;
}

/// Row sums, column sums and support of a plan, each checked within n * eps.
inline bool plan_satisfies(const CouplingProblem& prob, const TransportPlan& plan,
                           double eps = kDefaultTolerance) {
  const int n = prob.n();
  const double tol = n * eps;
  if (plan.lambda.rows() != n || plan.lambda.cols() != n) return false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(plan.lambda.row(i).sum() - prob.alpha[i]) > tol) return false;
    if (std::abs(plan.lambda.col(i).sum() - prob.beta[i]) > tol) return false;
    for (int j = 0; j < n; ++j) {
      if (plan.lambda(i, j) < -eps) return false;
      if (!prob.is_allowed(i, j) && plan.lambda(i, j) > eps) return false;
    }
  }
  return true;
}

/// Coupling problem for a pair of points: alpha_i = omega(a_xi),
/// beta_j = omega(a_yj), allowed(i,j) <=> d(i,j) = d(x,y).
inline CouplingProblem pair_problem(const MagicUnitary& a, const FiniteMetricSpace& space,
                                    const State& omega, int x, int y) {
  if (a.n() != space.size()) throw Error(ErrorKind::PointCountMismatch, {a.n(), space.size()});
  if (omega.dim() != a.dim()) throw Error(ErrorKind::DimMismatch, {omega.dim(), a.dim()});
  detail::check_point(space, x);
  detail::check_point(space, y);
  const int n = a.n();
  CouplingProblem prob;
  prob.alpha.resize(n);
  prob.beta.resize(n);
  prob.allowed.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    prob.alpha[i] = std::max(0.0, state_expect(omega, a(x, i)).real());
    prob.beta[i] = std::max(0.0, state_expect(omega, a(y, i)).real());
    for (int j = 0; j < n; ++j) prob.allowed[i * n + j] = space(i, j) == space(x, y);
  }
  return prob;
}

inline TransportResult coupling_for_pair(const MagicUnitary& a, const FiniteMetricSpace& space,
                                         const State& omega, int x, int y,
                                         double eps = kDefaultTolerance) {
  return solve_transport(pair_problem(a, space, omega, x, y), eps);
}

}  // namespace qmi
