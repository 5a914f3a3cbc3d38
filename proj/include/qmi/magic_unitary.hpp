#pragma once

// Magic biunitary matrices a = (a_ij) over M_dim(C): every a_ij is a
// projection and every row and column sums to the identity. The grid encodes
// a coaction on C(X) through alpha(delta_j) = sum_i delta_i (x) a_ij.

#include <algorithm>
#include <array>
#include <vector>

#include "qmi/error.hpp"
#include "qmi/matrix_core.hpp"
#include "qmi/metric_space.hpp"

namespace qmi {

/// One-line notation of a permutation of {0..n-1}: perm[i] = sigma(i).
using Permutation = std::vector<int>;

class MagicUnitary {
 public:
  int n() const { return n_; }
  int dim() const { return dim_; }
  double tolerance() const { return tolerance_; }
  const CMatrix& operator()(int i, int j) const { return entries_[idx(i, j)]; }

  friend MagicUnitary validate_magic(const std::vector<std::vector<CMatrix>>& grid, double eps);

 private:
  MagicUnitary(int n, int dim, double tolerance, std::vector<CMatrix> entries)
      : n_(n), dim_(dim), tolerance_(tolerance), entries_(std::move(entries)) {}
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_;
  int dim_;
  double tolerance_;
  std::vector<CMatrix> entries_;
};

/// Validates projections, then row sums, then column sums. Error indices are
/// 1-based.
inline MagicUnitary validate_magic(const std::vector<std::vector<CMatrix>>& grid,
                                   double eps = kDefaultTolerance) {
  const int n = static_cast<int>(grid.size());
  if (n == 0) throw Error(ErrorKind::Shape, {}, "empty grid");
  const auto dim = grid[0].empty() ? 0 : grid[0][0].rows();
  if (dim == 0) throw Error(ErrorKind::Shape, {}, "zero-dimensional entries");
  std::vector<CMatrix> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(grid[i].size()) != n) {
      throw Error(ErrorKind::Shape, {i + 1}, "grid row length differs from row count");
    }
    for (int j = 0; j < n; ++j) {
      if (grid[i][j].rows() != dim || grid[i][j].cols() != dim) {
        throw Error(ErrorKind::Shape, {i + 1, j + 1}, "entry has wrong dimensions");
      }
      entries.push_back(grid[i][j]);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!is_projection(grid[i][j], eps)) throw Error(ErrorKind::NotProjection, {i + 1, j + 1});
    }
  }
  const CMatrix id = CMatrix::Identity(dim, dim);
  for (int i = 0; i < n; ++i) {
    CMatrix row = CMatrix::Zero(dim, dim);
    for (int k = 0; k < n; ++k) row += grid[i][k];
    if (max_entry_norm(row - id) > eps) throw Error(ErrorKind::RowSum, {i + 1});
  }
  for (int j = 0; j < n; ++j) {
    CMatrix col = CMatrix::Zero(dim, dim);
    for (int k = 0; k < n; ++k) col += grid[k][j];
    if (max_entry_norm(col - id) > eps) throw Error(ErrorKind::ColSum, {j + 1});
  }
  return MagicUnitary(n, static_cast<int>(dim), eps, std::move(entries));
}

inline void check_bijection(const Permutation& sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    if (sigma[i] < 0 || sigma[i] >= n || seen[sigma[i]]) {
      throw Error(ErrorKind::NotBijection, {i + 1});
    }
    seen[sigma[i]] = true;
  }
}

/// Classical grid a_ij = [sigma(i) = j], so the pushforward of f is f o sigma.
inline MagicUnitary from_permutation(const Permutation& sigma) {
  check_bijection(sigma);
  const int n = static_cast<int>(sigma.size());
  std::vector<std::vector<CMatrix>> grid(n, std::vector<CMatrix>(n, CMatrix::Zero(1, 1)));
  for (int i = 0; i < n; ++i) grid[i][sigma[i]](0, 0) = 1.0;
  return validate_magic(grid);
}

/// 4-point grid with rows [p, 1-p, 0, 0], [1-p, p, 0, 0], [0, 0, q, 1-q],
/// [0, 0, 1-q, q]. Genuinely quantum when p and q do not commute.
inline MagicUnitary two_block_quantum(const CMatrix& p, const CMatrix& q,
                                      double eps = kDefaultTolerance) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw Error(ErrorKind::DimMismatch, {int(p.rows()), int(q.rows())});
  }
  if (!is_projection(p, eps)) throw Error(ErrorKind::NotProjection, {1}, "p");
  if (!is_projection(q, eps)) throw Error(ErrorKind::NotProjection, {2}, "q");
  const auto dim = p.rows();
  const CMatrix id = CMatrix::Identity(dim, dim);
  const CMatrix zero = CMatrix::Zero(dim, dim);
  std::vector<std::vector<CMatrix>> grid = {
      {p, id - p, zero, zero},
      {id - p, p, zero, zero},
      {zero, zero, q, id - q},
      {zero, zero, id - q, q},
  };
  return validate_magic(grid, eps);
}

/// Grid of the *-product (beta_1 (x) iota) beta_2: x_ij = sum_k a_ik (x) c_kj.
/// The representation space is C^{a.dim} (x) C^{c.dim}.
inline MagicUnitary star_product(const MagicUnitary& a, const MagicUnitary& c) {
  if (a.n() != c.n()) throw Error(ErrorKind::PointCountMismatch, {a.n(), c.n()});
  const int n = a.n();
  const int dim = a.dim() * c.dim();
  std::vector<std::vector<CMatrix>> grid(n, std::vector<CMatrix>(n, CMatrix::Zero(dim, dim)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) grid[i][j] += kron(a(i, k), c(k, j));
    }
  }
  // Each x_ij sums n Kronecker products, so entry errors add up.
  const double eps = std::max(a.tolerance(), c.tolerance()) * 2.0 * (n + 1);
  return validate_magic(grid, eps);
}

/// Grid transpose, the image of the antipode S(a_ij) = a_ji.
inline MagicUnitary antipode_grid(const MagicUnitary& a) {
  const int n = a.n();
  std::vector<std::vector<CMatrix>> grid(n, std::vector<CMatrix>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grid[i][j] = a(j, i);
  }
  return validate_magic(grid, a.tolerance());
}

struct CommutationReport {
  bool commutes = false;
  /// Max entry of the blockwise commutator a d - d a.
  double residual = 0.0;
  /// Quadruples (i,j,k,l), 0-based, with d(i,k) != d(j,l) and a_ij a_kl != 0,
  /// in lexicographic order.
  std::vector<std::array<int, 4>> violations;
};

/// Blockwise max entry of a d - d a, d acting as scalar blocks d(i,j) * 1.
inline double commutator_residual(const MagicUnitary& a, const FiniteMetricSpace& space) {
  const int n = a.n();
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CMatrix block = CMatrix::Zero(a.dim(), a.dim());
      for (int x = 0; x < n; ++x) {
        block += space(x, j) * a(i, x) - space(i, x) * a(x, j);
      }
      residual = std::max(residual, max_entry_norm(block));
    }
  }
  return residual;
}

/// Quadruples violating a_ij a_kl = 0 whenever d(i,k) != d(j,l).
inline std::vector<std::array<int, 4>> commutation_violations(const MagicUnitary& a,
                                                              const FiniteMetricSpace& space,
                                                              double eps) {
  const int n = a.n();
  std::vector<bool> nonzero(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) nonzero[i * n + j] = max_entry_norm(a(i, j)) > eps;
  }
  std::vector<std::array<int, 4>> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!nonzero[i * n + j]) continue;
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          if (space(i, k) == space(j, l) || !nonzero[k * n + l]) continue;
          if (max_entry_norm(a(i, j) * a(k, l)) > eps) out.push_back({i, j, k, l});
        }
      }
    }
  }
  return out;
}

/// Runs both the matrix criterion a d = d a and the quadruple criterion and
/// throws InternalDisagreement if they differ.
inline CommutationReport check_commutation(const MagicUnitary& a, const FiniteMetricSpace& space,
                                           double eps = kDefaultTolerance) {
  if (a.n() != space.size()) throw Error(ErrorKind::PointCountMismatch, {a.n(), space.size()});
  CommutationReport report;
  report.residual = commutator_residual(a, space);
  report.violations = commutation_violations(a, space, eps);
  const bool by_residual = report.residual <= static_cast<double>(a.n()) * a.n() * eps;
  const bool by_quadruples = report.violations.empty();
  if (by_residual != by_quadruples) {
    throw Error(ErrorKind::InternalDisagreement, {},
                "residual " + std::to_string(report.residual) + " vs " +
                    std::to_string(report.violations.size()) + " violating quadruples");
  }
  report.commutes = by_quadruples;
  return report;
}

/// (psi (x) iota) alpha(b) = psi(b) 1 for psi = sum_i w_i ev_i, i.e.
/// sum_i w_i a_ij = w_j 1 for every j.
inline bool functional_preservation_check(const MagicUnitary& a, const std::vector<double>& w,
                                          double eps = kDefaultTolerance) {
  if (static_cast<int>(w.size()) != a.n()) {
    throw Error(ErrorKind::LengthMismatch, {int(w.size()), a.n()});
  }
  const CMatrix id = CMatrix::Identity(a.dim(), a.dim());
  for (int j = 0; j < a.n(); ++j) {
    CMatrix sum = CMatrix::Zero(a.dim(), a.dim());
    for (int i = 0; i < a.n(); ++i) sum += w[i] * a(i, j);
    if (max_entry_norm(sum - w[j] * id) > eps) return false;
  }
  return true;
}

}  // namespace qmi
