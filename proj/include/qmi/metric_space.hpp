#pragma once

// Finite metric spaces, their distance levels and spheres, and the Lipschitz
// seminorm L_d(f) = max_{x != y} |f(x) - f(y)| / d(x,y).
//
// Points are 0-based in the C++ API. Errors and all serialized forms use
// 1-based indices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qmi/error.hpp"

namespace qmi {

using ComplexFunction = Eigen::VectorXcd;

/// Slack for the triangle inequality and the width within which distinct
/// input distances are merged into one level.
inline constexpr double kMetricSlack = 1e-12;

class FiniteMetricSpace {
 public:
  int size() const { return static_cast<int>(d_.rows()); }
  double operator()(int i, int j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }

  friend FiniteMetricSpace validate_metric(const Eigen::MatrixXd& raw);

 private:
  explicit FiniteMetricSpace(Eigen::MatrixXd d) : d_(std::move(d)) {}
  Eigen::MatrixXd d_;
};

/// Sorted distinct distances d_0 = 0 < d_1 < ... < d_N.
struct DistanceLevels {
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }

  /// Level index of an exact (canonicalized) distance, or -1.
  int index_of(double distance) const {
    auto it = std::lower_bound(values.begin(), values.end(), distance);
    if (it == values.end() || *it != distance) return -1;
    return static_cast<int>(it - values.begin());
  }
};

/// Checks the metric axioms and returns a space whose near-equal distances
/// (within kMetricSlack) share one representative, so that level membership
/// can use exact equality. Throws Error naming the first violated axiom.
inline FiniteMetricSpace validate_metric(const Eigen::MatrixXd& raw) {
  const auto n = raw.rows();
  if (n == 0 || raw.cols() != n) {
    throw Error(ErrorKind::Shape, {}, "distance matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(raw(i, j))) {
        throw Error(ErrorKind::NotFinite, {int(i) + 1, int(j) + 1});
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (raw(i, i) != 0.0) throw Error(ErrorKind::Diagonal, {int(i) + 1});
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (raw(i, j) <= 0.0 || raw(j, i) <= 0.0) {
        throw Error(ErrorKind::NonPositive, {int(i) + 1, int(j) + 1});
      }
      if (std::abs(raw(i, j) - raw(j, i)) > kMetricSlack) {
        throw Error(ErrorKind::Asymmetry, {int(i) + 1, int(j) + 1});
      }
    }
  }

  // Canonicalize: sort the upper-triangle values and merge runs whose spread
  // from the run's smallest member is within the slack.
  std::vector<double> sorted;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) sorted.push_back(raw(i, j));
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> reps;
  for (double v : sorted) {
    if (reps.empty() || v - reps.back() > kMetricSlack) reps.push_back(v);
  }
  auto canonical = [&](double v) {
    auto it = std::upper_bound(reps.begin(), reps.end(), v);
    return *std::prev(it);
  };

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = canonical(raw(i, j));
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (d(i, k) > d(i, j) + d(j, k) + kMetricSlack) {
          throw Error(ErrorKind::Triangle, {int(i) + 1, int(j) + 1, int(k) + 1});
        }
      }
    }
  }
  return FiniteMetricSpace(std::move(d));
}

inline FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd raw(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      throw Error(ErrorKind::Shape, {int(i) + 1}, "row length differs from row count");
    }
    for (Eigen::Index j = 0; j < n; ++j) raw(i, j) = rows[i][j];
  }
  return validate_metric(raw);
}

inline DistanceLevels distance_levels(const FiniteMetricSpace& space) {
  const auto& d = space.matrix();
  std::vector<double> values(d.data(), d.data() + d.size());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return {std::move(values)};
}

namespace detail {
inline void check_point(const FiniteMetricSpace& space, int i) {
  if (i < 0 || i >= space.size()) throw Error(ErrorKind::Index, {i + 1});
}
}  // namespace detail

/// V_i^gamma: points at distance d_gamma from i, ascending.
inline std::vector<int> sphere(const FiniteMetricSpace& space,
                               const DistanceLevels& levels, int i, int level) {
  detail::check_point(space, i);
  if (level < 0 || level >= levels.size()) {
    throw Error(ErrorKind::Index, {level}, "distance level out of range");
  }
  std::vector<int> out;
  for (int j = 0; j < space.size(); ++j) {
    if (space(i, j) == levels.values[level]) out.push_back(j);
  }
  return out;
}

inline std::vector<int> sphere(const FiniteMetricSpace& space, int i, int level) {
  return sphere(space, distance_levels(space), i, level);
}

/// D_j: x -> d(x, j).
inline ComplexFunction distance_function(const FiniteMetricSpace& space, int j) {
  detail::check_point(space, j);
  return space.matrix().col(j).cast<std::complex<double>>();
}

inline double lipnorm(const FiniteMetricSpace& space, const ComplexFunction& f) {
  if (f.size() != space.size()) {
    throw Error(ErrorKind::LengthMismatch, {int(f.size()), space.size()});
  }
  double best = 0.0;
  for (int x = 0; x < space.size(); ++x) {
    for (int y = x + 1; y < space.size(); ++y) {
      best = std::max(best, std::abs(f[x] - f[y]) / space(x, y));
    }
  }
  return best;
}

}  // namespace qmi
