#pragma once

// Dense complex matrices, projections and states on M_dim(C).
//
// A state is stored as its density matrix rho; omega(a) = trace(rho * a).
// Pure states are rank-one density matrices v v^*.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "qmi/error.hpp"

namespace qmi {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Tolerance used wherever a caller does not pass one.
inline constexpr double kDefaultTolerance = 1e-9;

/// Tolerances on the density matrix of a State.
inline constexpr double kStateTolerance = 1e-10;

/// Largest entry magnitude; the norm used for all matrix comparisons.
inline double max_entry_norm(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline bool is_projection(const CMatrix& m, double eps = kDefaultTolerance) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NonSquare, {int(m.rows()), int(m.cols())});
  return max_entry_norm(m - m.adjoint()) <= eps && max_entry_norm(m - m * m) <= eps;
}

inline bool is_unitary(const CMatrix& m, double eps = kDefaultTolerance) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NonSquare, {int(m.rows()), int(m.cols())});
  const auto id = CMatrix::Identity(m.rows(), m.cols());
  return max_entry_norm(m * m.adjoint() - id) <= eps &&
         max_entry_norm(m.adjoint() * m - id) <= eps;
}

/// Orthogonal projection onto the span of v (v need not be normalized).
inline CMatrix rank_one_projection(const CVector& v) {
  const CVector u = v.normalized();
  return u * u.adjoint();
}

class State {
 public:
  /// Validates rho: Hermitian, eigenvalues >= -1e-10, unit trace.
  explicit State(CMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
      throw Error(ErrorKind::NonSquare, {int(rho_.rows()), int(rho_.cols())});
    }
    if (max_entry_norm(rho_ - rho_.adjoint()) > kStateTolerance) {
      throw Error(ErrorKind::InvalidState, {}, "density matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - cplx(1.0)) > kStateTolerance) {
      throw Error(ErrorKind::InvalidState, {}, "density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTolerance) {
      throw Error(ErrorKind::InvalidState, {}, "density matrix is not positive");
    }
  }

  static State pure(const CVector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw Error(ErrorKind::InvalidState, {}, "zero vector");
    const CVector u = v / norm;
    return State(u * u.adjoint());
  }

  /// Normalized trace I/dim.
  static State tracial(int dim) {
    return State(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  int dim() const { return static_cast<int>(rho_.rows()); }
  const CMatrix& rho() const { return rho_; }

  /// Convex combination t*this + (1-t)*other.
  State mix(const State& other, double t) const {
    return State(t * rho_ + (1.0 - t) * other.rho_);
  }

 private:
  CMatrix rho_;
};

inline cplx state_expect(const State& omega, const CMatrix& a) {
  if (a.rows() != omega.dim() || a.cols() != omega.dim()) {
    throw Error(ErrorKind::DimMismatch, {omega.dim(), int(a.rows())});
  }
  // trace(rho * a) without forming the product.
  return (omega.rho().transpose().cwiseProduct(a)).sum();
}

/// omega_a(x) = omega(a^* x a) / omega(a^* a), realized with density matrix
/// a rho a^* / trace(a rho a^*).
inline State conjugate_state(const State& omega, const CMatrix& a,
                             double eps = kDefaultTolerance) {
  if (a.rows() != omega.dim() || a.cols() != omega.dim()) {
    throw Error(ErrorKind::DimMismatch, {omega.dim(), int(a.rows())});
  }
  const CMatrix sandwiched = a * omega.rho() * a.adjoint();
  const double weight = sandwiched.trace().real();
  if (!(weight > eps)) throw Error(ErrorKind::NullConjugator, {});
  CMatrix rho = sandwiched / weight;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return State(std::move(rho));
}

/// Pure state from a normalized complex standard-normal vector.
template <class Rng>
State random_pure_state(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = cplx(normal(rng), normal(rng));
  return State::pure(v);
}

/// Projection onto a uniformly random subspace of the given rank.
template <class Rng>
CMatrix random_projection(int dim, int rank, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(dim, rank);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < rank; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  }
  if (rank == 0) return CMatrix::Zero(dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(dim, rank);
  CMatrix p = q * q.adjoint();
  return 0.5 * (p + p.adjoint());
}

template <class Rng>
CMatrix random_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace qmi
