#pragma once

// The quantum space B = M_2(C) + C + C with the Lipnorm
//
//   L((a b; c d), e, f) = |a - d| + |b| + |c| + |a - e| + |a - f|
//
// and its trace-preserving quantum symmetries, presented by generators
// x, y, z, p subject to
//
//   x^2 = -yz,   2xx* + yy* + zz* = 1,   p* = p = p^2,
//   x, y, z, x*, y*, z* pairwise commuting.
//
// Everything here works with a finite-dimensional representation of those
// generators (ARep). The coaction is fixed on generators of B by
//
//   alpha(e12) = (e11 - e22) (x) x + e12 (x) z + e21 (x) y
//   alpha(0,1,0) = (0,1,0) (x) p + (0,0,1) (x) (1 - p)
//
// and extended as a unital *-homomorphism.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qmi/error.hpp"
#include "qmi/matrix_core.hpp"

namespace qmi::m2cc {

struct TripleElement {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  cplx e{0.0};
  cplx f{0.0};

  static TripleElement unit() { return {Eigen::Matrix2cd::Identity(), 1.0, 1.0}; }

  friend TripleElement operator+(const TripleElement& a, const TripleElement& b) {
    return {a.m + b.m, a.e + b.e, a.f + b.f};
  }
  friend TripleElement operator*(cplx s, const TripleElement& a) { return {s * a.m, s * a.e, s * a.f}; }
};

inline constexpr int kBasisSize = 6;

/// e11, e12, e21, e22, (0,1,0), (0,0,1).
inline TripleElement basis_element(int k) {
  TripleElement b;
  if (k < 4) {
    b.m(k / 2, k % 2) = 1.0;
  } else if (k == 4) {
    b.e = 1.0;
  } else {
    b.f = 1.0;
  }
  return b;
}

inline std::string basis_label(int k) {
  static const std::array<const char*, kBasisSize> labels = {"e11", "e12", "e21", "e22", "(0,1,0)", "(0,0,1)"};
  return labels.at(k);
}

inline double lipnorm6(const TripleElement& b) {
  const cplx a = b.m(0, 0);
  return std::abs(a - b.m(1, 1)) + std::abs(b.m(0, 1)) + std::abs(b.m(1, 0)) + std::abs(a - b.e) +
         std::abs(a - b.f);
}

/// Validated representation of the generators.
struct ARep {
  int dim = 0;
  CMatrix x, y, z, p;
};

inline ARep make_arep(const CMatrix& x, const CMatrix& y, const CMatrix& z, const CMatrix& p,
                      double eps = kDefaultTolerance) {
  const auto dim = x.rows();
  for (const CMatrix* g : {&x, &y, &z, &p}) {
    if (dim == 0 || g->rows() != dim || g->cols() != dim) {
      throw Error(ErrorKind::Shape, {}, "generators must be square of equal size");
    }
  }
  const CMatrix id = CMatrix::Identity(dim, dim);
  if (max_entry_norm(x * x + y * z) > eps) throw Error(ErrorKind::RelationViolation, {}, "x^2 = -yz");
  if (max_entry_norm(2.0 * x * x.adjoint() + y * y.adjoint() + z * z.adjoint() - id) > eps) {
    throw Error(ErrorKind::RelationViolation, {}, "2xx* + yy* + zz* = 1");
  }
  if (!is_projection(p, eps)) throw Error(ErrorKind::RelationViolation, {}, "p* = p = p^2");

  const std::array<std::pair<const char*, CMatrix>, 6> gens = {{
      {"x", x}, {"y", y}, {"z", z},
      {"x*", x.adjoint()}, {"y*", y.adjoint()}, {"z*", z.adjoint()},
  }};
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto& [ni, gi] = gens[i];
      const auto& [nj, gj] = gens[j];
      if (max_entry_norm(gi * gj - gj * gi) > eps) {
        throw Error(ErrorKind::CommutativityViolation, {}, std::string(ni) + "," + nj);
      }
    }
  }
  return {static_cast<int>(dim), x, y, z, p};
}

/// Representation of the quotient by x = y = 0: z unitary, p a projection.
inline ARep quotient_rep(const CMatrix& u, const CMatrix& proj, double eps = kDefaultTolerance) {
  if (u.rows() != u.cols() || proj.rows() != proj.cols() || u.rows() != proj.rows() || u.rows() == 0) {
    throw Error(ErrorKind::Shape, {}, "U and P must be square of equal size");
  }
  if (!is_unitary(u, eps)) throw Error(ErrorKind::NotUnitary, {});
  if (!is_projection(proj, eps)) throw Error(ErrorKind::NotProjection, {});
  const auto zero = CMatrix::Zero(u.rows(), u.cols());
  return make_arep(zero, zero, u, proj, eps);
}

/// Element of B (x) M_dim: M_2 part as a 2x2 grid of dim x dim blocks, and the
/// two scalar summands as dim x dim matrices.
struct CoactedElement {
  std::array<CMatrix, 4> m;  // blocks (1,1), (1,2), (2,1), (2,2)
  CMatrix e, f;

  const CMatrix& block(int r, int c) const { return m[2 * r + c]; }

  static CoactedElement zero(int dim) {
    const CMatrix z = CMatrix::Zero(dim, dim);
    return {{z, z, z, z}, z, z};
  }
  static CoactedElement unit(int dim) {
    const CMatrix id = CMatrix::Identity(dim, dim);
    const CMatrix z = CMatrix::Zero(dim, dim);
    return {{id, z, z, id}, id, id};
  }

  CoactedElement adjoint() const {
    return {{m[0].adjoint(), m[2].adjoint(), m[1].adjoint(), m[3].adjoint()}, e.adjoint(), f.adjoint()};
  }

  friend CoactedElement operator+(const CoactedElement& a, const CoactedElement& b) {
    return {{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]}, a.e + b.e, a.f + b.f};
  }
  friend CoactedElement operator-(const CoactedElement& a, const CoactedElement& b) {
    return a + cplx(-1.0) * b;
  }
  friend CoactedElement operator*(cplx s, const CoactedElement& a) {
    return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}, s * a.e, s * a.f};
  }
  friend CoactedElement operator*(const CoactedElement& a, const CoactedElement& b) {
    return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
             a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]},
            a.e * b.e,
            a.f * b.f};
  }

  double distance(const CoactedElement& other) const {
    double d = std::max(max_entry_norm(e - other.e), max_entry_norm(f - other.f));
    for (int k = 0; k < 4; ++k) d = std::max(d, max_entry_norm(m[k] - other.m[k]));
    return d;
  }
};

/// alpha on the six matrix units of B, in basis_element order.
inline std::array<CoactedElement, kBasisSize> coaction_basis(const ARep& rep) {
  const int dim = rep.dim;
  const CMatrix zero = CMatrix::Zero(dim, dim);
  const CMatrix id = CMatrix::Identity(dim, dim);
  const CoactedElement a12{{rep.x, rep.z, rep.y, -rep.x}, zero, zero};
  const CoactedElement a21 = a12.adjoint();
  const CoactedElement a11 = a12 * a21;
  const CoactedElement a22 = a21 * a12;
  const CoactedElement e_part{{zero, zero, zero, zero}, rep.p, id - rep.p};
  const CoactedElement f_part = CoactedElement::unit(dim) - a11 - a22 - e_part;
  return {a11, a12, a21, a22, e_part, f_part};
}

/// Pre-expanded alpha(e11) = e11 (x) (xx* + zz*) + e22 (x) (xx* + yy*)
///   + e12 (x) (xy* - zx*) + e21 (x) (yx* - xz*).
inline CoactedElement coaction_e11_closed_form(const ARep& rep) {
  const CMatrix& x = rep.x;
  const CMatrix& y = rep.y;
  const CMatrix& z = rep.z;
  const CMatrix zero = CMatrix::Zero(rep.dim, rep.dim);
  return {{x * x.adjoint() + z * z.adjoint(), x * y.adjoint() - z * x.adjoint(),
           y * x.adjoint() - x * z.adjoint(), x * x.adjoint() + y * y.adjoint()},
          zero,
          zero};
}

inline CoactedElement coaction_apply(const ARep& rep, const TripleElement& b) {
  const auto basis = coaction_basis(rep);
#ifndef NDEBUG
  if (basis[0].distance(coaction_e11_closed_form(rep)) > 1e-9) {
    throw Error(ErrorKind::Inconsistent, {}, "alpha(e11) closed form disagrees with product");
  }
#endif
  const std::array<cplx, kBasisSize> coeff = {b.m(0, 0), b.m(0, 1), b.m(1, 0), b.m(1, 1), b.e, b.f};
  CoactedElement out = CoactedElement::zero(rep.dim);
  for (int k = 0; k < kBasisSize; ++k) out = out + coeff[k] * basis[k];
  return out;
}

/// (iota (x) omega) alpha(b).
inline TripleElement pushforward6(const ARep& rep, const State& omega, const TripleElement& b) {
  if (omega.dim() != rep.dim) throw Error(ErrorKind::DimMismatch, {omega.dim(), rep.dim});
  const auto ab = coaction_apply(rep, b);
  TripleElement out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) out.m(r, c) = state_expect(omega, ab.block(r, c));
  }
  out.e = state_expect(omega, ab.e);
  out.f = state_expect(omega, ab.f);
  return out;
}

inline double defect6(const ARep& rep, const State& omega, const TripleElement& b) {
  return lipnorm6(pushforward6(rep, omega, b)) - lipnorm6(b);
}

template <class Rng>
TripleElement random_triple(Rng& rng) {
  std::normal_distribution<double> normal;
  TripleElement b;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) b.m(r, c) = cplx(normal(rng), normal(rng));
  }
  b.e = cplx(normal(rng), normal(rng));
  b.f = cplx(normal(rng), normal(rng));
  return b;
}

struct AdmissibilityWitness {
  TripleElement b;
  std::string b_label;  // basis label or "random"
  State omega;
  double defect = 0.0;
};

struct AdmissibilityReport {
  /// pi(x) = pi(y) = 0 within eps.
  bool admissible = false;
  int evaluations = 0;
  double max_defect = 0.0;
  std::optional<AdmissibilityWitness> witness;
};

/// Random elements tried per state, after the basis, in the sweep and search.
inline constexpr int kRandomElementsPerState = 2;

/// For pi(x) = pi(y) = 0, sweeps `samples` seeded pure states against the
/// basis and random elements and reports the largest defect. Otherwise looks
/// for (b, omega) with positive defect, trying e12, e11, (0,1,0) first and
/// then random elements, over basis-vector states and `samples` seeded pure
/// states.
inline AdmissibilityReport admissibility_check(const ARep& rep, int samples, std::uint64_t seed,
                                               double eps = kDefaultTolerance) {
  AdmissibilityReport report;
  report.admissible = max_entry_norm(rep.x) <= eps && max_entry_norm(rep.y) <= eps;
  std::mt19937_64 rng(seed);
  report.max_defect = -std::numeric_limits<double>::infinity();

  if (report.admissible) {
    for (int s = 0; s < samples; ++s) {
      const State omega = random_pure_state(rep.dim, rng);
      std::vector<TripleElement> elems;
      for (int k = 0; k < kBasisSize; ++k) elems.push_back(basis_element(k));
      for (int r = 0; r < kRandomElementsPerState; ++r) elems.push_back(random_triple(rng));
      for (const auto& b : elems) {
        report.max_defect = std::max(report.max_defect, defect6(rep, omega, b));
        ++report.evaluations;
      }
    }
    if (report.evaluations == 0) report.max_defect = 0.0;
    return report;
  }

  std::vector<State> states;
  for (int k = 0; k < rep.dim; ++k) states.push_back(State::pure(CVector::Unit(rep.dim, k)));
  for (int s = 0; s < samples; ++s) states.push_back(random_pure_state(rep.dim, rng));
  std::vector<std::pair<std::string, TripleElement>> elems = {
      {"e12", basis_element(1)}, {"e11", basis_element(0)}, {"(0,1,0)", basis_element(4)}};
  for (int r = 0; r < kRandomElementsPerState * 4; ++r) elems.emplace_back("random", random_triple(rng));

  for (const auto& [label, b] : elems) {
    for (const auto& omega : states) {
      const double d = defect6(rep, omega, b);
      ++report.evaluations;
      report.max_defect = std::max(report.max_defect, d);
      if (d > eps) {
        report.witness = AdmissibilityWitness{b, label, omega, d};
        return report;
      }
    }
  }
  return report;
}

/// Lifts Delta to representations: Delta(g) evaluated in rep1 (x) rep2.
///   Delta(x) = (zz* - yy*) (x) x + x (x) z + x* (x) y
///   Delta(y) = (yx* - xz*) (x) 2x + y (x) z + z* (x) y
///   Delta(z) = (xy* - zx*) (x) 2x + z (x) z + y* (x) y
///   Delta(p) = p (x) p + (1 - p) (x) (1 - p)
inline ARep comult_lift(const ARep& r1, const ARep& r2, double eps = kDefaultTolerance) {
  const CMatrix& x1 = r1.x;
  const CMatrix& y1 = r1.y;
  const CMatrix& z1 = r1.z;
  const CMatrix& x2 = r2.x;
  const CMatrix& y2 = r2.y;
  const CMatrix& z2 = r2.z;
  const CMatrix id1 = CMatrix::Identity(r1.dim, r1.dim);
  const CMatrix id2 = CMatrix::Identity(r2.dim, r2.dim);
  const CMatrix x = kron(z1 * z1.adjoint() - y1 * y1.adjoint(), x2) + kron(x1, z2) + kron(x1.adjoint(), y2);
  const CMatrix y = kron(y1 * x1.adjoint() - x1 * z1.adjoint(), 2.0 * x2) + kron(y1, z2) + kron(z1.adjoint(), y2);
  const CMatrix z = kron(x1 * y1.adjoint() - z1 * x1.adjoint(), 2.0 * x2) + kron(z1, z2) + kron(y1.adjoint(), y2);
  const CMatrix p = kron(r1.p, r2.p) + kron(id1 - r1.p, id2 - r2.p);
  return make_arep(x, y, z, p, eps);
}

/// psi(m, e, f) = trace(m) + e + f is preserved: (psi (x) iota) alpha(b) =
/// psi(b) 1 on all six matrix units.
inline bool trace_preservation_check(const ARep& rep, double eps = kDefaultTolerance) {
  const auto basis = coaction_basis(rep);
  const CMatrix id = CMatrix::Identity(rep.dim, rep.dim);
  for (int k = 0; k < kBasisSize; ++k) {
    const auto& ab = basis[k];
    const TripleElement b = basis_element(k);
    const cplx psi_b = b.m.trace() + b.e + b.f;
    if (max_entry_norm(ab.block(0, 0) + ab.block(1, 1) + ab.e + ab.f - psi_b * id) > eps) return false;
  }
  return true;
}

/// Representation with commuting x, y, z built from random scalar solutions
/// on a diagonal, conjugated by a random unitary; p is a random projection.
template <class Rng>
ARep random_arep(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  std::bernoulli_distribution flip;
  CMatrix x = CMatrix::Zero(dim, dim);
  CMatrix y = CMatrix::Zero(dim, dim);
  CMatrix z = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const cplx yk(normal(rng), normal(rng));
    const cplx zk(normal(rng), normal(rng));
    cplx xk = std::sqrt(-yk * zk);
    if (flip(rng)) xk = -xk;
    const double scale = std::sqrt(2.0 * std::norm(xk) + std::norm(yk) + std::norm(zk));
    x(k, k) = xk / scale;
    y(k, k) = yk / scale;
    z(k, k) = zk / scale;
  }
  const CMatrix u = random_unitary(dim, rng);
  std::uniform_int_distribution<int> rank(0, dim);
  const CMatrix p = random_projection(dim, rank(rng), rng);
  return make_arep(u * x * u.adjoint(), u * y * u.adjoint(), u * z * u.adjoint(), p);
}

template <class Rng>
ARep random_quotient_rep(int dim, Rng& rng) {
  std::uniform_int_distribution<int> rank(0, dim);
  const CMatrix u = random_unitary(dim, rng);
  return quotient_rep(u, random_projection(dim, rank(rng), rng));
}

}  // namespace qmi::m2cc
