#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmi {

enum class ErrorKind {
  // metric_space
  Asymmetry,
  Diagonal,
  Triangle,
  NonPositive,
  NotFinite,
  Index,
  LengthMismatch,
  // matrix_core
  NonSquare,
  DimMismatch,
  NullConjugator,
  InvalidState,
  // magic_unitary
  NotProjection,
  RowSum,
  ColSum,
  Shape,
  NotBijection,
  PointCountMismatch,
  InternalDisagreement,
  // transport
  InvalidProblem,
  // isometry_check
  SizeMismatch,
  CommutationRequired,
  Inconsistent,
  // m2cc
  RelationViolation,
  CommutativityViolation,
  NotUnitary,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Asymmetry: return "AsymmetryError";
    case ErrorKind::Diagonal: return "DiagonalError";
    case ErrorKind::Triangle: return "TriangleError";
    case ErrorKind::NonPositive: return "NonPositiveError";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::Index: return "IndexError";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NullConjugator: return "NullConjugator";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::RowSum: return "RowSum";
    case ErrorKind::ColSum: return "ColSum";
    case ErrorKind::Shape: return "ShapeError";
    case ErrorKind::NotBijection: return "NotBijection";
    case ErrorKind::PointCountMismatch: return "PointCountMismatch";
    case ErrorKind::InternalDisagreement: return "InternalDisagreement";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::CommutationRequired: return "CommutationRequired";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::RelationViolation: return "RelationViolation";
    case ErrorKind::CommutativityViolation: return "CommutativityViolation";
    case ErrorKind::NotUnitary: return "NotUnitary";
  }
  return "Unknown";
}

/// True for failures that indicate a bug or numerical breakdown rather than
/// bad input. The CLI maps these to exit code 2.
inline bool is_internal(ErrorKind kind) {
  return kind == ErrorKind::InternalDisagreement ||
         kind == ErrorKind::Inconsistent;
}

/// Structured library error. `indices` are 1-based point indices (or other
/// 1-based positions) locating the violation; `detail` names a relation or
/// pair where indices do not apply.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::vector<int> indices, std::string detail = {})
      : std::runtime_error(format(kind, indices, detail)),
        kind_(kind),
        indices_(std::move(indices)),
        detail_(std::move(detail)) {}

  ErrorKind kind() const { return kind_; }
  const std::vector<int>& indices() const { return indices_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string format(ErrorKind kind, const std::vector<int>& indices,
                            const std::string& detail) {
    std::string s(to_string(kind));
    if (!indices.empty()) {
      s += '(';
      for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(indices[i]);
      }
      s += ')';
    }
    if (!detail.empty()) s += ": " + detail;
    return s;
  }

  ErrorKind kind_;
  std::vector<int> indices_;
  std::string detail_;
};

}  // namespace qmi
