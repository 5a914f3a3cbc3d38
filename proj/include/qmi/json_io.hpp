#pragma once

// JSON forms of the library types. Complex numbers are [re, im] pairs (a bare
// number is accepted on input as a real value); points and permutations are
// 1-based.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "qmi/classical_group.hpp"
#include "qmi/error.hpp"
#include "qmi/isometry_check.hpp"
#include "qmi/m2cc.hpp"
#include "qmi/magic_unitary.hpp"
#include "qmi/matrix_core.hpp"
#include "qmi/metric_space.hpp"
#include "qmi/transport.hpp"

namespace qmi::json_io {

using nlohmann::json;

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::Shape, {}, what);
}

inline cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline CMatrix matrix_from(const json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  require(j[0].is_array(), "matrix rows must be lists");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    require(j[r].is_array() && static_cast<Eigen::Index>(j[r].size()) == cols, "ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(j[r][c]);
  }
  return m;
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexFunction function_from(const json& j) {
  require(j.is_array(), "function must be a list");
  ComplexFunction f(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) f[static_cast<Eigen::Index>(i)] = complex_from(j[i]);
  return f;
}

inline json to_json(const ComplexFunction& f) {
  json out = json::array();
  for (Eigen::Index i = 0; i < f.size(); ++i) out.push_back(to_json(f[i]));
  return out;
}

inline std::vector<double> reals_from(const json& j) {
  require(j.is_array(), "expected a list of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    require(v.is_number(), "expected a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// {"n": int, "d": [[real]]}
inline FiniteMetricSpace metric_from(const json& j) {
  require(j.is_object() && j.contains("d"), "metric must be an object with \"d\"");
  const auto& d = j.at("d");
  require(d.is_array(), "\"d\" must be a matrix");
  std::vector<std::vector<double>> rows;
  for (const auto& row : d) rows.push_back(reals_from(row));
  if (j.contains("n")) {
    require(j.at("n").is_number_integer() && j.at("n").get<std::size_t>() == rows.size(),
            "\"n\" does not match the matrix size");
  }
  return validate_metric(rows);
}

inline json to_json(const FiniteMetricSpace& space) {
  return {{"n", space.size()}, {"d", to_json(space.matrix())}};
}

// {"n": int, "dim": int, "entries": [[matrix]]}
inline MagicUnitary magic_from(const json& j, double eps) {
  require(j.is_object() && j.contains("entries"), "magic unitary must be an object with \"entries\"");
  const auto& e = j.at("entries");
  require(e.is_array(), "\"entries\" must be a grid");
  std::vector<std::vector<CMatrix>> grid;
  for (const auto& row : e) {
    require(row.is_array(), "\"entries\" rows must be lists");
    std::vector<CMatrix> r;
    for (const auto& m : row) r.push_back(matrix_from(m));
    grid.push_back(std::move(r));
  }
  const auto magic = validate_magic(grid, eps);
  if (j.contains("n")) require(j.at("n").get<int>() == magic.n(), "\"n\" does not match the grid");
  if (j.contains("dim")) require(j.at("dim").get<int>() == magic.dim(), "\"dim\" does not match the entries");
  return magic;
}

inline json to_json(const MagicUnitary& a) {
  json grid = json::array();
  for (int i = 0; i < a.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.n(); ++j) row.push_back(to_json(a(i, j)));
    grid.push_back(std::move(row));
  }
  return {{"n", a.n()}, {"dim", a.dim()}, {"entries", std::move(grid)}};
}

// {"dim": int, "rho": [[[re, im]]]}
inline State state_from(const json& j) {
  require(j.is_object() && j.contains("rho"), "state must be an object with \"rho\"");
  State s(matrix_from(j.at("rho")));
  if (j.contains("dim")) require(j.at("dim").get<int>() == s.dim(), "\"dim\" does not match \"rho\"");
  return s;
}

inline json to_json(const State& s) { return {{"dim", s.dim()}, {"rho", to_json(s.rho())}}; }

inline Permutation permutation_from(const json& j) {
  require(j.is_array(), "permutation must be a list of images");
  Permutation p;
  for (const auto& v : j) {
    require(v.is_number_integer(), "permutation images must be integers");
    p.push_back(v.get<int>() - 1);
  }
  check_bijection(p);
  return p;
}

inline json to_json(const Permutation& p) {
  json out = json::array();
  for (int v : p) out.push_back(v + 1);
  return out;
}

inline json to_json(const PermutationGroup& g) {
  json elems = json::array();
  for (const auto& p : g.elements) elems.push_back(to_json(p));
  return {{"n", g.n}, {"order", g.order()}, {"elements", std::move(elems)}};
}

inline std::vector<char> relation_from(const json& j, int n) {
  const json& m = j.is_object() && j.contains("allowed") ? j.at("allowed") : j;
  require(m.is_array() && static_cast<int>(m.size()) == n, "allowed relation must be n x n");
  std::vector<char> out;
  for (const auto& row : m) {
    require(row.is_array() && static_cast<int>(row.size()) == n, "allowed relation must be n x n");
    for (const auto& v : row) {
      require(v.is_boolean() || v.is_number_integer(), "allowed entries must be booleans or 0/1");
      out.push_back(v.is_boolean() ? char(v.get<bool>()) : char(v.get<int>() != 0));
    }
  }
  return out;
}

inline json to_json(const CutCertificate& c) {
  json z = json::array();
  for (int i : c.z) z.push_back(i + 1);
  return {{"Z", std::move(z)}, {"deficit", c.deficit}};
}

inline json to_json(const TransportResult& r) {
  if (const auto* plan = std::get_if<TransportPlan>(&r)) {
    return {{"feasible", true}, {"lambda", to_json(plan->lambda)}};
  }
  return {{"feasible", false}, {"certificate", to_json(std::get<CutCertificate>(r))}};
}

inline json to_json(const CommutationReport& r) {
  json v = json::array();
  for (const auto& q : r.violations) v.push_back({q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1});
  return {{"commutes", r.commutes}, {"residual", r.residual}, {"violations", std::move(v)}};
}

inline json to_json(const PairCertificate& c) {
  return {{"x", c.x + 1},          {"y", c.y + 1},
          {"lambda", to_json(c.plan.lambda)},
          {"lhs", c.lhs},          {"transported", c.transported},
          {"bound", c.bound},      {"mass", c.mass}};
}

inline json to_json(const TestFunction& f) {
  json out = {{"kind", f.kind == TestFunctionKind::Distance ? "distance" : "sphere_indicator"},
              {"point", f.point + 1},
              {"values", to_json(f.values)}};
  if (f.kind == TestFunctionKind::SphereIndicator) out["level"] = f.level;
  return out;
}

inline json to_json(const Witness& w) {
  json out = {{"state", to_json(w.omega)},
              {"function", to_json(w.f)},
              {"defect", w.defect},
              {"route", w.route == WitnessRoute::QuadrupleEigenvector ? "quadruple_eigenvector"
                                                                      : "random_state"}};
  if (w.quadruple) {
    const auto& q = *w.quadruple;
    out["quadruple"] = {q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1};
  }
  return out;
}

inline json to_json(const IsometryVerdict& v) {
  json out = {{"verdict", v.isometric ? "isometric" : "not_isometric"},
              {"commutation", to_json(v.commutation)}};
  if (v.isometric) {
    json certs = json::array();
    for (const auto& c : v.certificates) certs.push_back(to_json(c));
    out["corroboration"] = {{"samples", v.samples}, {"max_defect", v.max_sampled_defect}};
    out["certificates"] = std::move(certs);
  } else if (v.witness) {
    out["witness_status"] = "found";
    out["witness"] = to_json(*v.witness);
  } else {
    out["witness_status"] = "no witness found among enumerated candidates";
    out["witness"] = nullptr;
  }
  return out;
}

// {"dim": int, "x": matrix, "y": matrix, "z": matrix, "p": matrix}
inline m2cc::ARep arep_from(const json& j, double eps) {
  require(j.is_object() && j.contains("x") && j.contains("y") && j.contains("z") && j.contains("p"),
          "representation must have \"x\", \"y\", \"z\", \"p\"");
  auto rep = m2cc::make_arep(matrix_from(j.at("x")), matrix_from(j.at("y")), matrix_from(j.at("z")),
                             matrix_from(j.at("p")), eps);
  if (j.contains("dim")) require(j.at("dim").get<int>() == rep.dim, "\"dim\" does not match generators");
  return rep;
}

inline json to_json(const m2cc::ARep& r) {
  return {{"dim", r.dim}, {"x", to_json(r.x)}, {"y", to_json(r.y)}, {"z", to_json(r.z)}, {"p", to_json(r.p)}};
}

inline json to_json(const m2cc::TripleElement& b) {
  return {{"m", to_json(CMatrix(b.m))}, {"e", to_json(b.e)}, {"f", to_json(b.f)}};
}

inline json to_json(const m2cc::AdmissibilityReport& r) {
  json out = {{"admissible", r.admissible}, {"evaluations", r.evaluations}, {"max_defect", r.max_defect}};
  if (r.witness) {
    out["witness"] = {{"element", r.witness->b_label},
                      {"b", to_json(r.witness->b)},
                      {"state", to_json(r.witness->omega)},
                      {"defect", r.witness->defect}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

}  // namespace qmi::json_io
