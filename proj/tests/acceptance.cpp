// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "oracles.hpp"
#include "qmi/qmi.hpp"

namespace {

using namespace qmi;
using qmi::testing::Instance;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) detail << "first failure: " << what << "; ";
    pass = pass && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const char* id, const char* title, const std::function<void(Verdict&)>& body,
            double time_limit = 0.0) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = seconds_since(t0);
  if (time_limit > 0.0) {
    std::ostringstream what;
    what << "runtime " << elapsed << " s exceeds " << time_limit << " s";
    v.require(elapsed < time_limit, what.str());
  }
  if (!v.pass) ++failures;
  std::printf("%s %s %s: %s(%.2f s)\n", id, v.pass ? "PASS" : "FAIL", title, v.detail.str().c_str(), elapsed);
  std::fflush(stdout);
}

constexpr std::uint64_t kSeed = 20240601;

void criterion_equivalence(Verdict& v, const std::vector<Instance>& instances) {
  constexpr double eps = 1e-8;
  int disagreements = 0;
  int commuting = 0;
  for (const auto& inst : instances) {
    const int n = inst.grid.n();
    const bool by_residual = oracle::dense_commutator(inst.grid, inst.space) <= double(n) * n * eps;
    const bool by_quadruples = commutation_violations(inst.grid, inst.space, eps).empty();
    bool library_ok = true;
    try {
      library_ok = check_commutation(inst.grid, inst.space, eps).commutes == by_quadruples;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalDisagreement) throw;
      library_ok = false;
    }
    if (by_residual != by_quadruples || !library_ok) {
      ++disagreements;
      v.require(false, inst.label);
    }
    commuting += by_quadruples;
  }
  v.require(instances.size() >= 200, "fewer than 200 instances");
  v.detail << instances.size() << " instances (" << commuting << " commuting), " << disagreements
           << " disagreements at tol 1e-8 ";
}

void commutation_implies_isometry(Verdict& v, const std::vector<Instance>& instances) {
  constexpr double tol = 1e-8;
  constexpr int samples = 200;
  std::mt19937_64 rng(kSeed + 2);
  int checked = 0;
  long couplings = 0;
  int cuts = 0;
  double worst = -1e300;
  for (const auto& inst : instances) {
    if (!check_commutation(inst.grid, inst.space, tol).commutes) continue;
    ++checked;
    const int n = inst.grid.n();
    for (int s = 0; s < samples; ++s) {
      const State omega = random_pure_state(inst.grid.dim(), rng);
      const ComplexFunction f =
          s % 2 == 0 ? random_function(n, rng) : distance_function(inst.space, (s / 2) % n);
      const double defect = lipdefect(inst.grid, inst.space, omega, f);
      worst = std::max(worst, defect);
      if (defect > tol) v.require(false, inst.label + " sampled defect");
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          ++couplings;
          if (std::holds_alternative<CutCertificate>(coupling_for_pair(inst.grid, inst.space, omega, x, y))) {
            ++cuts;
            v.require(false, inst.label + " cut certificate");
          }
        }
      }
    }
  }
  v.require(checked > 0, "no commuting instances");
  v.detail << checked << " commuting instances x " << samples << " samples, max defect " << worst << ", "
           << couplings << " pair couplings, " << cuts << " cut certificates ";
}

void classical_witnesses(Verdict& v) {
  constexpr double tol = 1e-6;
  int cases = 0;
  int not_found = 0;
  double smallest = 1e300;
  for (const auto& m : testing::corpus_metrics()) {
    if (m.space.size() > 6) continue;
    const auto group = isometry_group(m.space);
    for (const auto& p : testing::all_permutations(m.space.size())) {
      if (group.contains(p)) continue;
      ++cases;
      WitnessOptions opts;
      opts.include_spheres = false;
      opts.seed = kSeed + 3;
      const auto w = witness_search(from_permutation(p), m.space, opts);
      if (!w || !(w->defect > tol) || w->f.kind != TestFunctionKind::Distance) {
        ++not_found;
        v.require(false, m.name + " permutation without distance-function witness");
        continue;
      }
      smallest = std::min(smallest, w->defect);
    }
  }
  v.require(cases >= 50, "fewer than 50 non-isometric permutations");
  v.detail << cases << " non-isometric permutations (n <= 6), " << not_found << " NotFound, smallest defect "
           << smallest << " ";
}

void quantum_witness(Verdict& v) {
  const auto a = two_block_quantum(testing::hadamard_projection(), testing::diag10());
  const auto w = witness_search(a, testing::skewed());
  v.require(w.has_value(), "no witness");
  if (!w) return;
  const State expected = State::pure(CVector::Ones(2));
  v.require(std::abs(w->defect - 0.25) <= 1e-9, "defect differs from 0.25");
  v.require(max_entry_norm(w->omega.rho() - expected.rho()) <= 1e-9, "state differs from (1,1)/sqrt2");
  v.require(w->f.kind == TestFunctionKind::Distance && w->f.point == 0, "function is not D_1");
  v.detail << "defect " << w->defect << " at pure (1,1)/sqrt2 with D_1 ";
}

CouplingProblem feasible_by_construction(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo;
  std::bernoulli_distribution extra(0.3);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(n, n);
  const int entries = 1 + pick(rng) + pick(rng);
  for (int k = 0; k < entries; ++k) lambda(pick(rng), pick(rng)) += expo(rng);
  lambda /= lambda.sum();
  CouplingProblem p{std::vector<double>(n), std::vector<double>(n), std::vector<char>(std::size_t(n) * n)};
  for (int i = 0; i < n; ++i) {
    p.alpha[i] = lambda.row(i).sum();
    p.beta[i] = lambda.col(i).sum();
    for (int j = 0; j < n; ++j) p.allowed[i * n + j] = lambda(i, j) > 0 || extra(rng);
  }
  return p;
}

CouplingProblem random_problem(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo;
  std::bernoulli_distribution edge(0.3);
  CouplingProblem p{std::vector<double>(n), std::vector<double>(n), std::vector<char>(std::size_t(n) * n)};
  double sa = 0, sb = 0;
  for (int i = 0; i < n; ++i) {
    sa += p.alpha[i] = expo(rng);
    sb += p.beta[i] = expo(rng);
  }
  for (int i = 0; i < n; ++i) {
    p.alpha[i] /= sa;
    p.beta[i] /= sb;
  }
  for (auto& a : p.allowed) a = edge(rng);
  return p;
}

void transport_oracle(Verdict& v) {
  constexpr double eps = 1e-9;
  std::mt19937_64 rng(kSeed + 5);
  int problems = 0, feasible = 0, mismatches = 0, bad_plans = 0;
  for (int t = 0; t < 1200; ++t) {
    const int n = 1 + t % 6;
    const auto p = t % 2 == 0 ? feasible_by_construction(n, rng) : random_problem(n, rng);
    ++problems;
    const auto solved = solve_transport(p, eps);
    const bool flow_ok = std::holds_alternative<TransportPlan>(solved);
    const bool hall_ok = !hall_check(p, eps).has_value();
    const bool brute_ok = oracle::max_hall_deficit(p) <= n * eps;
    if (flow_ok != hall_ok || hall_ok != brute_ok || (t % 2 == 0 && !flow_ok)) {
      ++mismatches;
      v.require(false, "feasibility mismatch on problem " + std::to_string(t));
    }
    if (flow_ok) {
      ++feasible;
      if (!plan_satisfies(p, std::get<TransportPlan>(solved), eps)) {
        ++bad_plans;
        v.require(false, "plan invariants on problem " + std::to_string(t));
      }
    }
  }
  // Isolated point 3: V1={2}, V2={1}, V3 empty, V4={5}, V5={4}.
  const std::vector<double> beta = {0.3, 0.2, 0.0, 0.25, 0.25};
  const std::vector<double> base = {0.2, 0.3, 0.0, 0.25, 0.25};
  int isolated_checks = 0;
  for (double a3 : {0.0, 1e-6, 1e-3, 0.2, 0.5, 1.0}) {
    CouplingProblem p{std::vector<double>(5), beta, std::vector<char>(25, 0)};
    for (int i = 0; i < 5; ++i) p.alpha[i] = (1.0 - a3) * base[i];
    p.alpha[2] = a3;
    p.allowed[0 * 5 + 1] = p.allowed[1 * 5 + 0] = p.allowed[3 * 5 + 4] = p.allowed[4 * 5 + 3] = 1;
    const auto r = solve_transport(p, eps);
    const bool infeasible = std::holds_alternative<CutCertificate>(r);
    v.require(infeasible == (a3 > 0), "isolated-point instance with alpha_3 = " + std::to_string(a3));
    if (infeasible) {
      const auto& z = std::get<CutCertificate>(r).z;
      v.require(std::find(z.begin(), z.end(), 2) != z.end(), "isolated-point cut misses point 3");
    }
    ++isolated_checks;
  }
  v.require(problems >= 1000, "fewer than 1000 problems");
  v.detail << problems << " problems (" << feasible << " feasible), " << mismatches << " mismatches, " << bad_plans
           << " plans violating invariants at n*1e-9; isolated point " << isolated_checks << " alpha_3 values ";
}

std::vector<m2cc::ARep> quotient_corpus(std::mt19937_64& rng) {
  std::vector<m2cc::ARep> reps;
  for (int k = 0; k < 10; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 10.0;
    reps.push_back(m2cc::quotient_rep(testing::scalar(std::polar(1.0, theta)), testing::scalar(k % 2)));
  }
  while (reps.size() < 24) {
    const CMatrix u = random_unitary(2, rng);
    const CMatrix p = random_projection(2, 1, rng);
    if (max_entry_norm(u * p - p * u) < 1e-3) continue;
    reps.push_back(m2cc::quotient_rep(u, p));
  }
  return reps;
}

void m2cc_admissible(Verdict& v) {
  std::mt19937_64 rng(kSeed + 6);
  const auto reps = quotient_corpus(rng);
  double worst = -1e300;
  long evaluations = 0;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const auto r = m2cc::admissibility_check(reps[k], 1000, kSeed + k);
    evaluations += r.evaluations;
    worst = std::max(worst, r.max_defect);
    v.require(r.admissible, "quotient rep not classified admissible");
    v.require(r.max_defect <= 1e-8, "quotient rep defect above 1e-8");
  }
  v.require(reps.size() >= 20, "fewer than 20 reps");
  v.detail << reps.size() << " quotient reps x 1000 states, " << evaluations << " evaluations, max defect "
           << worst << " ";
}

void m2cc_non_admissible(Verdict& v) {
  auto s = testing::scalar;
  const auto rep = m2cc::make_arep(s(0.3), s(0.9), s(-0.1), s(1.0), 1e-12);
  const double defect = m2cc::defect6(rep, State::tracial(1), m2cc::basis_element(1));
  v.require(std::abs(defect - 1.2) <= 1e-9, "defect at e12 differs from 1.2");
  const auto report = m2cc::admissibility_check(rep, 100, kSeed);
  v.require(!report.admissible && report.witness.has_value(), "admissibility check found no witness");
  v.detail << "relations hold to 1e-12, defect at e12 = " << defect << " ";
}

void m2cc_structure(Verdict& v) {
  std::mt19937_64 rng(kSeed + 8);
  std::vector<m2cc::ARep> corpus;
  for (int k = 0; k < 60; ++k) {
    const int dim = 1 + k % 2;
    corpus.push_back(k % 5 == 4 ? m2cc::random_quotient_rep(dim, rng) : m2cc::random_arep(dim, rng));
  }
  int lifts = 0, coassoc = 0, traces = 0;
  double worst_coassoc = 0.0;
  std::vector<m2cc::ARep> lifted;
  for (std::size_t k = 0; k + 1 < corpus.size(); ++k) {
    lifted.push_back(m2cc::comult_lift(corpus[k], corpus[k + 1]));
    ++lifts;
  }
  for (std::size_t k = 0; k + 2 < corpus.size(); k += 3) {
    const auto& a = corpus[k];
    const auto& b = corpus[k + 1];
    const auto& c = corpus[k + 2];
    const auto left = m2cc::comult_lift(m2cc::comult_lift(a, b), c);
    const auto right = m2cc::comult_lift(a, m2cc::comult_lift(b, c));
    for (auto diff : {left.x - right.x, left.y - right.y, left.z - right.z, left.p - right.p}) {
      worst_coassoc = std::max(worst_coassoc, max_entry_norm(diff));
    }
    ++coassoc;
  }
  v.require(worst_coassoc <= 1e-9, "coassociativity above 1e-9");
  corpus.insert(corpus.end(), lifted.begin(), lifted.end());
  auto s = testing::scalar;
  corpus.push_back(m2cc::make_arep(s(0.3), s(0.9), s(-0.1), s(1.0)));
  for (const auto& rep : corpus) {
    ++traces;
    if (!m2cc::trace_preservation_check(rep)) v.require(false, "trace not preserved");
  }
  v.require(lifts >= 50, "fewer than 50 lifts");
  v.detail << lifts << " lifts valid, " << coassoc << " coassociativity triples (max diff " << worst_coassoc
           << "), " << traces << " reps trace preserving ";
}

void cross_module(Verdict& v) {
  int metrics = 0;
  long perms = 0;
  for (const auto& m : testing::corpus_metrics()) {
    if (m.space.size() > 5) continue;
    ++metrics;
    const auto group = isometry_group(m.space);
    for (const auto& p : testing::all_permutations(m.space.size())) {
      ++perms;
      if (group.contains(p) != check_commutation(from_permutation(p), m.space).commutes) {
        v.require(false, m.name + " group membership differs from commutation");
      }
    }
  }
  v.require(metrics >= 10, "fewer than 10 metrics");
  v.detail << metrics << " metrics, " << perms << " permutations ";
}

}  // namespace

int main() {
  std::vector<Instance> instances;
  report("AC1", "criterion equivalence", [&](Verdict& v) {
    instances = testing::commutation_instances(kSeed);
    criterion_equivalence(v, instances);
  }, 10.0);
  report("AC2", "commutation implies 1-isometry", [&](Verdict& v) { commutation_implies_isometry(v, instances); }, 30.0);
  report("AC3", "classical witnesses", classical_witnesses);
  report("AC4", "quantum witness on skewed clusters", quantum_witness);
  report("AC5", "transport oracle equivalence", transport_oracle);
  report("AC6", "M2+C+C admissible quotients", m2cc_admissible, 60.0);
  report("AC7", "M2+C+C non-admissible rep", m2cc_non_admissible);
  report("AC8", "M2+C+C structure", m2cc_structure);
  report("AC9", "isometry group vs commutation", cross_module);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
