#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qmi/json_io.hpp"
#include "qmi/qmi.hpp"

namespace qmi::cli {
namespace {

using nlohmann::json;
namespace jio = qmi::json_io;

struct RunConfig {
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
  int samples = 200;
  int jobs = 1;
  std::string output;
  bool timing = false;
};

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Files are read once; their digests go into the report.
class Inputs {
 public:
  json load(const std::string& role, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + role + " file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    digests_[role] = {{"path", path}, {"fnv1a64", fnv1a64(bytes)}};
    return json::parse(bytes);
  }
  json digests() const { return digests_; }

 private:
  json digests_ = json::object();
};

json parse_inline(const std::string& what, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw InputError(what + " is not valid JSON: " + text);
  }
}

json error_json(std::string_view kind, const std::vector<int>& indices, const std::string& message) {
  return {{"kind", kind}, {"indices", indices}, {"message", message}};
}

m2cc::ARep scalar_rep(cplx x, cplx y, cplx z, cplx p, double eps) {
  auto s = [](cplx v) { return CMatrix::Constant(1, 1, v); };
  return m2cc::make_arep(s(x), s(y), s(z), s(p), eps);
}

json m2cc_entry(const std::string& name, const m2cc::ARep& rep, const RunConfig& cfg) {
  json entry = {{"name", name}, {"rep", jio::to_json(rep)}};
  entry["trace_preserving"] = m2cc::trace_preservation_check(rep, cfg.tolerance);
  entry["comult_self_lift_valid"] = true;
  try {
    (void)m2cc::comult_lift(rep, rep, cfg.tolerance);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RelationViolation && e.kind() != ErrorKind::CommutativityViolation) throw;
    entry["comult_self_lift_valid"] = false;
  }
  entry["admissibility"] = jio::to_json(m2cc::admissibility_check(rep, cfg.samples, cfg.seed, cfg.tolerance));
  return entry;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isometric (quantum) actions on finite metric spaces", "qmi"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--tolerance", cfg.tolerance, "numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for all sampling");
  app.add_option("--samples", cfg.samples, "sample budget")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", cfg.jobs, "worker threads for sample sweeps")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "write the report to this file");
  app.add_flag("--timing", cfg.timing, "include wall-clock timing in the report");

  std::string metric_path;
  std::string magic_path;
  std::string f_text;
  std::string alpha_text;
  std::string beta_text;
  std::string allowed_path;
  std::string rep_path;
  std::string gens_text;

  auto* metric = app.add_subcommand("metric", "finite metric spaces");
  metric->require_subcommand(1);
  auto* metric_validate = metric->add_subcommand("validate", "check the metric axioms");
  metric_validate->add_option("file", metric_path)->required();
  auto* metric_lipnorm = metric->add_subcommand("lipnorm", "Lipschitz seminorm of a function");
  metric_lipnorm->add_option("file", metric_path)->required();
  metric_lipnorm->add_option("--f", f_text, "JSON list of values ([re, im] or real)")->required();

  auto* magic = app.add_subcommand("magic", "magic unitaries");
  magic->require_subcommand(1);
  auto* magic_validate = magic->add_subcommand("validate", "check projections and row/column sums");
  magic_validate->add_option("file", magic_path)->required();
  auto* magic_check = magic->add_subcommand("check-iso", "commutation with the distance matrix");
  magic_check->add_option("--metric", metric_path)->required();
  magic_check->add_option("--magic", magic_path)->required();

  auto* transport = app.add_subcommand("transport", "constrained couplings");
  transport->require_subcommand(1);
  auto* transport_plan = transport->add_subcommand("plan", "max-flow plan or Hall cut");
  transport_plan->add_option("--alpha", alpha_text, "JSON list")->required();
  transport_plan->add_option("--beta", beta_text, "JSON list")->required();
  transport_plan->add_option("--allowed", allowed_path, "JSON n x n relation file")->required();

  auto* decide = app.add_subcommand("decide", "decide 1-isometry with certificates or a witness");
  decide->add_option("--metric", metric_path)->required();
  decide->add_option("--magic", magic_path)->required();

  auto* group = app.add_subcommand("group", "classical isometry groups");
  group->require_subcommand(1);
  auto* group_iso = group->add_subcommand("isometries", "isometry group of a metric");
  group_iso->add_option("--metric", metric_path)->required();
  auto* group_restrict = group->add_subcommand("restrict", "largest isometric subgroup of <gens>");
  group_restrict->add_option("--metric", metric_path)->required();
  group_restrict->add_option("--gens", gens_text, "JSON list of one-line permutations")->required();

  auto* m2 = app.add_subcommand("m2cc", "the M2(C) + C + C example");
  m2->require_subcommand(1);
  auto* m2_demo = m2->add_subcommand("demo", "relations, trace preservation, admissibility");
  m2_demo->add_option("--rep", rep_path, "representation JSON file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qmi: " << e.what() << "\n" << "run 'qmi --help' for usage\n";
    return kExitInputError;
  }

  const auto started = std::chrono::steady_clock::now();
  Inputs inputs;
  json report = {{"command", args}};
  int code = kExitOk;
  try {
    json result;
    if (*metric_validate) {
      const auto space = jio::metric_from(inputs.load("metric", metric_path));
      result = {{"valid", true}, {"n", space.size()}, {"levels", distance_levels(space).values}};
    } else if (*metric_lipnorm) {
      const auto space = jio::metric_from(inputs.load("metric", metric_path));
      const auto f = jio::function_from(parse_inline("--f", f_text));
      result = {{"lipnorm", lipnorm(space, f)}};
    } else if (*magic_validate) {
      const auto a = jio::magic_from(inputs.load("magic", magic_path), cfg.tolerance);
      result = {{"valid", true}, {"n", a.n()}, {"dim", a.dim()}};
    } else if (*magic_check) {
      const auto space = jio::metric_from(inputs.load("metric", metric_path));
      const auto a = jio::magic_from(inputs.load("magic", magic_path), cfg.tolerance);
      result = jio::to_json(check_commutation(a, space, cfg.tolerance));
    } else if (*transport_plan) {
      CouplingProblem prob;
      prob.alpha = jio::reals_from(parse_inline("--alpha", alpha_text));
      prob.beta = jio::reals_from(parse_inline("--beta", beta_text));
      prob.allowed = jio::relation_from(inputs.load("allowed", allowed_path), prob.n());
      result = jio::to_json(solve_transport(prob, cfg.tolerance));
      if (prob.n() <= kHallExhaustiveLimit) {
        const auto hall = hall_check(prob, cfg.tolerance);
        result["hall"] = hall ? json{{"ok", false}, {"certificate", jio::to_json(*hall)}} : json{{"ok", true}};
      }
    } else if (*decide) {
      const auto space = jio::metric_from(inputs.load("metric", metric_path));
      const auto a = jio::magic_from(inputs.load("magic", magic_path), cfg.tolerance);
      DecideOptions opts;
      opts.eps = cfg.tolerance;
      opts.samples = cfg.samples;
      opts.seed = cfg.seed;
      opts.jobs = cfg.jobs;
      result = jio::to_json(decide_isometric(a, space, opts));
    } else if (*group_iso) {
      const auto space = jio::metric_from(inputs.load("metric", metric_path));
      result = jio::to_json(isometry_group(space));
    } else if (*group_restrict) {
      const auto space = jio::metric_from(inputs.load("metric", metric_path));
      std::vector<Permutation> gens;
      for (const auto& g : parse_inline("--gens", gens_text)) gens.push_back(jio::permutation_from(g));
      result = jio::to_json(largest_isometric_subgroup(space.size(), gens, space));
    } else if (*m2_demo) {
      json reps = json::array();
      if (!rep_path.empty()) {
        reps.push_back(m2cc_entry(rep_path, jio::arep_from(inputs.load("rep", rep_path), cfg.tolerance), cfg));
      } else {
        CMatrix swap(2, 2);
        swap << 0, 1, 1, 0;
        CMatrix proj = CMatrix::Zero(2, 2);
        proj(0, 0) = 1.0;
        reps.push_back(m2cc_entry("quotient_swap", m2cc::quotient_rep(swap, proj, cfg.tolerance), cfg));
        reps.push_back(m2cc_entry("phase_rotation", scalar_rep(0, 0, std::polar(1.0, 0.7), 1, cfg.tolerance), cfg));
        reps.push_back(m2cc_entry("non_admissible", scalar_rep(0.3, 0.9, -0.1, 1, cfg.tolerance), cfg));
      }
      result = {{"reps", std::move(reps)}};
    }
    report["result"] = std::move(result);
  } catch (const Error& e) {
    code = is_internal(e.kind()) ? kExitInternal : kExitInputError;
    report["error"] = error_json(to_string(e.kind()), e.indices(), e.what());
    err << "qmi: " << e.what() << "\n";
  } catch (const InputError& e) {
    code = kExitInputError;
    report["error"] = error_json("InputError", {}, e.what());
    err << "qmi: " << e.what() << "\n";
  } catch (const json::exception& e) {
    code = kExitInputError;
    report["error"] = error_json("InvalidJson", {}, e.what());
    err << "qmi: " << e.what() << "\n";
  }

  report["inputs"] = inputs.digests();
  report["config"] = {{"tolerance", cfg.tolerance}, {"seed", cfg.seed}, {"samples", cfg.samples}, {"jobs", cfg.jobs}};
  if (cfg.timing) {
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  }

  const std::string text = report.dump(2) + "\n";
  if (cfg.output.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      err << "qmi: cannot write '" << cfg.output << "'\n";
      return kExitInputError;
    }
    file << text;
  }
  return code;
}

}  // namespace qmi::cli
