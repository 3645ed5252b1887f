#pragma once

// Command-line frontend. `run_cli` is the whole program minus process setup,
// so tests can drive it in-process.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iws/io.hpp"
#include "iws/iws.hpp"

namespace iws::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kMismatch = 3, kEnumerationLimit = 4 };

namespace detail {

using nlohmann::json;

inline std::string fmt(double x, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

inline std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

inline std::string vector_text(std::span<const double> v, int digits = 5) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fixed(v[i], digits);
  return s + ")";
}

inline std::string order_text(const Population& pop, const std::vector<std::size_t>& order) {
  std::string s;
  for (std::size_t i : order) s += (s.empty() ? "" : " ") + pop.id(i);
  return s;
}

struct QOptions {
  bool optimal = false;
  bool uniform = false;
  std::string file;
  std::size_t restarts = 8;
};

struct ResolvedQ {
  std::optional<InspectionWeights> q;
  std::string source = "none";
};

// `fallback_optimal` lets evaluate default to the closed-form optimum for J/MN.
inline ResolvedQ resolve_q(Model model, const Population& pop, const QOptions& opt, std::uint64_t seed,
                           std::size_t limit, bool fallback_optimal) {
  if (!needs_weights(model)) return {};
  if (!opt.file.empty()) return {InspectionWeights(load_keyed_column(opt.file, pop, "q")), "file:" + opt.file};
  if (opt.uniform) return {InspectionWeights::uniform(pop.size()), "uniform"};
  const bool closed_form = model == Model::J || model == Model::MN;
  if (opt.optimal || (fallback_optimal && closed_form)) {
    if (model == Model::J) return {j_optimal_q(pop), "optimal"};
    if (model == Model::MN) return {mn_optimal_q(pop), "optimal"};
    return {ikl_search_q(pop, opt.restarts, seed, limit).q, "search"};
  }
  throw validation_error("model " + std::string(to_string(model)) +
                         " needs inspection weights: pass --optimal-q, --uniform-q or --q-file");
}

inline void add_q_flags(CLI::App* cmd, QOptions& q) {
  auto* optimal = cmd->add_flag("--optimal-q", q.optimal,
                                "J/MN: closed-form optimum; IKL/OP: heuristic search (seeded by --seed)");
  auto* uniform = cmd->add_flag("--uniform-q", q.uniform, "uniform inspection weights");
  auto* file = cmd->add_option("--q-file", q.file, "CSV with a q column (optionally keyed by id)");
  optimal->excludes(uniform)->excludes(file);
  uniform->excludes(file);
  cmd->add_option("--restarts", q.restarts, "random restarts for the IKL/OP weight search")->capture_default_str();
}

class OutputDir {
 public:
  explicit OutputDir(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  std::ofstream open(const std::string& name) {
    outputs_.push_back(name);
    std::ofstream os(std::filesystem::path(dir_) / name);
    if (!os) throw validation_error("cannot write `" + (std::filesystem::path(dir_) / name).string() + "`");
    return os;
  }

  void write_manifest(RunManifest manifest) {
    if (!enabled()) return;
    manifest.version = kVersion;
    manifest.outputs = outputs_;
    std::ofstream os(std::filesystem::path(dir_) / "manifest.json");
    os << to_json(manifest).dump(2) << '\n';
  }

 private:
  std::string dir_;
  std::vector<std::string> outputs_;
};

inline json q_json(const ResolvedQ& q) {
  if (!q.q) return nullptr;
  return json(std::vector<double>(q.q->q().begin(), q.q->q().end()));
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string model, input, out;
  double eps = kDefaultScheduleEps;
  std::size_t max_steps = kDefaultScheduleMaxSteps;
  std::size_t horizon = 0;
  std::size_t limit = kDefaultEnumerationLimit;
  std::uint64_t seed = 0;
  bool dist = false;
  QOptions q;
};

inline void print_defective(std::ostream& out, const DefectiveSummary& s) {
  if (s.mean_is_infinite) {
    out << "mean: ∞ (detect_prob=" << fixed(s.detect_prob, 3)
        << ", conditional mean=" << fixed(s.conditional_mean, 3) << ")\n";
    out << "mean given detection: " << fmt(s.detected_mean) << '\n';
  } else {
    out << "mean: " << fmt(s.conditional_mean) << '\n';
  }
}

inline json defective_json(const DefectiveSummary& s) {
  return {{"mean", s.mean_is_infinite ? json(nullptr) : json(s.conditional_mean)},
          {"mean_is_infinite", s.mean_is_infinite},
          {"detect_prob", s.detect_prob},
          {"conditional_mean", s.conditional_mean},
          {"detected_mean", s.detected_mean}};
}

inline int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto model = parse_model(a.model);
  if (!model) throw validation_error("unknown model `" + a.model + "` (expected ABCD, EF, GH, IKL, J, MN or OP)");
  const Population pop = load_population(a.input).population;
  const ResolvedQ q = resolve_q(*model, pop, a.q, a.seed, a.limit, true);

  json summary{{"model", a.model}, {"n", pop.size()}, {"ids", pop.ids()}};
  std::optional<InspectionDistribution> dist;
  out << "model " << a.model << ", N=" << pop.size() << '\n';

  switch (*model) {
    case Model::ABCD: {
      const AbcdResult r = abcd_policy(pop);
      out << "order: " << order_text(pop, r.policy.order) << '\n' << "mean: " << fmt(r.mean) << '\n';
      summary["order"] = r.policy.order;
      summary["mean"] = r.mean;
      if (a.dist) dist = dist_abcd(pop);
      break;
    }
    case Model::EF: {
      const Schedule sched = ef_schedule(pop, a.eps, a.max_steps);
      const EfMean m = ef_mean(sched);
      constexpr std::size_t kShown = 20;
      std::vector<std::size_t> prefix;
      for (std::size_t k = 0; k < std::min(kShown, sched.steps.size()); ++k) prefix.push_back(sched.steps[k].item);
      out << "schedule: " << order_text(pop, prefix) << (sched.steps.size() > kShown ? " ..." : "") << " ("
          << sched.steps.size() << " steps)\n";
      out << "mean: " << fmt(m.partial_mean) << " (residual mass " << fmt(m.residual_mass, 3) << ")\n";
      json steps = json::array();
      for (const auto& s : sched.steps) steps.push_back(s.item);
      summary["schedule"] = steps;
      summary["mean"] = m.partial_mean;
      summary["residual_mass"] = m.residual_mass;
      if (a.dist) dist = dist_ef(sched);
      break;
    }
    case Model::GH: {
      const DefectiveSummary s = gh_summary(pop);
      out << "order: " << order_text(pop, descending_order(pop).order) << '\n';
      print_defective(out, s);
      summary.update(defective_json(s));
      summary["order"] = descending_order(pop).order;
      if (a.dist) dist = dist_gh(pop);
      break;
    }
    case Model::IKL: {
      const double mean = ikl_mean_exact(pop, *q.q, a.limit);
      out << "q (" << q.source << "): " << vector_text(q.q->q()) << '\n' << "mean: " << fmt(mean) << '\n';
      summary["mean"] = mean;
      if (a.dist) dist = dist_ikl_exact(pop, *q.q, a.limit);
      break;
    }
    case Model::J:
    case Model::MN: {
      const bool j = *model == Model::J;
      const double mean = j ? j_mean(pop, *q.q) : mn_mean(pop, *q.q);
      out << (q.source == "optimal" ? "q*: " : "q (" + q.source + "): ") << vector_text(q.q->q()) << '\n'
          << "mean: " << fmt(mean) << '\n';
      summary["mean"] = mean;
      if (a.dist) dist = j ? dist_j(pop, *q.q, a.horizon) : dist_mn(pop, *q.q, a.horizon);
      break;
    }
    case Model::OP: {
      const DefectiveSummary s = op_summary(pop, *q.q, a.limit);
      out << "q (" << q.source << "): " << vector_text(q.q->q()) << '\n';
      print_defective(out, s);
      summary.update(defective_json(s));
      if (a.dist) dist = dist_op_exact(pop, *q.q, a.limit);
      break;
    }
  }
  summary["q_source"] = q.source;
  summary["q"] = q_json(q);

  OutputDir dir(a.out);
  if (dir.enabled()) {
    dir.open("evaluate.json") << summary.dump(2) << '\n';
    if (dist) {
      auto os = dir.open("distribution.csv");
      write_distribution_csv(os, *dist);
    }
    dir.write_manifest({"evaluate", a.input,
                        {{"model", a.model}, {"eps", a.eps}, {"max_steps", a.max_steps}, {"horizon", a.horizon},
                         {"enumeration_limit", a.limit}, {"seed", a.seed}, {"q_source", q.source},
                         {"restarts", a.q.restarts}, {"distribution", a.dist}},
                        {}, {}});
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string model, input, out;
  std::uint64_t reps = 0, seed = 0;
  std::uint64_t max_steps = kDefaultSimMaxSteps;
  double eps = kDefaultScheduleEps;
  std::size_t horizon = 0;
  std::size_t limit = kDefaultEnumerationLimit;
  unsigned threads = 1;
  bool check_exact = false;
  double alpha = 0.001;
  QOptions q;
};

inline std::optional<InspectionDistribution> exact_law(Model model, const Population& pop,
                                                       const std::optional<InspectionWeights>& q,
                                                       const SimulateArgs& a) {
  switch (model) {
    case Model::ABCD: return dist_abcd(pop);
    case Model::EF: return dist_ef(ef_schedule(pop, a.eps));
    case Model::GH: return dist_gh(pop);
    case Model::J: return dist_j(pop, *q, a.horizon);
    case Model::MN: return dist_mn(pop, *q, a.horizon);
    case Model::IKL:
    case Model::OP:
      if (pop.size() > a.limit) return std::nullopt;
      return model == Model::IKL ? dist_ikl_exact(pop, *q, a.limit) : dist_op_exact(pop, *q, a.limit);
  }
  return std::nullopt;
}

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto model = parse_model(a.model);
  if (!model) throw validation_error("unknown model `" + a.model + "` (expected ABCD, EF, GH, IKL, J, MN or OP)");
  const Population pop = load_population(a.input).population;
  const ResolvedQ q = resolve_q(*model, pop, a.q, a.seed, a.limit, false);

  SimConfig cfg;
  cfg.model = *model;
  cfg.reps = a.reps;
  cfg.seed = a.seed;
  cfg.max_steps = a.max_steps;
  cfg.q = q.q;
  cfg.ef_eps = a.eps;
  cfg.threads = a.threads;
  const EmpiricalResult emp = simulate(pop, cfg);

  const double censored = static_cast<double>(emp.censored) / static_cast<double>(emp.reps);
  out << "model " << a.model << ", reps=" << emp.reps << ", seed=" << a.seed << '\n';
  out << "detected: " << emp.detected() << ", censored: " << emp.censored << " (" << fmt(censored) << ")\n";
  if (emp.detected() > 0) {
    out << "mean given detection: " << fmt(emp.mean_detected) << " ± " << fmt(emp.stderr_mean, 3) << '\n';
  }

  int status = kOk;
  json check = nullptr;
  if (a.check_exact) {
    const auto exact = exact_law(*model, pop, q.q, a);
    if (!exact) {
      out << "exact law: not computable for N=" << pop.size() << " (limit " << a.limit << "), check skipped\n";
      check = {{"computed", false}};
    } else {
      const bool pass = dkw_check(emp, *exact, a.alpha);
      const double exact_mean = exact->finite_mass() > 0.0 ? exact->conditional_mean() : 0.0;
      out << "exact mean given detection: " << fmt(exact_mean) << ", exact atom: " << fmt(exact->atom_at_infinity())
          << '\n';
      out << "DKW check (alpha=" << a.alpha << ", band=" << fmt(dkw_band(emp.reps, a.alpha), 3)
          << "): " << (pass ? "pass" : "FAIL") << '\n';
      check = {{"computed", true}, {"alpha", a.alpha}, {"pass", pass}, {"exact_conditional_mean", exact_mean},
               {"exact_atom", exact->atom_at_infinity()}};
      if (!pass) status = kMismatch;
    }
  }

  OutputDir dir(a.out);
  if (dir.enabled()) {
    const json params{{"model", a.model}, {"reps", a.reps}, {"seed", a.seed}, {"max_steps", a.max_steps},
                      {"eps", a.eps}, {"horizon", a.horizon}, {"enumeration_limit", a.limit},
                      {"q_source", q.source}, {"q", q_json(q)}, {"restarts", a.q.restarts},
                      {"check_exact", a.check_exact}, {"alpha", a.alpha}};
    auto os = dir.open("empirical.csv");
    write_empirical_csv(os, emp, params.dump());
    if (!check.is_null()) dir.open("check.json") << check.dump(2) << '\n';
    dir.write_manifest({"simulate", a.input, params, {}, {}});
  }
  return status;
}

// ---------------------------------------------------------------------------

struct OrderArgs {
  std::string input, out, law = "per-item";
  double eps = 1e-13, tol = kDefaultCompareTolerance;
  std::size_t horizon = 0, limit = kDefaultEnumerationLimit;
  std::uint64_t seed = 0;
  bool sqrt_q = false;
  QOptions q;
};

inline int cmd_order(const OrderArgs& a, std::ostream& out) {
  const auto law = parse_detection_law(a.law);
  if (!law) throw validation_error("unknown detection law `" + a.law + "` (expected per-item or independent)");
  const Population pop = load_population(a.input).population;

  Theorem1Options opt;
  opt.law = *law;
  opt.tolerance = a.tol;
  opt.ef_eps = a.eps;
  opt.horizon = a.horizon;
  opt.enumeration_limit = a.limit;
  std::string q_source = "uniform";
  if (a.sqrt_q) {
    opt.ikl_q = j_optimal_q(pop);
    q_source = "sqrt-p";
  } else if (!a.q.file.empty() || a.q.optimal) {
    const ResolvedQ q = resolve_q(Model::IKL, pop, a.q, a.seed, a.limit, false);
    opt.ikl_q = q.q;
    q_source = q.source;
  }
  const OrderingReport report = theorem1_report(pop, opt);

  out << "N=" << pop.size() << ", law " << a.law << ", IKL/OP weights " << q_source << ' '
      << vector_text(report.ikl_q) << '\n';
  out << std::left << std::setw(6) << "";
  for (Model m : kAllModels) out << std::setw(13) << to_string(m);
  out << '\n';
  for (Model r : kAllModels) {
    out << std::setw(6) << to_string(r);
    for (Model c : kAllModels) out << std::setw(13) << (r == c ? "=" : to_string(report.relation(r, c)));
    out << '\n';
  }
  out << std::right;
  for (std::size_t idx : report.mismatches) {
    const PairCheck& pc = report.pairs[idx];
    out << "MISMATCH " << to_string(pc.x) << " vs " << to_string(pc.y) << ": expected " << to_string(pc.expected)
        << ", got " << to_string(pc.verdict.relation);
    if (pc.verdict.witnesses) {
      out << " (witnesses m=" << pc.verdict.witnesses->favors_x << ", m=" << pc.verdict.witnesses->favors_y << ")";
    }
    out << '\n';
  }
  for (const auto& v : report.corollary_violations) out << "MEAN ORDER VIOLATION " << v << '\n';
  const bool ok = report.mismatches.empty() && report.corollary_violations.empty();
  out << (ok ? "all ordered relations verified" : "ordering mismatches: " + std::to_string(report.mismatches.size()))
      << '\n';

  OutputDir dir(a.out);
  if (dir.enabled()) {
    dir.open("ordering.json") << to_json(report).dump(2) << '\n';
    dir.write_manifest({"order", a.input,
                        {{"law", a.law}, {"eps", a.eps}, {"tolerance", a.tol}, {"horizon", a.horizon},
                         {"enumeration_limit", a.limit}, {"seed", a.seed}, {"q_source", q_source},
                         {"restarts", a.q.restarts}},
                        {}, {}});
  }
  return ok ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------

struct BayesArgs {
  std::string input, likelihood, out;
};

inline int cmd_profile_bayes(const BayesArgs& a, std::ostream& out) {
  const PopulationTable table = load_population(a.input);
  const std::vector<double> L = load_keyed_column(a.likelihood, table.population, "likelihood");
  const Population post = bayes_update(table.population, L);
  out << "id,prior,likelihood,posterior\n";
  for (std::size_t i = 0; i < post.size(); ++i) {
    out << post.id(i) << ',' << fmt(table.population.p(i)) << ',' << fmt(L[i]) << ',' << fmt(post.p(i)) << '\n';
  }
  OutputDir dir(a.out);
  if (dir.enabled()) {
    auto os = dir.open("population.csv");
    write_population_csv(os, post, table.lambda);
    dir.write_manifest({"profile bayes", a.input, {{"likelihood", a.likelihood}}, {}, {}});
  }
  return kOk;
}

struct DecomposeArgs {
  std::string input, target = "optimal-J", q_file, out;
  double scale = 1.0;
  std::optional<double> rate;
};

inline int cmd_profile_decompose(const DecomposeArgs& a, std::ostream& out) {
  const PopulationTable table = load_population(a.input);
  const Population& pop = table.population;
  if (!table.lambda) throw validation_error("decompose needs a `lambda` column in the population file");

  std::string source = a.target;
  std::optional<InspectionWeights> target;
  if (!a.q_file.empty()) {
    target = InspectionWeights(load_keyed_column(a.q_file, pop, "q"));
    source = "file:" + a.q_file;
  } else if (a.target == "optimal-J") {
    target = j_optimal_q(pop);
  } else if (a.target == "optimal-MN") {
    target = mn_optimal_q(pop);
  } else if (a.target == "uniform") {
    target = InspectionWeights::uniform(pop.size());
  } else {
    throw validation_error("unknown target `" + a.target + "` (expected optimal-J, optimal-MN or uniform)");
  }

  const ProfileDecomposition d = a.rate ? solve_conditional_inspection_for_rate(*table.lambda, *target, *a.rate)
                                        : solve_conditional_inspection(*table.lambda, *target, a.scale);
  const InspectionWeights induced = profile_to_weights(d);
  out << "id,lambda,pi,q\n";
  for (std::size_t i = 0; i < pop.size(); ++i) {
    out << pop.id(i) << ',' << fmt(d.lambda()[i]) << ',' << fmt(d.pi()[i]) << ',' << fmt(induced[i]) << '\n';
  }
  out << "inspection rate: " << fmt(d.inspection_rate()) << '\n';

  OutputDir dir(a.out);
  if (dir.enabled()) {
    auto os = dir.open("decomposition.csv");
    os << "id,lambda,pi,q\n";
    for (std::size_t i = 0; i < pop.size(); ++i) {
      os << pop.id(i) << ',' << iws::detail::format_double(d.lambda()[i]) << ','
         << iws::detail::format_double(d.pi()[i]) << ',' << iws::detail::format_double(induced[i]) << '\n';
    }
    json params{{"target", source}, {"scale", a.scale}};
    params["rate"] = a.rate ? json(*a.rate) : json(nullptr);
    dir.write_manifest({"profile decompose", a.input, params, {}, {}});
  }
  return kOk;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal inspection strategies: exact laws, stochastic ordering and simulation", "iws"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  detail::EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "optimal policy or weights, exact mean and distribution");
  evaluate->add_option("--model", ev.model, "ABCD, EF, GH, IKL, J, MN or OP")->required();
  evaluate->add_option("--input", ev.input, "population CSV or JSON")->required();
  evaluate->add_option("--eps", ev.eps, "EF truncation threshold")->capture_default_str();
  evaluate->add_option("--max-steps", ev.max_steps, "EF schedule length cap")->capture_default_str();
  evaluate->add_option("--horizon", ev.horizon, "J/MN distribution horizon (0 = tail rule)");
  evaluate->add_option("--limit", ev.limit, "enumeration limit for IKL/OP")->capture_default_str();
  evaluate->add_option("--seed", ev.seed, "seed for the IKL/OP weight search");
  evaluate->add_flag("--dist", ev.dist, "also write distribution.csv");
  evaluate->add_option("--out", ev.out, "output directory");
  detail::add_q_flags(evaluate, ev.q);

  detail::SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "seeded Monte Carlo simulation");
  simulate_cmd->add_option("--model", sim.model, "ABCD, EF, GH, IKL, J, MN or OP")->required();
  simulate_cmd->add_option("--input", sim.input, "population CSV or JSON")->required();
  simulate_cmd->add_option("--reps", sim.reps, "replications")->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed")->required();
  simulate_cmd->add_option("--max-steps", sim.max_steps, "per-replication step cap")->capture_default_str();
  simulate_cmd->add_option("--eps", sim.eps, "EF truncation threshold")->capture_default_str();
  simulate_cmd->add_option("--horizon", sim.horizon, "J/MN exact-law horizon (0 = tail rule)");
  simulate_cmd->add_option("--limit", sim.limit, "enumeration limit for IKL/OP")->capture_default_str();
  simulate_cmd->add_option("--threads", sim.threads, "worker threads (0 = all cores)")->capture_default_str();
  simulate_cmd->add_flag("--check-exact", sim.check_exact, "DKW test against the exact law");
  simulate_cmd->add_option("--alpha", sim.alpha, "DKW significance level")->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "output directory");
  detail::add_q_flags(simulate_cmd, sim.q);

  detail::OrderArgs ord;
  auto* order = app.add_subcommand("order", "pairwise stochastic ordering of the seven laws");
  order->add_option("--input", ord.input, "population CSV or JSON")->required();
  order->add_option("--eps", ord.eps, "EF truncation threshold")->capture_default_str();
  order->add_option("--tol", ord.tol, "cdf comparison tolerance")->capture_default_str();
  order->add_option("--horizon", ord.horizon, "J/MN horizon (0 = tail rule)");
  order->add_option("--limit", ord.limit, "enumeration limit for IKL/OP")->capture_default_str();
  order->add_option("--law", ord.law, "GH/OP detection law: per-item or independent")->capture_default_str();
  order->add_option("--seed", ord.seed, "seed for the IKL/OP weight search");
  order->add_option("--out", ord.out, "output directory");
  auto* sqrt_flag = order->add_flag("--sqrt-q", ord.sqrt_q, "IKL/OP use q proportional to sqrt(p)");
  {
    auto* optimal = order->add_flag("--optimal-q", ord.q.optimal, "IKL/OP use the searched weights");
    auto* uniform = order->add_flag("--uniform-q", ord.q.uniform, "IKL/OP use uniform weights (default)");
    auto* file = order->add_option("--q-file", ord.q.file, "IKL/OP weights from a CSV q column");
    order->add_option("--restarts", ord.q.restarts, "random restarts for the weight search")->capture_default_str();
    sqrt_flag->excludes(optimal)->excludes(uniform)->excludes(file);
    optimal->excludes(uniform)->excludes(file);
    uniform->excludes(file);
  }

  auto* profile = app.add_subcommand("profile", "Bayes updates and profile decompositions");
  profile->require_subcommand(1);
  detail::BayesArgs bayes;
  auto* bayes_cmd = profile->add_subcommand("bayes", "apply a likelihood column to the priors");
  bayes_cmd->add_option("--input", bayes.input, "population CSV or JSON")->required();
  bayes_cmd->add_option("--likelihood", bayes.likelihood, "CSV with a likelihood column")->required();
  bayes_cmd->add_option("--out", bayes.out, "output directory");
  detail::DecomposeArgs dec;
  double rate = 0.0;
  auto* decompose = profile->add_subcommand("decompose", "solve conditional inspection probabilities");
  decompose->add_option("--input", dec.input, "population with a lambda column")->required();
  decompose->add_option("--target", dec.target, "optimal-J, optimal-MN or uniform")->capture_default_str();
  decompose->add_option("--q-file", dec.q_file, "target q from a CSV q column");
  auto* scale = decompose->add_option("--scale", dec.scale, "max pi")->capture_default_str();
  auto* rate_opt = decompose->add_option("--rate", rate, "pin the inspection rate sum lambda pi instead");
  scale->excludes(rate_opt);
  decompose->add_option("--out", dec.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (evaluate->parsed()) return detail::cmd_evaluate(ev, out);
    if (simulate_cmd->parsed()) return detail::cmd_simulate(sim, out);
    if (order->parsed()) return detail::cmd_order(ord, out);
    if (bayes_cmd->parsed()) return detail::cmd_profile_bayes(bayes, out);
    if (decompose->parsed()) {
      if (rate_opt->count() > 0) dec.rate = rate;
      return detail::cmd_profile_decompose(dec, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::enumeration_limit ? kEnumerationLimit : kValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace iws::cli
