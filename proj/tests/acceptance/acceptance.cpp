// Acceptance suite: one PASS/FAIL line per criterion, INFO lines for context.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "iws/io.hpp"
#include "iws/iws.hpp"
#include "oracle/oracle.hpp"
#include "test_support.hpp"

using namespace iws;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0 && secs >= budget_seconds) {
    o.pass = false;
    o.detail += " [over time budget " + std::to_string(budget_seconds) + " s]";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& text) {
  std::printf("INFO %s\n", text.c_str());
  std::fflush(stdout);
}

double sup_gap(const InspectionDistribution& a, const InspectionDistribution& b) {
  double gap = std::fabs(a.atom_at_infinity() - b.atom_at_infinity());
  const std::size_t h = std::max<std::size_t>({a.horizon(), b.horizon(), 1});
  const auto fa = a.cdf_table(h), fb = b.cdf_table(h);
  for (std::size_t k = 0; k < h; ++k) gap = std::max(gap, std::fabs(fa[k] - fb[k]));
  return gap;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome c1_abcd_uniform() {
  const auto dir = std::filesystem::temp_directory_path() / "iws_acceptance_c1";
  std::filesystem::remove_all(dir);
  const std::string data = std::string(IWS_DATA_DIR) + "/uniform_101.csv";
  const std::string out = dir.string();
  const char* argv[] = {"iws", "evaluate", "--model", "ABCD", "--input", data.c_str(), "--out", out.c_str()};
  std::ostringstream so, se;
  const int code = cli::run_cli(8, argv, so, se);
  std::ifstream in(dir / "evaluate.json");
  const double mean = nlohmann::json::parse(in)["mean"].get<double>();
  std::filesystem::remove_all(dir);
  const double lib = abcd_policy(validate_population(std::vector<double>(101, 1.0 / 101))).mean;
  const bool printed = so.str().find("mean: 51\n") != std::string::npos;
  return {code == 0 && mean == 51.0 && lib == 51.0 && printed,
          "reported mean " + nlohmann::json(mean).dump() + ", library " + nlohmann::json(lib).dump()};
}

struct Corpus {
  std::vector<Population> pops;       // random s in [0.1, 1]
  std::vector<Population> perfect;    // same p, s = 1
};

Corpus make_corpus() {
  std::mt19937_64 rng(2);
  Corpus c;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = fixtures::random_size(rng, 1, 10);
    const std::vector<double> p = fixtures::random_simplex(n, rng);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::vector<double> s(n);
    for (double& x : s) x = unif(rng);
    c.pops.push_back(validate_population(p, s));
    c.perfect.push_back(validate_population(p));
  }
  return c;
}

const Corpus& corpus() {
  static const Corpus c = make_corpus();
  return c;
}

Outcome c2_cauchy_schwarz() {
  std::mt19937_64 rng(3);
  double worst_formula = 0.0;
  int beaten = 0;
  for (const Population& pop : corpus().perfect) {
    const double best = j_mean(pop, j_optimal_q(pop));
    double root = 0.0;
    for (double p : pop.p()) root += std::sqrt(p);
    worst_formula = std::max(worst_formula, std::fabs(best - root * root));
    for (int k = 0; k < 1000; ++k) {
      const InspectionWeights q(fixtures::random_simplex(pop.size(), rng, 0.0));
      if (j_mean(pop, q) < best) ++beaten;
    }
  }
  return {worst_formula <= 1e-10 && beaten == 0,
          "max |mean - (sum sqrt p)^2| = " + fmt(worst_formula) + ", random q beating the optimum: " + std::to_string(beaten)};
}

Outcome c3_mn_optimum() {
  double worst_formula = 0.0;
  int differs = 0;
  for (std::size_t k = 0; k < corpus().pops.size(); ++k) {
    const Population& pop = corpus().pops[k];
    double root = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) root += std::sqrt(pop.p(i) / pop.s(i));
    worst_formula = std::max(worst_formula, std::fabs(mn_mean(pop, mn_optimal_q(pop)) - root * root) / std::max(1.0, root * root));
    const Population& perfect = corpus().perfect[k];
    if (mn_mean(perfect, mn_optimal_q(perfect)) != j_mean(perfect, j_optimal_q(perfect))) ++differs;
  }
  return {worst_formula <= 1e-10 && differs == 0,
          "max relative |mean - (sum sqrt(p/s))^2| = " + fmt(worst_formula) +
              ", s=1 cases differing from J: " + std::to_string(differs)};
}

std::vector<Population> ordering_corpus() {
  std::mt19937_64 rng(4);
  std::vector<Population> pops;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = fixtures::random_size(rng, 2, 7);
    pops.push_back(fixtures::random_population(n, rng, 0.3, 1.0));
  }
  return pops;
}

struct MismatchTally {
  int populations_with_mismatch = 0;
  std::map<std::string, int> by_pair;
};

MismatchTally run_ordering(const std::vector<Population>& pops, bool shared_sqrt, DetectionLaw law) {
  MismatchTally t;
  for (const Population& pop : pops) {
    Theorem1Options opt;
    opt.law = law;
    if (shared_sqrt) opt.ikl_q = j_optimal_q(pop);
    const OrderingReport r = theorem1_report(pop, opt);
    if (!r.mismatches.empty() || !r.corollary_violations.empty()) ++t.populations_with_mismatch;
    for (std::size_t idx : r.mismatches) {
      ++t.by_pair[std::string(to_string(r.pairs[idx].x)) + "<=" + std::string(to_string(r.pairs[idx].y))];
    }
  }
  return t;
}

std::string tally_text(const MismatchTally& t) {
  std::string s = std::to_string(t.populations_with_mismatch) + "/100 populations with mismatches";
  for (const auto& [pair, n] : t.by_pair) s += ", " + pair + ": " + std::to_string(n);
  return s;
}

Outcome c4_ordering() {
  const MismatchTally t = run_ordering(ordering_corpus(), false, DetectionLaw::per_item);
  return {t.populations_with_mismatch == 0, tally_text(t)};
}

Outcome c5_equalities() {
  std::mt19937_64 rng(5);
  double worst_perfect = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = fixtures::random_size(rng, 1, 7);
    const Population pop = fixtures::random_population(n, rng);
    const InspectionWeights q(fixtures::random_simplex(n, rng, 0.05));
    const InspectionDistribution abcd = dist_abcd(pop);
    worst_perfect = std::max({worst_perfect, sup_gap(abcd, dist_ef(ef_schedule(pop, 1e-13))), sup_gap(abcd, dist_gh(pop)),
                              sup_gap(dist_j(pop, j_optimal_q(pop)), dist_mn(pop, mn_optimal_q(pop))),
                              sup_gap(dist_ikl_exact(pop, q), dist_op_exact(pop, q))});
  }
  double worst_abcd_ikl = 0.0, worst_gh_op = 0.0;
  std::uniform_real_distribution<double> unif(0.3, 1.0);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = fixtures::random_size(rng, 2, 7);
    std::vector<double> s(n);
    for (double& x : s) x = unif(rng);
    const Population pop = validate_population(std::vector<double>(n, 1.0 / n), s);
    const InspectionWeights q = InspectionWeights::uniform(n);
    worst_abcd_ikl = std::max(worst_abcd_ikl, sup_gap(dist_abcd(pop), dist_ikl_exact(pop, q)));
    worst_gh_op = std::max(worst_gh_op, sup_gap(dist_gh(pop), dist_op_exact(pop, q)));
  }
  return {worst_perfect < 1e-12 && worst_abcd_ikl < 1e-12 && worst_gh_op < 1e-12,
          "s=1 max sup-gap " + fmt(worst_perfect) + "; p,q uniform: ABCD/IKL " + fmt(worst_abcd_ikl) + ", GH/OP " +
              fmt(worst_gh_op)};
}

struct CounterexampleCheck {
  bool pass;
  std::string text;
};

CounterexampleCheck counterexample(std::size_t n, DetectionLaw law) {
  const Population pop = lemma3_population(n);
  const InspectionDistribution ef = dist_ef(ef_schedule(pop, 1e-13));
  const InspectionDistribution op = dist_op_exact(pop, j_optimal_q(pop), kDefaultEnumerationLimit, law);
  const double atom_target = 1.0 - 2.0 / (n + 1.0);
  const double ef1_target = 2.0 / (n * (n + 1.0));
  const bool atom_ok = std::fabs(op.atom_at_infinity() - atom_target) <= 1e-15;
  const bool ef1_ok = std::fabs(ef.pmf(1) - ef1_target) <= 1e-15;
  const bool first_ok = op.pmf(1) > ef.pmf(1);
  // Beyond both horizons the cdfs are the finite masses: 1 - residual vs 1 - atom.
  const std::size_t h = std::max(ef.horizon(), op.horizon());
  const bool tail_ok = ef.cdf(h) > op.cdf(h);
  const DominanceVerdict v = stochastic_compare(ef, op);
  bool witnesses_ok = false;
  if (v.relation == Relation::incomparable && v.witnesses) {
    witnesses_ok = ef.cdf(v.witnesses->favors_x) > op.cdf(v.witnesses->favors_x) + v.tolerance &&
                   ef.cdf(v.witnesses->favors_y) < op.cdf(v.witnesses->favors_y) - v.tolerance;
  }
  const bool pass = atom_ok && ef1_ok && first_ok && tail_ok && witnesses_ok;
  std::string text = "N=" + std::to_string(n) + ": atom " + fmt(op.atom_at_infinity()) + ", P(EF=1) " + fmt(ef.pmf(1)) +
                     ", P(OP=1) " + fmt(op.pmf(1)) + ", verdict " + std::string(to_string(v.relation));
  return {pass, text};
}

Outcome c6_counterexample() {
  bool pass = true;
  std::string detail;
  for (std::size_t n : {5u, 2u, 3u, 4u, 6u}) {
    const CounterexampleCheck c = counterexample(n, DetectionLaw::per_item);
    pass = pass && c.pass;
    detail += (detail.empty() ? "" : "; ") + c.text;
  }
  return {pass, detail};
}

Outcome c7_oracles() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = fixtures::random_size(rng, 1, 7);
    const Population pop = fixtures::random_population(n, rng);
    const InspectionWeights q(fixtures::random_simplex(n, rng));
    worst = std::max(worst, std::fabs(ikl_mean_exact(pop, q) - oracle::ikl_mean_bruteforce(pop, q)));
  }
  int beaten = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = fixtures::random_size(rng, 1, 3);
    const Population pop = fixtures::random_population(n, rng, 0.2, 1.0);
    const Schedule greedy = ef_schedule(pop, 1e-13);
    std::vector<std::size_t> prefix;
    for (std::size_t t = 0; t < std::min<std::size_t>(6, greedy.steps.size()); ++t) prefix.push_back(greedy.steps[t].item);
    while (prefix.size() < 6) prefix.push_back(prefix.back());
    const double greedy_score = oracle::truncated_score(pop, prefix);
    if (greedy_score > oracle::ef_best_schedule_bruteforce(pop, 6).best_truncated_mean + 1e-12) ++beaten;
  }
  return {worst <= 1e-10 && beaten == 0,
          "max |subset DP - N! enumeration| = " + fmt(worst) + ", exhaustive sequences beating greedy: " + std::to_string(beaten)};
}

Outcome c8_monte_carlo() {
  std::mt19937_64 rng(8);
  int dkw_fail = 0, mean_fail = 0, runs = 0;
  std::string where;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = fixtures::random_size(rng, 1, 7);
    const Population pop = fixtures::random_population(n, rng, 0.3, 1.0);
    const InspectionWeights q_rand(fixtures::random_simplex(n, rng, 0.05));
    const InspectionWeights q_j = j_optimal_q(pop), q_mn = mn_optimal_q(pop);
    const Schedule sched = ef_schedule(pop, 1e-13);
    struct Case {
      Model model;
      std::optional<InspectionWeights> q;
      InspectionDistribution exact;
    };
    const std::vector<Case> cases{{Model::ABCD, std::nullopt, dist_abcd(pop)},
                                  {Model::EF, std::nullopt, dist_ef(sched)},
                                  {Model::GH, std::nullopt, dist_gh(pop)},
                                  {Model::IKL, q_rand, dist_ikl_exact(pop, q_rand)},
                                  {Model::J, q_j, dist_j(pop, q_j)},
                                  {Model::MN, q_mn, dist_mn(pop, q_mn)},
                                  {Model::OP, q_rand, dist_op_exact(pop, q_rand)}};
    for (const Case& c : cases) {
      SimConfig cfg;
      cfg.model = c.model;
      cfg.reps = 100'000;
      cfg.seed = static_cast<std::uint64_t>(k);
      cfg.q = c.q;
      cfg.ef_eps = 1e-13;
      cfg.threads = 0;
      const EmpiricalResult emp = simulate(pop, cfg);
      ++runs;
      const std::string label = std::string(to_string(c.model)) + "@pop" + std::to_string(k);
      if (!dkw_check(emp, c.exact, 0.001)) {
        ++dkw_fail;
        where += " dkw:" + label;
      }
      const double exact_mean = c.exact.conditional_mean();
      if (emp.detected() > 0 && std::fabs(emp.mean_detected - exact_mean) > 3.0 * emp.stderr_mean &&
          emp.stderr_mean > 0.0) {
        ++mean_fail;
        where += " mean:" + label + "(z=" + fmt((emp.mean_detected - exact_mean) / emp.stderr_mean) + ")";
      }
    }
  }
  return {dkw_fail == 0 && mean_fail == 0, std::to_string(runs) + " runs, DKW failures " + std::to_string(dkw_fail) +
                                               ", 3-stderr failures " + std::to_string(mean_fail) + where};
}

Outcome c9_chebyshev() {
  std::mt19937_64 rng(9);
  int above = 0, equal_nonuniform = 0, uniform_not_equal = 0;
  for (int k = 0; k < 10'000; ++k) {
    const std::size_t n = fixtures::random_size(rng, 1, 12);
    const bool uniform = k % 10 == 0;
    const Population pop = uniform ? validate_population(std::vector<double>(n, 1.0 / n))
                                   : fixtures::random_population(n, rng);
    const double bound = (n + 1) / 2.0;
    const double mean = abcd_policy(pop).mean;
    const auto [lo, hi] = std::minmax_element(pop.p().begin(), pop.p().end());
    const bool is_uniform = *hi - *lo <= 1e-15;
    if (mean > bound + 1e-12) ++above;
    const bool equal = std::fabs(mean - bound) <= 1e-12;
    if (equal && !is_uniform) ++equal_nonuniform;
    if (is_uniform && !equal) ++uniform_not_equal;
  }
  return {above == 0 && equal_nonuniform == 0 && uniform_not_equal == 0,
          "above bound " + std::to_string(above) + ", equality on non-uniform p " + std::to_string(equal_nonuniform) +
              ", uniform p missing equality " + std::to_string(uniform_not_equal)};
}

Outcome c10_profiling() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_round = 0.0, worst_scale = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = fixtures::random_size(rng, 1, 10);
    const std::vector<double> lambda = fixtures::random_simplex(n, rng);
    const InspectionWeights q(fixtures::random_simplex(n, rng));
    const ProfileDecomposition d = solve_conditional_inspection(lambda, q);
    const InspectionWeights back = profile_to_weights(d);
    const double c = 1.0 - unit(rng);  // (0, 1]
    std::vector<double> scaled(d.pi().begin(), d.pi().end());
    for (double& x : scaled) x *= c;
    const InspectionWeights rescaled =
        profile_to_weights(ProfileDecomposition(std::vector<double>(d.lambda().begin(), d.lambda().end()), scaled));
    for (std::size_t i = 0; i < n; ++i) {
      worst_round = std::max(worst_round, std::fabs(back[i] - q[i]));
      worst_scale = std::max(worst_scale, std::fabs(rescaled[i] - back[i]));
    }
  }
  return {worst_round <= 1e-12 && worst_scale <= 1e-12,
          "max round-trip error " + fmt(worst_round) + ", max scaling drift " + fmt(worst_scale)};
}

}  // namespace

int main() {
  criterion(1, "uniform N=101 ABCD mean is exactly 51", 1.0, c1_abcd_uniform);
  criterion(2, "J optimum equals (sum sqrt p)^2 and beats random q", 30.0, c2_cauchy_schwarz);
  criterion(3, "MN optimum equals (sum sqrt(p/s))^2; s=1 reproduces J", 0.0, c3_mn_optimum);
  criterion(4, "all 12 ordered relations on 100 populations (uniform q for IKL/OP)", 120.0, c4_ordering);
  {
    const std::vector<Population> pops = ordering_corpus();
    info("criterion 4 corpus, independent detection law, uniform q: " +
         tally_text(run_ordering(pops, false, DetectionLaw::independent)));
    info("criterion 4 corpus, per-item detection law, IKL/OP at q = sqrt(p) normalised: " +
         tally_text(run_ordering(pops, true, DetectionLaw::per_item)));
    info("criterion 4 corpus, independent detection law, IKL/OP at q = sqrt(p) normalised: " +
         tally_text(run_ordering(pops, true, DetectionLaw::independent)));
  }
  criterion(5, "equality conditions (s=1; p and q uniform)", 0.0, c5_equalities);
  {
    const Population pop = validate_population({0.25, 0.25, 0.25, 0.25}, std::vector<double>{0.9, 0.5, 0.7, 0.4});
    const InspectionWeights q = InspectionWeights::uniform(4);
    info("p,q uniform, s=(0.9,0.5,0.7,0.4): GH/OP sup-gap per-item " + fmt(sup_gap(dist_gh(pop), dist_op_exact(pop, q))) +
         ", independent " +
         fmt(sup_gap(dist_gh(pop, DetectionLaw::independent),
                     dist_op_exact(pop, q, kDefaultEnumerationLimit, DetectionLaw::independent))));
  }
  criterion(6, "EF and OP incomparable on the counterexample population, N in {2..6}", 0.0, c6_counterexample);
  for (std::size_t n : {2u, 3u, 4u, 5u, 6u}) {
    const CounterexampleCheck c = counterexample(n, DetectionLaw::independent);
    info(std::string("independent detection law, ") + c.text + (c.pass ? " (all checks hold)" : " (checks fail)"));
  }
  criterion(7, "oracle agreement (N! enumeration, exhaustive EF sequences)", 300.0, c7_oracles);
  criterion(8, "Monte Carlo: DKW and 3-stderr agreement for all 7 laws on 20 populations", 300.0, c8_monte_carlo);
  criterion(9, "ABCD mean <= (N+1)/2 with equality only for uniform p", 0.0, c9_chebyshev);
  criterion(10, "profiling round trip and scale freedom", 0.0, c10_profiling);

  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
