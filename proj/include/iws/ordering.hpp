#pragma once

// First-order stochastic dominance between inspection-count laws and the
// partial order of the seven optimal-strategy laws.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iws/distribution.hpp"
#include "iws/distributions.hpp"
#include "iws/error.hpp"
#include "iws/model.hpp"
#include "iws/population.hpp"
#include "iws/strategies.hpp"

namespace iws {

enum class Relation { smaller, larger, equal, incomparable };

inline constexpr std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::smaller: return "smaller";
    case Relation::larger: return "larger";
    case Relation::equal: return "equal";
    case Relation::incomparable: return "incomparable";
  }
  return "?";
}

/// For an incomparable pair: cdf_X(favors_x) > cdf_Y(favors_x) + tol and
/// cdf_X(favors_y) < cdf_Y(favors_y) - tol.
struct Witnesses {
  std::size_t favors_x = 0;
  std::size_t favors_y = 0;
};

struct DominanceVerdict {
  Relation relation = Relation::equal;
  std::optional<Witnesses> witnesses;
  double tolerance = 0.0;
  double max_gap = 0.0;  // sup_m |cdf_X(m) - cdf_Y(m)|
};

inline constexpr double kDefaultCompareTolerance = 1e-9;

/// X is "smaller" when cdf_X(m) >= cdf_Y(m) - tol everywhere and the two are
/// not uniformly within tol. Atoms at infinity never enter a finite cdf.
inline DominanceVerdict stochastic_compare(const InspectionDistribution& x, const InspectionDistribution& y,
                                           double tol = kDefaultCompareTolerance) {
  const std::size_t h = std::max<std::size_t>({x.horizon(), y.horizon(), 1});
  const std::vector<double> fx = x.cdf_table(h);
  const std::vector<double> fy = y.cdf_table(h);

  DominanceVerdict v;
  v.tolerance = tol;
  double best_x = tol, best_y = tol;
  std::size_t arg_x = 0, arg_y = 0;
  for (std::size_t k = 0; k < h; ++k) {
    const double gap = fx[k] - fy[k];
    v.max_gap = std::max(v.max_gap, std::fabs(gap));
    if (gap > best_x) {
      best_x = gap;
      arg_x = k + 1;
    }
    if (-gap > best_y) {
      best_y = -gap;
      arg_y = k + 1;
    }
  }
  if (arg_x == 0 && arg_y == 0) {
    v.relation = Relation::equal;
  } else if (arg_y == 0) {
    v.relation = Relation::smaller;
  } else if (arg_x == 0) {
    v.relation = Relation::larger;
  } else {
    v.relation = Relation::incomparable;
    v.witnesses = Witnesses{arg_x, arg_y};
  }
  return v;
}

// ---------------------------------------------------------------------------

enum class Expectation { smaller, equal, unconstrained };

inline constexpr std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::smaller: return "smaller";
    case Expectation::equal: return "equal";
    case Expectation::unconstrained: return "unconstrained";
  }
  return "?";
}

struct PairCheck {
  Model x;
  Model y;
  Expectation expected;
  DominanceVerdict verdict;
  bool mismatch = false;
};

struct ModelSummary {
  Model model;
  double mean = 0.0;  // +inf for defective laws
  double detected_mean = 0.0;
  double atom_at_infinity = 0.0;
  bool defective = false;
};

struct OrderingReport {
  DetectionLaw law = DetectionLaw::per_item;
  std::vector<double> ikl_q;
  std::vector<PairCheck> pairs;  // all 21 pairs; ordered pairs have x on the smaller side
  std::vector<std::size_t> mismatches;  // indices into pairs
  std::array<ModelSummary, 7> summaries{};
  std::vector<std::string> corollary_violations;

  const PairCheck& pair(Model a, Model b) const {
    for (const auto& pc : pairs) {
      if ((pc.x == a && pc.y == b) || (pc.x == b && pc.y == a)) return pc;
    }
    throw validation_error("unknown model pair");
  }

  /// Relation of a to b, oriented as asked.
  Relation relation(Model a, Model b) const {
    const PairCheck& pc = pair(a, b);
    if (pc.x == a) return pc.verdict.relation;
    switch (pc.verdict.relation) {
      case Relation::smaller: return Relation::larger;
      case Relation::larger: return Relation::smaller;
      default: return pc.verdict.relation;
    }
  }
};

struct Theorem1Options {
  std::optional<InspectionWeights> ikl_q;  // uniform when absent
  DetectionLaw law = DetectionLaw::per_item;
  double tolerance = kDefaultCompareTolerance;
  double ef_eps = 1e-13;
  std::size_t ef_max_steps = kDefaultScheduleMaxSteps;
  std::size_t horizon = 0;  // geometric-law horizon; 0 = default tail rule
  std::size_t enumeration_limit = kDefaultEnumerationLimit;
};

struct OrderedPair {
  Model smaller;
  Model larger;
};

/// Twelve stochastically ordered pairs, transitive ones included.
inline constexpr std::array<OrderedPair, 12> kOrderedPairs{{
    {Model::ABCD, Model::EF},
    {Model::EF, Model::MN},
    {Model::ABCD, Model::MN},
    {Model::ABCD, Model::GH},
    {Model::GH, Model::OP},
    {Model::ABCD, Model::OP},
    {Model::ABCD, Model::IKL},
    {Model::IKL, Model::J},
    {Model::J, Model::MN},
    {Model::ABCD, Model::J},
    {Model::IKL, Model::MN},
    {Model::IKL, Model::OP},
}};

namespace detail {

struct EqualityConditions {
  bool perfect = false;     // sum s_i p_i = 1
  bool uniform_p = false;   // p_i = 1/N
  bool single = false;      // N = 1
};

inline bool equality_holds(OrderedPair pair, const EqualityConditions& c) {
  using M = Model;
  const auto is = [&](M a, M b) { return pair.smaller == a && pair.larger == b; };
  if (is(M::ABCD, M::EF) || is(M::ABCD, M::GH) || is(M::J, M::MN) || is(M::IKL, M::OP)) return c.perfect;
  if (is(M::GH, M::OP) || is(M::ABCD, M::IKL)) return c.uniform_p;
  if (is(M::EF, M::MN) || is(M::IKL, M::J) || is(M::ABCD, M::J)) return c.single;
  if (is(M::ABCD, M::MN) || is(M::IKL, M::MN)) return c.single && c.perfect;
  if (is(M::ABCD, M::OP)) return c.uniform_p && c.perfect;
  return false;
}

inline bool uniform_priors(const Population& pop) {
  const auto [lo, hi] = std::minmax_element(pop.p().begin(), pop.p().end());
  return *hi - *lo <= 1e-12;
}

}  // namespace detail

/// Builds the seven optimal-strategy laws, compares all 21 pairs and checks
/// the twelve ordered relations together with their equality conditions.
/// J and MN use their optimal weights; IKL and OP use `options.ikl_q`
/// (uniform by default).
inline OrderingReport theorem1_report(const Population& pop, const Theorem1Options& options = {}) {
  const std::size_t n = pop.size();
  if (n > options.enumeration_limit) throw enumeration_limit_error(n, options.enumeration_limit);

  const InspectionWeights q_ikl = options.ikl_q ? *options.ikl_q : InspectionWeights::uniform(n);
  require_same_size(pop, q_ikl.size(), "q");
  const InspectionWeights q_j = j_optimal_q(pop);
  const InspectionWeights q_mn = mn_optimal_q(pop);

  const Schedule sched = ef_schedule(pop, options.ef_eps, options.ef_max_steps);
  if (sched.residual_mass >= options.tolerance / 10.0) {
    throw truncation_error("EF residual mass " + std::to_string(sched.residual_mass) +
                           " is not below tolerance/10; lower eps or raise max_steps");
  }

  std::vector<InspectionDistribution> laws;
  laws.reserve(7);
  laws.push_back(dist_abcd(pop));
  laws.push_back(dist_ef(sched));
  laws.push_back(dist_gh(pop, options.law));
  laws.push_back(dist_ikl_exact(pop, q_ikl, options.enumeration_limit));
  laws.push_back(dist_j(pop, q_j, options.horizon));
  laws.push_back(dist_mn(pop, q_mn, options.horizon));
  laws.push_back(dist_op_exact(pop, q_ikl, options.enumeration_limit, options.law));

  OrderingReport report;
  report.law = options.law;
  report.ikl_q.assign(q_ikl.q().begin(), q_ikl.q().end());

  const double inf = std::numeric_limits<double>::infinity();
  const double abcd = abcd_policy(pop).mean;
  const double ikl = ikl_mean_exact(pop, q_ikl, options.enumeration_limit);
  const bool perfect = pop.perfect_recognition();
  const std::array<double, 7> means{abcd,       ef_mean(sched).partial_mean, perfect ? abcd : inf, ikl,
                                    j_mean(pop, q_j), mn_mean(pop, q_mn),  perfect ? ikl : inf};
  for (Model m : kAllModels) {
    const auto& law = laws[index_of(m)];
    report.summaries[index_of(m)] = {m, means[index_of(m)], law.conditional_mean(), law.atom_at_infinity(),
                                     law.defective()};
  }

  const detail::EqualityConditions cond{perfect, detail::uniform_priors(pop), n == 1};
  const auto expectation = [&](Model a, Model b) -> std::optional<std::pair<OrderedPair, Expectation>> {
    for (const OrderedPair& op : kOrderedPairs) {
      if ((op.smaller == a && op.larger == b) || (op.smaller == b && op.larger == a)) {
        return std::pair{op, detail::equality_holds(op, cond) ? Expectation::equal : Expectation::smaller};
      }
    }
    return std::nullopt;
  };

  for (std::size_t a = 0; a < kAllModels.size(); ++a) {
    for (std::size_t b = a + 1; b < kAllModels.size(); ++b) {
      PairCheck pc{kAllModels[a], kAllModels[b], Expectation::unconstrained, {}, false};
      if (const auto e = expectation(pc.x, pc.y)) {
        pc.x = e->first.smaller;
        pc.y = e->first.larger;
        pc.expected = e->second;
      }
      pc.verdict = stochastic_compare(laws[index_of(pc.x)], laws[index_of(pc.y)], options.tolerance);
      if (pc.expected == Expectation::smaller) pc.mismatch = pc.verdict.relation != Relation::smaller;
      if (pc.expected == Expectation::equal) pc.mismatch = pc.verdict.relation != Relation::equal;
      report.pairs.push_back(pc);
      if (pc.mismatch) report.mismatches.push_back(report.pairs.size() - 1);
    }
  }

  // Dominance must carry over to the means.
  for (const PairCheck& pc : report.pairs) {
    const Relation r = pc.verdict.relation;
    if (r == Relation::incomparable) continue;
    const bool x_first = r != Relation::larger;
    const ModelSummary& lo = report.summaries[index_of(x_first ? pc.x : pc.y)];
    const ModelSummary& hi = report.summaries[index_of(x_first ? pc.y : pc.x)];
    double a = lo.mean, b = hi.mean;
    if (lo.defective && hi.defective) {
      if (std::fabs(lo.atom_at_infinity - hi.atom_at_infinity) > options.tolerance) continue;
      a = lo.detected_mean;
      b = hi.detected_mean;
    }
    const double slack = 1e-9 * std::max(1.0, std::fabs(a));
    if (a > b + slack) {
      report.corollary_violations.push_back(std::string(to_string(lo.model)) + " vs " +
                                            std::string(to_string(hi.model)));
    }
  }
  return report;
}

/// p_i = 2i / (N(N+1)), s_i = 1/i. Every item has the same s_i p_i, so the
/// most likely item is also the hardest to recognise.
inline Population lemma3_population(std::size_t n) {
  if (n < 2) throw validation_error("lemma3_population requires n >= 2");
  std::vector<double> p(n), s(n);
  const double denom = static_cast<double>(n) * static_cast<double>(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[i - 1] = 2.0 * static_cast<double>(i) / denom;
    s[i - 1] = 1.0 / static_cast<double>(i);
  }
  return validate_population(std::move(p), std::move(s));
}

}  // namespace iws
