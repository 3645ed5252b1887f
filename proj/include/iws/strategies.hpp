#pragma once

// Optimal inspection policies per model family and their mean number of
// inspections.
//
//   ABCD  enumeration, perfect recognition       descending-p order
//   EF    enumeration, imperfect recognition     greedy argmax schedule
//   GH    enumeration, no replacement, s < 1     descending-p order, defective
//   IKL   random order without replacement       successive sampling from q
//   J     random order with replacement          q_i ~ sqrt(p_i)
//   MN    as J with imperfect recognition        q_i ~ sqrt(p_i / s_i)
//   OP    as IKL with imperfect recognition      defective

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "iws/error.hpp"
#include "iws/numeric.hpp"
#include "iws/population.hpp"
#include "iws/successive_sampling.hpp"

namespace iws {

/// Inspection order for the enumerated models: a permutation of item indices
/// along which p is non-increasing.
struct OrderedPolicy {
  std::vector<std::size_t> order;
};

struct AbcdResult {
  OrderedPolicy policy;
  double mean = 0.0;
};

/// Items sorted by descending p; ties keep the lower index first.
inline OrderedPolicy descending_order(const Population& pop) {
  OrderedPolicy policy;
  policy.order.resize(pop.size());
  std::iota(policy.order.begin(), policy.order.end(), std::size_t{0});
  std::stable_sort(policy.order.begin(), policy.order.end(),
                   [&](std::size_t a, std::size_t b) { return pop.p(a) > pop.p(b); });
  return policy;
}

namespace detail {

inline std::vector<double> ranks(std::size_t n) {
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = static_cast<double>(k + 1);
  return r;
}

inline std::vector<double> gather(std::span<const double> v, const std::vector<std::size_t>& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
  return out;
}

}  // namespace detail

inline AbcdResult abcd_policy(const Population& pop) {
  AbcdResult result{descending_order(pop), 0.0};
  const std::vector<double> sorted = detail::gather(pop.p(), result.policy.order);
  result.mean = accurate_dot(detail::ranks(pop.size()), sorted);
  return result;
}

// ---------------------------------------------------------------------------
// Models E and F

struct ScheduleStep {
  std::size_t t = 0;        // 1-based inspection number
  std::size_t item = 0;     // 0-based item index
  std::size_t attempt = 0;  // 1-based attempt count for this item
  double detect_prob = 0.0; // p_i (1 - s_i)^(attempt-1) s_i
};

/// Greedy inspection schedule for the enumerated models with imperfect
/// recognition, truncated once the undetected mass drops below eps.
struct Schedule {
  std::vector<ScheduleStep> steps;
  double residual_mass = 0.0;
  std::vector<std::size_t> attempts;  // attempts per item after the last step
};

inline constexpr double kDefaultScheduleEps = 1e-12;
inline constexpr std::size_t kDefaultScheduleMaxSteps = 1'000'000;

/// Detection probability of the next inspection of item i after m misses.
inline double next_detect_probability(const Population& pop, std::size_t i, std::size_t m) {
  return pop.p(i) * std::pow(1.0 - pop.s(i), static_cast<double>(m)) * pop.s(i);
}

inline Schedule ef_schedule(const Population& pop, double eps = kDefaultScheduleEps,
                            std::size_t max_steps = kDefaultScheduleMaxSteps) {
  if (!(eps > 0.0 && eps < 1.0)) throw validation_error("eps must lie in (0,1)");
  if (max_steps < 1) throw validation_error("max_steps must be at least 1");

  struct Entry {
    double priority;
    std::size_t item;
  };
  // Max-heap on priority; equal priorities pop the lowest index first.
  const auto lower = [](const Entry& a, const Entry& b) {
    return a.priority < b.priority || (a.priority == b.priority && a.item > b.item);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  for (std::size_t i = 0; i < pop.size(); ++i) heap.push({next_detect_probability(pop, i, 0), i});

  Schedule sched;
  sched.attempts.assign(pop.size(), 0);
  CompensatedSum remaining(0.0);
  for (double pi : pop.p()) remaining.add(pi);
  double residual = remaining.value();

  while (residual >= eps && sched.steps.size() < max_steps && !heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    const std::size_t attempt = ++sched.attempts[top.item];
    sched.steps.push_back({sched.steps.size() + 1, top.item, attempt, top.priority});
    remaining.add(-top.priority);
    residual = std::max(0.0, remaining.value());
    const double next = next_detect_probability(pop, top.item, attempt);
    if (next > 0.0) heap.push({next, top.item});
  }
  // Every item with s_i = 1 has been inspected and nothing else remains.
  if (heap.empty()) residual = 0.0;
  sched.residual_mass = residual;

  if (residual >= eps && residual >= std::min(0.5, std::sqrt(eps))) {
    throw truncation_error("EF schedule did not converge within " + std::to_string(max_steps) +
                           " steps (residual mass " + std::to_string(residual) + ")");
  }
  return sched;
}

struct EfMean {
  double partial_mean = 0.0;
  double residual_mass = 0.0;
};

/// Truncated mean sum_t t P(N_EF = t); exact when residual_mass is zero.
inline EfMean ef_mean(const Schedule& sched) {
  CompensatedSum acc;
  for (const auto& step : sched.steps) {
    const double t = static_cast<double>(step.t);
    const double prod = t * step.detect_prob;
    acc.add(prod);
    acc.add(std::fma(t, step.detect_prob, -prod));
  }
  return {acc.value(), sched.residual_mass};
}

/// True iff no swap of two adjacent inspections of distinct items would
/// lower the mean, i.e. detection probabilities never increase along
/// distinct-item neighbours.
inline bool ef_swap_check(const Schedule& sched) {
  for (std::size_t k = 0; k + 1 < sched.steps.size(); ++k) {
    const auto& a = sched.steps[k];
    const auto& b = sched.steps[k + 1];
    if (a.item != b.item && a.detect_prob < b.detect_prob) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Defective models G, H, O and P

struct DefectiveSummary {
  double detect_prob = 1.0;       // sum s_i p_i
  double conditional_mean = 0.0;  // mean of the underlying perfect-recognition model
  bool mean_is_infinite = false;  // detect_prob < 1
  // Exact mean given detection when recognition is tied to the Gamma-item.
  // Differs from conditional_mean unless all s_i are equal.
  double detected_mean = 0.0;
};

inline double detect_probability(const Population& pop) {
  return pop.perfect_recognition() ? 1.0 : std::min(1.0, pop.detect_probability());
}

inline DefectiveSummary gh_summary(const Population& pop) {
  const AbcdResult abcd = abcd_policy(pop);
  DefectiveSummary out;
  out.detect_prob = detect_probability(pop);
  out.conditional_mean = abcd.mean;
  out.mean_is_infinite = !pop.perfect_recognition();

  std::vector<double> detected(pop.size());
  for (std::size_t k = 0; k < pop.size(); ++k) {
    const std::size_t i = abcd.policy.order[k];
    detected[k] = pop.s(i) * pop.p(i);
  }
  out.detected_mean = accurate_dot(detail::ranks(pop.size()), detected) / compensated_total(detected);
  return out;
}

// ---------------------------------------------------------------------------
// Models I, K and L

namespace detail {

inline void require_weights(const Population& pop, const InspectionWeights& q) {
  require_same_size(pop, q.size(), "q");
}

// sum_i w_i E[position of i]
inline double weighted_position_mean(const PositionLaw& law, std::span<const double> w) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < law.size(); ++i) {
    for (std::size_t k = 0; k < law.size(); ++k) {
      acc.add(w[i] * static_cast<double>(k + 1) * law.position[i][k]);
    }
  }
  return acc.value();
}

}  // namespace detail

/// Exact mean number of inspections for successive sampling from q.
inline double ikl_mean_exact(const Population& pop, const InspectionWeights& q,
                             std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  detail::require_weights(pop, q);
  const PositionLaw law = successive_sampling_positions(q, enumeration_limit);
  return detail::weighted_position_mean(law, pop.p());
}

struct IklSearchResult {
  InspectionWeights q;
  double mean;
};

/// Heuristic minimisation of the IKL mean over q: multi-start coordinate
/// search with multiplicative steps, renormalisation and step halving.
/// Starts from uniform q, q = p, q ~ sqrt(p) and `restarts` random simplex
/// points. Never returns a mean above the uniform-q value.
inline IklSearchResult ikl_search_q(const Population& pop, std::size_t restarts, std::uint64_t seed,
                                    std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  const std::size_t n = pop.size();
  if (n > enumeration_limit) throw enumeration_limit_error(n, enumeration_limit);

  const auto evaluate = [&](const std::vector<double>& q) {
    return ikl_mean_exact(pop, InspectionWeights(q), enumeration_limit);
  };
  const auto normalize = [](std::vector<double>& q) {
    const double total = compensated_total(q);
    for (double& x : q) x /= total;
  };

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, 1.0 / static_cast<double>(n));
  starts.emplace_back(pop.p().begin(), pop.p().end());
  {
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(pop.p(i));
    normalize(root);
    starts.push_back(std::move(root));
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<double> q(n);
    for (double& x : q) x = expo(rng) + 1e-3;
    normalize(q);
    starts.push_back(std::move(q));
  }

  std::vector<double> best_q = starts.front();
  double best = evaluate(best_q);
  if (n == 1) return {InspectionWeights(best_q), best};

  for (auto& q : starts) {
    double value = evaluate(q);
    for (double step = 0.5; step > 1e-7; step *= 0.5) {
      bool improved = true;
      for (int sweep = 0; improved && sweep < 200; ++sweep) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
          for (double factor : {1.0 + step, 1.0 / (1.0 + step)}) {
            std::vector<double> candidate = q;
            candidate[i] *= factor;
            normalize(candidate);
            const double v = evaluate(candidate);
            if (v < value) {
              value = v;
              q = std::move(candidate);
              improved = true;
            }
          }
        }
      }
    }
    if (value < best) {
      best = value;
      best_q = q;
    }
  }
  return {InspectionWeights(best_q), best};
}

// ---------------------------------------------------------------------------
// Models J, M and N

inline InspectionWeights j_optimal_q(const Population& pop) {
  std::vector<double> q(pop.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::sqrt(pop.p(i));
  const double total = compensated_total(q);
  for (double& x : q) x /= total;
  return InspectionWeights(std::move(q));
}

/// sum_i p_i / q_i
inline double j_mean(const Population& pop, const InspectionWeights& q) {
  detail::require_weights(pop, q);
  CompensatedSum acc;
  for (std::size_t i = 0; i < pop.size(); ++i) acc.add(pop.p(i) / q[i]);
  return acc.value();
}

inline InspectionWeights mn_optimal_q(const Population& pop) {
  std::vector<double> q(pop.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::sqrt(pop.p(i) / pop.s(i));
  const double total = compensated_total(q);
  for (double& x : q) x /= total;
  return InspectionWeights(std::move(q));
}

/// sum_i p_i / (q_i s_i)
inline double mn_mean(const Population& pop, const InspectionWeights& q) {
  detail::require_weights(pop, q);
  CompensatedSum acc;
  for (std::size_t i = 0; i < pop.size(); ++i) acc.add(pop.p(i) / (q[i] * pop.s(i)));
  return acc.value();
}

// ---------------------------------------------------------------------------
// Models O and P

inline DefectiveSummary op_summary(const Population& pop, const InspectionWeights& q,
                                   std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  detail::require_weights(pop, q);
  const PositionLaw law = successive_sampling_positions(q, enumeration_limit);
  DefectiveSummary out;
  out.detect_prob = detect_probability(pop);
  out.conditional_mean = detail::weighted_position_mean(law, pop.p());
  out.mean_is_infinite = !pop.perfect_recognition();
  std::vector<double> detected(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) detected[i] = pop.s(i) * pop.p(i);
  out.detected_mean = detail::weighted_position_mean(law, detected) / compensated_total(detected);
  return out;
}

}  // namespace iws
