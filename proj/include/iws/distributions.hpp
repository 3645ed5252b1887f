#pragma once

// Exact laws of the number of inspections under each model's optimal
// strategy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "iws/distribution.hpp"
#include "iws/model.hpp"
#include "iws/numeric.hpp"
#include "iws/population.hpp"
#include "iws/strategies.hpp"
#include "iws/successive_sampling.hpp"

namespace iws {

inline constexpr double kGeometricTailTarget = 1e-12;
inline constexpr std::size_t kGeometricHorizonCap = 1'000'000;

/// Undetected mass after m inspections with per-item success rates:
/// sum_k p_k (1 - rate_k)^m.
inline double geometric_tail(std::span<const double> p, std::span<const double> rate, std::size_t m) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc.add(p[k] * std::pow(1.0 - rate[k], static_cast<double>(m)));
  }
  return acc.value();
}

/// Smallest m with geometric_tail(m) < 1e-12, capped at 10^6.
inline std::size_t default_geometric_horizon(std::span<const double> p, std::span<const double> rate) {
  // Invariant: tail(lo) >= target > tail(hi).
  std::size_t lo = 0;
  std::size_t hi = 1;
  while (geometric_tail(p, rate, hi) >= kGeometricTailTarget) {
    if (hi == kGeometricHorizonCap) return kGeometricHorizonCap;
    lo = hi;
    hi = std::min(2 * hi, kGeometricHorizonCap);
  }
  while (lo + 1 < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (geometric_tail(p, rate, mid) < kGeometricTailTarget) hi = mid; else lo = mid;
  }
  return hi;
}

namespace detail {

// Mixture of geometric laws: pmf(m) = sum_k p_k r_k (1 - r_k)^(m-1).
inline InspectionDistribution geometric_mixture(std::span<const double> p, std::span<const double> rate,
                                                std::size_t horizon) {
  if (horizon == 0) horizon = default_geometric_horizon(p, rate);
  const std::size_t n = p.size();
  std::vector<double> survive(n, 1.0);  // (1 - r_k)^(m-1)
  std::map<std::size_t, double> pmf;
  for (std::size_t m = 1; m <= horizon; ++m) {
    if ((m - 1) % 1024 == 0) {
      for (std::size_t k = 0; k < n; ++k) survive[k] = std::pow(1.0 - rate[k], static_cast<double>(m - 1));
    }
    CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
      acc.add(p[k] * rate[k] * survive[k]);
      survive[k] *= 1.0 - rate[k];
    }
    const double mass = acc.value();
    if (mass > 0.0) pmf.emplace(m, mass);
  }
  const double tail = geometric_tail(p, rate, horizon);
  return InspectionDistribution(std::move(pmf), tail, tail > 0.0);
}

inline std::map<std::size_t, double> positional_pmf(const PositionLaw& law, std::span<const double> w) {
  std::map<std::size_t, double> pmf;
  for (std::size_t k = 0; k < law.size(); ++k) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < law.size(); ++i) acc.add(w[i] * law.position[i][k]);
    pmf.emplace(k + 1, acc.value());
  }
  return pmf;
}

inline double undetected_mass(const Population& pop) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < pop.size(); ++i) acc.add((1.0 - pop.s(i)) * pop.p(i));
  return acc.value();
}

inline std::vector<double> detected_weights(const Population& pop) {
  std::vector<double> w(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) w[i] = pop.s(i) * pop.p(i);
  return w;
}

inline std::map<std::size_t, double> scaled(std::map<std::size_t, double> pmf, double factor) {
  for (auto& [m, mass] : pmf) mass *= factor;
  return pmf;
}

}  // namespace detail

/// pmf(k) = p_(k), the k-th largest prior.
inline InspectionDistribution dist_abcd(const Population& pop) {
  const OrderedPolicy policy = descending_order(pop);
  std::map<std::size_t, double> pmf;
  for (std::size_t k = 0; k < policy.order.size(); ++k) pmf.emplace(k + 1, pop.p(policy.order[k]));
  return InspectionDistribution(std::move(pmf), 0.0, false);
}

/// pmf(t) = detection probability of step t; a nonzero residual is a
/// truncation artifact.
inline InspectionDistribution dist_ef(const Schedule& sched) {
  std::map<std::size_t, double> pmf;
  for (const auto& step : sched.steps) {
    if (step.detect_prob > 0.0) pmf.emplace(step.t, step.detect_prob);
  }
  return InspectionDistribution(std::move(pmf), sched.residual_mass, sched.residual_mass > 0.0);
}

inline InspectionDistribution dist_gh(const Population& pop, DetectionLaw law = DetectionLaw::per_item) {
  const OrderedPolicy policy = descending_order(pop);
  std::map<std::size_t, double> pmf;
  if (law == DetectionLaw::per_item) {
    for (std::size_t k = 0; k < policy.order.size(); ++k) {
      const std::size_t i = policy.order[k];
      pmf.emplace(k + 1, pop.s(i) * pop.p(i));
    }
    return InspectionDistribution(std::move(pmf), detail::undetected_mass(pop), false);
  }
  const double detect = detect_probability(pop);
  for (std::size_t k = 0; k < policy.order.size(); ++k) pmf.emplace(k + 1, detect * pop.p(policy.order[k]));
  return InspectionDistribution(std::move(pmf), pop.perfect_recognition() ? 0.0 : 1.0 - detect, false);
}

/// Sampling with replacement from q: cdf(m) = 1 - sum_k (1 - q_k)^m p_k.
/// horizon == 0 selects the default tail rule.
inline InspectionDistribution dist_j(const Population& pop, const InspectionWeights& q, std::size_t horizon = 0) {
  require_same_size(pop, q.size(), "q");
  return detail::geometric_mixture(pop.p(), q.q(), horizon);
}

/// cdf(m) = 1 - sum_k (1 - s_k q_k)^m p_k.
inline InspectionDistribution dist_mn(const Population& pop, const InspectionWeights& q, std::size_t horizon = 0) {
  require_same_size(pop, q.size(), "q");
  std::vector<double> rate(pop.size());
  for (std::size_t k = 0; k < rate.size(); ++k) rate[k] = pop.s(k) * q[k];
  return detail::geometric_mixture(pop.p(), rate, horizon);
}

inline InspectionDistribution dist_ikl_exact(const Population& pop, const InspectionWeights& q,
                                             std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  require_same_size(pop, q.size(), "q");
  const PositionLaw law = successive_sampling_positions(q, enumeration_limit);
  return InspectionDistribution(detail::positional_pmf(law, pop.p()), 0.0, false);
}

inline InspectionDistribution dist_op_exact(const Population& pop, const InspectionWeights& q,
                                            std::size_t enumeration_limit = kDefaultEnumerationLimit,
                                            DetectionLaw law = DetectionLaw::per_item) {
  require_same_size(pop, q.size(), "q");
  const PositionLaw positions = successive_sampling_positions(q, enumeration_limit);
  if (law == DetectionLaw::per_item) {
    return InspectionDistribution(detail::positional_pmf(positions, detail::detected_weights(pop)),
                                  detail::undetected_mass(pop), false);
  }
  const double detect = detect_probability(pop);
  return InspectionDistribution(detail::scaled(detail::positional_pmf(positions, pop.p()), detect),
                                pop.perfect_recognition() ? 0.0 : 1.0 - detect, false);
}

}  // namespace iws
