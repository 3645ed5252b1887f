#pragma once

// Population model: prior probabilities p, recognition probabilities s,
// inspection weights q and their attention / conditional-inspection
// decomposition. Items are addressed by 0-based index internally; every item
// also carries a stable string id used in reports.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iws/error.hpp"
#include "iws/numeric.hpp"

namespace iws {

/// Largest deviation of an input probability vector from summing to one that
/// is still accepted (and renormalized away).
inline constexpr double kSumTolerance = 1e-6;

namespace detail {

inline std::vector<double> normalized_probabilities(std::vector<double> v, const char* name) {
  if (v.empty()) throw validation_error(std::string(name) + ": vector is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      throw validation_error(std::string(name) + "_" + std::to_string(i + 1) +
                             " must be strictly positive (got " + std::to_string(v[i]) + ")");
    }
  }
  const double total = compensated_total(v);
  if (std::fabs(total - 1.0) > kSumTolerance) {
    throw validation_error(std::string(name) + " sums to " + std::to_string(total) +
                           ", deviating from 1 by more than 1e-6");
  }
  for (double& x : v) x /= total;
  return v;
}

inline std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i + 1);
  return ids;
}

}  // namespace detail

class Population {
 public:
  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> p() const noexcept { return p_; }
  std::span<const double> s() const noexcept { return s_; }
  double p(std::size_t i) const { return p_[i]; }
  double s(std::size_t i) const { return s_[i]; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }

  /// Probability that the Gamma-item is ever recognized when each item is
  /// inspected once: sum s_i p_i.
  double detect_probability() const noexcept { return accurate_dot(p_, s_); }

  bool perfect_recognition() const noexcept {
    return std::all_of(s_.begin(), s_.end(), [](double x) { return x == 1.0; });
  }

 private:
  Population(std::vector<double> p, std::vector<double> s, std::vector<std::string> ids)
      : p_(std::move(p)), s_(std::move(s)), ids_(std::move(ids)) {}

  friend Population validate_population(std::vector<double>, std::optional<std::vector<double>>,
                                        std::vector<std::string>);

  std::vector<double> p_;
  std::vector<double> s_;
  std::vector<std::string> ids_;
};

/// Validates raw priors and recognition probabilities. p is renormalized to
/// sum to one; s defaults to all ones; ids default to "1".."N".
inline Population validate_population(std::vector<double> p,
                                      std::optional<std::vector<double>> s = std::nullopt,
                                      std::vector<std::string> ids = {}) {
  const std::size_t n = p.size();
  if (n == 0) throw validation_error("population is empty");
  if (s && s->size() != n) {
    throw validation_error("length mismatch: p has " + std::to_string(n) + " entries, s has " +
                           std::to_string(s->size()));
  }
  if (!ids.empty() && ids.size() != n) {
    throw validation_error("length mismatch: p has " + std::to_string(n) + " entries, ids has " +
                           std::to_string(ids.size()));
  }
  std::vector<double> pn = detail::normalized_probabilities(std::move(p), "p");
  std::vector<double> sv = s ? std::move(*s) : std::vector<double>(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(sv[i]) || sv[i] <= 0.0 || sv[i] > 1.0) {
      throw validation_error("s_" + std::to_string(i + 1) + " must lie in (0,1] (got " +
                             std::to_string(sv[i]) + ")");
    }
  }
  if (ids.empty()) ids = detail::default_ids(n);
  return Population(std::move(pn), std::move(sv), std::move(ids));
}

/// Sampling distribution q over items for the democratic models.
class InspectionWeights {
 public:
  explicit InspectionWeights(std::vector<double> q)
      : q_(detail::normalized_probabilities(std::move(q), "q")) {}

  static InspectionWeights uniform(std::size_t n) {
    if (n == 0) throw validation_error("q: vector is empty");
    return InspectionWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return q_.size(); }
  std::span<const double> q() const noexcept { return q_; }
  double operator[](std::size_t i) const { return q_[i]; }

 private:
  std::vector<double> q_;
};

/// q_i = lambda_i pi_i / sum_j lambda_j pi_j.
class ProfileDecomposition {
 public:
  ProfileDecomposition(std::vector<double> lambda, std::vector<double> pi)
      : lambda_(detail::normalized_probabilities(std::move(lambda), "lambda")), pi_(std::move(pi)) {
    if (pi_.size() != lambda_.size()) {
      throw validation_error("length mismatch between lambda and pi");
    }
    for (std::size_t i = 0; i < pi_.size(); ++i) {
      if (!std::isfinite(pi_[i]) || pi_[i] <= 0.0 || pi_[i] > 1.0) {
        throw validation_error("pi_" + std::to_string(i + 1) + " must lie in (0,1]");
      }
    }
  }

  std::size_t size() const noexcept { return lambda_.size(); }
  std::span<const double> lambda() const noexcept { return lambda_; }
  std::span<const double> pi() const noexcept { return pi_; }

  /// Fraction of arrivals that get inspected: sum lambda_i pi_i.
  double inspection_rate() const noexcept { return accurate_dot(lambda_, pi_); }

 private:
  std::vector<double> lambda_;
  std::vector<double> pi_;
};

inline void require_same_size(const Population& pop, std::size_t n, const char* what) {
  if (pop.size() != n) {
    throw validation_error(std::string("length mismatch: population has ") +
                           std::to_string(pop.size()) + " items, " + what + " has " +
                           std::to_string(n));
  }
}

/// Posterior p_i' = L_i p_i / sum_j L_j p_j. A zero posterior is an error:
/// the caller must drop such items explicitly.
inline Population bayes_update(const Population& pop, std::span<const double> likelihoods) {
  require_same_size(pop, likelihoods.size(), "likelihood vector");
  std::vector<double> weighted(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!std::isfinite(likelihoods[i]) || likelihoods[i] < 0.0) {
      throw validation_error("likelihood_" + std::to_string(i + 1) + " must be nonnegative");
    }
    weighted[i] = likelihoods[i] * pop.p(i);
  }
  const double total = compensated_total(weighted);
  if (!(total > 0.0)) throw validation_error("degenerate posterior: all L_i p_i are zero");

  std::string zeros;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (weighted[i] == 0.0) zeros += (zeros.empty() ? "" : ", ") + pop.id(i);
  }
  if (!zeros.empty()) {
    throw validation_error("posterior has p_i = 0 for items {" + zeros +
                           "}; remove them from the population explicitly before updating");
  }
  for (double& w : weighted) w /= total;
  return validate_population(std::move(weighted), std::vector<double>(pop.s().begin(), pop.s().end()),
                             pop.ids());
}

inline InspectionWeights profile_to_weights(const ProfileDecomposition& d) {
  std::vector<double> q(d.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = d.lambda()[i] * d.pi()[i];
  const double total = compensated_total(q);
  for (double& x : q) x /= total;
  return InspectionWeights(std::move(q));
}

/// Conditional inspection probabilities reproducing `target`: pi_i is
/// proportional to q_i / lambda_i and scaled so that max_i pi_i = scale.
inline ProfileDecomposition solve_conditional_inspection(std::span<const double> lambda,
                                                         const InspectionWeights& target,
                                                         double scale = 1.0) {
  if (lambda.size() != target.size()) throw validation_error("length mismatch between lambda and q");
  if (!(scale > 0.0) || scale > 1.0) {
    throw validation_error("impossible decomposition: scale " + std::to_string(scale) +
                           " would require pi outside (0,1]");
  }
  std::vector<double> lam = detail::normalized_probabilities({lambda.begin(), lambda.end()}, "lambda");
  std::vector<double> pi(lam.size());
  for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = target[i] / lam[i];
  const double top = *std::max_element(pi.begin(), pi.end());
  for (double& x : pi) x = std::min(1.0, scale * (x / top));
  return ProfileDecomposition(std::move(lam), std::move(pi));
}

/// Same as above but pinning the inspection rate sum_i lambda_i pi_i = rate,
/// which gives pi_i = rate q_i / lambda_i.
inline ProfileDecomposition solve_conditional_inspection_for_rate(std::span<const double> lambda,
                                                                  const InspectionWeights& target,
                                                                  double rate) {
  if (lambda.size() != target.size()) throw validation_error("length mismatch between lambda and q");
  if (!(rate > 0.0)) throw validation_error("inspection rate must be positive");
  std::vector<double> lam = detail::normalized_probabilities({lambda.begin(), lambda.end()}, "lambda");
  std::vector<double> pi(lam.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    pi[i] = rate * target[i] / lam[i];
    if (pi[i] > 1.0) {
      throw validation_error("impossible decomposition: pi_" + std::to_string(i + 1) + " = " +
                             std::to_string(pi[i]) + " exceeds 1 at rate " + std::to_string(rate));
    }
  }
  return ProfileDecomposition(std::move(lam), std::move(pi));
}

}  // namespace iws
