#pragma once

// Seeded simulation of the inspection processes.
//
// Replication r draws from its own engine keyed by (seed, r), so the result
// does not depend on how replications are split across threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "iws/distribution.hpp"
#include "iws/error.hpp"
#include "iws/model.hpp"
#include "iws/population.hpp"
#include "iws/strategies.hpp"

namespace iws {

inline constexpr std::uint64_t kDefaultSimMaxSteps = 10'000'000;

struct SimConfig {
  Model model = Model::ABCD;
  std::uint64_t reps = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = kDefaultSimMaxSteps;
  std::optional<InspectionWeights> q;  // required for IKL, J, MN, OP
  double ef_eps = kDefaultScheduleEps;
  unsigned threads = 1;  // 0 = hardware concurrency
};

struct EmpiricalResult {
  std::map<std::uint64_t, std::uint64_t> counts;  // detecting step -> replications
  std::uint64_t censored = 0;  // never detected, or max_steps reached
  std::uint64_t reps = 0;
  double mean_detected = std::numeric_limits<double>::quiet_NaN();
  double stderr_mean = std::numeric_limits<double>::quiet_NaN();

  std::uint64_t detected() const noexcept { return reps - censored; }

  /// Fraction of replications detected by step m.
  double cdf(std::uint64_t m) const {
    std::uint64_t below = 0;
    for (const auto& [step, count] : counts) {
      if (step > m) break;
      below += count;
    }
    return static_cast<double>(below) / static_cast<double>(reps);
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Engine for replication `rep` of a run seeded with `seed`.
inline std::mt19937_64 replication_engine(std::uint64_t seed, std::uint64_t rep) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ rep));
}

namespace detail {

template <typename Engine>
double uniform01(Engine& engine) {
  return std::generate_canonical<double, 64>(engine);
}

// Inverse-cdf lookup on a cumulative vector; cum.back() is the total mass.
inline std::size_t lookup(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

inline std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> cum(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) cum[i] = acc += w[i];
  return cum;
}

}  // namespace detail

/// Index of the Gamma-item: i with probability p_i, from one uniform variate.
template <typename Engine>
std::size_t sample_gamma_index(const Population& pop, Engine& engine) {
  const std::vector<double> cum = detail::cumulative(pop.p());
  return detail::lookup(cum, detail::uniform01(engine));
}

namespace detail {

inline constexpr std::uint64_t kCensored = 0;

// Precomputed per-run state; each replication only reads it.
class Simulator {
 public:
  Simulator(const Population& pop, const SimConfig& cfg) : pop_(pop), cfg_(cfg), p_cum_(cumulative(pop.p())) {
    if (cfg.reps < 1) throw validation_error("reps must be at least 1");
    if (cfg.max_steps < 1) throw validation_error("max_steps must be at least 1");
    if (needs_weights(cfg.model)) {
      if (!cfg.q) {
        throw validation_error("model " + std::string(to_string(cfg.model)) + " requires inspection weights q");
      }
      require_same_size(pop, cfg.q->size(), "q");
      q_.assign(cfg.q->q().begin(), cfg.q->q().end());
      q_cum_ = cumulative(q_);
    }
    if (cfg.model == Model::ABCD || cfg.model == Model::GH) {
      const OrderedPolicy policy = descending_order(pop);
      position_.resize(pop.size());
      for (std::size_t k = 0; k < policy.order.size(); ++k) position_[policy.order[k]] = k + 1;
    }
    if (cfg.model == Model::EF) {
      const Schedule sched =
          ef_schedule(pop, cfg.ef_eps, static_cast<std::size_t>(std::min<std::uint64_t>(cfg.max_steps, kDefaultScheduleMaxSteps)));
      visits_.resize(pop.size());
      for (const auto& step : sched.steps) visits_[step.item].push_back(step.t);
    }
  }

  // Detecting step, or kCensored.
  std::uint64_t run(std::uint64_t rep) const {
    auto engine = replication_engine(cfg_.seed, rep);
    const std::size_t c = lookup(p_cum_, uniform01(engine));
    const double s = pop_.s(c);
    switch (cfg_.model) {
      case Model::ABCD:
        return position_[c];
      case Model::GH:
        return uniform01(engine) < s ? position_[c] : kCensored;
      case Model::EF:
        for (std::size_t t : visits_[c]) {
          if (t > cfg_.max_steps) return kCensored;
          if (uniform01(engine) < s) return t;
        }
        return kCensored;  // beyond the truncated schedule
      case Model::J:
      case Model::MN: {
        const bool imperfect = cfg_.model == Model::MN;
        for (std::uint64_t t = 1; t <= cfg_.max_steps; ++t) {
          if (lookup(q_cum_, uniform01(engine)) != c) continue;
          if (!imperfect || uniform01(engine) < s) return t;
        }
        return kCensored;
      }
      case Model::IKL:
      case Model::OP: {
        // Successive sampling: renormalise over the items not yet drawn.
        std::vector<double> weights = q_;
        const std::size_t n = weights.size();
        for (std::uint64_t t = 1; t <= std::min<std::uint64_t>(n, cfg_.max_steps); ++t) {
          const std::vector<double> cum = cumulative(weights);
          const std::size_t i = lookup(cum, uniform01(engine));
          if (i == c) {
            if (cfg_.model == Model::IKL || uniform01(engine) < s) return t;
            return kCensored;  // never inspected again
          }
          weights[i] = 0.0;
        }
        return kCensored;
      }
    }
    return kCensored;
  }

 private:
  const Population& pop_;
  const SimConfig& cfg_;
  std::vector<double> p_cum_;
  std::vector<double> q_;
  std::vector<double> q_cum_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<std::size_t>> visits_;
};

inline void finalize(EmpiricalResult& r) {
  const std::uint64_t det = r.detected();
  if (det == 0) return;
  long double sum = 0.0L, sumsq = 0.0L;
  for (const auto& [step, count] : r.counts) {
    const long double x = static_cast<long double>(step);
    sum += x * static_cast<long double>(count);
    sumsq += x * x * static_cast<long double>(count);
  }
  const long double n = static_cast<long double>(det);
  const long double mean = sum / n;
  r.mean_detected = static_cast<double>(mean);
  if (det > 1) {
    const long double var = (sumsq - n * mean * mean) / (n - 1.0L);
    r.stderr_mean = static_cast<double>(std::sqrt(std::max(0.0L, var) / n));
  } else {
    r.stderr_mean = 0.0;
  }
}

}  // namespace detail

/// Runs cfg.reps independent replications of the model's inspection process.
inline EmpiricalResult simulate(const Population& pop, const SimConfig& cfg) {
  const detail::Simulator sim(pop, cfg);
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, cfg.reps));

  std::vector<EmpiricalResult> parts(threads);
  const auto work = [&](unsigned part) {
    const std::uint64_t begin = cfg.reps * part / threads;
    const std::uint64_t end = cfg.reps * (part + 1) / threads;
    EmpiricalResult& out = parts[part];
    for (std::uint64_t r = begin; r < end; ++r) {
      const std::uint64_t t = sim.run(r);
      if (t == detail::kCensored) {
        ++out.censored;
      } else {
        ++out.counts[t];
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned part = 0; part < threads; ++part) pool.emplace_back(work, part);
  }

  EmpiricalResult result;
  result.reps = cfg.reps;
  for (const auto& part : parts) {
    result.censored += part.censored;
    for (const auto& [step, count] : part.counts) result.counts[step] += count;
  }
  detail::finalize(result);
  return result;
}

/// Half-width of the DKW band: sqrt(ln(2/alpha) / (2n)).
inline double dkw_band(std::uint64_t n, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

/// DKW goodness-of-fit check of a simulation against an exact law. The
/// censored fraction must match the atom within the band for all
/// replications; the detect-conditioned cdfs are then compared with the band
/// for the detected count.
inline bool dkw_check(const EmpiricalResult& emp, const InspectionDistribution& exact, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("alpha must lie in (0,1)");
  if (emp.reps == 0) throw validation_error("empirical result has no replications");
  const double band = dkw_band(emp.reps, alpha);
  const double censored = static_cast<double>(emp.censored) / static_cast<double>(emp.reps);
  if (std::fabs(censored - exact.atom_at_infinity()) > band) return false;

  const std::uint64_t det = emp.detected();
  if (det == 0 || exact.finite_mass() <= 0.0) return det == 0 && exact.finite_mass() <= band;
  const double cond_band = dkw_band(det, alpha);
  const std::size_t h = std::max<std::size_t>(
      exact.horizon(), emp.counts.empty() ? std::size_t{1} : static_cast<std::size_t>(emp.counts.rbegin()->first));

  std::uint64_t below = 0;
  auto it = emp.counts.begin();
  const std::vector<double> table = exact.cdf_table(h);
  for (std::size_t m = 1; m <= h; ++m) {
    while (it != emp.counts.end() && it->first <= m) below += (it++)->second;
    const double f_emp = static_cast<double>(below) / static_cast<double>(det);
    const double f_exact = table[m - 1] / exact.finite_mass();
    if (std::fabs(f_emp - f_exact) > cond_band) return false;
  }
  return true;
}

/// `m,count` rows plus a trailing `censored,<n>` row. `config_json`, when
/// non-empty, is echoed as a leading `# ` comment line.
inline void write_empirical_csv(std::ostream& os, const EmpiricalResult& emp, const std::string& config_json = {}) {
  if (!config_json.empty()) os << "# " << config_json << '\n';
  os << "m,count\n";
  for (const auto& [step, count] : emp.counts) os << step << ',' << count << '\n';
  os << "censored," << emp.censored << '\n';
}

}  // namespace iws
