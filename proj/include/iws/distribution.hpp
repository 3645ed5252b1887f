#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "iws/error.hpp"
#include "iws/numeric.hpp"

namespace iws {

/// Law of the number of inspections: a sparse pmf on {1, 2, ...} plus an
/// explicit atom at infinity. The atom is either true defectiveness (the
/// Gamma-item may never be found) or, when `truncated()` is set, mass beyond
/// the computed horizon.
class InspectionDistribution {
 public:
  static constexpr double kMassTolerance = 1e-9;

  InspectionDistribution(std::map<std::size_t, double> pmf, double atom_at_infinity, bool truncated)
      : pmf_(std::move(pmf)), atom_(atom_at_infinity), truncated_(truncated) {
    if (!(atom_ >= 0.0 && atom_ <= 1.0)) throw validation_error("atom at infinity outside [0,1]");
    CompensatedSum acc;
    steps_.reserve(pmf_.size());
    cumulative_.reserve(pmf_.size());
    for (const auto& [m, mass] : pmf_) {
      if (m == 0) throw validation_error("inspection counts start at 1");
      if (!(mass >= 0.0)) throw validation_error("negative probability at m=" + std::to_string(m));
      acc.add(mass);
      steps_.push_back(m);
      cumulative_.push_back(acc.value());
    }
    finite_mass_ = acc.value();
    if (std::fabs(finite_mass_ + atom_ - 1.0) > kMassTolerance) {
      throw validation_error("distribution mass " + std::to_string(finite_mass_ + atom_) +
                             " differs from 1");
    }
  }

  double pmf(std::size_t m) const {
    const auto it = pmf_.find(m);
    return it == pmf_.end() ? 0.0 : it->second;
  }

  /// P(N <= m)
  double cdf(std::size_t m) const {
    const auto it = std::upper_bound(steps_.begin(), steps_.end(), m);
    if (it == steps_.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - steps_.begin()) - 1];
  }

  /// Largest step with stored mass (0 for an empty support).
  std::size_t horizon() const noexcept { return steps_.empty() ? 0 : steps_.back(); }
  double atom_at_infinity() const noexcept { return atom_; }
  bool truncated() const noexcept { return truncated_; }
  bool defective() const noexcept { return !truncated_ && atom_ > 0.0; }
  double finite_mass() const noexcept { return finite_mass_; }
  const std::map<std::size_t, double>& support() const noexcept { return pmf_; }

  /// sum_m m pmf(m) over the stored support.
  double finite_mean() const {
    CompensatedSum acc;
    for (const auto& [m, mass] : pmf_) {
      const double x = static_cast<double>(m);
      const double prod = x * mass;
      acc.add(prod);
      acc.add(std::fma(x, mass, -prod));
    }
    return acc.value();
  }

  /// Mean given a finite outcome.
  double conditional_mean() const { return finite_mean() / finite_mass_; }

  /// cdf(1..h) as a dense table; entry k holds cdf(k+1).
  std::vector<double> cdf_table(std::size_t h) const {
    std::vector<double> out(h, 0.0);
    std::size_t pos = 0;
    double current = 0.0;
    for (std::size_t m = 1; m <= h; ++m) {
      while (pos < steps_.size() && steps_[pos] <= m) current = cumulative_[pos++];
      out[m - 1] = current;
    }
    return out;
  }

 private:
  std::map<std::size_t, double> pmf_;
  std::vector<std::size_t> steps_;
  std::vector<double> cumulative_;
  double atom_ = 0.0;
  double finite_mass_ = 0.0;
  bool truncated_ = false;
};

namespace detail {

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace detail

/// CSV export: `m,pmf,cdf` rows followed by `atom_at_infinity,<v>` and
/// `truncated,<bool>` metadata rows.
inline void write_distribution_csv(std::ostream& os, const InspectionDistribution& d) {
  os << "m,pmf,cdf\n";
  CompensatedSum acc;
  for (const auto& [m, mass] : d.support()) {
    acc.add(mass);
    os << m << ',' << detail::format_double(mass) << ',' << detail::format_double(acc.value())
       << '\n';
  }
  os << "atom_at_infinity," << detail::format_double(d.atom_at_infinity()) << '\n';
  os << "truncated," << (d.truncated() ? "true" : "false") << '\n';
}

inline InspectionDistribution read_distribution_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("m,pmf,cdf", 0) != 0) {
    throw validation_error("distribution CSV: missing `m,pmf,cdf` header");
  }
  std::map<std::size_t, double> pmf;
  double atom = 0.0;
  bool truncated = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw validation_error("distribution CSV: bad row `" + line + "`");
    const std::string key = line.substr(0, comma);
    const std::string rest = line.substr(comma + 1);
    if (key == "atom_at_infinity") {
      atom = std::stod(rest);
    } else if (key == "truncated") {
      truncated = rest.rfind("true", 0) == 0;
    } else {
      pmf[std::stoul(key)] = std::stod(rest.substr(0, rest.find(',')));
    }
  }
  return InspectionDistribution(std::move(pmf), atom, truncated);
}

}  // namespace iws
