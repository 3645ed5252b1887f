#pragma once

// Exact law of the position of each item in a successive-sampling
// (weighted sampling without replacement) permutation driven by q.
//
// Instead of visiting all N! orders, probabilities are accumulated over
// unordered prefix sets S: W(S) is the probability that the first |S|
// draws are exactly the items in S (in any order), and
//   W(S + {i}) += W(S) * q_i / q(complement of S).
// This groups the same product terms as the full enumeration.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "iws/error.hpp"
#include "iws/numeric.hpp"
#include "iws/population.hpp"

namespace iws {

inline constexpr std::size_t kDefaultEnumerationLimit = 10;

/// position[i][k] = P(item i is inspected k+1-th).
struct PositionLaw {
  std::vector<std::vector<double>> position;

  std::size_t size() const noexcept { return position.size(); }
};

inline PositionLaw successive_sampling_positions(const InspectionWeights& q,
                                                 std::size_t enumeration_limit =
                                                     kDefaultEnumerationLimit) {
  const std::size_t n = q.size();
  if (n > enumeration_limit) throw enumeration_limit_error(n, enumeration_limit);
  if (n >= 31) throw enumeration_limit_error(n, 30);

  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<CompensatedSum> prefix_acc(std::size_t{full} + 1);
  std::vector<std::vector<CompensatedSum>> acc(n, std::vector<CompensatedSum>(n));
  prefix_acc[0].add(1.0);

  for (std::uint32_t set = 0; set < full; ++set) {
    const double w = prefix_acc[set].value();
    if (w == 0.0) continue;
    CompensatedSum rest;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(set >> j & 1U)) rest.add(q[j]);
    }
    const double remaining = rest.value();
    const auto depth = static_cast<std::size_t>(std::popcount(set));
    for (std::size_t i = 0; i < n; ++i) {
      if (set >> i & 1U) continue;
      const double step = w * (q[i] / remaining);
      acc[i][depth].add(step);
      prefix_acc[set | (std::uint32_t{1} << i)].add(step);
    }
  }

  PositionLaw law;
  law.position.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) law.position[i][k] = acc[i][k].value();
  }
  return law;
}

}  // namespace iws
