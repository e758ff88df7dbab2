#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "permstat/array.hpp"
#include "permstat/statistics.hpp"

namespace permstat {
namespace oracle {

/// Hard enumeration caps: factorial growth; these finish in seconds to
/// minutes on one core. Exceeding a cap is an explicit error, never silence.
inline constexpr int kMaxPmfT1 = 8;    // n! states
inline constexpr int kMaxPmfT3 = 8;    // n! states
inline constexpr int kMaxPmfT2 = 7;    // (n!)^2 states
inline constexpr int kMaxJointT1 = 5;  // n! * n^2 states
inline constexpr int kMaxJointT2 = 4;  // (n!)^2 * n(n-1)(n-2) * 2 states

/// Full pmf of a statistic under exhaustive enumeration. Outcomes are exact
/// integer counts over an integer total; values are grouped by exact float
/// equality (canonical summation order makes equal outcomes collide) and
/// sorted ascending.
struct ExactDistribution {
  std::vector<std::pair<double, std::uint64_t>> outcomes;
  std::uint64_t total = 0;

  double mean() const;
  double variance() const;
};

/// T1/T2 pmf; iterates permutations with the lexicographic successor.
ExactDistribution exact_distribution(const Array3& a, StatKind kind);
/// T3 pmf.
ExactDistribution exact_distribution(const Array2& a);

/// Exact tail count: P(|value - center| >= t) as an integer ratio.
struct TailProbability {
  std::uint64_t count = 0;
  std::uint64_t total = 0;
  double value() const { return total ? static_cast<double>(count) / static_cast<double>(total) : 0.0; }
};
TailProbability exact_tail(const ExactDistribution& dist, double center, double t);

/// Negative-control switch: `corrupted` breaks the move on purpose by
/// carrying out only the first overwrite (T1: sigma(i1) alone; T2: pi(i1)
/// alone), leaving a non-bijective map. A correct move yields discrepancy
/// exactly 0; a corrupted one must not. Note that merely re-pairing the two
/// cycles (for example applying the same cycle to sigma and pi) does not
/// work as a control: reversing the triple inverts the cycle, so such pairs
/// remain exchangeable.
enum class MoveVariant { standard, corrupted };

/// Builds the joint counts of (T1, T1') over all (sigma, i1, i2) and returns
/// the largest |P(x,x') - P(x',x)|. Exact integer counting; 0 means the pair
/// is exchangeable.
double verify_exchangeable_t1(const Array3& a, MoveVariant variant = MoveVariant::standard);

/// Same over all (sigma, pi, distinct triple, coin) for (T2, T2').
double verify_exchangeable_t2(const Array3& a, MoveVariant variant = MoveVariant::standard);

/// Exact conditional means E[Y | T2 = v] for every attained value v, from one
/// pass over S_n x S_n. Values sorted ascending; counts sum to (n!)^2.
struct ConditionalMeanY {
  std::vector<double> t2_values;
  std::vector<double> mean_y;
  std::vector<std::uint64_t> counts;

  /// Mean for an exact attained value (bit equality); throws if absent.
  double mean_for(double t2_value) const;
};
ConditionalMeanY cond_mean_y(const Array3& a);

/// JSON form {"total": N, "outcomes": [[value, count], ...]}.
std::string to_json_string(const ExactDistribution& dist);
ExactDistribution distribution_from_json(std::string_view json_text);

}  // namespace oracle
}  // namespace permstat
