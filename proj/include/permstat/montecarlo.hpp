#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permstat/array.hpp"
#include "permstat/statistics.hpp"

namespace permstat {

/// Empirical tail probabilities on an ascending t grid. hits[j] counts
/// samples with |T - center| >= t_grid[j]; center is the exact closed-form
/// mean, never an estimate. Intervals are two-sided 99% Clopper-Pearson.
/// Sample i always uses substream(seed, i), so the result is a pure function
/// of (array, kind, grid, samples, seed) no matter how many workers ran.
struct TailEstimate {
  std::vector<double> t_grid;
  std::vector<std::uint64_t> hits;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double center = 0.0;
  std::vector<double> point;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
};

/// threads == 0 picks hardware concurrency. The thread count never changes
/// any output value.
TailEstimate estimate_tail(const Array3& a, StatKind kind, std::span<const double> t_grid,
                           std::uint64_t samples, std::uint64_t seed, int threads = 0);
TailEstimate estimate_tail(const Array2& a, std::span<const double> t_grid,
                           std::uint64_t samples, std::uint64_t seed, int threads = 0);

/// Empirical moments of the pair increment over fresh (state, move) draws.
/// mean_delta / se_delta summarize the per-state drift: under the uniform
/// stationary law the drift averages to zero.
struct PairMoments {
  double mean_abs_delta = 0.0;
  double mean_delta_sq = 0.0;
  double mean_delta = 0.0;
  double se_delta = 0.0;
  std::uint64_t samples = 0;
};

PairMoments estimate_pair_moments(const Array3& a, StatKind kind, std::uint64_t samples,
                                  std::uint64_t seed, int threads = 0);

/// Two-sided exact (Clopper-Pearson) binomial interval for k hits in n trials
/// at confidence 1 - alpha.
std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double alpha);

/// "a:b:step" inclusive of a, walking in step increments up to b (a small
/// relative epsilon guards the last point against float drift). step may be
/// omitted ("a:b" means step 1); a bare "x" is the single-point grid {x}.
std::vector<double> parse_t_grid(std::string_view text);

/// CSV with one `# {json metadata}` comment line, then t,point,ci_low,ci_high
/// rows. Floats use round-trip precision; output is byte-stable.
void write_csv(const TailEstimate& est, std::ostream& out, std::string_view stat_name);
std::string to_json_string(const TailEstimate& est, std::string_view stat_name);

}  // namespace permstat
