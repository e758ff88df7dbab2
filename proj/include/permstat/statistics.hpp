#pragma once

#include <cstdint>
#include <span>

#include "permstat/array.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

enum class StatKind { t1, t2, t3 };

/// All sums run in canonical ascending index order, so identical inputs give
/// bit-identical values across runs and the enumeration oracle can group
/// equal outcomes by exact float equality.

/// T3 = sum_i a(i, sigma(i)).
double t3(const Array2& a, const Permutation& sigma);

/// T1 = sum_i sum_j a(i, j, sigma(i)); evaluated as sum_i row_sum(i, sigma(i)),
/// which reproduces the canonical double sum bit for bit.
double t1(const Array3& a, const Permutation& sigma);

/// T2 = sum_i a(i, sigma(i), pi(i)).
double t2(const Array3& a, const Permutation& sigma, const Permutation& pi);

/// Evaluation on raw image maps, not necessarily bijections; the oracle's
/// negative-control moves produce non-permutation maps on purpose.
double t3_on(const Array2& a, std::span<const std::int32_t> sigma);
double t1_on(const Array3& a, std::span<const std::int32_t> sigma);
double t2_on(const Array3& a, std::span<const std::int32_t> sigma,
             std::span<const std::int32_t> pi);

/// Exact expectations over uniform permutations:
/// E[T1] = total/n, E[T2] = total/n^2, E[T3] = total/n.
double mean_t1(const Array3& a);
double mean_t2(const Array3& a);
double mean_t3(const Array2& a);

/// Y(sigma, pi) = sum over the 3n(n-1) ordered index triples with exactly two
/// distinct entries of a(i, sigma(j), pi(k)). Computed as the three pattern
/// sums (i==j, i==k, j==k), each in ascending order; always in [0, 3n(n-1)].
double y_stat(const Array3& a, const Permutation& sigma, const Permutation& pi);
double y_stat_on(const Array3& a, std::span<const std::int32_t> sigma,
                 std::span<const std::int32_t> pi);

}  // namespace permstat
