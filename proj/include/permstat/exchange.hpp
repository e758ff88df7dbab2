#pragma once

#include <cstdint>
#include <span>

#include "permstat/array.hpp"
#include "permstat/permutation.hpp"
#include "permstat/rng.hpp"
#include "permstat/statistics.hpp"

namespace permstat {

/// Exchangeable-pair moves for the two cubical-array statistics.
///
/// T1 move: draw (i1, i2) independently uniformly WITH replacement and set
/// sigma' = sigma o (i1 i2). The diagonal i1 == i2 keeps sigma and has
/// delta = 0; it is part of the move distribution.
///
/// T2 move: draw an ordered fully-distinct triple (i1, i2, i3) and a fair
/// coin; coin 0 applies (sigma o tau1, pi o tau2), coin 1 the inverse pairing
/// (sigma o tau2, pi o tau1), where tau1, tau2 are the two non-identity
/// 3-cycles on the triple. Only the three moved positions change, so the
/// increment is six array lookups and |delta| <= 3.

struct PairSampleT1 {
  Permutation sigma;
  int i1, i2;
  double delta;  // T1 - T1'
};

struct PairSampleT2 {
  Permutation sigma, pi;
  IndexTriple triple;
  int coin;      // 0: (tau1, tau2); 1: (tau2, tau1)
  double delta;  // T2 - T2'
};

/// T1 - T1' for the transposition move, via precomputed row sums; equals the
/// full recomputation t1(a, sigma) - t1(a, sigma o (i1 i2)) up to rounding.
double delta_t1(const Array3& a, std::span<const std::int32_t> sigma, int i1, int i2);
double delta_t1(const Array3& a, const Permutation& sigma, int i1, int i2);

/// T2 - T2' for the coupled 3-cycle move; triple must be fully distinct.
double delta_t2(const Array3& a, std::span<const std::int32_t> sigma,
                std::span<const std::int32_t> pi, const IndexTriple& t, int coin);
double delta_t2(const Array3& a, const Permutation& sigma, const Permutation& pi,
                const IndexTriple& t, int coin);

/// One move from the current state; consumes 2 draws (T1) or 4 draws (T2).
PairSampleT1 step_t1(const Array3& a, const Permutation& sigma, RngStream& rng);
PairSampleT2 step_t2(const Array3& a, const Permutation& sigma, const Permutation& pi,
                     RngStream& rng);

/// Exact E[T1 - T1' | sigma]: the average of delta over all n^2 ordered index
/// pairs. Identity: equals (2/n) (T1 - E[T1]) for every sigma.
double cond_drift_t1(const Array3& a, const Permutation& sigma);

/// Exact E[T2 - T2' | sigma, pi]: the average of delta over all n(n-1)(n-2)
/// ordered distinct triples and both coins. Identity: equals
/// t2_drift_closed_form(n, E[T2], T2, Y(sigma, pi)) for every state.
double cond_drift_t2(const Array3& a, const Permutation& sigma, const Permutation& pi);

/// 3(n^2-3n+3)/(n(n-1)(n-2)) (T2 - E) - 9E/(n(n-2)) + 3Y/(n(n-1)(n-2)).
double t2_drift_closed_form(int n, double mean_t2, double t2_value, double y_value);

/// f for the T1 pair under F = (n/2)(T1 - T1'): T1 - E[T1].
double f_t1(const Array3& a, const Permutation& sigma);

/// Per-state f for the T2 pair under
/// F = n(n-1)(n-2)/(3(n^2-3n+3)) (T2 - T2'):
///   T2 - E[T2] - 3(n-1)E[T2]/(n^2-3n+3) + Y(sigma,pi)/(n^2-3n+3),
/// with the state's own Y substituted for its conditional mean given T2.
/// Averaging over states that share a T2 value recovers the coarser version.
double f_t2_state(const Array3& a, const Permutation& sigma, const Permutation& pi);

/// Half-width of the band |f_t2_state - (T2 - E[T2])| <= delta_n, from
/// 0 <= Y <= 3n(n-1):  delta_n = 3(n-1) max(E, n - E) / (n^2 - 3n + 3).
double t2_sandwich_halfwidth(int n, double mean_t2);

/// v for the T1 pair: (n/4) E[(T1-T1')^2 | sigma], the exact average over all
/// n^2 ordered pairs. Satisfies v <= n (f_t1 + 2 E[T1]) for every sigma.
double v_t1(const Array3& a, const Permutation& sigma);

struct MomentBoundsT2 {
  double mean_abs;  // E[|T2 - T2'| | sigma, pi]
  double mean_sq;   // E[(T2 - T2')^2 | sigma, pi]
};

/// Exact conditional moments of the T2 increment over all triples and coins.
/// Contract: mean_abs <= (3/n) T2 + 3n E[T2]/((n-1)(n-2)) and
/// mean_sq <= (9/n) T2 + 9n E[T2]/((n-1)(n-2)).
MomentBoundsT2 moment_bounds_t2(const Array3& a, const Permutation& sigma,
                                const Permutation& pi);

/// Envelope coefficients for v(T2):
///   v <= v_t2_coeff_sq(n) E[dT2^2 | .] + v_t2_coeff_abs(n) E[|dT2| | .]
/// with coeff_sq = n(n-1)(n-2)/(6(n^2-3n+3)) -> n/6 and
/// coeff_abs = n^2(n-1)^2(n-2)/(2(n^2-3n+3)^2) -> n/2.
double v_t2_coeff_sq(int n);
double v_t2_coeff_abs(int n);

/// Plugs the exact conditional moments into the envelope. Satisfies
/// v <= (3 + eps)(f_t2_state + 2 E[T2] + 3 + eps) with eps = epsilon_v_t2(n).
double v_t2_state(const Array3& a, const Permutation& sigma, const Permutation& pi);

/// Exact finite-n correction for the v(T2) envelope, asymptotically O(1/n):
///   eps_n = max(B2(n) - 3, 3(2n-3)/(n^2-3n+3)),
///   B2(n) = (3/2) (n^2/Q) (1 + n(n-1)/Q), Q = n^2-3n+3.
/// Derivation: v <= B1 T2 + B2 E <= B2 (T2 + E) and
/// T2 + E <= f + 2E + 3(n-1)E/Q <= f + 2E + 3 + 3(2n-3)/Q; this constant is
/// derived from the exact coefficient ratios, not stated in closed form by
/// the source inequalities, which only pin it up to O(1/n).
double epsilon_v_t2(int n);

}  // namespace permstat
