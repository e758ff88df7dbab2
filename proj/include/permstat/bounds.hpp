#pragma once

#include <span>
#include <utility>
#include <vector>

namespace permstat {

/// Bernstein-type tail bound min(1, 2 exp(-t^2 / (2C + 2Bt))) for a pair
/// whose stochastic bound satisfies v <= C + B f. Returns 1 at t = 0. A zero
/// denominator with t > 0 means a degenerate (constant) statistic; the bound
/// is 0 there.
double bernstein_lemma(double t, double B, double C);

/// Raw exponent -t^2 / (2C + 2Bt); useful where the clamped bound saturates.
double bernstein_exponent(double t, double B, double C);

/// Tail bound for T3: 2 exp(-t^2 / (4 E[T3] + 2t)), i.e. B = 1, C = 2 E[T3].
double bound_t3(double t, double mean_t3);

/// Tail bound for T1: 2 exp(-t^2 / (2n (2 E[T1] + t))), i.e. B = n,
/// C = 2n E[T1]. n is a double so bound sweeps can exceed int range.
double bound_t1(double t, double n, double mean_t1);

/// T2 variants. `nominal` drops every O(1/n) term exactly as displayed:
/// vacuous (1) for t <= 3, else 2 exp(-(t-3)^2 / (12 E + 18 + 6(t-3))).
/// `finite_n` replaces the shift 3 by the exact sandwich half-width delta_n
/// and the Lemma constants by B = 3 + eps_n, C = (3 + eps_n)(2E + 3 + eps_n)
/// with the exact eps_n of epsilon_v_t2; this variant is a rigorous bound at
/// every finite n but is implementation-derived, not a verbatim display.
enum class T2BoundVariant { nominal, finite_n };
double bound_t2(double t, int n, double mean_t2, T2BoundVariant variant = T2BoundVariant::nominal);

enum class BoundKind { t1, t2, t3, generic };

struct BoundSpec {
  BoundKind kind = BoundKind::generic;
  int n = 0;         // t1, t2
  double mean = 0.0; // t1, t2, t3
  double B = 0.0;    // generic
  double C = 0.0;    // generic
  T2BoundVariant variant = T2BoundVariant::nominal;
};

double bound_eval(const BoundSpec& spec, double t);
std::vector<std::pair<double, double>> bound_curve(const BoundSpec& spec,
                                                   std::span<const double> t_grid);

/// One row of the T1 weak-growth sweep at t = n^(1+lambda) with a mean model
/// E[T1] = mean_coeff * n^mean_power. `asymptote` is -n^lambda / 2, the decay
/// shape the bound approaches once t dominates E[T1]; `ratio` is
/// exponent / asymptote.
struct SweepRow {
  double n;
  double t;
  double mean;
  double exponent;
  double bound;
  double asymptote;
  double ratio;
};

std::vector<SweepRow> sweep_t1(std::span<const double> n_list, double lambda,
                               double mean_coeff, double mean_power);

}  // namespace permstat
