#include "permstat/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "permstat/exchange.hpp"

namespace permstat {

double bernstein_exponent(double t, double B, double C) {
  if (!(t >= 0.0) || !(B >= 0.0) || !(C >= 0.0))
    throw std::invalid_argument("bernstein bound needs t, B, C >= 0");
  const double denom = 2.0 * C + 2.0 * B * t;
  if (denom == 0.0) return t == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -(t * t) / denom;
}

double bernstein_lemma(double t, double B, double C) {
  if (t == 0.0) {
    if (!(B >= 0.0) || !(C >= 0.0))
      throw std::invalid_argument("bernstein bound needs t, B, C >= 0");
    return 1.0;  // formula gives 2; clamped
  }
  return std::min(1.0, 2.0 * std::exp(bernstein_exponent(t, B, C)));
}

double bound_t3(double t, double mean_t3) { return bernstein_lemma(t, 1.0, 2.0 * mean_t3); }

double bound_t1(double t, double n, double mean_t1) {
  if (!(n >= 1.0)) throw std::invalid_argument("bound_t1 needs n >= 1");
  return bernstein_lemma(t, n, 2.0 * n * mean_t1);
}

double bound_t2(double t, int n, double mean_t2, T2BoundVariant variant) {
  if (n < 3) throw std::invalid_argument("bound_t2 needs n >= 3");
  if (!(t >= 0.0)) throw std::invalid_argument("bound_t2 needs t >= 0");
  double shift, B, C;
  if (variant == T2BoundVariant::nominal) {
    shift = 3.0;
    B = 3.0;
    C = 3.0 * (2.0 * mean_t2 + 3.0);  // 2C + 2Bt = 12E + 18 + 6t
  } else {
    shift = t2_sandwich_halfwidth(n, mean_t2);
    const double eps = epsilon_v_t2(n);
    B = 3.0 + eps;
    C = (3.0 + eps) * (2.0 * mean_t2 + 3.0 + eps);
  }
  // Below the shift the centered exponent is not a tail statement; the bound
  // is vacuous there.
  if (t <= shift) return 1.0;
  return bernstein_lemma(t - shift, B, C);
}

double bound_eval(const BoundSpec& spec, double t) {
  switch (spec.kind) {
    case BoundKind::t1:
      return bound_t1(t, spec.n, spec.mean);
    case BoundKind::t2:
      return bound_t2(t, spec.n, spec.mean, spec.variant);
    case BoundKind::t3:
      return bound_t3(t, spec.mean);
    case BoundKind::generic:
      return bernstein_lemma(t, spec.B, spec.C);
  }
  throw std::invalid_argument("unknown bound kind");
}

std::vector<std::pair<double, double>> bound_curve(const BoundSpec& spec,
                                                   std::span<const double> t_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.emplace_back(t, bound_eval(spec, t));
  return out;
}

std::vector<SweepRow> sweep_t1(std::span<const double> n_list, double lambda,
                               double mean_coeff, double mean_power) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sweep needs lambda > 0");
  std::vector<SweepRow> rows;
  rows.reserve(n_list.size());
  for (double n : n_list) {
    if (!(n >= 1.0)) throw std::invalid_argument("sweep needs n >= 1");
    SweepRow r;
    r.n = n;
    r.t = std::pow(n, 1.0 + lambda);
    r.mean = mean_coeff * std::pow(n, mean_power);
    r.exponent = bernstein_exponent(r.t, n, 2.0 * n * r.mean);
    r.bound = std::min(1.0, 2.0 * std::exp(r.exponent));
    r.asymptote = -std::pow(n, lambda) / 2.0;
    r.ratio = r.exponent / r.asymptote;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace permstat
