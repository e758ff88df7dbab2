#include "permstat/exchange.hpp"

#include <cmath>
#include <stdexcept>

namespace permstat {
namespace {

void require_t2_size(int n) {
  if (n < 3) throw std::invalid_argument("T2 move needs n >= 3");
}

// Sum of the three entries leaving at the triple positions.
inline double leaving_terms(const Array3& a, std::span<const std::int32_t> s,
                            std::span<const std::int32_t> p, const IndexTriple& t) {
  return a(t.i1, s[t.i1], p[t.i1]) + a(t.i2, s[t.i2], p[t.i2]) + a(t.i3, s[t.i3], p[t.i3]);
}

// Sum of the three entries entering after (sigma o tau_x, pi o tau_y).
inline double entering_terms(const Array3& a, std::span<const std::int32_t> s,
                             std::span<const std::int32_t> p, const IndexTriple& t, int coin) {
  if (coin == 0)  // (tau1, tau2): sigma'(i1)=sigma(i2), pi'(i1)=pi(i3), etc.
    return a(t.i1, s[t.i2], p[t.i3]) + a(t.i2, s[t.i3], p[t.i1]) + a(t.i3, s[t.i1], p[t.i2]);
  return a(t.i1, s[t.i3], p[t.i2]) + a(t.i2, s[t.i1], p[t.i3]) + a(t.i3, s[t.i2], p[t.i1]);
}

}  // namespace

double delta_t1(const Array3& a, std::span<const std::int32_t> sigma, int i1, int i2) {
  return a.row_sum(i1, sigma[i1]) + a.row_sum(i2, sigma[i2]) - a.row_sum(i1, sigma[i2]) -
         a.row_sum(i2, sigma[i1]);
}

double delta_t1(const Array3& a, const Permutation& sigma, int i1, int i2) {
  return delta_t1(a, sigma.images(), i1, i2);
}

double delta_t2(const Array3& a, std::span<const std::int32_t> sigma,
                std::span<const std::int32_t> pi, const IndexTriple& t, int coin) {
  if (t.cls != TupleClass::C3)
    throw std::invalid_argument("T2 move requires a fully distinct triple");
  return leaving_terms(a, sigma, pi, t) - entering_terms(a, sigma, pi, t, coin);
}

double delta_t2(const Array3& a, const Permutation& sigma, const Permutation& pi,
                const IndexTriple& t, int coin) {
  return delta_t2(a, sigma.images(), pi.images(), t, coin);
}

PairSampleT1 step_t1(const Array3& a, const Permutation& sigma, RngStream& rng) {
  const int n = a.size();
  const int i1 = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
  const int i2 = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
  return PairSampleT1{sigma, i1, i2, delta_t1(a, sigma, i1, i2)};
}

PairSampleT2 step_t2(const Array3& a, const Permutation& sigma, const Permutation& pi,
                     RngStream& rng) {
  require_t2_size(a.size());
  const IndexTriple t = sample_distinct_triple(a.size(), rng);
  const int coin = rng.coin();
  return PairSampleT2{sigma, pi, t, coin, delta_t2(a, sigma, pi, t, coin)};
}

double cond_drift_t1(const Array3& a, const Permutation& sigma) {
  const int n = a.size();
  const auto s = sigma.images();
  double sum = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) sum += delta_t1(a, s, i1, i2);
  return sum / (static_cast<double>(n) * n);
}

double cond_drift_t2(const Array3& a, const Permutation& sigma, const Permutation& pi) {
  const int n = a.size();
  require_t2_size(n);
  const auto s = sigma.images();
  const auto p = pi.images();
  double sum = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      if (i2 == i1) continue;
      for (int i3 = 0; i3 < n; ++i3) {
        if (i3 == i1 || i3 == i2) continue;
        const IndexTriple t{i1, i2, i3, TupleClass::C3};
        sum += delta_t2(a, s, p, t, 0) + delta_t2(a, s, p, t, 1);
      }
    }
  const double moves = 2.0 * n * (n - 1.0) * (n - 2.0);
  return sum / moves;
}

double t2_drift_closed_form(int n, double mean_t2, double t2_value, double y_value) {
  const double q = static_cast<double>(n) * n - 3.0 * n + 3.0;
  const double p = static_cast<double>(n) * (n - 1.0) * (n - 2.0);
  return 3.0 * q / p * (t2_value - mean_t2) - 9.0 * mean_t2 / (static_cast<double>(n) * (n - 2.0)) +
         3.0 * y_value / p;
}

double f_t1(const Array3& a, const Permutation& sigma) { return t1(a, sigma) - mean_t1(a); }

double f_t2_state(const Array3& a, const Permutation& sigma, const Permutation& pi) {
  const int n = a.size();
  require_t2_size(n);
  const double q = static_cast<double>(n) * n - 3.0 * n + 3.0;
  const double e = mean_t2(a);
  return t2(a, sigma, pi) - e - 3.0 * (n - 1.0) * e / q + y_stat(a, sigma, pi) / q;
}

double t2_sandwich_halfwidth(int n, double mean_t2) {
  require_t2_size(n);
  const double q = static_cast<double>(n) * n - 3.0 * n + 3.0;
  return 3.0 * (n - 1.0) * std::max(mean_t2, n - mean_t2) / q;
}

double v_t1(const Array3& a, const Permutation& sigma) {
  const int n = a.size();
  const auto s = sigma.images();
  double sum = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const double d = delta_t1(a, s, i1, i2);
      sum += d * d;
    }
  return 0.25 * n * sum / (static_cast<double>(n) * n);
}

MomentBoundsT2 moment_bounds_t2(const Array3& a, const Permutation& sigma,
                                const Permutation& pi) {
  const int n = a.size();
  require_t2_size(n);
  const auto s = sigma.images();
  const auto p = pi.images();
  double sum_abs = 0.0, sum_sq = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      if (i2 == i1) continue;
      for (int i3 = 0; i3 < n; ++i3) {
        if (i3 == i1 || i3 == i2) continue;
        const IndexTriple t{i1, i2, i3, TupleClass::C3};
        for (int coin = 0; coin < 2; ++coin) {
          const double d = delta_t2(a, s, p, t, coin);
          sum_abs += std::abs(d);
          sum_sq += d * d;
        }
      }
    }
  const double moves = 2.0 * n * (n - 1.0) * (n - 2.0);
  return MomentBoundsT2{sum_abs / moves, sum_sq / moves};
}

double v_t2_coeff_sq(int n) {
  const double q = static_cast<double>(n) * n - 3.0 * n + 3.0;
  return static_cast<double>(n) * (n - 1.0) * (n - 2.0) / (6.0 * q);
}

double v_t2_coeff_abs(int n) {
  const double q = static_cast<double>(n) * n - 3.0 * n + 3.0;
  return static_cast<double>(n) * n * (n - 1.0) * (n - 1.0) * (n - 2.0) / (2.0 * q * q);
}

double v_t2_state(const Array3& a, const Permutation& sigma, const Permutation& pi) {
  const int n = a.size();
  require_t2_size(n);
  const MomentBoundsT2 m = moment_bounds_t2(a, sigma, pi);
  return v_t2_coeff_sq(n) * m.mean_sq + v_t2_coeff_abs(n) * m.mean_abs;
}

double epsilon_v_t2(int n) {
  require_t2_size(n);
  const double q = static_cast<double>(n) * n - 3.0 * n + 3.0;
  const double b2 = 1.5 * (static_cast<double>(n) * n / q) * (1.0 + static_cast<double>(n) * (n - 1.0) / q);
  return std::max(b2 - 3.0, 3.0 * (2.0 * n - 3.0) / q);
}

}  // namespace permstat
