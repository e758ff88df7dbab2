#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "naive.hpp"
#include "permstat/exchange.hpp"
#include "permstat/oracle.hpp"

using namespace permstat;

namespace {

std::vector<IndexTriple> all_c3_triples(int n) {
  std::vector<IndexTriple> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i != j && j != k && i != k) out.push_back(make_triple(i, j, k));
  return out;
}

}  // namespace

TEST_CASE("delta_t1 equals full recomputation") {
  const Array3 c = Array3::constant(4, 0.7);
  RngStream rng(1);
  const Permutation sc = sample_uniform(4, rng);
  CHECK(delta_t1(c, sc, 1, 3) == doctest::Approx(0.0));
  CHECK(delta_t1(c, sc, 2, 2) == 0.0);

  const Array3 a = Array3::uniform_random(5, 321);
  for (const auto& s : naive::all_permutations(5))
    for (int i1 = 0; i1 < 5; ++i1)
      for (int i2 = 0; i2 < 5; ++i2)
        CHECK(delta_t1(a, s, i1, i2) ==
              doctest::Approx(naive::delta_t1_recompute(a, s, i1, i2)).epsilon(1e-12));
}

TEST_CASE("step_t1 samples the move distribution") {
  const Array3 a = Array3::uniform_random(6, 11);
  RngStream rng(2);
  const Permutation s = sample_uniform(6, rng);
  for (int rep = 0; rep < 50; ++rep) {
    const PairSampleT1 ps = step_t1(a, s, rng);
    CHECK(ps.delta == doctest::Approx(naive::delta_t1_recompute(a, s, ps.i1, ps.i2)).epsilon(1e-12));
    if (ps.i1 == ps.i2) CHECK(ps.delta == 0.0);
  }
}

TEST_CASE("delta_t2 equals full recomputation") {
  const Array3 c = Array3::constant(4, 0.2);
  RngStream rng(3);
  {
    const Permutation s = sample_uniform(4, rng), p = sample_uniform(4, rng);
    for (const auto& t : all_c3_triples(4))
      for (int coin = 0; coin < 2; ++coin) CHECK(delta_t2(c, s, p, t, coin) == doctest::Approx(0.0));
  }

  const Array3 a = Array3::uniform_random(5, 322);
  const auto triples = all_c3_triples(5);
  for (int rep = 0; rep < 50; ++rep) {
    const Permutation s = sample_uniform(5, rng), p = sample_uniform(5, rng);
    for (const auto& t : triples)
      for (int coin = 0; coin < 2; ++coin) {
        const double d = delta_t2(a, s, p, t, coin);
        CHECK(d == doctest::Approx(naive::delta_t2_recompute(a, s, p, t, coin)).epsilon(1e-12));
        CHECK(std::abs(d) <= 3.0);
      }
  }

  CHECK_THROWS_AS(delta_t2(a, sample_uniform(5, rng), sample_uniform(5, rng),
                           make_triple(0, 0, 1), 0),
                  std::invalid_argument);
}

TEST_CASE("step_t2 uses distinct triples and a fair coupling") {
  const Array3 a = Array3::uniform_random(5, 12);
  RngStream rng(4);
  const Permutation s = sample_uniform(5, rng), p = sample_uniform(5, rng);
  for (int rep = 0; rep < 50; ++rep) {
    const PairSampleT2 ps = step_t2(a, s, p, rng);
    CHECK(ps.triple.cls == TupleClass::C3);
    CHECK(ps.delta ==
          doctest::Approx(naive::delta_t2_recompute(a, s, p, ps.triple, ps.coin)).epsilon(1e-12));
  }
  const Array3 tiny = Array3::uniform_random(2, 13);
  RngStream rng2(5);
  CHECK_THROWS_AS(step_t2(tiny, Permutation::identity(2), Permutation::identity(2), rng2),
                  std::invalid_argument);
}

TEST_CASE("T1 drift identity: pair average equals (2/n)(T1 - E[T1])") {
  const Array3 c = Array3::constant(3, 0.9);
  CHECK(cond_drift_t1(c, Permutation::identity(3)) == doctest::Approx(0.0));

  const Array3 a = Array3::uniform_random(4, 41);
  double best_t1 = -1.0;
  const Permutation* best = nullptr;
  const auto perms = naive::all_permutations(4);
  for (const auto& s : perms) {
    CHECK(cond_drift_t1(a, s) ==
          doctest::Approx(0.5 * (t1(a, s) - mean_t1(a))).epsilon(1e-12));
    if (t1(a, s) > best_t1) {
      best_t1 = t1(a, s);
      best = &s;
    }
  }
  // mean reversion: the maximizer drifts down (drift is T1 - T1', positive)
  CHECK(cond_drift_t1(a, *best) > 0.0);
}

TEST_CASE("T2 drift identity: move average equals the closed form with Y") {
  const int reps = 100;
  for (int n : {4, 5}) {
    const Array3 a = Array3::uniform_random(n, 50 + n);
    RngStream rng(60 + n);
    for (int rep = 0; rep < reps; ++rep) {
      const Permutation s = sample_uniform(n, rng), p = sample_uniform(n, rng);
      const double avg = cond_drift_t2(a, s, p);
      const double closed =
          t2_drift_closed_form(n, mean_t2(a), t2(a, s, p), y_stat(a, s, p));
      CHECK(avg == doctest::Approx(closed).epsilon(1e-12));
    }
  }

  // constant array: every move has delta 0 and the closed form cancels
  const Array3 c = Array3::constant(4, 0.6);
  const Permutation id = Permutation::identity(4);
  CHECK(cond_drift_t2(c, id, id) == 0.0);
  CHECK(t2_drift_closed_form(4, mean_t2(c), t2(c, id, id), y_stat(c, id, id)) ==
        doctest::Approx(0.0));
}

TEST_CASE("f_t1") {
  const Array3 c = Array3::constant(3, 0.5);
  CHECK(f_t1(c, Permutation::identity(3)) == doctest::Approx(0.0));

  for (int n = 3; n <= 5; ++n) {
    const Array3 a = Array3::uniform_random(n, 70 + n);
    for (const auto& s : naive::all_permutations(n))
      CHECK(f_t1(a, s) == doctest::Approx(0.5 * n * cond_drift_t1(a, s)).epsilon(1e-12));
  }

  // footrule-style slab a(i,j,k) = |i-k|/(n-1), constant in j
  const int n = 4;
  std::vector<double> v;
  v.reserve(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) v.push_back(std::abs(i - k) / 3.0);
  const Array3 slab(n, v);
  const Permutation id = Permutation::identity(n);
  CHECK(f_t1(slab, id) == doctest::Approx(naive::t1(slab, id) - mean_t1(slab)).epsilon(1e-12));
}

TEST_CASE("f_t2_state sandwich and group averages") {
  const Array3 c = Array3::constant(4, 0.8);
  CHECK(f_t2_state(c, Permutation::identity(4), Permutation::identity(4)) ==
        doctest::Approx(0.0));

  for (int n = 3; n <= 5; ++n) {
    const Array3 a = Array3::uniform_random(n, 80 + n);
    const double e = mean_t2(a);
    const double half = t2_sandwich_halfwidth(n, e);
    const auto perms = naive::all_permutations(n);
    for (const auto& s : perms)
      for (const auto& p : perms) {
        const double f = f_t2_state(a, s, p);
        const double centered = t2(a, s, p) - e;
        CHECK(f >= centered - half - 1e-12);
        CHECK(f <= centered + half + 1e-12);
      }
  }

  // grouping states by exact T2 value and averaging f_t2_state reproduces
  // the conditional-mean form
  const int n = 4;
  const Array3 a = Array3::uniform_random(n, 91);
  const auto table = oracle::cond_mean_y(a);
  const double e = mean_t2(a);
  const double q = static_cast<double>(n) * n - 3.0 * n + 3.0;
  std::vector<double> group_sum(table.t2_values.size(), 0.0);
  std::vector<std::uint64_t> group_count(table.t2_values.size(), 0);
  const auto perms = naive::all_permutations(n);
  for (const auto& s : perms)
    for (const auto& p : perms) {
      const double v = t2(a, s, p);
      const auto it = std::lower_bound(table.t2_values.begin(), table.t2_values.end(), v);
      REQUIRE(it != table.t2_values.end());
      const auto g = static_cast<std::size_t>(it - table.t2_values.begin());
      group_sum[g] += f_t2_state(a, s, p);
      ++group_count[g];
    }
  for (std::size_t g = 0; g < table.t2_values.size(); ++g) {
    REQUIRE(group_count[g] == table.counts[g]);
    const double grouped_f =
        table.t2_values[g] - e - 3.0 * (n - 1.0) * e / q + table.mean_y[g] / q;
    CHECK(group_sum[g] / group_count[g] == doctest::Approx(grouped_f).epsilon(1e-12));
  }
}

TEST_CASE("v_t1 and its linear envelope") {
  const Array3 c = Array3::constant(3, 0.1);
  CHECK(v_t1(c, Permutation::identity(3)) == doctest::Approx(0.0));

  const Array3 a4 = Array3::uniform_random(4, 100);
  for (const auto& s : naive::all_permutations(4))
    CHECK(v_t1(a4, s) == doctest::Approx(naive::v_t1_recompute(a4, s)).epsilon(1e-12));

  for (int n = 3; n <= 5; ++n) {
    const Array3 a = Array3::uniform_random(n, 100 + n);
    const double e = mean_t1(a);
    for (const auto& s : naive::all_permutations(n))
      CHECK(v_t1(a, s) <= n * (f_t1(a, s) + 2.0 * e) + 1e-12);
  }
}

TEST_CASE("T2 conditional moments satisfy the increment bounds") {
  const Array3 c = Array3::constant(4, 0.5);
  const Permutation id4 = Permutation::identity(4);
  const auto mc = moment_bounds_t2(c, id4, id4);
  CHECK(mc.mean_abs == doctest::Approx(0.0));
  CHECK(mc.mean_sq == doctest::Approx(0.0));

  for (int n : {4, 5}) {
    const Array3 a = Array3::uniform_random(n, 110 + n);
    const double e = mean_t2(a);
    RngStream rng(120 + n);
    for (int rep = 0; rep < 100; ++rep) {
      const Permutation s = sample_uniform(n, rng), p = sample_uniform(n, rng);
      const auto m = moment_bounds_t2(a, s, p);
      const double v = t2(a, s, p);
      CHECK(m.mean_abs <= 3.0 / n * v + 3.0 * n * e / ((n - 1.0) * (n - 2.0)) + 1e-12);
      CHECK(m.mean_sq <= 9.0 / n * v + 9.0 * n * e / ((n - 1.0) * (n - 2.0)) + 1e-12);
      CHECK(m.mean_sq <= 3.0 * m.mean_abs + 1e-12);  // |delta| <= 3
    }
  }
}

TEST_CASE("v_t2_state envelope with the exact finite-n correction") {
  const Array3 c = Array3::constant(5, 0.35);
  const Permutation id5 = Permutation::identity(5);
  CHECK(v_t2_state(c, id5, id5) == doctest::Approx(0.0));

  const int n = 5;
  const Array3 a = Array3::uniform_random(n, 130);
  const double e = mean_t2(a);
  const double eps = epsilon_v_t2(n);
  RngStream rng(131);
  for (int rep = 0; rep < 100; ++rep) {
    const Permutation s = sample_uniform(n, rng), p = sample_uniform(n, rng);
    const double v = v_t2_state(a, s, p);
    CHECK(v <= (3.0 + eps) * (f_t2_state(a, s, p) + 2.0 * e + 3.0 + eps) + 1e-12);
  }

  // envelope coefficients approach n/6 and n/2
  CHECK(v_t2_coeff_sq(1000) / (1000.0 / 6.0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(v_t2_coeff_abs(1000) / (1000.0 / 2.0) == doctest::Approx(1.0).epsilon(0.01));
  // and the finite-n correction decays
  CHECK(epsilon_v_t2(1000) < 0.02);
  CHECK(epsilon_v_t2(10) > epsilon_v_t2(100));
}

TEST_CASE("antisymmetry of the increment under the reverse move") {
  const Array3 a = Array3::uniform_random(5, 140);
  RngStream rng(141);
  for (int rep = 0; rep < 30; ++rep) {
    const Permutation s = sample_uniform(5, rng);
    const int i1 = static_cast<int>(rng.next_below(5)), i2 = static_cast<int>(rng.next_below(5));
    const Permutation s2 = compose(s, Permutation::transposition(5, i1, i2));
    CHECK(delta_t1(a, s, i1, i2) == doctest::Approx(-delta_t1(a, s2, i1, i2)).epsilon(1e-12));

    const Permutation p = sample_uniform(5, rng);
    const IndexTriple t = sample_distinct_triple(5, rng);
    const int coin = rng.coin();
    const int sv = coin == 0 ? 1 : 2;
    const Permutation ms = compose(s, Permutation::cycle_tau(sv, t, 5));
    const Permutation mp = compose(p, Permutation::cycle_tau(3 - sv, t, 5));
    CHECK(delta_t2(a, s, p, t, coin) ==
          doctest::Approx(-delta_t2(a, ms, mp, t, 1 - coin)).epsilon(1e-12));
  }
}
