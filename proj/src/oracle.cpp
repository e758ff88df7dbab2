#include "permstat/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "permstat/exchange.hpp"

namespace permstat {
namespace oracle {
namespace {

void check_cap(int n, int cap, const char* what) {
  if (n > cap)
    throw std::out_of_range(std::string(what) + ": n = " + std::to_string(n) +
                            " exceeds the enumeration cap n <= " + std::to_string(cap));
}

std::vector<std::int32_t> first_permutation(int n) {
  std::vector<std::int32_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Sort by value with bit-pattern tiebreak so grouping by exact bits yields
// contiguous runs even in the presence of signed zeros.
ExactDistribution group_sorted(std::vector<double>& values) {
  std::sort(values.begin(), values.end(), [](double a, double b) {
    if (a < b) return true;
    if (b < a) return false;
    return std::bit_cast<std::uint64_t>(a) < std::bit_cast<std::uint64_t>(b);
  });
  ExactDistribution dist;
  dist.total = values.size();
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i + 1;
    while (j < values.size() &&
           std::bit_cast<std::uint64_t>(values[j]) == std::bit_cast<std::uint64_t>(values[i]))
      ++j;
    dist.outcomes.emplace_back(values[i], static_cast<std::uint64_t>(j - i));
    i = j;
  }
  return dist;
}

struct PairKey {
  std::uint64_t x, y;
  bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return mix64(k.x ^ mix64(k.y));
  }
};

using JointCounts = std::unordered_map<PairKey, std::int64_t, PairKeyHash>;

double max_asymmetry(const JointCounts& counts, double total) {
  std::int64_t worst = 0;
  for (const auto& [key, c] : counts) {
    const auto it = counts.find(PairKey{key.y, key.x});
    const std::int64_t other = it == counts.end() ? 0 : it->second;
    worst = std::max(worst, std::abs(c - other));
  }
  return static_cast<double>(worst) / total;
}

}  // namespace

double ExactDistribution::mean() const {
  long double s = 0.0L;
  for (const auto& [v, c] : outcomes) s += static_cast<long double>(v) * c;
  return static_cast<double>(s / static_cast<long double>(total));
}

double ExactDistribution::variance() const {
  const long double m = mean();
  long double s = 0.0L;
  for (const auto& [v, c] : outcomes) {
    const long double d = v - m;
    s += d * d * c;
  }
  return static_cast<double>(s / static_cast<long double>(total));
}

ExactDistribution exact_distribution(const Array3& a, StatKind kind) {
  const int n = a.size();
  std::vector<double> values;
  if (kind == StatKind::t1) {
    check_cap(n, kMaxPmfT1, "T1 pmf");
    values.reserve(factorial(n));
    auto sigma = first_permutation(n);
    do {
      values.push_back(t1_on(a, sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  } else if (kind == StatKind::t2) {
    check_cap(n, kMaxPmfT2, "T2 pmf");
    const std::uint64_t f = factorial(n);
    values.reserve(f * f);
    auto sigma = first_permutation(n);
    do {
      auto pi = first_permutation(n);
      do {
        values.push_back(t2_on(a, sigma, pi));
      } while (std::next_permutation(pi.begin(), pi.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  } else {
    throw std::invalid_argument("T3 enumeration takes a square array");
  }
  return group_sorted(values);
}

ExactDistribution exact_distribution(const Array2& a) {
  const int n = a.size();
  check_cap(n, kMaxPmfT3, "T3 pmf");
  std::vector<double> values;
  values.reserve(factorial(n));
  auto sigma = first_permutation(n);
  do {
    values.push_back(t3_on(a, sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return group_sorted(values);
}

TailProbability exact_tail(const ExactDistribution& dist, double center, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("tail threshold must be >= 0");
  TailProbability tail;
  tail.total = dist.total;
  for (const auto& [v, c] : dist.outcomes)
    if (std::abs(v - center) >= t) tail.count += c;
  return tail;
}

double verify_exchangeable_t1(const Array3& a, MoveVariant variant) {
  const int n = a.size();
  check_cap(n, kMaxJointT1, "T1 exchangeability joint");
  JointCounts counts;
  auto sigma = first_permutation(n);
  std::vector<std::int32_t> moved(n);
  do {
    const double x = t1_on(a, sigma);
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        moved.assign(sigma.begin(), sigma.end());
        if (variant == MoveVariant::standard) {
          std::swap(moved[i1], moved[i2]);
        } else {
          moved[i1] = sigma[i2];  // one-sided overwrite; not a bijection
        }
        const double xp = t1_on(a, moved);
        ++counts[PairKey{std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(xp)}];
      }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  const double total = static_cast<double>(factorial(n)) * n * n;
  return max_asymmetry(counts, total);
}

double verify_exchangeable_t2(const Array3& a, MoveVariant variant) {
  const int n = a.size();
  if (n < 3) throw std::invalid_argument("T2 exchangeability needs n >= 3");
  check_cap(n, kMaxJointT2, "T2 exchangeability joint");
  JointCounts counts;
  auto sigma = first_permutation(n);
  std::vector<std::int32_t> ms(n), mp(n);
  do {
    auto pi = first_permutation(n);
    do {
      const double x = t2_on(a, sigma, pi);
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
          if (i2 == i1) continue;
          for (int i3 = 0; i3 < n; ++i3) {
            if (i3 == i1 || i3 == i2) continue;
            for (int coin = 0; coin < 2; ++coin) {
              // sigma o tau applied in place: images move along the cycle.
              ms.assign(sigma.begin(), sigma.end());
              mp.assign(pi.begin(), pi.end());
              const int sv = coin == 0 ? 1 : 2;
              const int pv = 3 - sv;
              auto apply = [&](std::vector<std::int32_t>& m, const std::vector<std::int32_t>& base,
                               int v) {
                if (v == 1) {
                  m[i1] = base[i2];
                  m[i2] = base[i3];
                  m[i3] = base[i1];
                } else {
                  m[i1] = base[i3];
                  m[i3] = base[i2];
                  m[i2] = base[i1];
                }
              };
              apply(ms, sigma, sv);
              if (variant == MoveVariant::standard) {
                apply(mp, pi, pv);
              } else {
                // corrupted control: only the first write of the pi cycle is
                // carried out, so pi' is no longer a bijection. (Pairing
                // mutations such as applying the same cycle to both sides
                // stay exchangeable: reversing the triple inverts the cycle,
                // so they are useless as negative controls.)
                mp[i1] = pi[pv == 1 ? i2 : i3];
              }
              const double xp = t2_on(a, ms, mp);
              ++counts[PairKey{std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(xp)}];
            }
          }
        }
    } while (std::next_permutation(pi.begin(), pi.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  const double f = static_cast<double>(factorial(n));
  const double total = f * f * n * (n - 1.0) * (n - 2.0) * 2.0;
  return max_asymmetry(counts, total);
}

double ConditionalMeanY::mean_for(double t2_value) const {
  const auto key = std::bit_cast<std::uint64_t>(t2_value);
  for (std::size_t i = 0; i < t2_values.size(); ++i)
    if (std::bit_cast<std::uint64_t>(t2_values[i]) == key) return mean_y[i];
  throw std::invalid_argument("t2 value not attained by any state");
}

ConditionalMeanY cond_mean_y(const Array3& a) {
  const int n = a.size();
  check_cap(n, kMaxPmfT2, "conditional Y table");
  std::unordered_map<std::uint64_t, std::pair<long double, std::uint64_t>> groups;
  auto sigma = first_permutation(n);
  do {
    auto pi = first_permutation(n);
    do {
      const double v = t2_on(a, sigma, pi);
      auto& [sum, count] = groups[std::bit_cast<std::uint64_t>(v)];
      sum += static_cast<long double>(y_stat_on(a, sigma, pi));
      ++count;
    } while (std::next_permutation(pi.begin(), pi.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  ConditionalMeanY table;
  table.t2_values.reserve(groups.size());
  for (const auto& [bits, acc] : groups) table.t2_values.push_back(std::bit_cast<double>(bits));
  std::sort(table.t2_values.begin(), table.t2_values.end());
  table.mean_y.reserve(groups.size());
  table.counts.reserve(groups.size());
  for (double v : table.t2_values) {
    const auto& [sum, count] = groups.at(std::bit_cast<std::uint64_t>(v));
    table.mean_y.push_back(static_cast<double>(sum / static_cast<long double>(count)));
    table.counts.push_back(count);
  }
  return table;
}

std::string to_json_string(const ExactDistribution& dist) {
  nlohmann::json out;
  out["total"] = dist.total;
  auto& rows = out["outcomes"] = nlohmann::json::array();
  for (const auto& [v, c] : dist.outcomes) rows.push_back(nlohmann::json::array({v, c}));
  return out.dump();
}

ExactDistribution distribution_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed distribution JSON: ") + e.what());
  }
  ExactDistribution dist;
  dist.total = j.at("total").get<std::uint64_t>();
  for (const auto& row : j.at("outcomes"))
    dist.outcomes.emplace_back(row.at(0).get<double>(), row.at(1).get<std::uint64_t>());
  return dist;
}

}  // namespace oracle
}  // namespace permstat
