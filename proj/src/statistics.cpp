#include "permstat/statistics.hpp"

#include <stdexcept>

namespace permstat {
namespace {

void check_size(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("size mismatch: ") + what);
}

}  // namespace

double t3_on(const Array2& a, std::span<const std::int32_t> sigma) {
  check_size(a.size(), static_cast<int>(sigma.size()), "t3");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a(i, sigma[i]);
  return s;
}

double t1_on(const Array3& a, std::span<const std::int32_t> sigma) {
  check_size(a.size(), static_cast<int>(sigma.size()), "t1");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a.row_sum(i, sigma[i]);
  return s;
}

double t2_on(const Array3& a, std::span<const std::int32_t> sigma,
             std::span<const std::int32_t> pi) {
  check_size(a.size(), static_cast<int>(sigma.size()), "t2");
  check_size(a.size(), static_cast<int>(pi.size()), "t2");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a(i, sigma[i], pi[i]);
  return s;
}

double t3(const Array2& a, const Permutation& sigma) { return t3_on(a, sigma.images()); }

double t1(const Array3& a, const Permutation& sigma) { return t1_on(a, sigma.images()); }

double t2(const Array3& a, const Permutation& sigma, const Permutation& pi) {
  return t2_on(a, sigma.images(), pi.images());
}

double mean_t1(const Array3& a) { return a.total() / a.size(); }

double mean_t2(const Array3& a) {
  return a.total() / (static_cast<double>(a.size()) * a.size());
}

double mean_t3(const Array2& a) { return a.total() / a.size(); }

double y_stat_on(const Array3& a, std::span<const std::int32_t> sigma,
                 std::span<const std::int32_t> pi) {
  const int n = a.size();
  check_size(n, static_cast<int>(sigma.size()), "y_stat");
  check_size(n, static_cast<int>(pi.size()), "y_stat");
  double s = 0.0;
  // (i, i, k), k != i
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (k != i) s += a(i, sigma[i], pi[k]);
  // (i, j, i), j != i
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) s += a(i, sigma[j], pi[i]);
  // (i, j, j), j != i
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) s += a(i, sigma[j], pi[j]);
  return s;
}

double y_stat(const Array3& a, const Permutation& sigma, const Permutation& pi) {
  return y_stat_on(a, sigma.images(), pi.images());
}

}  // namespace permstat
