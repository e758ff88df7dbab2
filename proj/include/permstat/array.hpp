#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace permstat {

/// Square matrix {a_ij} with every entry in [0,1]. Immutable after
/// construction; construction validates the range (NaN rejected).
class Array2 {
 public:
  Array2(int n, std::vector<double> values);

  static Array2 constant(int n, double c);
  static Array2 uniform_random(int n, std::uint64_t seed);
  /// Normalized Spearman footrule weights a_ij = |i - j| / (n - 1); needs
  /// n >= 2 so the normalization is defined.
  static Array2 footrule(int n);
  /// Rank-one array a_ij = c_i * d_j; every product must land in [0,1].
  static Array2 product(std::span<const double> c, std::span<const double> d);

  int size() const noexcept { return n_; }
  double operator()(int i, int j) const noexcept { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& values() const noexcept { return v_; }
  /// Sum of all entries, accumulated in canonical row-major order.
  double total() const noexcept { return total_; }

 private:
  int n_;
  std::vector<double> v_;
  double total_;
};

/// Cubical array {a_ijk} with every entry in [0,1]. Immutable after
/// construction. Row sums over the middle index, row_sum(i,k) = sum_j
/// a(i,j,k), are precomputed once (O(n^3)) so the double-sum statistic is
/// O(n) per evaluation and its pair move is O(1) per affected row.
class Array3 {
 public:
  Array3(int n, std::vector<double> values);

  static Array3 constant(int n, double c);
  static Array3 uniform_random(int n, std::uint64_t seed);

  int size() const noexcept { return n_; }
  double operator()(int i, int j, int k) const noexcept {
    return v_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  double row_sum(int i, int k) const noexcept { return rowsum_[static_cast<std::size_t>(i) * n_ + k]; }
  const std::vector<double>& values() const noexcept { return v_; }
  /// Sum of all entries, accumulated in canonical (i,j,k) order.
  double total() const noexcept { return total_; }

 private:
  int n_;
  std::vector<double> v_;
  std::vector<double> rowsum_;
  double total_;
};

using AnyArray = std::variant<Array2, Array3>;

/// JSON file format: {"dims": 2|3, "n": N, "values": [row-major floats]}.
/// Values are written with round-trip precision; load(store(a)) is
/// bit-identical to a.
AnyArray load_array(const std::filesystem::path& path);
Array2 load_array2(const std::filesystem::path& path);
Array3 load_array3(const std::filesystem::path& path);
void store_array(const Array2& a, const std::filesystem::path& path);
void store_array(const Array3& a, const std::filesystem::path& path);

AnyArray parse_array(std::string_view json_text);
std::string to_json_string(const Array2& a);
std::string to_json_string(const Array3& a);

}  // namespace permstat
