#include "permstat/array.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "permstat/rng.hpp"

namespace permstat {
namespace {

void check_side(int n) {
  if (n < 1) throw std::invalid_argument("array side length must be >= 1");
}

// Rejects NaN as well: !(x >= 0) is true for NaN.
void check_unit_range(const std::vector<double>& v) {
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0))
      throw std::invalid_argument("array entry outside [0,1]");
  }
}

double canonical_total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

Array2::Array2(int n, std::vector<double> values) : n_(n), v_(std::move(values)) {
  check_side(n);
  if (v_.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("value count does not match a square n x n array");
  check_unit_range(v_);
  total_ = canonical_total(v_);
}

Array2 Array2::constant(int n, double c) {
  check_side(n);
  if (!(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("constant fill value outside [0,1]");
  return Array2(n, std::vector<double>(static_cast<std::size_t>(n) * n, c));
}

Array2 Array2::uniform_random(int n, std::uint64_t seed) {
  check_side(n);
  RngStream rng(seed);
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (auto& x : v) x = rng.next_double();
  return Array2(n, std::move(v));
}

Array2 Array2::footrule(int n) {
  if (n < 2) throw std::invalid_argument("footrule array needs n >= 2");
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  const double scale = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v[static_cast<std::size_t>(i) * n + j] = std::abs(i - j) * scale;
  return Array2(n, std::move(v));
}

Array2 Array2::product(std::span<const double> c, std::span<const double> d) {
  if (c.size() != d.size() || c.empty())
    throw std::invalid_argument("product array needs two factor vectors of equal nonzero length");
  const int n = static_cast<int>(c.size());
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = c[i] * d[j];
      if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("product entry outside [0,1]");
      v[static_cast<std::size_t>(i) * n + j] = x;
    }
  return Array2(n, std::move(v));
}

Array3::Array3(int n, std::vector<double> values) : n_(n), v_(std::move(values)) {
  check_side(n);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  if (v_.size() != nn * n)
    throw std::invalid_argument("value count does not match a cubical n x n x n array");
  check_unit_range(v_);
  total_ = canonical_total(v_);
  // s(i,k) = sum_j a(i,j,k), inner sum in ascending j; identical rounding to
  // the canonical (i,j) double sum of the statistic.
  rowsum_.assign(nn, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double* row = &v_[(static_cast<std::size_t>(i) * n + j) * n];
      double* out = &rowsum_[static_cast<std::size_t>(i) * n];
      for (int k = 0; k < n; ++k) out[k] += row[k];
    }
}

Array3 Array3::constant(int n, double c) {
  check_side(n);
  if (!(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("constant fill value outside [0,1]");
  return Array3(n, std::vector<double>(static_cast<std::size_t>(n) * n * n, c));
}

Array3 Array3::uniform_random(int n, std::uint64_t seed) {
  check_side(n);
  RngStream rng(seed);
  std::vector<double> v(static_cast<std::size_t>(n) * n * n);
  for (auto& x : v) x = rng.next_double();
  return Array3(n, std::move(v));
}

namespace {

nlohmann::json array_json(int dims, int n, const std::vector<double>& v) {
  return nlohmann::json{{"dims", dims}, {"n", n}, {"values", v}};
}

AnyArray array_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("n") || !j.contains("values"))
    throw std::invalid_argument("array file must be an object with dims, n, values");
  const int dims = j.at("dims").get<int>();
  const int n = j.at("n").get<int>();
  auto values = j.at("values").get<std::vector<double>>();
  if (dims == 2) return Array2(n, std::move(values));
  if (dims == 3) return Array3(n, std::move(values));
  throw std::invalid_argument("dims must be 2 or 3");
}

}  // namespace

AnyArray parse_array(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed array JSON: ") + e.what());
  }
  try {
    return array_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed array JSON: ") + e.what());
  }
}

AnyArray load_array(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open array file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_array(buf.str());
}

Array2 load_array2(const std::filesystem::path& path) {
  AnyArray a = load_array(path);
  if (auto* p = std::get_if<Array2>(&a)) return std::move(*p);
  throw std::invalid_argument("expected a dims=2 array in " + path.string());
}

Array3 load_array3(const std::filesystem::path& path) {
  AnyArray a = load_array(path);
  if (auto* p = std::get_if<Array3>(&a)) return std::move(*p);
  throw std::invalid_argument("expected a dims=3 array in " + path.string());
}

std::string to_json_string(const Array2& a) { return array_json(2, a.size(), a.values()).dump(); }

std::string to_json_string(const Array3& a) { return array_json(3, a.size(), a.values()).dump(); }

namespace {
void write_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write array file: " + path.string());
  out << text << '\n';
}
}  // namespace

void store_array(const Array2& a, const std::filesystem::path& path) {
  write_file(to_json_string(a), path);
}

void store_array(const Array3& a, const std::filesystem::path& path) {
  write_file(to_json_string(a), path);
}

}  // namespace permstat
