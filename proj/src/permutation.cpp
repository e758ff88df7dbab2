#include "permstat/permutation.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace permstat {

TupleClass classify_tuple(int i1, int i2, int i3) noexcept {
  if (i1 == i2 && i2 == i3) return TupleClass::C1;
  if (i1 != i2 && i1 != i3 && i2 != i3) return TupleClass::C3;
  return TupleClass::C2;
}

IndexTriple make_triple(int i1, int i2, int i3) noexcept {
  return IndexTriple{i1, i2, i3, classify_tuple(i1, i2, i3)};
}

Permutation::Permutation(std::vector<std::int32_t> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  if (n < 1) throw std::invalid_argument("permutation must have n >= 1");
  std::vector<char> seen(n, 0);
  for (std::int32_t x : images_) {
    if (x < 0 || x >= n || seen[x]) throw std::invalid_argument("image array is not a bijection");
    seen[x] = 1;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 1) throw std::invalid_argument("permutation must have n >= 1");
  std::vector<std::int32_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v), unchecked_t{});
}

Permutation Permutation::transposition(int n, int i1, int i2) {
  if (i1 < 0 || i1 >= n || i2 < 0 || i2 >= n)
    throw std::invalid_argument("transposition index out of range");
  Permutation p = identity(n);
  std::swap(p.images_[i1], p.images_[i2]);
  return p;
}

Permutation Permutation::cycle_tau(int variant, const IndexTriple& t, int n) {
  if (variant != 1 && variant != 2) throw std::invalid_argument("cycle variant must be 1 or 2");
  if (t.i1 < 0 || t.i1 >= n || t.i2 < 0 || t.i2 >= n || t.i3 < 0 || t.i3 >= n)
    throw std::invalid_argument("cycle index out of range");
  if (t.cls != TupleClass::C3)
    throw std::invalid_argument("cycle move is only defined for fully distinct triples");
  Permutation p = identity(n);
  if (variant == 1) {
    p.images_[t.i1] = t.i2;
    p.images_[t.i2] = t.i3;
    p.images_[t.i3] = t.i1;
  } else {
    p.images_[t.i1] = t.i3;
    p.images_[t.i3] = t.i2;
    p.images_[t.i2] = t.i1;
  }
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compose: size mismatch");
  std::vector<std::int32_t> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a.images_[b.images_[i]];
  return Permutation(std::move(v), Permutation::unchecked_t{});
}

void sample_uniform_images(std::span<std::int32_t> buf, RngStream& rng) {
  const int n = static_cast<int>(buf.size());
  for (int i = 0; i < n; ++i) buf[i] = i;
  for (int i = n - 1; i >= 1; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(i + 1)));
    std::swap(buf[i], buf[j]);
  }
}

Permutation sample_uniform(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("permutation must have n >= 1");
  std::vector<std::int32_t> v(n);
  sample_uniform_images(v, rng);
  return Permutation(std::move(v), Permutation::unchecked_t{});
}

IndexTriple sample_distinct_triple(int n, RngStream& rng) {
  if (n < 3) throw std::invalid_argument("distinct triple needs n >= 3");
  const int i1 = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
  int i2 = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n - 1)));
  if (i2 >= i1) ++i2;
  int i3 = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n - 2)));
  const int lo = std::min(i1, i2), hi = std::max(i1, i2);
  if (i3 >= lo) ++i3;
  if (i3 >= hi) ++i3;
  return IndexTriple{i1, i2, i3, TupleClass::C3};
}

std::string to_json_string(const Permutation& p) {
  std::vector<int> map1(p.size());
  for (int i = 0; i < p.size(); ++i) map1[i] = p(i) + 1;
  return nlohmann::json{{"n", p.size()}, {"map", map1}}.dump();
}

Permutation permutation_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed permutation JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("map"))
    throw std::invalid_argument("permutation JSON must contain n and map");
  const int n = j.at("n").get<int>();
  auto map1 = j.at("map").get<std::vector<std::int32_t>>();
  if (static_cast<int>(map1.size()) != n)
    throw std::invalid_argument("permutation map length does not match n");
  for (auto& x : map1) x -= 1;
  return Permutation(std::move(map1));
}

}  // namespace permstat
