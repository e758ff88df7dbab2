#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permstat/rng.hpp"

namespace permstat {

enum class TupleClass { C1 = 1, C2 = 2, C3 = 3 };

/// Ordered index triple with its distinctness class: class Ck holds exactly
/// k distinct values among (i1,i2,i3). Indices are 0-based internally.
struct IndexTriple {
  int i1, i2, i3;
  TupleClass cls;
};

TupleClass classify_tuple(int i1, int i2, int i3) noexcept;
IndexTriple make_triple(int i1, int i2, int i3) noexcept;

/// Bijection of {0..n-1} stored as its image array: images()[i] is the image
/// of i. External JSON uses 1-based images, matching the usual convention
/// for permutation statistics.
class Permutation {
 public:
  /// Validates that images is a bijection.
  explicit Permutation(std::vector<std::int32_t> images);

  static Permutation identity(int n);
  /// Swaps i1 and i2, identity elsewhere; i1 == i2 gives the identity.
  static Permutation transposition(int n, int i1, int i2);
  /// 3-cycles on a fully distinct triple. Variant 1 maps i1->i2->i3->i1,
  /// variant 2 maps i1->i3->i2->i1; they are mutual inverses. A triple that
  /// is not in class C3 does not induce a valid move and is rejected.
  static Permutation cycle_tau(int variant, const IndexTriple& t, int n);

  int size() const noexcept { return static_cast<int>(images_.size()); }
  std::int32_t operator()(int i) const noexcept { return images_[i]; }
  std::span<const std::int32_t> images() const noexcept { return images_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct unchecked_t {};
  Permutation(std::vector<std::int32_t> images, unchecked_t) : images_(std::move(images)) {}

  std::vector<std::int32_t> images_;

  friend Permutation compose(const Permutation&, const Permutation&);
  friend Permutation sample_uniform(int, RngStream&);
};

/// (a o b)(i) = a(b(i)): the right factor is applied first.
Permutation compose(const Permutation& a, const Permutation& b);

/// Unbiased Fisher-Yates shuffle; consumes exactly n-1 stream draws.
Permutation sample_uniform(int n, RngStream& rng);

/// Overwrites buf (any content, size n) with a uniform permutation using the
/// same draws as sample_uniform; allocation-free path for hot loops.
void sample_uniform_images(std::span<std::int32_t> buf, RngStream& rng);

/// Uniform ordered triple of distinct indices; consumes exactly 3 draws.
IndexTriple sample_distinct_triple(int n, RngStream& rng);

/// JSON form {"n": 3, "map": [2,3,1]} with 1-based images.
std::string to_json_string(const Permutation& p);
Permutation permutation_from_json(std::string_view json_text);

}  // namespace permstat
