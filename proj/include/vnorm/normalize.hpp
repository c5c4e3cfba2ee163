#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "vnorm/bits.hpp"

namespace vnorm {

struct NormalizationMethod {
  enum class Kind { von_neumann, peres, parity };
  Kind kind = Kind::von_neumann;
  std::size_t block = 2;  // parity block length, >= 2

  static NormalizationMethod von_neumann() { return {Kind::von_neumann, 2}; }
  static NormalizationMethod peres() { return {Kind::peres, 2}; }
  static NormalizationMethod parity(std::size_t block) { return {Kind::parity, block}; }
};

/// "vn" | "von_neumann" | "peres" | "parity"; block applies to parity.
NormalizationMethod parse_method(std::string_view name, std::size_t block = 2);

/// The pair 01 maps to 0, 10 maps to 1, equal pairs are discarded.
inline std::optional<bool> vn_pair(bool first, bool second) noexcept {
  if (first == second) return std::nullopt;
  return first;
}

/// Encodes b as the unequal pair b, !b; vn_pair inverts it.
inline std::pair<bool, bool> vn_encode(bool b) noexcept { return {b, !b}; }

/// Applies vn_pair to every disjoint pair; a trailing odd bit is ignored.
BitString vn_normalize(const BitString& x);

/// Upper limit on n for vn_preimage.
inline constexpr std::size_t kPreimageLimit = 26;

/// All z of length n with vn_normalize(z) == y, i.e. strings
/// u_1 f(y_1) ... u_m f(y_m) u_{m+1} v with u_i in {00,11}* and |v| <= 1.
/// Sorted lexicographically. Requires 2|y| <= n <= kPreimageLimit.
std::vector<BitString> vn_preimage(const BitString& y, std::size_t n);

/// Iterated extractor: vn_normalize(x), then recursively the XOR stream of
/// all pairs, then recursively the first bits of the discarded equal pairs.
BitString peres_normalize(const BitString& x);

/// XOR of each disjoint block of `block` bits; a trailing partial block is dropped.
BitString parity_normalize(const BitString& x, std::size_t block);

BitString normalize(const BitString& x, const NormalizationMethod& method);

/// Removes every occurrence of `symbol`, keeping the rest in order.
QaryString delete_symbol(const QaryString& x, std::uint8_t symbol);

/// Chunked von Neumann or parity normalization. Bits that do not complete a
/// pair or block are carried into the next push, so any chunking yields the
/// same output as normalizing the concatenation.
class StreamNormalizer {
 public:
  explicit StreamNormalizer(NormalizationMethod method);

  /// Appends the output produced by `chunk` to `out`.
  void push(const BitString& chunk, BitString& out);
  std::size_t pending() const noexcept { return carry_.size(); }

 private:
  NormalizationMethod method_;
  BitString carry_;
};

}  // namespace vnorm
