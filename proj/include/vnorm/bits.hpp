#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vnorm {

/// Growable bit sequence, packed 64 bits per word.
///
/// Bit i lives in word i / 64 at position 63 - i % 64, so the word layout is
/// MSB-first and lexicographic order on equal-length strings matches integer
/// order of their block values. Bits past size() are always zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n, bool value = false);

  /// Parses a literal of '0' and '1' characters. Throws DomainError otherwise.
  static BitString from_string(std::string_view text);

  /// The length-`length` string whose MSB-first value is `value` (length <= 64).
  static BitString from_index(std::uint64_t value, std::size_t length);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (63 - (i & 63))) & 1U;
  }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value);

  void push_back(bool bit) {
    if ((size_ & 63) == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (63 - (size_ & 63));
    ++size_;
  }
  void append(const BitString& other);
  void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }
  void clear() noexcept {
    words_.clear();
    size_ = 0;
  }

  /// Bits [pos, pos+len) as an MSB-first integer; len <= 64.
  std::uint64_t block(std::size_t pos, std::size_t len) const;

  /// The whole string as an MSB-first integer; size() <= 64.
  std::uint64_t to_index() const { return block(0, size_); }

  std::size_t count(bool bit) const noexcept;

  BitString substr(std::size_t pos, std::size_t len) const;
  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  /// Lexicographic, with a proper prefix ordered first.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

BitString operator+(const BitString& a, const BitString& b);

/// #_b(x): the number of occurrences of bit b in x.
inline std::size_t count_bits(const BitString& x, bool b) noexcept { return x.count(b); }

enum class BitFormat {
  ascii,   // '0'/'1' characters, whitespace ignored on input
  packed,  // u64 little-endian bit count, then MSB-first bytes, zero padded
};

BitFormat parse_bit_format(std::string_view name);

BitString parse_bits(std::span<const std::uint8_t> bytes, BitFormat format);
std::vector<std::uint8_t> serialize_bits(const BitString& x, BitFormat format);

BitString read_bits_file(const std::filesystem::path& path, BitFormat format);
void write_bits_file(const std::filesystem::path& path, const BitString& x, BitFormat format);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// String over the alphabet {a_1, ..., a_Q}; symbols are stored as 1..Q.
class QaryString {
 public:
  explicit QaryString(unsigned alphabet_size);
  QaryString(unsigned alphabet_size, std::vector<std::uint8_t> symbols);

  /// Letters 'a', 'b', ... stand for a_1, a_2, ...
  static QaryString from_letters(std::string_view letters, unsigned alphabet_size);
  std::string to_letters() const;

  unsigned alphabet_size() const noexcept { return q_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return symbols_[i]; }
  std::span<const std::uint8_t> symbols() const noexcept { return symbols_; }

  void push_back(std::uint8_t symbol);
  void reserve(std::size_t n) { symbols_.reserve(n); }

  friend bool operator==(const QaryString&, const QaryString&) = default;

 private:
  unsigned q_;
  std::vector<std::uint8_t> symbols_;
};

}  // namespace vnorm
