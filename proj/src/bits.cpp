#include "vnorm/bits.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include "vnorm/error.hpp"

namespace vnorm {

namespace {

constexpr std::size_t kHeaderBytes = 8;

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

BitString::BitString(std::size_t n, bool value) : words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0), size_(n) {
  if (value && (n & 63) != 0) words_.back() &= ~std::uint64_t{0} << (64 - (n & 63));
}

BitString BitString::from_string(std::string_view text) {
  BitString out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      throw DomainError("bit literal contains '" + std::string(1, c) + "' at position " + std::to_string(i));
    }
    out.push_back(c == '1');
  }
  return out;
}

BitString BitString::from_index(std::uint64_t value, std::size_t length) {
  if (length > 64) throw DomainError("from_index: length exceeds 64");
  BitString out;
  out.size_ = length;
  if (length > 0) out.words_.push_back(value << (64 - length));
  return out;
}

bool BitString::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("BitString index " + std::to_string(i) + " out of range");
  return (*this)[i];
}

void BitString::set(std::size_t i, bool value) {
  if (i >= size_) throw std::out_of_range("BitString index " + std::to_string(i) + " out of range");
  const std::uint64_t mask = std::uint64_t{1} << (63 - (i & 63));
  if (value)
    words_[i >> 6] |= mask;
  else
    words_[i >> 6] &= ~mask;
}

void BitString::append(const BitString& other) {
  const std::size_t offset = size_ & 63;
  if (offset == 0) {
    words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    size_ += other.size_;
    return;
  }
  reserve(size_ + other.size_);
  for (std::uint64_t w : other.words_) {
    words_.back() |= w >> offset;
    words_.push_back(w << (64 - offset));
  }
  size_ += other.size_;
  words_.resize((size_ + 63) / 64);
}

std::uint64_t BitString::block(std::size_t pos, std::size_t len) const {
  if (len == 0) return 0;
  if (len > 64 || pos + len > size_) throw std::out_of_range("BitString::block out of range");
  const std::size_t w = pos >> 6;
  const std::size_t off = pos & 63;
  std::uint64_t hi = words_[w] << off;
  if (off != 0 && w + 1 < words_.size()) hi |= words_[w + 1] >> (64 - off);
  return hi >> (64 - len);
}

std::size_t BitString::count(bool bit) const noexcept {
  std::size_t ones = 0;
  for (std::uint64_t w : words_) ones += static_cast<std::size_t>(std::popcount(w));
  return bit ? ones : size_ - ones;
}

BitString BitString::substr(std::size_t pos, std::size_t len) const {
  if (pos + len > size_) throw std::out_of_range("BitString::substr out of range");
  BitString out;
  out.reserve(len);
  std::size_t i = 0;
  for (; i + 64 <= len; i += 64) {
    out.words_.push_back(block(pos + i, 64));
  }
  out.size_ = i;
  for (; i < len; ++i) out.push_back((*this)[pos + i]);
  return out;
}

std::string BitString::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  const std::size_t common = std::min(a.words_.size(), b.words_.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (a.words_[i] != b.words_[i]) {
      // The shorter string is zero padded; a genuine mismatch inside the
      // common prefix decides, otherwise fall through to length.
      const std::size_t first = static_cast<std::size_t>(std::countl_zero(a.words_[i] ^ b.words_[i])) + 64 * i;
      if (first < std::min(a.size_, b.size_)) return a.words_[i] <=> b.words_[i];
      break;
    }
  }
  return a.size_ <=> b.size_;
}

BitString operator+(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

BitFormat parse_bit_format(std::string_view name) {
  if (name == "ascii") return BitFormat::ascii;
  if (name == "packed") return BitFormat::packed;
  throw DomainError("unknown bit format '" + std::string(name) + "' (expected ascii or packed)");
}

BitString parse_bits(std::span<const std::uint8_t> bytes, BitFormat format) {
  BitString out;
  if (format == BitFormat::ascii) {
    out.reserve(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      const std::uint8_t c = bytes[i];
      if (c == '0' || c == '1')
        out.push_back(c == '1');
      else if (!is_space(c))
        throw ParseError("illegal character in ascii bit stream", i);
    }
    return out;
  }

  if (bytes.size() < kHeaderBytes) throw ParseError("truncated packed header", bytes.size());
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < kHeaderBytes; ++i) count |= std::uint64_t{bytes[i]} << (8 * i);
  const std::size_t payload = bytes.size() - kHeaderBytes;
  if (count > std::uint64_t{payload} * 8) throw ParseError("declared bit count exceeds payload capacity", 0);
  const std::size_t needed = static_cast<std::size_t>((count + 7) / 8);
  if (payload > needed) throw ParseError("trailing bytes after packed payload", kHeaderBytes + needed);

  out.reserve(static_cast<std::size_t>(count));
  const auto data = bytes.subspan(kHeaderBytes);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back((data[static_cast<std::size_t>(i >> 3)] >> (7 - (i & 7))) & 1U);
  }
  return out;
}

std::vector<std::uint8_t> serialize_bits(const BitString& x, BitFormat format) {
  if (format == BitFormat::ascii) {
    const std::string text = x.to_string();
    return {text.begin(), text.end()};
  }
  std::vector<std::uint8_t> out(kHeaderBytes + (x.size() + 7) / 8, 0);
  const std::uint64_t count = x.size();
  for (std::size_t i = 0; i < kHeaderBytes; ++i) out[i] = static_cast<std::uint8_t>(count >> (8 * i));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) out[kHeaderBytes + (i >> 3)] |= static_cast<std::uint8_t>(0x80U >> (i & 7));
  }
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

BitString read_bits_file(const std::filesystem::path& path, BitFormat format) {
  return parse_bits(read_file_bytes(path), format);
}

void write_bits_file(const std::filesystem::path& path, const BitString& x, BitFormat format) {
  write_file_bytes(path, serialize_bits(x, format));
}

QaryString::QaryString(unsigned alphabet_size) : q_(alphabet_size) {
  if (alphabet_size < 2 || alphabet_size > 255) throw DomainError("alphabet size must be in [2, 255]");
}

QaryString::QaryString(unsigned alphabet_size, std::vector<std::uint8_t> symbols) : QaryString(alphabet_size) {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] < 1 || symbols[i] > q_) {
      throw DomainError("symbol index out of alphabet at position " + std::to_string(i));
    }
  }
  symbols_ = std::move(symbols);
}

QaryString QaryString::from_letters(std::string_view letters, unsigned alphabet_size) {
  QaryString out(alphabet_size);
  out.reserve(letters.size());
  for (char c : letters) {
    if (c < 'a' || c >= static_cast<char>('a' + alphabet_size)) {
      throw DomainError(std::string("letter '") + c + "' outside alphabet");
    }
    out.symbols_.push_back(static_cast<std::uint8_t>(c - 'a' + 1));
  }
  return out;
}

std::string QaryString::to_letters() const {
  std::string out;
  out.reserve(symbols_.size());
  for (std::uint8_t s : symbols_) out.push_back(static_cast<char>('a' + s - 1));
  return out;
}

void QaryString::push_back(std::uint8_t symbol) {
  if (symbol < 1 || symbol > q_) throw DomainError("symbol index out of alphabet");
  symbols_.push_back(symbol);
}

}  // namespace vnorm
