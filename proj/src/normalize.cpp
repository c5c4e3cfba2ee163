#include "vnorm/normalize.hpp"

#include "vnorm/error.hpp"

namespace vnorm {

NormalizationMethod parse_method(std::string_view name, std::size_t block) {
  if (name == "vn" || name == "von_neumann") return NormalizationMethod::von_neumann();
  if (name == "peres") return NormalizationMethod::peres();
  if (name == "parity") {
    if (block < 2) throw DomainError("parity block length must be >= 2");
    return NormalizationMethod::parity(block);
  }
  throw DomainError("unknown normalization method '" + std::string(name) + "' (expected vn, peres or parity)");
}

BitString vn_normalize(const BitString& x) {
  BitString out;
  const std::size_t pairs = x.size() / 2;
  out.reserve(pairs / 2);
  for (std::size_t i = 0; i < pairs; ++i) {
    const bool a = x[2 * i];
    if (a != x[2 * i + 1]) out.push_back(a);
  }
  return out;
}

namespace {

void place_pairs(const BitString& y, std::size_t pairs, std::size_t slot, std::size_t placed, bool odd_tail,
                 BitString& prefix, std::vector<BitString>& out) {
  if (slot == pairs) {
    if (placed != y.size()) return;
    if (!odd_tail) {
      out.push_back(prefix);
      return;
    }
    for (bool v : {false, true}) {
      prefix.push_back(v);
      out.push_back(prefix);
      prefix = prefix.substr(0, prefix.size() - 1);
    }
    return;
  }
  const bool can_discard = pairs - slot > y.size() - placed;
  const auto recurse = [&](bool a, bool b, std::size_t next_placed) {
    BitString saved = prefix;
    prefix.push_back(a);
    prefix.push_back(b);
    place_pairs(y, pairs, slot + 1, next_placed, odd_tail, prefix, out);
    prefix = std::move(saved);
  };
  // 00 < f(y_j) < 11 keeps the output in lexicographic order.
  if (can_discard) recurse(false, false, placed);
  if (placed < y.size()) {
    const auto [a, b] = vn_encode(y[placed]);
    recurse(a, b, placed + 1);
  }
  if (can_discard) recurse(true, true, placed);
}

}  // namespace

std::vector<BitString> vn_preimage(const BitString& y, std::size_t n) {
  if (n > kPreimageLimit) {
    throw GuardError("vn_preimage: n = " + std::to_string(n) + " exceeds the enumeration limit " +
                     std::to_string(kPreimageLimit));
  }
  if (n < 2 * y.size()) throw DomainError("vn_preimage: n must be at least 2|y|");
  std::vector<BitString> out;
  BitString prefix;
  place_pairs(y, n / 2, 0, 0, n % 2 == 1, prefix, out);
  return out;
}

BitString peres_normalize(const BitString& x) {
  if (x.size() < 2) return {};
  BitString out = vn_normalize(x);
  BitString xors;
  BitString equal_firsts;
  const std::size_t pairs = x.size() / 2;
  xors.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const bool a = x[2 * i];
    const bool b = x[2 * i + 1];
    xors.push_back(a != b);
    if (a == b) equal_firsts.push_back(a);
  }
  out.append(peres_normalize(xors));
  out.append(peres_normalize(equal_firsts));
  return out;
}

BitString parity_normalize(const BitString& x, std::size_t block) {
  if (block < 2) throw DomainError("parity block length must be >= 2");
  BitString out;
  const std::size_t blocks = x.size() / block;
  out.reserve(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    bool parity = false;
    for (std::size_t i = 0; i < block; ++i) parity ^= x[j * block + i];
    out.push_back(parity);
  }
  return out;
}

BitString normalize(const BitString& x, const NormalizationMethod& method) {
  switch (method.kind) {
    case NormalizationMethod::Kind::von_neumann:
      return vn_normalize(x);
    case NormalizationMethod::Kind::peres:
      return peres_normalize(x);
    case NormalizationMethod::Kind::parity:
      return parity_normalize(x, method.block);
  }
  return {};
}

QaryString delete_symbol(const QaryString& x, std::uint8_t symbol) {
  if (symbol < 1 || symbol > x.alphabet_size()) throw DomainError("delete_symbol: symbol not in alphabet");
  QaryString out(x.alphabet_size());
  out.reserve(x.size());
  for (std::uint8_t s : x.symbols()) {
    if (s != symbol) out.push_back(s);
  }
  return out;
}

StreamNormalizer::StreamNormalizer(NormalizationMethod method) : method_(method) {
  if (method_.kind == NormalizationMethod::Kind::peres) {
    throw DomainError("the Peres extractor needs the whole input and cannot be streamed");
  }
  if (method_.kind == NormalizationMethod::Kind::parity && method_.block < 2) {
    throw DomainError("parity block length must be >= 2");
  }
}

void StreamNormalizer::push(const BitString& chunk, BitString& out) {
  const std::size_t unit = method_.kind == NormalizationMethod::Kind::parity ? method_.block : 2;
  BitString work = carry_.empty() ? chunk : carry_ + chunk;
  const std::size_t usable = work.size() - work.size() % unit;
  out.append(normalize(usable == work.size() ? work : work.substr(0, usable), method_));
  carry_ = work.substr(usable, work.size() - usable);
}

}  // namespace vnorm
