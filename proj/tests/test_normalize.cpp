#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vnorm/error.hpp"
#include "vnorm/normalize.hpp"
#include "vnorm/sources.hpp"

using namespace vnorm;

namespace {

BitString bits(std::string_view s) { return BitString::from_string(s); }

std::vector<std::string> strings(const std::vector<BitString>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(x.to_string());
  return out;
}

}  // namespace

TEST_CASE("vn_pair and its encoding") {
  CHECK(vn_pair(false, true) == false);
  CHECK(vn_pair(true, false) == true);
  CHECK_FALSE(vn_pair(true, true).has_value());
  CHECK_FALSE(vn_pair(false, false).has_value());
  for (bool b : {false, true}) {
    const auto [x1, x2] = vn_encode(b);
    CHECK(vn_pair(x1, x2) == b);
  }
}

TEST_CASE("vn_normalize examples") {
  CHECK(vn_normalize(bits("0110")) == bits("01"));
  CHECK(vn_normalize(bits("0011")).empty());
  CHECK(vn_normalize(bits("01101")) == bits("01"));
  CHECK(vn_normalize(bits("")).empty());
}

TEST_CASE("vn_normalize is consistent under concatenation at even cuts") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    BitString a, b;
    const std::size_t la = 2 * (rng() % 70);
    const std::size_t lb = rng() % 141;
    for (std::size_t i = 0; i < la; ++i) a.push_back(rng() & 1U);
    for (std::size_t i = 0; i < lb; ++i) b.push_back(rng() & 1U);
    CHECK(vn_normalize(a + b) == vn_normalize(a) + vn_normalize(b));
    CHECK(vn_normalize(a).size() <= a.size() / 2);
  }
}

TEST_CASE("vn_preimage examples") {
  CHECK(strings(vn_preimage(bits("0"), 2)) == std::vector<std::string>{"01"});
  CHECK(strings(vn_preimage(bits("0"), 4)) == std::vector<std::string>{"0001", "0100", "0111", "1101"});
  CHECK(strings(vn_preimage(bits(""), 2)) == std::vector<std::string>{"00", "11"});
  CHECK(strings(vn_preimage(bits("1"), 3)) == std::vector<std::string>{"100", "101"});
  CHECK_THROWS_AS(vn_preimage(bits("01"), 3), DomainError);
  CHECK_THROWS_AS(vn_preimage(bits("0"), 27), GuardError);
}

TEST_CASE("vn_preimage equals the brute-force preimage for n <= 14") {
  for (std::size_t n = 0; n <= 14; ++n) {
    for (std::size_t m = 0; 2 * m <= n; ++m) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
        const BitString y = BitString::from_index(v, m);
        const auto fast = vn_preimage(y, n);
        const auto slow = oracle::brute_preimage(y, n);
        REQUIRE(fast == slow);
      }
    }
  }
}

TEST_CASE("Peres examples") {
  CHECK(peres_normalize(bits("0101")) == bits("00"));
  CHECK(peres_normalize(bits("0011")) == bits("0"));
  CHECK(peres_normalize(bits("0")).empty());
  CHECK(peres_normalize(bits("")).empty());
}

TEST_CASE("Peres output dominates von Neumann output") {
  for (std::size_t n = 0; n <= 14; ++n) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
      const BitString x = BitString::from_index(v, n);
      REQUIRE(peres_normalize(x).size() >= vn_normalize(x).size());
    }
  }
  const BitString x = sample(ConstantSource{0.7}, 100000, 1).bits;
  const BitString p = peres_normalize(x);
  const BitString y = vn_normalize(x);
  CHECK(p.size() > y.size());
  CHECK(p.substr(0, y.size()) == y);
}

TEST_CASE("parity examples") {
  CHECK(parity_normalize(bits("0111"), 2) == bits("10"));
  CHECK(parity_normalize(bits("0000"), 2) == bits("00"));
  CHECK(parity_normalize(bits("01101"), 2) == bits("11"));
  CHECK(parity_normalize(bits("0111011"), 3) == bits("00"));
  CHECK_THROWS_AS(parity_normalize(bits("01"), 1), DomainError);
}

TEST_CASE("method dispatch and names") {
  const BitString x = bits("01101100");
  CHECK(normalize(x, NormalizationMethod::von_neumann()) == vn_normalize(x));
  CHECK(normalize(x, NormalizationMethod::peres()) == peres_normalize(x));
  CHECK(normalize(x, NormalizationMethod::parity(4)) == parity_normalize(x, 4));
  CHECK(parse_method("vn").kind == NormalizationMethod::Kind::von_neumann);
  CHECK(parse_method("peres").kind == NormalizationMethod::Kind::peres);
  CHECK(parse_method("parity", 3).block == 3);
  CHECK_THROWS_AS(parse_method("parity", 1), DomainError);
  CHECK_THROWS_AS(parse_method("elias"), DomainError);
}

TEST_CASE("delete_symbol") {
  const auto del = [](std::string_view s) {
    return delete_symbol(QaryString::from_letters(s, 3), 3).to_letters();
  };
  CHECK(del("cabcb") == "abb");
  CHECK(del("ccc").empty());
  CHECK(del("ab") == "ab");
  const auto once = delete_symbol(QaryString::from_letters("cabcbacc", 3), 3);
  CHECK(delete_symbol(once, 3) == once);
  CHECK_THROWS_AS(delete_symbol(QaryString::from_letters("ab", 3), 4), DomainError);
}

TEST_CASE("streamed normalization matches whole-string normalization") {
  const BitString x = sample(ConstantSource{0.6}, 1000000, 8).bits;
  for (const auto& method : {NormalizationMethod::von_neumann(), NormalizationMethod::parity(2),
                             NormalizationMethod::parity(5)}) {
    const BitString whole = normalize(x, method);
    StreamNormalizer stream(method);
    BitString out;
    std::mt19937_64 rng(1);
    std::size_t pos = 0;
    while (pos < x.size()) {
      // Even chunk lengths as required, plus a few odd ones to exercise the carry.
      std::size_t len = std::min<std::size_t>(x.size() - pos, 2 * (1 + rng() % 5000) + (rng() % 7 == 0));
      stream.push(x.substr(pos, len), out);
      pos += len;
    }
    CHECK(out == whole);
  }
  CHECK_THROWS_AS(StreamNormalizer(NormalizationMethod::peres()), DomainError);
}
