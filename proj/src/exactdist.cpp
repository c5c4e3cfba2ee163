#include "vnorm/exactdist.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <variant>

#include "vnorm/error.hpp"

namespace vnorm {

namespace {

void check_enumeration(std::size_t n, const char* what) {
  if (n > kEnumerationLimit) {
    throw GuardError(std::string(what) + ": length " + std::to_string(n) + " exceeds the enumeration limit " +
                     std::to_string(kEnumerationLimit));
  }
}

// P(bit i = 0 | the i previous bits), with the prefix given as an MSB-first
// integer of i bits.
class ZeroProbability {
 public:
  ZeroProbability(const SourceSpec& spec, std::size_t n, std::uint64_t seed) : spec_(spec) {
    validate(spec_);
    if (const auto* d = std::get_if<DriftingSource>(&spec_)) trace_ = realize_trace(*d, n, seed);
  }

  double operator()(std::size_t i, std::uint64_t prefix) const {
    if (const auto* c = std::get_if<ConstantSource>(&spec_)) return c->p0;
    if (const auto* d = std::get_if<DriftingSource>(&spec_)) return d->params.p0 - trace_.epsilons[i];
    if (const auto* m = std::get_if<MarkovSource>(&spec_)) {
      if (i < m->k) return m->p0;
      return m->zero_prob[prefix & ((std::uint64_t{1} << m->k) - 1)];
    }
    const auto& pw = std::get<PairwiseSource>(spec_);
    const PairDistribution& d = pw.pairs[(i / 2) % pw.pairs.size()];
    if (i % 2 == 0) return d[0] + d[1];
    const bool first = prefix & 1U;
    const double marginal = first ? d[2] + d[3] : d[0] + d[1];
    if (marginal <= 0.0) return 0.5;  // unreachable prefix; value is multiplied by zero
    return (first ? d[2] : d[0]) / marginal;
  }

 private:
  const SourceSpec& spec_;
  DriftTrace trace_;
};

}  // namespace

DistributionTable::DistributionTable(std::size_t length, std::vector<double> probs)
    : length_(length), probs_(std::move(probs)) {
  if (length > kEnumerationLimit) throw GuardError("distribution table length exceeds the enumeration limit");
  if (probs_.size() != (std::size_t{1} << length)) {
    throw DomainError("distribution table of length " + std::to_string(length) + " needs " +
                      std::to_string(std::size_t{1} << length) + " entries, got " + std::to_string(probs_.size()));
  }
}

double DistributionTable::prob(const BitString& x) const {
  if (x.size() != length_) throw DomainError("string length does not match the table length");
  return probs_[x.to_index()];
}

double DistributionTable::total() const {
  double sum = 0.0;
  for (double p : probs_) sum += p;
  return sum;
}

void DistributionTable::validate(double tol) const {
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0)) {
      throw DomainError("negative probability for " + BitString::from_index(i, length_).to_string());
    }
  }
  const double sum = total();
  if (std::abs(sum - 1.0) > tol) throw DomainError("probabilities sum to " + std::to_string(sum) + ", not 1");
}

std::string DistributionTable::to_csv() const {
  std::string out = "string,probability\n";
  char buf[64];
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    out += BitString::from_index(i, length_).to_string();
    std::snprintf(buf, sizeof buf, ",%.17g\n", probs_[i]);
    out += buf;
  }
  return out;
}

double pn_prob(const BitString& x, double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("pn_prob: p0 must lie in (0, 1)");
  const auto ones = static_cast<double>(x.count(true));
  const auto zeros = static_cast<double>(x.size()) - ones;
  return std::pow(p0, zeros) * std::pow(1.0 - p0, ones);
}

double rn_prob(const BitString& x, const DriftTrace& trace, double p0, std::size_t start) {
  if (start < 1) throw DomainError("rn_prob: start is 1-based");
  if (trace.size() + 1 < start + x.size()) {
    throw DomainError("rn_prob: trace of length " + std::to_string(trace.size()) + " is shorter than the " +
                      std::to_string(x.size()) + " bits starting at position " + std::to_string(start));
  }
  double prob = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double eps = trace.epsilons[start - 1 + i];
    prob *= x[i] ? (1.0 - p0) + eps : p0 - eps;
  }
  return prob;
}

DistributionTable exact_source_dist(const SourceSpec& spec, std::size_t n, std::uint64_t seed) {
  check_enumeration(n, "exact_source_dist");
  const ZeroProbability zero(spec, n, seed);
  std::vector<double> table{1.0};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> next(table.size() * 2);
    for (std::uint64_t x = 0; x < table.size(); ++x) {
      const double q0 = zero(i, x);
      next[2 * x] = table[x] * q0;
      next[2 * x + 1] = table[x] * (1.0 - q0);
    }
    table = std::move(next);
  }
  return DistributionTable(n, std::move(table));
}

DistributionTable normalized_dist(const SourceSpec& spec, std::size_t n, std::size_t m,
                                  const NormalizationMethod& method, std::uint64_t seed) {
  check_enumeration(n, "normalized_dist");
  const bool vn = method.kind == NormalizationMethod::Kind::von_neumann;
  const std::size_t max_m = vn ? n / 2 : n;
  if (m < 1 || m > max_m) {
    throw DomainError("normalized_dist: m must lie in [1, " + std::to_string(max_m) + "], got " + std::to_string(m));
  }

  std::vector<double> mass(std::size_t{1} << m, 0.0);
  if (vn) {
    // Depth-first over pairs, pruning zero-probability prefixes and output
    // lengths that can no longer end at exactly m.
    const ZeroProbability zero(spec, n, seed);
    const std::size_t pairs = n / 2;
    std::function<void(std::size_t, std::uint64_t, double, std::uint64_t, std::size_t)> walk =
        [&](std::size_t pair, std::uint64_t prefix, double prob, std::uint64_t out, std::size_t out_len) {
          if (prob == 0.0) return;
          if (out_len + (pairs - pair) < m) return;
          if (pair == pairs) {
            // A trailing odd bit sums out of the probability.
            mass[out] += prob;
            return;
          }
          const std::size_t i = 2 * pair;
          const double q0 = zero(i, prefix);
          for (std::uint64_t a = 0; a < 2; ++a) {
            const double pa = prob * (a == 0 ? q0 : 1.0 - q0);
            if (pa == 0.0) continue;
            const std::uint64_t pre_a = (prefix << 1) | a;
            const double q1 = zero(i + 1, pre_a);
            for (std::uint64_t b = 0; b < 2; ++b) {
              const double pb = pa * (b == 0 ? q1 : 1.0 - q1);
              if (a == b) {
                walk(pair + 1, (pre_a << 1) | b, pb, out, out_len);
              } else if (out_len < m) {
                walk(pair + 1, (pre_a << 1) | b, pb, (out << 1) | a, out_len + 1);
              }
            }
          }
        };
    walk(0, 0, 1.0, 0, 0);
  } else {
    const DistributionTable source = exact_source_dist(spec, n, seed);
    for (std::uint64_t x = 0; x < source.size(); ++x) {
      if (source[x] == 0.0) continue;
      const BitString y = normalize(BitString::from_index(x, n), method);
      if (y.size() == m) mass[y.to_index()] += source[x];
    }
  }

  double total = 0.0;
  for (double v : mass) total += v;
  if (!(total > 0.0)) {
    throw DomainError("normalized_dist: no output of length " + std::to_string(m) +
                      " has positive probability (degenerate source)");
  }
  for (double& v : mass) v /= total;
  return DistributionTable(m, std::move(mass));
}

DistributionTable uniform_dist(std::size_t m) {
  check_enumeration(m, "uniform_dist");
  const std::size_t size = std::size_t{1} << m;
  return DistributionTable(m, std::vector<double>(size, std::ldexp(1.0, -static_cast<int>(m))));
}

double total_variation(const DistributionTable& p, const DistributionTable& q) {
  if (p.length() != q.length()) {
    throw DomainError("total_variation: lengths " + std::to_string(p.length()) + " and " +
                      std::to_string(q.length()) + " differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double marginal_prob(const DistributionTable& table, std::size_t offset, const BitString& x) {
  const std::size_t n = table.length();
  if (offset + x.size() > n) throw DomainError("marginal_prob: window extends past the table length");
  const std::size_t shift = n - offset - x.size();
  const std::uint64_t mask = x.size() == 0 ? 0 : ((std::uint64_t{1} << x.size()) - 1) << shift;
  const std::uint64_t want = x.size() == 0 ? 0 : x.to_index() << shift;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    if ((s & mask) == want) sum += table[s];
  }
  return sum;
}

std::optional<IndependenceViolation> check_independence(const DistributionTable& table, double tol) {
  const std::size_t n = table.length();
  if (n > kIndependenceLimit) {
    throw GuardError("check_independence: length " + std::to_string(n) + " exceeds the limit " +
                     std::to_string(kIndependenceLimit));
  }
  // prefix[k][v]: probability of the k-bit prefix v; bit_zero[k]: P(bit k+1 = 0).
  std::vector<std::vector<double>> prefix(n + 1);
  prefix[n].assign(table.probs().begin(), table.probs().end());
  for (std::size_t k = n; k-- > 0;) {
    prefix[k].resize(std::size_t{1} << k);
    for (std::size_t v = 0; v < prefix[k].size(); ++v) prefix[k][v] = prefix[k + 1][2 * v] + prefix[k + 1][2 * v + 1];
  }
  std::vector<double> bit_zero(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t shift = n - 1 - k;
    for (std::uint64_t s = 0; s < table.size(); ++s) {
      if (((s >> shift) & 1U) == 0) bit_zero[k] += table[s];
    }
  }
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::uint64_t v = 0; v < prefix[k].size(); ++v) {
      const bool last = v & 1U;
      const double marginal = last ? 1.0 - bit_zero[k - 1] : bit_zero[k - 1];
      const double lhs = prefix[k][v];
      const double rhs = prefix[k - 1][v >> 1] * marginal;
      if (std::abs(lhs - rhs) > tol) return IndependenceViolation{k, BitString::from_index(v, k), lhs, rhs};
    }
  }
  return std::nullopt;
}

DistributionTable worst_case_product_dist(double alpha, std::size_t m, int sign) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("worst_case_product_dist: alpha must lie in [0, 1)");
  if (sign != 1 && sign != -1) throw DomainError("worst_case_product_dist: sign must be +1 or -1");
  check_enumeration(m, "worst_case_product_dist");
  const double q0 = (1.0 + sign * alpha) / 2.0;
  const double q1 = (1.0 - sign * alpha) / 2.0;
  std::vector<double> probs(std::size_t{1} << m);
  for (std::uint64_t y = 0; y < probs.size(); ++y) {
    const int ones = std::popcount(y);
    probs[y] = std::pow(q0, static_cast<int>(m) - ones) * std::pow(q1, ones);
  }
  return DistributionTable(m, std::move(probs));
}

}  // namespace vnorm
