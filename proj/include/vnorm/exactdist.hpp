#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vnorm/bits.hpp"
#include "vnorm/normalize.hpp"
#include "vnorm/sources.hpp"

namespace vnorm {

/// Largest string length enumerated exactly (2^26 strings).
inline constexpr std::size_t kEnumerationLimit = 26;
/// Largest table length accepted by check_independence.
inline constexpr std::size_t kIndependenceLimit = 16;
/// Tolerance for exact identities.
inline constexpr double kExactTol = 1e-12;

/// Probabilities of every string in B^m, indexed by the MSB-first value of
/// the string (so index order is lexicographic order).
class DistributionTable {
 public:
  DistributionTable() : probs_{1.0} {}
  /// Takes 2^length probabilities; they are not checked here, see validate().
  DistributionTable(std::size_t length, std::vector<double> probs);

  std::size_t length() const noexcept { return length_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::uint64_t index) const { return probs_[index]; }
  double prob(const BitString& x) const;
  std::span<const double> probs() const noexcept { return probs_; }

  double total() const;
  /// Throws DomainError unless all entries are >= 0 and sum to 1 within tol.
  void validate(double tol = kExactTol) const;

  /// "string,probability" header, then one row per string in lexicographic order.
  std::string to_csv() const;

 private:
  std::size_t length_ = 0;
  std::vector<double> probs_;
};

/// p0^#0(x) * p1^#1(x).
double pn_prob(const BitString& x, double p0);

/// prod_i q_i^{x_i} with q_i^0 = p0 - eps_i and q_i^1 = p1 + eps_i, where x_1
/// sits at trace position `start` (1-based).
double rn_prob(const BitString& x, const DriftTrace& trace, double p0, std::size_t start = 1);

/// Exact model probability of every string in B^n. Random drift trajectories
/// are realized with `seed`, exactly as sample() would.
DistributionTable exact_source_dist(const SourceSpec& spec, std::size_t n, std::uint64_t seed = kDefaultSeed);

/// Distribution of normalize(x) for x drawn from the source, conditioned on
/// the output having length exactly m. Von Neumann needs 1 <= m <= n/2; the
/// other methods accept 1 <= m <= n. Throws DomainError when no string of
/// B^n yields an output of length m with positive probability.
DistributionTable normalized_dist(const SourceSpec& spec, std::size_t n, std::size_t m,
                                  const NormalizationMethod& method = NormalizationMethod::von_neumann(),
                                  std::uint64_t seed = kDefaultSeed);

DistributionTable uniform_dist(std::size_t m);

/// Half the L1 distance; tables must have equal length.
double total_variation(const DistributionTable& p, const DistributionTable& q);

/// P(B^k x B^{n-k-|x|}): probability that x appears at 0-based offset k.
double marginal_prob(const DistributionTable& table, std::size_t offset, const BitString& x);

struct IndependenceViolation {
  std::size_t k;     // position of the last prefix bit, 1-based
  BitString prefix;  // x_1..x_k
  double lhs;        // P(x_1..x_k B^{n-k})
  double rhs;        // P(x_1..x_{k-1} B^{n-k+1}) * P(B^{k-1} x_k B^{n-k})
};

/// First prefix (by k, then lexicographically) at which the prefix probability
/// does not factor into the shorter prefix times the marginal of bit k.
std::optional<IndependenceViolation> check_independence(const DistributionTable& table, double tol = kExactTol);

/// I.i.d. bits with P(0) = (1 + sign*alpha)/2.
DistributionTable worst_case_product_dist(double alpha, std::size_t m, int sign = 1);

}  // namespace vnorm
