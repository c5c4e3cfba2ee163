#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vnorm/bits.hpp"

namespace vnorm {

/// Seed used by the CLI and by exact computations over random trajectories
/// when the caller supplies none.
inline constexpr std::uint64_t kDefaultSeed = 20120905;

/// Reproducible uniform source: std::mt19937_64 seeded directly with the
/// 64-bit seed. uniform() maps the top 53 bits of one engine output to
/// [0, 1), independent of the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream derived from a user seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// ---------------------------------------------------------------------------
// Drift model: bit i is 0 with probability p0 - eps_i and 1 with p1 + eps_i.

struct DriftParams {
  double p0 = 0.5;
  double beta = 0.0;   // amplitude bound on |eps_i|
  double delta = 0.0;  // speed bound on |eps_{i+1} - eps_i|

  double p1() const noexcept { return 1.0 - p0; }
};

/// Throws DomainError naming the failed invariant.
void validate(const DriftParams& params);

struct DriftTrace {
  std::vector<double> epsilons;  // eps_1..eps_n stored at [0, n)

  std::size_t size() const noexcept { return epsilons.size(); }
  /// gamma_i = eps_{i+1} - eps_i for 1-based i < size().
  double gamma(std::size_t i) const { return epsilons.at(i) - epsilons.at(i - 1); }
};

struct TraceViolation {
  enum class Kind { amplitude, speed };
  Kind kind;
  std::size_t index;  // 1-based: eps_index or gamma_index
  double value;       // |eps_index| or |gamma_index|
  double bound;

  std::string message() const;
};

/// Slack applied to both trace bounds to absorb rounding in constructed traces.
inline constexpr double kTraceSlack = 1e-12;

/// First violation of |eps_i| <= beta or |gamma_i| <= delta, scanning
/// i = 1..n and checking eps_i before gamma_i.
std::optional<TraceViolation> validate_trace(const DriftTrace& trace, const DriftParams& params);

/// Worst-case trace: odd positions carry eps = beta (p1 >= p0) or -beta
/// (p0 > p1), and each following step moves delta towards zero.
DriftTrace adversarial_trace(const DriftParams& params, std::size_t n);

DriftTrace parse_trace(std::string_view text);
std::string format_trace(const DriftTrace& trace);

// ---------------------------------------------------------------------------
// Source specifications.

struct WalkTrajectory {};  // eps_1 = 0, then clamp(eps + U[-delta, delta], -beta, beta)
struct SineTrajectory {
  double period = 0.0;  // eps_i = beta * sin(2 pi i / period)
};
struct FixedTrajectory {
  DriftTrace trace;
};
struct AdversarialTrajectory {};

using Trajectory = std::variant<WalkTrajectory, SineTrajectory, FixedTrajectory, AdversarialTrajectory>;

struct ConstantSource {
  double p0 = 0.5;
};

struct DriftingSource {
  DriftParams params;
  Trajectory trajectory;
};

/// Bit i depends on the previous k bits. zero_prob[h] is P(bit = 0 | history h)
/// where h is the MSB-first value of x_{i-k}..x_{i-1}; positions i <= k use
/// the base marginal p0.
/// Largest memory length a Markov source may use.
inline constexpr std::size_t kMaxMarkovMemory = 24;

struct MarkovSource {
  std::size_t k = 0;
  double kappa = 0.0;
  double p0 = 0.5;
  std::vector<double> zero_prob;
};

/// Probabilities of 00, 01, 10, 11 in that order.
using PairDistribution = std::array<double, 4>;

/// Consecutive disjoint pairs drawn independently from pairs[j mod size].
/// An odd final bit follows the first-bit marginal of its pair.
struct PairwiseSource {
  std::vector<PairDistribution> pairs;
};

using SourceSpec = std::variant<ConstantSource, DriftingSource, MarkovSource, PairwiseSource>;

/// Throws DomainError naming the failed invariant.
void validate(const SourceSpec& spec);

/// True when P(01) == P(10) within tol for every pair.
bool pairs_symmetric(const PairwiseSource& source, double tol = 1e-12);

std::vector<double> parse_markov_table(std::string_view text, std::size_t k);
std::string format_markov_table(const MarkovSource& source);

/// Produces eps_1, eps_2, ... for a drifting source, one value per call.
class TraceGenerator {
 public:
  TraceGenerator(const DriftingSource& source, std::uint64_t seed);

  double next();

 private:
  DriftingSource source_;
  Rng rng_;
  std::size_t index_ = 0;  // number of values produced so far
  double current_ = 0.0;
};

/// The first n values of the source's trajectory under `seed`; identical to
/// the trace returned by sample() with the same seed.
DriftTrace realize_trace(const DriftingSource& source, std::size_t n, std::uint64_t seed);

/// Stateful bit generator; one uniform draw per bit, bit is 0 iff u < P(0).
class BitSampler {
 public:
  BitSampler(SourceSpec spec, std::uint64_t seed);

  bool next();
  /// eps of the most recent bit (drifting sources only).
  std::optional<double> last_epsilon() const { return last_eps_; }

 private:
  SourceSpec spec_;
  Rng rng_;
  std::optional<TraceGenerator> trace_;
  std::optional<double> last_eps_;
  std::size_t position_ = 0;  // 0-based index of the next bit
  std::uint64_t history_ = 0;
  bool pair_first_ = false;
};

struct Sample {
  BitString bits;
  std::optional<DriftTrace> trace;
};

/// n bits from the source; a pure function of (spec, n, seed).
Sample sample(const SourceSpec& spec, std::size_t n, std::uint64_t seed);

/// n i.i.d. symbols with P(a_i) = probs[i-1].
QaryString sample_qary(std::span<const double> probs, std::size_t n, std::uint64_t seed);

}  // namespace vnorm
