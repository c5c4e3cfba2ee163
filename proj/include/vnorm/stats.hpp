#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vnorm/bits.hpp"
#include "vnorm/exactdist.hpp"

namespace vnorm {

enum class BorelMode { non_overlapping, overlapping };
BorelMode parse_borel_mode(std::string_view name);

/// Largest block length counted by borel_counts.
inline constexpr std::size_t kBorelBlockLimit = 20;

struct BorelReport {
  std::size_t m = 1;
  BorelMode mode = BorelMode::non_overlapping;
  std::uint64_t total = 0;            // number of blocks or windows scanned
  std::vector<std::uint64_t> counts;  // indexed by block value, 2^m entries

  double expected() const;  // total * 2^-m
  double sigma() const;     // sqrt(total q (1 - q)), q = 2^-m
  double deviation(std::size_t block) const;
  double max_abs_deviation() const;

  /// Aligned columns: block, count, expected, deviation in sigma units.
  std::string to_table() const;
  /// "m,mode,block,count,expected,deviation".
  std::string to_csv() const;
};

BorelReport borel_counts(const BitString& x, std::size_t m, BorelMode mode = BorelMode::non_overlapping);

/// Frequencies of the disjoint m-blocks of x.
DistributionTable empirical_block_dist(const BitString& x, std::size_t m);

struct SweepRow {
  std::uint64_t m;
  double alpha;
  double tv_exact;
  double tv_linear;  // NaN when m < 3
  double tv_naive;
};

struct DriftPoint {
  double p0;
  double beta;
  double delta;
};

/// One row per (m, alpha), m-major, alphas in the given order.
std::vector<SweepRow> sweep(std::span<const std::uint64_t> ms, std::span<const double> alphas);
/// As sweep(), with alpha = alpha_max of each drift point.
std::vector<SweepRow> sweep(std::span<const std::uint64_t> ms, std::span<const DriftPoint> points);

/// "m,alpha,tv_exact,tv_linear,tv_naive" with 17 significant digits.
std::string sweep_csv(std::span<const SweepRow> rows);

/// count points from lo to hi, evenly spaced in log scale; lo, hi > 0.
std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Symbol probabilities after deleting `symbol` (1-based): p_i / (1 - p_symbol).
std::vector<double> renormalized_probs(std::span<const double> probs, std::uint8_t symbol);

/// Counts of disjoint m-blocks of a Q-ary string, indexed by the base-Q value
/// of (s_1 - 1, ..., s_m - 1).
std::vector<std::uint64_t> qary_block_counts(const QaryString& x, std::size_t m);

}  // namespace vnorm
