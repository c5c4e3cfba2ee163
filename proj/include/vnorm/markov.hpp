#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vnorm/sources.hpp"

namespace vnorm {

enum class MarkovTableKind {
  random,       // each entry uniform in [p0 - kappa, p0 + kappa]
  alternating,  // p0 + kappa after a 0, p0 - kappa after a 1
  given,        // supplied by the caller
};
MarkovTableKind parse_markov_table_kind(std::string_view name);

struct MarkovExperiment {
  std::size_t k = 1;
  double kappa = 0.0;
  std::size_t m = 2;
  std::size_t n = 16;  // chain length per sample
  std::size_t samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  double p0 = 0.5;
  MarkovTableKind table_kind = MarkovTableKind::random;
  std::vector<double> table;  // used when table_kind == given
};

/// Builds and validates the source the experiment runs on.
MarkovSource make_markov_source(const MarkovExperiment& exp);

struct MarkovResult {
  MarkovExperiment experiment;
  MarkovSource source;
  std::optional<double> tv_exact;  // set when n <= kEnumerationLimit
  double tv_empirical;             // NaN when no sample produced m bits
  std::size_t kept;                // samples whose output had length exactly m
};

/// Draws `samples` independent chains of n bits, normalizes each with von
/// Neumann, keeps those yielding exactly m bits and compares their
/// distribution with U_m.
MarkovResult run_markov_experiment(const MarkovExperiment& exp);

/// "k,kappa,m,n,tv_exact,tv_empirical,samples,seed"; missing values print as nan.
std::string markov_csv(std::span<const MarkovResult> results);

}  // namespace vnorm
