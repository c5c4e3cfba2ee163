#include "vnorm/markov.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "vnorm/error.hpp"
#include "vnorm/exactdist.hpp"
#include "vnorm/normalize.hpp"

namespace vnorm {

namespace {

// Stream ids for derive_seed; 0..2 belong to the samplers.
constexpr std::uint64_t kTableStream = 3;
constexpr std::uint64_t kChainStreamBase = 1000;

}  // namespace

MarkovTableKind parse_markov_table_kind(std::string_view name) {
  if (name == "random") return MarkovTableKind::random;
  if (name == "alternating") return MarkovTableKind::alternating;
  if (name == "file" || name == "given") return MarkovTableKind::given;
  throw DomainError("unknown markov table kind '" + std::string(name) + "' (expected random, alternating or file)");
}

MarkovSource make_markov_source(const MarkovExperiment& exp) {
  if (exp.k > kMaxMarkovMemory) throw DomainError("markov experiment: k must be <= " + std::to_string(kMaxMarkovMemory));
  MarkovSource source{exp.k, exp.kappa, exp.p0, {}};
  const std::size_t size = std::size_t{1} << exp.k;
  switch (exp.table_kind) {
    case MarkovTableKind::random: {
      Rng rng(derive_seed(exp.seed, kTableStream));
      source.zero_prob.resize(size);
      for (double& q : source.zero_prob) q = rng.uniform(exp.p0 - exp.kappa, exp.p0 + exp.kappa);
      // Without memory there is no history to condition on.
      if (exp.k == 0) source.zero_prob[0] = exp.p0;
      break;
    }
    case MarkovTableKind::alternating:
      source.zero_prob.resize(size);
      for (std::size_t h = 0; h < size; ++h) {
        source.zero_prob[h] = exp.k == 0 ? exp.p0 : ((h & 1U) == 0 ? exp.p0 + exp.kappa : exp.p0 - exp.kappa);
      }
      break;
    case MarkovTableKind::given:
      source.zero_prob = exp.table;
      break;
  }
  validate(SourceSpec{source});
  return source;
}

MarkovResult run_markov_experiment(const MarkovExperiment& exp) {
  if (exp.m < 1) throw DomainError("markov experiment: m must be >= 1");
  if (exp.n < 2 * exp.m) throw DomainError("markov experiment: n must be at least 2m");
  if (exp.m > kEnumerationLimit) throw GuardError("markov experiment: m exceeds the enumeration limit");

  MarkovResult result{exp, make_markov_source(exp), std::nullopt, std::numeric_limits<double>::quiet_NaN(), 0};
  const SourceSpec spec{result.source};
  if (exp.n <= kEnumerationLimit) {
    result.tv_exact = total_variation(normalized_dist(spec, exp.n, exp.m), uniform_dist(exp.m));
  }

  std::vector<std::uint64_t> counts(std::size_t{1} << exp.m, 0);
  for (std::size_t s = 0; s < exp.samples; ++s) {
    const BitString y = vn_normalize(sample(spec, exp.n, derive_seed(exp.seed, kChainStreamBase + s)).bits);
    if (y.size() != exp.m) continue;
    ++counts[y.to_index()];
    ++result.kept;
  }
  if (result.kept > 0) {
    const double u = std::ldexp(1.0, -static_cast<int>(exp.m));
    double sum = 0.0;
    for (std::uint64_t c : counts) sum += std::abs(static_cast<double>(c) / static_cast<double>(result.kept) - u);
    result.tv_empirical = 0.5 * sum;
  }
  return result;
}

std::string markov_csv(std::span<const MarkovResult> results) {
  std::string out = "k,kappa,m,n,tv_exact,tv_empirical,samples,seed\n";
  char buf[256];
  for (const MarkovResult& r : results) {
    const MarkovExperiment& e = r.experiment;
    const double exact = r.tv_exact.value_or(std::numeric_limits<double>::quiet_NaN());
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%zu,%zu,%.17g,%.17g,%zu,%llu\n", e.k, e.kappa, e.m, e.n, exact,
                  r.tv_empirical, e.samples, static_cast<unsigned long long>(e.seed));
    out += buf;
  }
  return out;
}

}  // namespace vnorm
