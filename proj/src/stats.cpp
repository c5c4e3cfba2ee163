#include "vnorm/stats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "vnorm/bounds.hpp"
#include "vnorm/error.hpp"

namespace vnorm {

BorelMode parse_borel_mode(std::string_view name) {
  if (name == "non-overlapping" || name == "disjoint") return BorelMode::non_overlapping;
  if (name == "overlapping") return BorelMode::overlapping;
  throw DomainError("unknown Borel mode '" + std::string(name) + "' (expected non-overlapping or overlapping)");
}

double BorelReport::expected() const { return std::ldexp(static_cast<double>(total), -static_cast<int>(m)); }

double BorelReport::sigma() const {
  const double q = std::ldexp(1.0, -static_cast<int>(m));
  return std::sqrt(static_cast<double>(total) * q * (1.0 - q));
}

double BorelReport::deviation(std::size_t block) const {
  const double s = sigma();
  const double diff = static_cast<double>(counts.at(block)) - expected();
  return s > 0.0 ? diff / s : 0.0;
}

double BorelReport::max_abs_deviation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) worst = std::max(worst, std::abs(deviation(i)));
  return worst;
}

std::string BorelReport::to_table() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "m=%zu mode=%s total=%llu sigma=%.6g\n", m,
                mode == BorelMode::overlapping ? "overlapping" : "non-overlapping",
                static_cast<unsigned long long>(total), sigma());
  out += buf;
  const int width = static_cast<int>(std::max<std::size_t>(m, 5));
  std::snprintf(buf, sizeof buf, "%-*s %14s %16s %10s\n", width, "block", "count", "expected", "dev/sigma");
  out += buf;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-*s %14llu %16.6f %10.4f\n", width,
                  BitString::from_index(i, m).to_string().c_str(), static_cast<unsigned long long>(counts[i]),
                  expected(), deviation(i));
    out += buf;
  }
  return out;
}

std::string BorelReport::to_csv() const {
  std::string out = "m,mode,block,count,expected,deviation\n";
  char buf[160];
  const char* mode_name = mode == BorelMode::overlapping ? "overlapping" : "non-overlapping";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%s,%llu,%.17g,%.17g\n", m, mode_name,
                  BitString::from_index(i, m).to_string().c_str(), static_cast<unsigned long long>(counts[i]),
                  expected(), deviation(i));
    out += buf;
  }
  return out;
}

BorelReport borel_counts(const BitString& x, std::size_t m, BorelMode mode) {
  if (m < 1 || m > kBorelBlockLimit) {
    throw DomainError("borel_counts: m must lie in [1, " + std::to_string(kBorelBlockLimit) + "]");
  }
  if (x.size() < m) throw DomainError("borel_counts: input shorter than the block length");
  BorelReport report;
  report.m = m;
  report.mode = mode;
  report.counts.assign(std::size_t{1} << m, 0);
  if (mode == BorelMode::non_overlapping) {
    const std::size_t blocks = x.size() / m;
    for (std::size_t j = 0; j < blocks; ++j) ++report.counts[x.block(j * m, m)];
    report.total = blocks;
  } else {
    const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    std::uint64_t window = x.block(0, m);
    ++report.counts[window];
    for (std::size_t i = m; i < x.size(); ++i) {
      window = ((window << 1) | (x[i] ? 1U : 0U)) & mask;
      ++report.counts[window];
    }
    report.total = x.size() - m + 1;
  }
  return report;
}

DistributionTable empirical_block_dist(const BitString& x, std::size_t m) {
  if (m < 1) throw DomainError("empirical_block_dist: m must be >= 1");
  if (m > kEnumerationLimit) throw GuardError("empirical_block_dist: m exceeds the enumeration limit");
  if (x.size() < m) {
    throw DomainError("empirical_block_dist: input of " + std::to_string(x.size()) + " bits has no block of length " +
                      std::to_string(m));
  }
  const std::size_t blocks = x.size() / m;
  std::vector<double> freq(std::size_t{1} << m, 0.0);
  for (std::size_t j = 0; j < blocks; ++j) freq[x.block(j * m, m)] += 1.0;
  for (double& f : freq) f /= static_cast<double>(blocks);
  return DistributionTable(m, std::move(freq));
}

namespace {

SweepRow sweep_row(std::uint64_t m, double alpha) {
  const double linear = m >= 3 ? linear_bound(m, alpha) : std::numeric_limits<double>::quiet_NaN();
  return {m, alpha, tv_bound_exact(m, alpha), linear, tv_bound_naive(m, alpha)};
}

}  // namespace

std::vector<SweepRow> sweep(std::span<const std::uint64_t> ms, std::span<const double> alphas) {
  std::vector<SweepRow> rows;
  rows.reserve(ms.size() * alphas.size());
  for (std::uint64_t m : ms) {
    for (double a : alphas) rows.push_back(sweep_row(m, a));
  }
  return rows;
}

std::vector<SweepRow> sweep(std::span<const std::uint64_t> ms, std::span<const DriftPoint> points) {
  std::vector<double> alphas;
  alphas.reserve(points.size());
  for (const DriftPoint& pt : points) alphas.push_back(alpha_max(pt.p0, pt.beta, pt.delta));
  return sweep(ms, alphas);
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "m,alpha,tv_exact,tv_linear,tv_naive\n";
  char buf[200];
  for (const SweepRow& r : rows) {
    if (std::isnan(r.tv_linear)) {
      std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,nan,%.17g\n", static_cast<unsigned long long>(r.m), r.alpha,
                    r.tv_exact, r.tv_naive);
    } else {
      std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g\n", static_cast<unsigned long long>(r.m), r.alpha,
                    r.tv_exact, r.tv_linear, r.tv_naive);
    }
    out += buf;
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi >= lo)) throw DomainError("log_grid: need 0 < lo <= hi");
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (!(hi >= lo)) throw DomainError("linear_grid: need lo <= hi");
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

std::vector<double> renormalized_probs(std::span<const double> probs, std::uint8_t symbol) {
  if (symbol < 1 || symbol > probs.size()) throw DomainError("renormalized_probs: symbol outside the alphabet");
  const double keep = 1.0 - probs[symbol - 1];
  if (!(keep > 0.0)) throw DomainError("renormalized_probs: the deleted symbol carries all the mass");
  std::vector<double> out;
  out.reserve(probs.size() - 1);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i + 1 != symbol) out.push_back(probs[i] / keep);
  }
  return out;
}

std::vector<std::uint64_t> qary_block_counts(const QaryString& x, std::size_t m) {
  if (m < 1) throw DomainError("qary_block_counts: m must be >= 1");
  const std::uint64_t q = x.alphabet_size();
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < m; ++i) {
    cells *= q;
    if (cells > (std::uint64_t{1} << 26)) throw GuardError("qary_block_counts: Q^m exceeds the table limit");
  }
  std::vector<std::uint64_t> counts(cells, 0);
  const auto& s = x.symbols();
  for (std::size_t j = 0; j + m <= s.size(); j += m) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < m; ++i) idx = idx * q + (s[j + i] - 1U);
    ++counts[idx];
  }
  return counts;
}

}  // namespace vnorm
