// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Writes sweep CSVs into the working directory.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "vnorm/bits.hpp"
#include "vnorm/bounds.hpp"
#include "vnorm/error.hpp"
#include "vnorm/exactdist.hpp"
#include "vnorm/normalize.hpp"
#include "vnorm/sources.hpp"
#include "vnorm/stats.hpp"

using namespace vnorm;

namespace {

// Tolerances.
constexpr double kUniformTol = 1e-12;          // 1, 2, 13
constexpr double kExampleTol = 1e-15;          // 3
constexpr double kSubsetTol = 1e-12;           // 4
constexpr double kOracleValueTol = 1e-3;       // 6
constexpr double kOracleStep = 1e-4;           // 6
constexpr double kBetaFormTol = 1e-9;          // 7
constexpr double kQuadratureTol = 1e-7;        // 7
constexpr double kBridgeTol = 1e-10;           // 8
constexpr double kOrderingSlack = 1e-12;       // 9
constexpr double kLinearSpotTol = 1e-9;        // 10
constexpr double kCalibrateSpotTol = 1e-8;     // 10
constexpr double kBetaIdentityTol = 1e-12;     // 11
constexpr double kBetaPathTol = 1e-10;         // 11
constexpr double kSigmas = 4.0;                // 12, 14, 15

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.ok) ++failures;
  std::printf("%s criterion %2d: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), secs,
              c.detail.empty() ? "" : " -- ", c.detail.c_str());
  std::fflush(stdout);
}

std::string g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string table_str(const DistributionTable& t) {
  std::string s = "{";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ", ";
    s += BitString::from_index(i, t.length()).to_string() + ": " + g(t[i]);
  }
  return s + "}";
}

DistributionTable random_table(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(std::size_t{1} << m);
  double total = 0.0;
  for (double& v : w) total += (v = u(rng));
  for (double& v : w) v /= total;
  return {m, w};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw IoError("cannot write " + path);
}

}  // namespace

int main() {
  criterion(1, "constant-bias sources normalize to uniform", [](Check& c) {
    double worst = 0.0;
    for (double p0 : {0.5, 0.6, 0.75, 0.9}) {
      for (std::size_t n : {4, 8, 12, 16}) {
        const double tv = total_variation(normalized_dist(ConstantSource{p0}, n, n / 2), uniform_dist(n / 2));
        worst = std::max(worst, tv);
        c.require(tv <= kUniformTol, "p0=" + g(p0) + " n=" + std::to_string(n) + " tv=" + g(tv));
      }
    }
    if (c.ok) c.detail = "max tv " + g(worst);
  });

  criterion(2, "symmetric pairwise sources normalize to uniform", [](Check& c) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
      PairwiseSource src;
      const std::size_t n = 6 + 2 * static_cast<std::size_t>(s % 4);  // 6..12
      for (std::size_t j = 0; j < n / 2; ++j) {
        const double a = u(rng), b = u(rng), d = u(rng);
        const double t = a + 2 * b + d;
        src.pairs.push_back({a / t, b / t, b / t, d / t});
      }
      for (std::size_t m = 1; m <= n / 2; ++m) {
        const double tv = total_variation(normalized_dist(src, n, m), uniform_dist(m));
        worst = std::max(worst, tv);
        c.require(tv <= kUniformTol, "source " + std::to_string(s) + " m=" + std::to_string(m) + " tv=" + g(tv));
      }
    }
    if (c.ok) c.detail = "max tv " + g(worst);
  });

  criterion(3, "worked pairwise examples reproduce their normalized values", [](Check& c) {
    const PairwiseSource nozero{{{0.0, 1.0 / 3, 1.0 / 3, 1.0 / 3}}};
    const PairwiseSource skewed{{{0.0, 1.0 / 3, 2.0 / 3, 0.0}}};
    const auto nozero_out = normalized_dist(nozero, 2, 1);
    const auto skewed_out = normalized_dist(skewed, 2, 1);
    c.require(std::abs(nozero_out[0] - 0.5) <= kExampleTol && std::abs(nozero_out[1] - 0.5) <= kExampleTol,
              "no-00 pair " + table_str(nozero_out));
    c.require(std::abs(skewed_out[0] - 1.0 / 3) <= kExampleTol && std::abs(skewed_out[1] - 2.0 / 3) <= kExampleTol,
              "skewed pair " + table_str(skewed_out));
    // Recorded only.
    std::string verdicts;
    for (const auto* src : {&nozero, &skewed}) {
      const auto v = check_independence(exact_source_dist(*src, 2));
      verdicts += v ? "dependent(k=" + std::to_string(v->k) + ",prefix=" + v->prefix.to_string() +
                          ",lhs=" + g(v->lhs) + ",rhs=" + g(v->rhs) + ") "
                    : std::string("independent ");
    }
    const PairwiseSource two_pair{{{1.0 / 3, 1.0 / 3, 1.0 / 4, 1.0 / 12}, {1.0 / 12, 1.0 / 4, 1.0 / 3, 1.0 / 3}}};
    const auto two_out = normalized_dist(two_pair, 4, 2);
    c.detail = "independence checker: " + verdicts + "| two-pair example, 4 -> 2: " + table_str(two_out) +
               " tv to uniform " + g(total_variation(two_out, uniform_dist(2)));
  });

  criterion(4, "max-over-subsets TV equals half-sum TV", [](Check& c) {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (std::size_t m = 1; m <= 3; ++m) {
      for (int i = 0; i < 20; ++i) {
        const auto p = random_table(m, rng);
        const auto q = random_table(m, rng);
        const double diff = std::abs(oracle::subset_max_tv(p, q) - total_variation(p, q));
        worst = std::max(worst, diff);
        c.require(diff <= kSubsetTol, "m=" + std::to_string(m) + " diff=" + g(diff));
      }
    }
    c.detail = "max diff " + g(worst);
  });

  // The strict increase claimed for g fails wherever no product of the other
  // factors straddles 1 (c = (0.1, 0.9) is flat in c_1). Each probe checks
  // the measured change against the exact per-term increase instead, and
  // counts the flat probes.
  criterion(5, "g(c) is non-decreasing in each |c_i|, strictly where a product straddles 1; sign-flip invariant",
            [](Check& c) {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int strict = 0, flat = 0;
    double worst = 0.0;
    for (int probe = 0; probe < 1000; ++probe) {
      const std::size_t n = 1 + rng() % 8;
      std::vector<double> cs(n);
      for (double& v : cs) v = u(rng) * 0.999;
      const std::size_t i = rng() % n;
      std::vector<double> up = cs;
      up[i] += (0.999 - up[i]) * (0.001 + 0.999 * u(rng));
      const double base = oracle::g_sum(cs);
      const double measured = oracle::g_sum(up) - base;
      const double predicted = oracle::g_increase(cs, i, cs[i], up[i]);
      worst = std::max(worst, std::abs(measured - predicted));
      c.require(predicted >= 0.0 && std::abs(measured - predicted) <= kSubsetTol * (1.0 + base),
                "increase mismatch at probe " + std::to_string(probe));
      if (predicted > 0.0) {
        ++strict;
        c.require(measured > 0.0, "no increase at probe " + std::to_string(probe));
      } else {
        ++flat;
      }
      std::vector<double> flipped = cs;
      flipped[i] = -flipped[i];
      c.require(oracle::g_sum(flipped) == base, "sign flip changed g at probe " + std::to_string(probe));
    }
    const double counter = oracle::g_sum({0.2, 0.9}) - oracle::g_sum({0.1, 0.9});
    if (c.ok) {
      c.detail = std::to_string(strict) + " strict, " + std::to_string(flat) +
                 " flat probes (strictness as claimed does not hold in general); max |measured - exact| " +
                 g(worst) + "; g(0.2,0.9) - g(0.1,0.9) = " + g(counter);
    }
  });

  criterion(6, "grid search matches the closed-form worst-case bias", [](Check& c) {
    const std::vector<std::array<double, 3>> configs{{0.5, 0.1, 0.01},  {0.7, 0.1, 0.02},  {0.3, 0.1, 0.02},
                                                     {0.6, 0.05, 0.01}, {0.4, 0.05, 0.01}, {0.55, 0.2, 0.05},
                                                     {0.45, 0.2, 0.05}, {0.8, 0.1, 0.05},  {0.2, 0.1, 0.05},
                                                     {0.5, 0.2, 0.1}};
    double worst = 0.0;
    for (const auto& [p0, beta, delta] : configs) {
      const auto r = u_max_oracle(p0, beta, delta, kOracleStep);
      const double target = alpha_max(p0, beta, delta);
      worst = std::max(worst, std::abs(r.value - target));
      c.require(std::abs(r.value - target) <= kOracleValueTol, "value at p0=" + g(p0));
      // Corner (eps, gamma) = (beta, -delta) when p0 < p1, (-beta, delta) when
      // p0 > p1, either when equal; (eps + gamma, -gamma) ties with it.
      std::vector<std::pair<double, double>> corners;
      if (p0 <= 0.5) corners.emplace_back(beta, -delta);
      if (p0 >= 0.5) corners.emplace_back(-beta, delta);
      const std::size_t base = corners.size();
      for (std::size_t j = 0; j < base; ++j) corners.emplace_back(corners[j].first + corners[j].second, -corners[j].second);
      bool near = false;
      for (const auto& [e, gm] : corners) {
        near = near || (std::abs(r.eps - e) <= kOracleStep && std::abs(r.gamma - gm) <= kOracleStep);
      }
      c.require(near, "maximizer (" + g(r.eps) + ", " + g(r.gamma) + ") at p0=" + g(p0));
    }
    if (c.ok) c.detail = "max |oracle - closed form| " + g(worst);
  });

  criterion(7, "binomial TV: half-sum, beta and integral forms agree", [](Check& c) {
    double worst_beta = 0.0, worst_quad = 0.0;
    for (std::uint64_t n : {1, 2, 10, 50, 200}) {
      for (double p : {0.3, 0.5, 0.7}) {
        for (double x : {0.01, 0.05, 0.1}) {
          const double beta = binom_tv(n, p, x);
          const double half = oracle::binom_tv_halfsum(n, p, x);
          const double quad = oracle::binom_tv_integral(n, p, x);
          worst_beta = std::max(worst_beta, std::abs(beta - half));
          worst_quad = std::max(worst_quad, std::abs(quad - half));
          const std::string at = "n=" + std::to_string(n) + " p=" + g(p) + " x=" + g(x);
          c.require(std::abs(beta - half) <= kBetaFormTol, "beta form " + at);
          c.require(std::abs(quad - half) <= kQuadratureTol, "integral form " + at);
          const std::uint64_t ell = crossing_index(n, p, x);
          const double nd = static_cast<double>(n);
          c.require(static_cast<double>(ell) >= std::ceil(nd * p) - 1e-9 &&
                        static_cast<double>(ell) <= std::ceil(nd * (p + x)) + 1e-9,
                    "sandwich " + at);
        }
      }
    }
    c.detail = "max beta diff " + g(worst_beta) + ", max integral diff " + g(worst_quad);
  });

  criterion(8, "worst-case product distribution attains the exact bound", [](Check& c) {
    double worst = 0.0;
    for (std::size_t m = 1; m <= 16; ++m) {
      for (double alpha : {0.01, 0.1, 0.2}) {
        for (int sign : {1, -1}) {
          const double tv = total_variation(worst_case_product_dist(alpha, m, sign), uniform_dist(m));
          const double diff = std::abs(tv - tv_bound_exact(m, alpha));
          worst = std::max(worst, diff);
          c.require(diff <= kBridgeTol, "m=" + std::to_string(m) + " alpha=" + g(alpha));
        }
      }
    }
    c.detail = "max diff " + g(worst);
  });

  criterion(9, "bound ordering and sweep curves", [](Check& c) {
    const std::vector<std::uint64_t> ms{100, 1000, 10000, 1000000};
    const auto alphas = log_grid(1e-6, 0.1, 61);
    const auto rows = sweep(ms, alphas);
    for (const auto& r : rows) {
      const std::string at = "m=" + std::to_string(r.m) + " alpha=" + g(r.alpha);
      c.require(r.tv_exact <= std::min(r.tv_linear, r.tv_naive) + kOrderingSlack, "ordering " + at);
      c.require(r.tv_exact >= 0.0 && r.tv_exact <= 1.0, "range " + at);
    }
    const std::size_t k = alphas.size();
    for (std::size_t i = 0; i < ms.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const auto& r = rows[i * k + j];
        if (j > 0) c.require(r.tv_exact >= rows[i * k + j - 1].tv_exact, "not monotone in alpha");
        if (i > 0) c.require(r.tv_exact >= rows[(i - 1) * k + j].tv_exact, "not ordered in m");
      }
    }
    write_file("sweep_alpha.csv", sweep_csv(rows));
    std::vector<DriftPoint> drift;
    for (double d : log_grid(1e-7, 1e-2, 51)) drift.push_back({0.5, 0.1, d});
    write_file("sweep_drift.csv", sweep_csv(sweep(ms, drift)));
    c.detail = std::to_string(rows.size()) + " rows; wrote sweep_alpha.csv and sweep_drift.csv";
  });

  criterion(10, "spot values of the linear inverse and calibration", [](Check& c) {
    const double lin = linear_alpha_for_rho(1000000, 0.01);
    const double cal = calibrate_alpha(2, 0.11);
    c.require(std::abs(lin - 2.5066e-5) <= kLinearSpotTol, "linear " + g(lin));
    c.require(std::abs(cal - 0.2) <= kCalibrateSpotTol, "calibrate " + g(cal));
    c.detail = "linear " + g(lin) + ", calibrate " + g(cal);
  });

  criterion(11, "incomplete beta identities and integer path", [](Check& c) {
    double worst_id = 0.0, worst_path = 0.0;
    const std::vector<std::pair<double, double>> ab{{0.5, 0.5}, {2.5, 7.0}, {30.0, 3.0}, {100.0, 100.0}, {1e4, 3e4}};
    for (int i = 0; i < 100; ++i) {
      const double x = (i + 0.5) / 100.0;
      for (double b : {0.5, 1.0, 3.0, 17.5, 200.0}) {
        worst_id = std::max(worst_id, std::abs(reg_inc_beta(x, 1.0, b) - oracle::beta_a1(x, b)));
        worst_id = std::max(worst_id, std::abs(reg_inc_beta(x, b, 1.0) - oracle::beta_b1(x, b)));
      }
      for (const auto& [a, b] : ab) {
        worst_id = std::max(worst_id, std::abs(reg_inc_beta(x, a, b) - (1.0 - reg_inc_beta(1.0 - x, b, a))));
      }
    }
    c.require(worst_id <= kBetaIdentityTol, "identity diff " + g(worst_id));
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> ints{
        {1, 1}, {3, 5}, {40, 11}, {500, 500}, {2000, 7000}, {50000, 50000}, {300000, 700000}, {500000, 500000},
        {999000, 1000}};
    for (const auto& [a, b] : ints) {
      const double mean = static_cast<double>(a) / static_cast<double>(a + b);
      const double spread = std::sqrt(mean * (1 - mean) / static_cast<double>(a + b));
      for (double z : {-6.0, -2.0, -0.5, 0.0, 0.7, 3.0, 8.0}) {
        const double x = std::clamp(mean + z * spread, 1e-6, 1.0 - 1e-6);
        const double d = std::abs(reg_inc_beta(x, static_cast<double>(a), static_cast<double>(b)) -
                                  reg_inc_beta_integer(x, a, b));
        worst_path = std::max(worst_path, d);
      }
    }
    c.require(worst_path <= kBetaPathTol, "path diff " + g(worst_path));
    c.detail = "max identity diff " + g(worst_id) + ", max path diff " + g(worst_path);
  });

  criterion(12, "drifting source output is balanced and near uniform on pairs", [](Check& c) {
    const DriftingSource src{{0.55, 0.05, 1e-4}, WalkTrajectory{}};
    const BitString y = vn_normalize(sample(src, 1000000, 1212).bits);
    const double n = static_cast<double>(y.size());
    const double dev = (static_cast<double>(y.count(true)) - n / 2) / std::sqrt(n / 4);
    c.require(std::abs(dev) <= kSigmas, "frequency off by " + g(dev) + " sigma");
    const double tv = total_variation(empirical_block_dist(y, 2), uniform_dist(2));
    const double blocks = static_cast<double>(y.size() / 2);
    const double slack = 0.5 * 4 * kSigmas * std::sqrt(0.25 * 0.75 / blocks);
    const double bound = tv_bound_exact(2, alpha_max(0.55, 0.05, 1e-4));
    c.require(tv <= bound + slack, "tv " + g(tv) + " > " + g(bound) + " + " + g(slack));
    c.detail = std::to_string(y.size()) + " output bits, " + g(dev) + " sigma, tv " + g(tv) + " vs bound " +
               g(bound) + " + slack " + g(slack);
  });

  criterion(13, "Peres output is longer and uniform given its length", [](Check& c) {
    for (std::size_t n = 1; n <= 14; ++n) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        const BitString x = BitString::from_index(v, n);
        if (peres_normalize(x).size() < vn_normalize(x).size()) {
          c.require(false, "dominance fails at " + x.to_string());
          return;
        }
      }
    }
    double worst = 0.0;
    for (double p0 : {0.5, 0.7}) {
      for (std::size_t n : {4, 6, 8}) {
        for (std::size_t m = 1; m <= n; ++m) {
          DistributionTable t;
          try {
            t = normalized_dist(ConstantSource{p0}, n, m, NormalizationMethod::peres());
          } catch (const DomainError&) {
            continue;  // length m never produced
          }
          const double tv = total_variation(t, uniform_dist(m));
          worst = std::max(worst, tv);
          c.require(tv <= kUniformTol, "p0=" + g(p0) + " n=" + std::to_string(n) + " m=" + std::to_string(m));
        }
      }
    }
    c.detail = "max tv " + g(worst);
  });

  criterion(14, "normalized constant-bias stream is Borel normal for m <= 3", [](Check& c) {
    const BitString y = vn_normalize(sample(ConstantSource{0.7}, 10000000, 1414).bits);
    std::string devs;
    for (std::size_t m = 1; m <= 3; ++m) {
      const double d = borel_counts(y, m).max_abs_deviation();
      devs += " m" + std::to_string(m) + "=" + g(d);
      c.require(d <= kSigmas, "m=" + std::to_string(m) + " deviation " + g(d));
    }
    c.detail = std::to_string(y.size()) + " output bits; max deviations (sigma)" + devs;
  });

  criterion(15, "deleting a symbol leaves renormalized frequencies", [](Check& c) {
    const std::vector<double> p{0.5, 0.3, 0.2};
    const QaryString x = delete_symbol(sample_qary(p, 1000000, 1515), 3);
    const auto r = renormalized_probs(p, 3);
    double worst = 0.0;
    for (std::size_t m = 1; m <= 2; ++m) {
      const auto counts = qary_block_counts(x, m);
      const double blocks = static_cast<double>(x.size() / m);
      for (std::size_t cell = 0; cell < counts.size(); ++cell) {
        double q = 1.0;
        std::size_t rest = cell;
        for (std::size_t j = 0; j < m; ++j, rest /= 3) q *= rest % 3 < 2 ? r[rest % 3] : 0.0;
        const double sd = std::sqrt(blocks * q * (1 - q));
        const double diff = std::abs(static_cast<double>(counts[cell]) - blocks * q);
        if (q == 0.0) {
          c.require(counts[cell] == 0, "deleted symbol present");
          continue;
        }
        worst = std::max(worst, diff / sd);
        c.require(diff <= kSigmas * sd, "m=" + std::to_string(m) + " cell " + std::to_string(cell));
      }
    }
    c.detail = std::to_string(x.size()) + " symbols kept; max deviation " + g(worst) + " sigma";
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
