#include "vnorm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "vnorm/error.hpp"
#include "vnorm/sources.hpp"

namespace vnorm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling remainder.
double stirlerr(double n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    if (n == 0.0) return 0.0;
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double n1 = 1.0 / n;
  const double n2 = n1 * n1;
  if (n > 500.0) return (s0 - s1 * n2) * n1;
  if (n > 80.0) return (s0 - (s1 - s2 * n2) * n2) * n1;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 * n2) * n2) * n2) * n1;
  return (s0 - (s1 - (s2 - (s3 - s4 * n2) * n2) * n2) * n2) * n1;
}

// Deviance term x log(x/np) + np - x, by series when x is close to np.
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v * v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

// log of Gamma(n+1)/(Gamma(x+1)Gamma(n-x+1)) p^x q^(n-x) for real 0 <= x <= n.
double log_dbinom_raw(double x, double n, double p, double q) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (p == 0.0) return x == 0.0 ? 0.0 : neg_inf;
  if (q == 0.0) return x == n ? 0.0 : neg_inf;
  if (x == 0.0) {
    if (n == 0.0) return 0.0;
    return p < 0.1 ? -bd0(n, n * q) - n * p : n * std::log(q);
  }
  if (x == n) return q < 0.1 ? -bd0(n, n * p) - n * q : n * std::log(p);
  if (x < 0.0 || x > n) return neg_inf;
  const double lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(x) + std::log1p(-x / n);
  return lc - 0.5 * lf;
}

void check_binomial(const BinomialSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw DomainError("binomial: p must lie in [0, 1], got " + fmt(spec.p));
}

std::uint64_t binom_mode(const BinomialSpec& spec) {
  const double mode = std::floor((static_cast<double>(spec.n) + 1.0) * spec.p);
  return std::min<std::uint64_t>(spec.n, static_cast<std::uint64_t>(mode));
}

// Sum of pmf terms from `start` moving away from the mode, where they only
// shrink; stops once a term no longer changes the sum.
double tail_sum(const BinomialSpec& spec, std::uint64_t start, bool upward) {
  double sum = 0.0;
  std::uint64_t k = start;
  while (true) {
    const double term = binom_pmf(spec, k);
    sum += term;
    if (term == 0.0 || term < sum * 1e-17) break;
    if (upward ? k == spec.n : k == 0) break;
    k = upward ? k + 1 : k - 1;
  }
  return sum;
}

// Modified Lentz evaluation of 1 + d1/(1 + d2/(1 + ...)) for I_x(a, b).
double beta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  double f = 1.0;
  double c = 1.0;
  double d = 0.0;
  for (int n = 1; n <= kBetaMaxIterations; ++n) {
    double numer;
    if (n % 2 == 0) {
      const double m = n / 2;
      numer = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    } else {
      const double m = (n - 1) / 2;
      numer = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
    }
    d = 1.0 + numer * d;
    if (d == 0.0) d = tiny;
    c = 1.0 + numer / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double mult = c * d;
    f *= mult;
    if (std::abs(mult - 1.0) <= kBetaTolerance) return f;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge within " +
                         std::to_string(kBetaMaxIterations) + " terms for x = " + fmt(x) + ", a = " + fmt(a) +
                         ", b = " + fmt(b));
}

// I_x(a, b) on the side x <= (a+1)/(a+b+2), y = 1 - x.
double beta_lower(double x, double y, double a, double b) {
  // x^a y^b / (a B(a, b)) written as a binomial density with real arguments.
  const double front = std::exp(log_dbinom_raw(a, a + b, x, y)) * (b / (a + b));
  return front / beta_continued_fraction(x, a, b);
}

}  // namespace

double u_value(double p0, double eps, double gamma) {
  const double p1 = 1.0 - p0;
  const double den = (p0 - eps) * (p1 + eps + gamma) + (p1 + eps) * (p0 - eps - gamma);
  if (!(den > 0.0)) throw DomainError("u_value: denominator " + fmt(den) + " is not positive");
  return std::abs(gamma) / den;
}

double alpha_max(double p0, double beta, double delta) {
  validate(DriftParams{p0, beta, delta});
  const double p1 = 1.0 - p0;
  const double den = 2.0 * (p0 * p1 - beta * (beta - delta) - std::abs(p0 - p1) * (beta - delta / 2.0));
  if (!(den > 0.0)) throw DomainError("alpha_max: denominator " + fmt(den) + " is not positive");
  return delta / den;
}

UMaxResult u_max_oracle(double p0, double beta, double delta, double h) {
  validate(DriftParams{p0, beta, delta});
  if (!(h > 0.0)) throw DomainError("u_max_oracle: grid step must be > 0");
  const auto grid = [h](double bound) {
    std::vector<double> pts;
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * bound / h));
    pts.reserve(steps + 1);
    for (std::size_t i = 0; i < steps; ++i) pts.push_back(-bound + static_cast<double>(i) * h);
    pts.push_back(bound);
    return pts;
  };
  const std::vector<double> eps_grid = grid(beta);
  const std::vector<double> gamma_grid = grid(delta);
  UMaxResult best{0.0, 0.0, -1.0};
  for (double e : eps_grid) {
    for (double g : gamma_grid) {
      if (std::abs(e + g) > beta + 1e-15) continue;
      const double v = u_value(p0, e, g);
      if (v > best.value) best = {e, g, v};
    }
  }
  return best;
}

double binom_log_pmf(const BinomialSpec& spec, std::uint64_t k) {
  check_binomial(spec);
  if (k > spec.n) throw DomainError("binomial: k = " + std::to_string(k) + " exceeds n = " + std::to_string(spec.n));
  return log_dbinom_raw(static_cast<double>(k), static_cast<double>(spec.n), spec.p, 1.0 - spec.p);
}

double binom_pmf(const BinomialSpec& spec, std::uint64_t k) { return std::exp(binom_log_pmf(spec, k)); }

double binom_cdf(const BinomialSpec& spec, std::uint64_t k) {
  check_binomial(spec);
  if (k >= spec.n) return 1.0;
  if (k < binom_mode(spec)) return std::min(1.0, tail_sum(spec, k, false));
  return std::max(0.0, 1.0 - binom_sf(spec, k + 1));
}

double binom_sf(const BinomialSpec& spec, std::uint64_t k) {
  check_binomial(spec);
  if (k == 0) return 1.0;
  if (k > spec.n) return 0.0;
  if (k > binom_mode(spec)) return std::min(1.0, tail_sum(spec, k, true));
  return std::max(0.0, 1.0 - binom_cdf(spec, k - 1));
}

double reg_inc_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta: x must lie in [0, 1], got " + fmt(x));
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("reg_inc_beta: a and b must be positive");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double y = 1.0 - x;
  if (x <= (a + 1.0) / (a + b + 2.0)) return beta_lower(x, y, a, b);
  return 1.0 - beta_lower(y, x, b, a);
}

double reg_inc_beta_integer(double x, std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) throw DomainError("reg_inc_beta_integer: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta_integer: x must lie in [0, 1]");
  return binom_sf(BinomialSpec{a + b - 1, x}, a);
}

std::uint64_t crossing_index(std::uint64_t n, double p, double x) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("crossing_index: p must lie in (0, 1)");
  const double q = 1.0 - p;
  if (!(x > 0.0)) throw DomainError("crossing_index: x must be positive (the distance is 0 at x = 0)");
  if (x > q) throw DomainError("crossing_index: p + x must not exceed 1");
  if (x == q) return n;
  const double lo = std::log1p(-x / q);
  const double value = -static_cast<double>(n) * lo / (std::log1p(x / p) - lo);
  return static_cast<std::uint64_t>(std::ceil(value));
}

double binom_tv(std::uint64_t n, double p, double x) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binom_tv: p must lie in [0, 1]");
  if (!(x >= 0.0)) throw DomainError("binom_tv: x must be >= 0");
  if (p + x > 1.0 + 1e-15) throw DomainError("binom_tv: p + x must not exceed 1");
  if (x == 0.0 || n == 0) return 0.0;
  if (p == 0.0) return -std::expm1(static_cast<double>(n) * std::log1p(-x));
  const std::uint64_t ell = crossing_index(n, p, std::min(x, 1.0 - p));
  if (ell == 0) return 0.0;
  const auto a = static_cast<double>(ell);
  const auto b = static_cast<double>(n - ell + 1);
  const double upper = p + x >= 1.0 ? 1.0 : reg_inc_beta(p + x, a, b);
  return std::max(0.0, upper - reg_inc_beta(p, a, b));
}

double tv_bound_exact(std::uint64_t m, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("tv_bound_exact: alpha must lie in [0, 1)");
  return binom_tv(m, 0.5, alpha / 2.0);
}

double tv_bound_naive(std::uint64_t m, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("tv_bound_naive: alpha must lie in [0, 1)");
  return 0.5 * std::expm1(static_cast<double>(m) * std::log1p(alpha));
}

double naive_alpha_for_rho(std::uint64_t m, double rho) {
  if (m == 0) throw DomainError("naive_alpha_for_rho: m must be >= 1");
  if (!(rho >= 0.0)) throw DomainError("naive_alpha_for_rho: rho must be >= 0");
  return std::expm1(std::log1p(2.0 * rho) / static_cast<double>(m));
}

namespace {

double linear_factor(std::uint64_t m) {
  if (m < 3) throw DomainError("linear bound needs m >= 3, got m = " + std::to_string(m));
  const auto md = static_cast<double>(m);
  return std::sqrt((md + 1.0) / (2.0 * std::numbers::pi * (1.0 - 2.0 / md)));
}

}  // namespace

double linear_bound(std::uint64_t m, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("linear_bound: alpha must lie in [0, 1)");
  return alpha * linear_factor(m);
}

double linear_alpha_for_rho(std::uint64_t m, double rho) {
  if (!(rho >= 0.0)) throw DomainError("linear_alpha_for_rho: rho must be >= 0");
  return rho / linear_factor(m);
}

double calibrate_alpha(std::uint64_t m, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("calibrate_alpha: rho must lie in (0, 1)");
  if (m == 0) throw DomainError("calibrate_alpha: m must be >= 1");
  double lo = 0.0;
  double hi = kCalibrationUpper;
  if (tv_bound_exact(m, hi) <= rho) return hi;
  while (hi - lo > kCalibrationTol) {
    const double mid = 0.5 * (lo + hi);
    if (tv_bound_exact(m, mid) <= rho)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double calibrate_delta(double p0, double beta, double alpha) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("calibrate_delta: p0 must lie in (0, 1)");
  const double p1 = 1.0 - p0;
  if (!(beta >= 0.0 && beta < std::min(p0, p1))) throw DomainError("calibrate_delta: beta must lie in [0, min(p0, p1))");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("calibrate_delta: alpha must lie in [0, 1)");
  const double d = std::abs(p0 - p1);
  const double num = 2.0 * alpha * (p0 * p1 - beta * beta - d * beta);
  const double den = 1.0 - 2.0 * alpha * (beta + d / 2.0);
  if (!(den > 0.0)) throw DomainError("calibrate_delta: infeasible, no positive delta reaches alpha = " + fmt(alpha));
  const double delta = num / den;
  if (delta < 0.0) throw DomainError("calibrate_delta: infeasible, delta = " + fmt(delta) + " is negative");
  if (delta > beta) {
    throw DomainError("calibrate_delta: infeasible, delta = " + fmt(delta) + " exceeds beta = " + fmt(beta));
  }
  return delta;
}

BoundFamily parse_bound_family(std::string_view name) {
  if (name == "exact") return BoundFamily::exact;
  if (name == "naive") return BoundFamily::naive;
  if (name == "linear") return BoundFamily::linear;
  throw DomainError("unknown bound method '" + std::string(name) + "' (expected exact, naive or linear)");
}

std::string_view to_string(BoundFamily family) {
  switch (family) {
    case BoundFamily::exact:
      return "exact";
    case BoundFamily::naive:
      return "naive";
    case BoundFamily::linear:
      return "linear";
  }
  return "?";
}

VariationReport variation_bound(BoundFamily family, std::uint64_t m, double alpha) {
  double value = 0.0;
  switch (family) {
    case BoundFamily::exact:
      value = tv_bound_exact(m, alpha);
      break;
    case BoundFamily::naive:
      value = tv_bound_naive(m, alpha);
      break;
    case BoundFamily::linear:
      value = linear_bound(m, alpha);
      break;
  }
  return {value, family, m, alpha};
}

double alpha_for_rho(BoundFamily family, std::uint64_t m, double rho) {
  switch (family) {
    case BoundFamily::exact:
      return calibrate_alpha(m, rho);
    case BoundFamily::naive:
      return naive_alpha_for_rho(m, rho);
    case BoundFamily::linear:
      return linear_alpha_for_rho(m, rho);
  }
  return 0.0;
}

}  // namespace vnorm
