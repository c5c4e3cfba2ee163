#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vnorm {

/// |gamma| / [(p0-eps)(p1+eps+gamma) + (p1+eps)(p0-eps-gamma)]: the bias of a
/// von Neumann output bit drawn from the pair at drift (eps, gamma).
double u_value(double p0, double eps, double gamma);

/// Largest u_value over |eps| <= beta, |gamma| <= delta, |eps+gamma| <= beta:
/// delta / (2 [p0 p1 - beta(beta - delta) - |p0 - p1|(beta - delta/2)]).
double alpha_max(double p0, double beta, double delta);

struct UMaxResult {
  double eps;
  double gamma;
  double value;
};

/// Brute-force maximum of u_value over the feasible (eps, gamma) grid with
/// step h; both box endpoints are always on the grid.
UMaxResult u_max_oracle(double p0, double beta, double delta, double h);

struct BinomialSpec {
  std::uint64_t n = 0;
  double p = 0.5;
};

/// Binomial pmf via the saddle-point expansion (Stirling remainder and
/// deviance terms), accurate in relative terms for large n.
double binom_pmf(const BinomialSpec& spec, std::uint64_t k);
double binom_log_pmf(const BinomialSpec& spec, std::uint64_t k);
/// P(X <= k).
double binom_cdf(const BinomialSpec& spec, std::uint64_t k);
/// P(X >= k).
double binom_sf(const BinomialSpec& spec, std::uint64_t k);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double reg_inc_beta(double x, double a, double b);
/// I_x(a, b) for positive integers a, b as the tail P(Bin(a+b-1, x) >= a).
double reg_inc_beta_integer(double x, std::uint64_t a, std::uint64_t b);

/// Maximum continued-fraction terms, and the relative change that ends it.
/// Near the mean the term count grows like sqrt(a+b); a = b = 5e5 needs ~760.
inline constexpr int kBetaMaxIterations = 2000;
inline constexpr double kBetaTolerance = 1e-14;

/// Smallest k at which the Bin(n, p+x) pmf is at least the Bin(n, p) pmf.
std::uint64_t crossing_index(std::uint64_t n, double p, double x);

/// Total variation between Bin(n, p) and Bin(n, p+x).
double binom_tv(std::uint64_t n, double p, double x);

/// Worst-case distance of m normalized bits from uniform when each bit has
/// bias at most alpha: binom_tv(m, 1/2, alpha/2).
double tv_bound_exact(std::uint64_t m, double alpha);

/// ((1+alpha)^m - 1) / 2 and its inverse (1+2 rho)^{1/m} - 1.
double tv_bound_naive(std::uint64_t m, double alpha);
double naive_alpha_for_rho(std::uint64_t m, double rho);

/// alpha sqrt((m+1) / (2 pi (1 - 2/m))) and its inverse; m >= 3.
double linear_bound(std::uint64_t m, double alpha);
double linear_alpha_for_rho(std::uint64_t m, double rho);

/// Largest alpha with tv_bound_exact(m, alpha) <= rho, by bisection.
double calibrate_alpha(std::uint64_t m, double rho);
inline constexpr double kCalibrationUpper = 1.0 - 1e-9;
inline constexpr double kCalibrationTol = 1e-10;

/// delta at which alpha_max(p0, beta, delta) == alpha; DomainError when no
/// delta in [0, beta] reaches alpha.
double calibrate_delta(double p0, double beta, double alpha);

enum class BoundFamily { exact, naive, linear };
BoundFamily parse_bound_family(std::string_view name);
std::string_view to_string(BoundFamily family);

struct VariationReport {
  double value;
  BoundFamily family;
  std::uint64_t m;
  double alpha;
};

VariationReport variation_bound(BoundFamily family, std::uint64_t m, double alpha);
/// Largest alpha whose bound of the given family is at most rho.
double alpha_for_rho(BoundFamily family, std::uint64_t m, double rho);

}  // namespace vnorm
