#include "vnorm/sources.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "vnorm/error.hpp"

namespace vnorm {

namespace {

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DomainError("line " + std::to_string(line) + ": '" + std::string(token) + "' is not a number");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    ++line_no;
    f(line, line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void validate(const DriftParams& params) {
  if (!open_unit(params.p0)) throw DomainError("drift: p0 must lie in (0, 1), got " + fmt(params.p0));
  if (!(params.beta >= 0.0)) throw DomainError("drift: beta must be >= 0");
  if (!(params.delta >= 0.0)) throw DomainError("drift: delta must be >= 0");
  if (!(params.beta < std::min(params.p0, params.p1()))) {
    throw DomainError("drift: beta must be < min(p0, p1) = " + fmt(std::min(params.p0, params.p1())));
  }
  if (!(params.delta <= params.beta)) throw DomainError("drift: delta must be <= beta");
}

std::string TraceViolation::message() const {
  if (kind == Kind::amplitude) {
    return "|eps_" + std::to_string(index) + "| = " + fmt(value) + " > beta = " + fmt(bound) + " at index " +
           std::to_string(index);
  }
  return "|gamma_" + std::to_string(index) + "| = " + fmt(value) + " > delta = " + fmt(bound) + " at index " +
         std::to_string(index);
}

std::optional<TraceViolation> validate_trace(const DriftTrace& trace, const DriftParams& params) {
  const auto& eps = trace.epsilons;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double a = std::abs(eps[i]);
    if (!(a <= params.beta + kTraceSlack)) {
      return TraceViolation{TraceViolation::Kind::amplitude, i + 1, a, params.beta};
    }
    if (i + 1 < eps.size()) {
      const double g = std::abs(eps[i + 1] - eps[i]);
      if (!(g <= params.delta + kTraceSlack)) {
        return TraceViolation{TraceViolation::Kind::speed, i + 1, g, params.delta};
      }
    }
  }
  return std::nullopt;
}

DriftTrace adversarial_trace(const DriftParams& params, std::size_t n) {
  validate(params);
  const double sign = params.p1() >= params.p0 ? 1.0 : -1.0;
  const double odd = sign * params.beta;
  const double even = sign * (params.beta - params.delta);
  DriftTrace trace;
  trace.epsilons.resize(n);
  for (std::size_t i = 0; i < n; ++i) trace.epsilons[i] = (i % 2 == 0) ? odd : even;
  return trace;
}

DriftTrace parse_trace(std::string_view text) {
  DriftTrace trace;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto tokens = split_ws(line);
    if (tokens.empty()) return;
    if (tokens.size() != 1) throw DomainError("trace line " + std::to_string(line_no) + ": expected one value");
    trace.epsilons.push_back(parse_double(tokens[0], line_no));
  });
  return trace;
}

std::string format_trace(const DriftTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  for (double e : trace.epsilons) os << e << '\n';
  return os.str();
}

void validate(const SourceSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantSource>) {
          if (!open_unit(s.p0)) throw DomainError("constant source: p0 must lie in (0, 1), got " + fmt(s.p0));
        } else if constexpr (std::is_same_v<T, DriftingSource>) {
          validate(s.params);
          if (const auto* sine = std::get_if<SineTrajectory>(&s.trajectory)) {
            if (!(sine->period > 0.0)) throw DomainError("sine trajectory: period must be > 0");
            if (!(s.params.beta * 2.0 * std::numbers::pi / sine->period <= s.params.delta)) {
              throw DomainError("sine trajectory: beta * 2 pi / period must be <= delta");
            }
          } else if (const auto* fixed = std::get_if<FixedTrajectory>(&s.trajectory)) {
            if (auto v = validate_trace(fixed->trace, s.params)) throw DomainError("fixed trace: " + v->message());
          }
        } else if constexpr (std::is_same_v<T, MarkovSource>) {
          if (!open_unit(s.p0)) throw DomainError("markov source: p0 must lie in (0, 1)");
          if (!(s.kappa >= 0.0)) throw DomainError("markov source: kappa must be >= 0");
          if (s.k > kMaxMarkovMemory) throw DomainError("markov source: k must be <= 24");
          if (s.zero_prob.size() != (std::size_t{1} << s.k)) {
            throw DomainError("markov source: table needs 2^k = " + std::to_string(std::size_t{1} << s.k) +
                              " entries, got " + std::to_string(s.zero_prob.size()));
          }
          for (std::size_t h = 0; h < s.zero_prob.size(); ++h) {
            const double q = s.zero_prob[h];
            if (!(q >= 0.0 && q <= 1.0)) throw DomainError("markov source: P(0|" + BitString::from_index(h, s.k).to_string() + ") outside [0, 1]");
            if (!(std::abs(q - s.p0) <= s.kappa + 1e-12)) {
              throw DomainError("markov source: P(0|" + BitString::from_index(h, s.k).to_string() +
                                ") deviates from p0 by more than kappa");
            }
          }
        } else {
          if (s.pairs.empty()) throw DomainError("pairwise source: no pair distributions");
          for (std::size_t j = 0; j < s.pairs.size(); ++j) {
            double total = 0.0;
            for (double v : s.pairs[j]) {
              if (!(v >= 0.0)) throw DomainError("pairwise source: negative probability in pair " + std::to_string(j + 1));
              total += v;
            }
            if (std::abs(total - 1.0) > 1e-12) {
              throw DomainError("pairwise source: pair " + std::to_string(j + 1) + " sums to " + fmt(total));
            }
          }
        }
      },
      spec);
}

bool pairs_symmetric(const PairwiseSource& source, double tol) {
  return std::all_of(source.pairs.begin(), source.pairs.end(),
                     [tol](const PairDistribution& d) { return std::abs(d[1] - d[2]) <= tol; });
}

std::vector<double> parse_markov_table(std::string_view text, std::size_t k) {
  if (k > kMaxMarkovMemory) throw DomainError("markov table: k must be <= 24");
  const std::size_t size = std::size_t{1} << k;
  std::vector<double> table(size, 0.0);
  std::vector<bool> seen(size, false);
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto tokens = split_ws(line);
    if (tokens.empty()) return;
    std::string_view history;
    std::string_view prob;
    if (tokens.size() == 2) {
      history = tokens[0];
      prob = tokens[1];
    } else if (tokens.size() == 1 && k == 0) {
      prob = tokens[0];
    } else {
      throw DomainError("markov table line " + std::to_string(line_no) + ": expected 'history probability'");
    }
    if (history.size() != k) {
      throw DomainError("markov table line " + std::to_string(line_no) + ": history must have " + std::to_string(k) + " bits");
    }
    const std::uint64_t h = BitString::from_string(history).to_index();
    if (seen[h]) throw DomainError("markov table line " + std::to_string(line_no) + ": duplicate history");
    seen[h] = true;
    table[h] = parse_double(prob, line_no);
  });
  for (std::size_t h = 0; h < size; ++h) {
    if (!seen[h]) throw DomainError("markov table: missing history '" + BitString::from_index(h, k).to_string() + "'");
  }
  return table;
}

std::string format_markov_table(const MarkovSource& source) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t h = 0; h < source.zero_prob.size(); ++h) {
    os << BitString::from_index(h, source.k).to_string() << ' ' << source.zero_prob[h] << '\n';
  }
  return os.str();
}

TraceGenerator::TraceGenerator(const DriftingSource& source, std::uint64_t seed)
    : source_(source), rng_(derive_seed(seed, 1)) {}

double TraceGenerator::next() {
  const DriftParams& p = source_.params;
  const std::size_t i = ++index_;  // 1-based index of the value being produced
  current_ = std::visit(
      [&](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, WalkTrajectory>) {
          if (i == 1) return 0.0;
          return std::clamp(current_ + rng_.uniform(-p.delta, p.delta), -p.beta, p.beta);
        } else if constexpr (std::is_same_v<T, SineTrajectory>) {
          return p.beta * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / t.period);
        } else if constexpr (std::is_same_v<T, FixedTrajectory>) {
          if (i > t.trace.size()) {
            throw DomainError("fixed trace has " + std::to_string(t.trace.size()) + " values, needed at least " +
                              std::to_string(i));
          }
          return t.trace.epsilons[i - 1];
        } else {
          const double sign = p.p1() >= p.p0 ? 1.0 : -1.0;
          return (i % 2 == 1) ? sign * p.beta : sign * (p.beta - p.delta);
        }
      },
      source_.trajectory);
  return current_;
}

DriftTrace realize_trace(const DriftingSource& source, std::size_t n, std::uint64_t seed) {
  validate(SourceSpec{source});
  if (const auto* fixed = std::get_if<FixedTrajectory>(&source.trajectory); fixed && fixed->trace.size() < n) {
    throw DomainError("fixed trace has " + std::to_string(fixed->trace.size()) + " values, needed " + std::to_string(n));
  }
  TraceGenerator gen(source, seed);
  DriftTrace trace;
  trace.epsilons.reserve(n);
  for (std::size_t i = 0; i < n; ++i) trace.epsilons.push_back(gen.next());
  return trace;
}

BitSampler::BitSampler(SourceSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_(derive_seed(seed, 0)) {
  validate(spec_);
  if (const auto* d = std::get_if<DriftingSource>(&spec_)) trace_.emplace(*d, seed);
}

bool BitSampler::next() {
  const std::size_t i = position_++;
  const double u = rng_.uniform();
  bool bit = false;
  if (const auto* c = std::get_if<ConstantSource>(&spec_)) {
    bit = !(u < c->p0);
  } else if (const auto* d = std::get_if<DriftingSource>(&spec_)) {
    const double eps = trace_->next();
    last_eps_ = eps;
    bit = !(u < d->params.p0 - eps);
  } else if (const auto* m = std::get_if<MarkovSource>(&spec_)) {
    const double q0 = i < m->k ? m->p0 : m->zero_prob[history_];
    bit = !(u < q0);
    if (m->k > 0) history_ = ((history_ << 1) | (bit ? 1U : 0U)) & ((std::uint64_t{1} << m->k) - 1);
  } else {
    const auto& pw = std::get<PairwiseSource>(spec_);
    const PairDistribution& d = pw.pairs[(i / 2) % pw.pairs.size()];
    if (i % 2 == 0) {
      bit = !(u < d[0] + d[1]);
      pair_first_ = bit;
    } else {
      const double first = pair_first_ ? d[2] + d[3] : d[0] + d[1];
      const double joint0 = pair_first_ ? d[2] : d[0];
      const double q0 = first > 0.0 ? joint0 / first : 0.5;
      bit = !(u < q0);
    }
  }
  return bit;
}

Sample sample(const SourceSpec& spec, std::size_t n, std::uint64_t seed) {
  BitSampler sampler(spec, seed);
  Sample out;
  out.bits.reserve(n);
  const bool drifting = std::holds_alternative<DriftingSource>(spec);
  if (drifting) {
    if (const auto* fixed = std::get_if<FixedTrajectory>(&std::get<DriftingSource>(spec).trajectory);
        fixed && fixed->trace.size() < n) {
      throw DomainError("fixed trace has " + std::to_string(fixed->trace.size()) + " values, needed " +
                        std::to_string(n));
    }
    out.trace.emplace();
    out.trace->epsilons.reserve(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.bits.push_back(sampler.next());
    if (drifting) out.trace->epsilons.push_back(*sampler.last_epsilon());
  }
  return out;
}

QaryString sample_qary(std::span<const double> probs, std::size_t n, std::uint64_t seed) {
  if (probs.size() < 2) throw DomainError("q-ary source needs at least two symbols");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw DomainError("q-ary source: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("q-ary source: probabilities must sum to 1");

  std::vector<double> cumulative(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
  Rng rng(derive_seed(seed, 2));
  QaryString out(static_cast<unsigned>(probs.size()));
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    std::size_t s = 0;
    while (s + 1 < cumulative.size() && !(u < cumulative[s])) ++s;
    out.push_back(static_cast<std::uint8_t>(s + 1));
  }
  return out;
}

}  // namespace vnorm
