#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "vnorm/bits.hpp"
#include "vnorm/bounds.hpp"
#include "vnorm/error.hpp"
#include "vnorm/exactdist.hpp"
#include "vnorm/markov.hpp"
#include "vnorm/normalize.hpp"
#include "vnorm/sources.hpp"
#include "vnorm/stats.hpp"

namespace vnorm::cli {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct Streams {
  std::istream& in;
  std::ostream& out;
};

std::vector<std::uint8_t> read_input(const std::string& path, Streams io) {
  if (path == "-") {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(io.in)), std::istreambuf_iterator<char>());
    if (io.in.bad()) throw IoError("error while reading standard input");
    return bytes;
  }
  return read_file_bytes(path);
}

std::string read_text(const std::string& path, Streams io) {
  const auto bytes = read_input(path, io);
  return {bytes.begin(), bytes.end()};
}

void write_output(const std::string& path, std::span<const std::uint8_t> bytes, Streams io) {
  if (path == "-") {
    io.out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!io.out) throw IoError("error while writing standard output");
    return;
  }
  write_file_bytes(path, bytes);
}

void write_text(const std::string& path, const std::string& text, Streams io) {
  write_output(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), io);
}

// One "p00 p01 p10 p11" line per pair; blank lines and '#' comments skipped.
std::vector<PairDistribution> parse_pairs(const std::string& text) {
  std::vector<PairDistribution> pairs;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    PairDistribution d{};
    std::size_t count = 0;
    double v = 0.0;
    while (fields >> v) {
      if (count < 4) d[count] = v;
      ++count;
    }
    if (!fields.eof()) throw DomainError("pairs file line " + std::to_string(line_no) + ": not a number");
    if (count == 0) continue;
    if (count != 4) throw DomainError("pairs file line " + std::to_string(line_no) + ": expected 4 probabilities");
    pairs.push_back(d);
  }
  return pairs;
}

struct SourceOptions {
  std::string kind = "constant";
  double p0 = 0.5;
  double beta = 0.0;
  double delta = 0.0;
  std::string trajectory = "walk";
  double period = 0.0;
  std::string trace_file;
  std::size_t k = 0;
  double kappa = 0.0;
  std::string table = "random";
  std::string table_file;
  std::string pairs_file;
};

void add_source_options(CLI::App* cmd, SourceOptions& o) {
  cmd->add_option("--source", o.kind, "constant | drifting | markov | pairwise")
      ->check(CLI::IsMember({"constant", "drifting", "markov", "pairwise"}))
      ->capture_default_str();
  cmd->add_option("--p0", o.p0, "probability of a 0 bit")->capture_default_str();
  cmd->add_option("--beta", o.beta, "drift amplitude bound");
  cmd->add_option("--delta", o.delta, "drift speed bound");
  cmd->add_option("--trajectory", o.trajectory, "walk | sine | fixed | adversarial")
      ->check(CLI::IsMember({"walk", "sine", "fixed", "adversarial"}))
      ->capture_default_str();
  cmd->add_option("--period", o.period, "sine trajectory period");
  cmd->add_option("--trace-file", o.trace_file, "epsilon per line, for --trajectory fixed");
  cmd->add_option("--k", o.k, "markov memory length");
  cmd->add_option("--kappa", o.kappa, "markov deviation bound");
  cmd->add_option("--table", o.table, "markov table: random | alternating | file")
      ->check(CLI::IsMember({"random", "alternating", "file"}))
      ->capture_default_str();
  cmd->add_option("--table-file", o.table_file, "markov table, one 'history p0' line per history");
  cmd->add_option("--pairs-file", o.pairs_file, "pair distributions, one 'p00 p01 p10 p11' line per pair");
}

SourceSpec build_spec(const SourceOptions& o, std::uint64_t seed, Streams io) {
  SourceSpec spec;
  if (o.kind == "constant") {
    spec = ConstantSource{o.p0};
  } else if (o.kind == "drifting") {
    DriftingSource d{{o.p0, o.beta, o.delta}, WalkTrajectory{}};
    if (o.trajectory == "sine") {
      d.trajectory = SineTrajectory{o.period};
    } else if (o.trajectory == "fixed") {
      if (o.trace_file.empty()) throw DomainError("--trajectory fixed needs --trace-file");
      d.trajectory = FixedTrajectory{parse_trace(read_text(o.trace_file, io))};
    } else if (o.trajectory == "adversarial") {
      d.trajectory = AdversarialTrajectory{};
    }
    spec = d;
  } else if (o.kind == "markov") {
    MarkovExperiment exp;
    exp.k = o.k;
    exp.kappa = o.kappa;
    exp.p0 = o.p0;
    exp.seed = seed;
    exp.table_kind = parse_markov_table_kind(o.table);
    if (exp.table_kind == MarkovTableKind::given) {
      if (o.table_file.empty()) throw DomainError("--table file needs --table-file");
      exp.table = parse_markov_table(read_text(o.table_file, io), o.k);
    }
    spec = make_markov_source(exp);
  } else {
    if (o.pairs_file.empty()) throw DomainError("--source pairwise needs --pairs-file");
    spec = PairwiseSource{parse_pairs(read_text(o.pairs_file, io))};
  }
  validate(spec);
  return spec;
}

CLI::Option* add_format(CLI::App* cmd, std::string& format, const std::string& name = "--format") {
  return cmd->add_option(name, format, "ascii | packed")
      ->check(CLI::IsMember({"ascii", "packed"}))
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  const Streams io{in, out};
  CLI::App app{"von Neumann normalization of biased and drifting bit sources"};
  app.name("vnorm");
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultSeed;

  // generate
  auto* gen = app.add_subcommand("generate", "sample bits from a source");
  SourceOptions gen_src;
  std::size_t gen_n = 0;
  std::string gen_out = "-";
  std::string gen_format = "ascii";
  std::string gen_trace_out;
  add_source_options(gen, gen_src);
  gen->add_option("--n", gen_n, "number of bits")->required();
  gen->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  gen->add_option("--out", gen_out, "bit file, '-' for stdout")->capture_default_str();
  add_format(gen, gen_format);
  gen->add_option("--trace-out", gen_trace_out, "write the drift trace here (drifting sources)");

  // normalize
  auto* nrm = app.add_subcommand("normalize", "un-bias a bit file");
  std::string nrm_in = "-";
  std::string nrm_out = "-";
  std::string nrm_format = "ascii";
  std::string nrm_out_format;
  std::string nrm_method = "vn";
  std::size_t nrm_block = 2;
  nrm->add_option("--in", nrm_in, "bit file, '-' for stdin")->capture_default_str();
  nrm->add_option("--out", nrm_out, "bit file, '-' for stdout")->capture_default_str();
  add_format(nrm, nrm_format);
  add_format(nrm, nrm_out_format, "--out-format")->description("output format, defaults to --format");
  nrm->add_option("--method", nrm_method, "vn | peres | parity")
      ->check(CLI::IsMember({"vn", "peres", "parity"}))
      ->capture_default_str();
  nrm->add_option("--block", nrm_block, "parity block length")->capture_default_str();

  // analyze
  auto* ana = app.add_subcommand("analyze", "bit frequency, Borel block counts and empirical TV");
  std::string ana_in = "-";
  std::string ana_format = "ascii";
  std::vector<std::size_t> ana_ms{1, 2, 3};
  std::string ana_mode = "non-overlapping";
  bool ana_csv = false;
  ana->add_option("--in", ana_in, "bit file, '-' for stdin")->capture_default_str();
  add_format(ana, ana_format);
  ana->add_option("--m", ana_ms, "block lengths")->delimiter(',')->capture_default_str();
  ana->add_option("--mode", ana_mode, "non-overlapping | overlapping")
      ->check(CLI::IsMember({"non-overlapping", "overlapping"}))
      ->capture_default_str();
  ana->add_flag("--csv", ana_csv, "Borel counts as CSV instead of a table");

  // dist
  auto* dst = app.add_subcommand("dist", "exact source or normalized distribution as CSV");
  SourceOptions dst_src;
  std::size_t dst_n = 0;
  std::size_t dst_m = 0;
  std::string dst_method = "vn";
  std::size_t dst_block = 2;
  std::string dst_out = "-";
  bool dst_independence = false;
  add_source_options(dst, dst_src);
  dst->add_option("--n", dst_n, "source string length (<= 26)")->required();
  dst->add_option("--m", dst_m, "normalized output length; omit for the source distribution");
  dst->add_option("--method", dst_method, "vn | peres | parity")
      ->check(CLI::IsMember({"vn", "peres", "parity"}))
      ->capture_default_str();
  dst->add_option("--block", dst_block, "parity block length")->capture_default_str();
  dst->add_option("--seed", seed, "seed for random drift trajectories and markov tables")->capture_default_str();
  dst->add_option("--out", dst_out, "CSV file, '-' for stdout")->capture_default_str();
  dst->add_flag("--independence", dst_independence, "report the bit-independence check instead of the table");

  // tv
  auto* tv = app.add_subcommand("tv", "worst-case distance of m normalized bits from uniform");
  std::uint64_t tv_m = 0;
  double tv_alpha = 0.0;
  std::string tv_method = "exact";
  tv->add_option("--m", tv_m, "output block length")->required();
  tv->add_option("--alpha", tv_alpha, "per-bit bias bound")->required();
  tv->add_option("--method", tv_method, "exact | naive | linear")
      ->check(CLI::IsMember({"exact", "naive", "linear"}))
      ->capture_default_str();

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "largest alpha (and drift speed) meeting a distance target");
  std::uint64_t cal_m = 0;
  double cal_rho = 0.0;
  std::string cal_method = "exact";
  std::optional<double> cal_p0;
  std::optional<double> cal_beta;
  cal->add_option("--m", cal_m, "output block length")->required();
  cal->add_option("--rho", cal_rho, "distance target")->required();
  cal->add_option("--method", cal_method, "exact | naive | linear")
      ->check(CLI::IsMember({"exact", "naive", "linear"}))
      ->capture_default_str();
  auto* cal_p0_opt = cal->add_option("--p0", cal_p0, "source p0, to also report delta");
  auto* cal_beta_opt = cal->add_option("--beta", cal_beta, "drift amplitude, to also report delta");
  cal_p0_opt->needs(cal_beta_opt);
  cal_beta_opt->needs(cal_p0_opt);

  // sweep
  auto* swp = app.add_subcommand("sweep", "distance bounds over a grid of m and alpha, as CSV");
  std::vector<std::uint64_t> swp_ms{100, 1000, 10000, 1000000};
  std::vector<double> swp_alphas;
  double swp_alpha_min = 1e-6;
  double swp_alpha_max = 0.1;
  std::size_t swp_points = 41;
  std::string swp_grid = "log";
  std::optional<double> swp_p0;
  std::optional<double> swp_beta;
  std::vector<double> swp_deltas;
  std::string swp_out = "-";
  swp->add_option("--m", swp_ms, "block lengths")->delimiter(',')->capture_default_str();
  swp->add_option("--alpha", swp_alphas, "explicit alpha values")->delimiter(',');
  swp->add_option("--alpha-min", swp_alpha_min, "grid start")->capture_default_str();
  swp->add_option("--alpha-max", swp_alpha_max, "grid end")->capture_default_str();
  swp->add_option("--points", swp_points, "grid size")->capture_default_str();
  swp->add_option("--grid", swp_grid, "log | linear")->check(CLI::IsMember({"log", "linear"}))->capture_default_str();
  auto* swp_p0_opt = swp->add_option("--p0", swp_p0, "drift grid: source p0");
  auto* swp_beta_opt = swp->add_option("--beta", swp_beta, "drift grid: amplitude bound");
  auto* swp_delta_opt = swp->add_option("--delta", swp_deltas, "drift grid: speed bounds")->delimiter(',');
  swp_delta_opt->needs(swp_p0_opt)->needs(swp_beta_opt);
  swp_delta_opt->excludes(swp->get_option("--alpha"));
  swp->add_option("--out", swp_out, "CSV file, '-' for stdout")->capture_default_str();

  // markov
  auto* mkv = app.add_subcommand("markov", "distance from uniform for k-memory sources");
  std::vector<std::size_t> mkv_ks{1};
  std::vector<double> mkv_kappas{0.05};
  MarkovExperiment mkv_base;
  std::string mkv_table = "random";
  std::string mkv_table_file;
  std::string mkv_out = "-";
  mkv->add_option("--k", mkv_ks, "memory lengths")->delimiter(',')->capture_default_str();
  mkv->add_option("--kappa", mkv_kappas, "deviation bounds")->delimiter(',')->capture_default_str();
  mkv->add_option("--m", mkv_base.m, "output block length")->capture_default_str();
  mkv->add_option("--n", mkv_base.n, "chain length per sample")->capture_default_str();
  mkv->add_option("--samples", mkv_base.samples, "number of chains")->capture_default_str();
  mkv->add_option("--seed", mkv_base.seed, "64-bit seed")->capture_default_str();
  mkv->add_option("--p0", mkv_base.p0, "base probability of a 0")->capture_default_str();
  mkv->add_option("--table", mkv_table, "random | alternating | file")
      ->check(CLI::IsMember({"random", "alternating", "file"}))
      ->capture_default_str();
  mkv->add_option("--table-file", mkv_table_file, "markov table for --table file");
  mkv->add_option("--out", mkv_out, "CSV file, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (gen->parsed()) {
      Sample s = sample(build_spec(gen_src, seed, io), gen_n, seed);
      if (!gen_trace_out.empty()) {
        if (!s.trace) throw DomainError("--trace-out needs a drifting source");
        write_text(gen_trace_out, format_trace(*s.trace), io);
      }
      write_output(gen_out, serialize_bits(s.bits, parse_bit_format(gen_format)), io);
    } else if (nrm->parsed()) {
      const BitFormat in_format = parse_bit_format(nrm_format);
      const BitFormat out_format = nrm_out_format.empty() ? in_format : parse_bit_format(nrm_out_format);
      const NormalizationMethod method = parse_method(nrm_method, nrm_block);
      const BitString x = parse_bits(read_input(nrm_in, io), in_format);
      write_output(nrm_out, serialize_bits(normalize(x, method), out_format), io);
    } else if (ana->parsed()) {
      const BitString x = parse_bits(read_input(ana_in, io), parse_bit_format(ana_format));
      const BorelMode mode = parse_borel_mode(ana_mode);
      out << "bits=" << x.size() << '\n';
      out << "ones=" << x.count(true) << '\n';
      if (x.size() == 0) return kExitOk;
      const BorelReport single = borel_counts(x, 1, BorelMode::non_overlapping);
      out << "frequency_one=" << num(static_cast<double>(single.counts[1]) / static_cast<double>(single.total))
          << '\n';
      out << "deviation_sigma=" << num(single.deviation(1)) << '\n';
      for (std::size_t m : ana_ms) {
        if (x.size() < m) {
          out << "m=" << m << " skipped: input shorter than the block length\n";
          continue;
        }
        const BorelReport report = borel_counts(x, m, mode);
        out << (ana_csv ? report.to_csv() : report.to_table());
        out << "empirical_tv_m" << m << '=' << num(total_variation(empirical_block_dist(x, m), uniform_dist(m)))
            << '\n';
      }
    } else if (dst->parsed()) {
      const SourceSpec spec = build_spec(dst_src, seed, io);
      const DistributionTable table =
          dst_m == 0 ? exact_source_dist(spec, dst_n, seed)
                     : normalized_dist(spec, dst_n, dst_m, parse_method(dst_method, dst_block), seed);
      if (dst_independence) {
        if (const auto v = check_independence(table)) {
          out << "not independent: k=" << v->k << " prefix=" << v->prefix.to_string() << " lhs=" << num(v->lhs)
              << " rhs=" << num(v->rhs) << '\n';
        } else {
          out << "independent\n";
        }
      } else {
        write_text(dst_out, table.to_csv(), io);
      }
    } else if (tv->parsed()) {
      out << num(variation_bound(parse_bound_family(tv_method), tv_m, tv_alpha).value) << '\n';
    } else if (cal->parsed()) {
      const double alpha = alpha_for_rho(parse_bound_family(cal_method), cal_m, cal_rho);
      out << "alpha=" << num(alpha) << '\n';
      if (cal_p0) out << "delta=" << num(calibrate_delta(*cal_p0, *cal_beta, alpha)) << '\n';
    } else if (swp->parsed()) {
      std::vector<SweepRow> rows;
      if (!swp_deltas.empty()) {
        std::vector<DriftPoint> points;
        for (double d : swp_deltas) points.push_back({*swp_p0, *swp_beta, d});
        rows = sweep(swp_ms, points);
      } else {
        const std::vector<double> alphas =
            !swp_alphas.empty() ? swp_alphas
            : swp_grid == "log" ? log_grid(swp_alpha_min, swp_alpha_max, swp_points)
                                : linear_grid(swp_alpha_min, swp_alpha_max, swp_points);
        rows = sweep(swp_ms, alphas);
      }
      write_text(swp_out, sweep_csv(rows), io);
    } else if (mkv->parsed()) {
      mkv_base.table_kind = parse_markov_table_kind(mkv_table);
      std::vector<MarkovResult> results;
      for (std::size_t k : mkv_ks) {
        for (double kappa : mkv_kappas) {
          MarkovExperiment exp = mkv_base;
          exp.k = k;
          exp.kappa = kappa;
          if (exp.table_kind == MarkovTableKind::given) {
            if (mkv_table_file.empty()) throw DomainError("--table file needs --table-file");
            exp.table = parse_markov_table(read_text(mkv_table_file, io), k);
          }
          results.push_back(run_markov_experiment(exp));
        }
      }
      write_text(mkv_out, markov_csv(results), io);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("vnorm");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), in, out, err);
}

}  // namespace vnorm::cli
