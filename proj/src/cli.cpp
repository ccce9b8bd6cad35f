#include "ncmimo/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ncmimo/asymptotics.hpp"
#include "ncmimo/errors.hpp"
#include "ncmimo/mc.hpp"
#include "ncmimo/specialfn.hpp"

namespace ncmimo {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string method_name(std::string_view text) {
  if (text == "low") return "low_snr";
  if (text == "high") return "high_snr";
  return std::string(to_string(parse_estimator(text)));
}

// Output goes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct CommonOptions {
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string method = "mc";
  std::string out;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--samples", o.samples, "Monte Carlo sample count L (>= 100)");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--workers", o.workers, "Worker threads (default: NCMIMO_WORKERS or all cores)");
  cmd->add_option("--method", o.method, "mc | low | high")
      ->check(CLI::IsMember({"mc", "low", "high", "low_snr", "high_snr"}));
  cmd->add_option("--out", o.out, "Write CSV here instead of stdout");
  cmd->add_flag("--no-timing", o.no_timing, "Write wall_ms as 0 for reproducible files");
}

RunRecord evaluate_point(const SchemeParams& p, double rho_db, const CommonOptions& o) {
  p.validate();
  const auto start = std::chrono::steady_clock::now();
  RunRecord r;
  r.scheme = p.scheme;
  r.T = p.T;
  r.M = p.M;
  r.N = p.N;
  r.rho_db = rho_db;
  r.seed = o.seed;
  r.method = method_name(o.method);
  const int norm = p.normalization();
  if (r.method == "mc") {
    const MIEstimate e = estimate_mi(p, {o.samples, o.seed, o.workers > 0 ? o.workers : default_workers()});
    r.samples = e.samples;
    r.mi_bits_per_block = e.bits_per_block;
    r.mi_normalized = e.normalized;
    r.std_error = e.std_error;
  } else {
    const bool low = r.method == "low_snr";
    double v;
    if (p.scheme == Scheme::dustm) v = low ? dustm_low_snr(p) : dustm_high_snr(p);
    else v = low ? ustm_low_snr(p) : ustm_high_snr(p);
    r.mi_normalized = v;
    r.mi_bits_per_block = v * norm;
  }
  r.wall_ms = o.no_timing ? 0.0 : elapsed_ms(start);
  if (!std::isfinite(r.mi_normalized) || !std::isfinite(r.std_error)) {
    throw NumericError("non-finite estimate");
  }
  return r;
}

// --- validate -------------------------------------------------------------------------

struct Report {
  std::ostream& out;
  int failures = 0;
  void line(bool ok, const std::string& name, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    if (!ok) ++failures;
  }
};

void suite_unitary(Report& rep, std::uint64_t seed, std::int64_t samples) {
  for (int m : {1, 2, 4}) {
    for (const MomentCheck& c : unitary_moment_suite(m, samples, seed)) {
      rep.line(c.passed, "unitary m=" + std::to_string(m) + " " + c.name,
               "deviation " + num(c.deviation) + " tol " + num(c.tolerance));
    }
  }
}

void suite_density(Report& rep, std::uint64_t seed, std::int64_t samples, int workers) {
  for (Scheme s : {Scheme::dustm, Scheme::ustm}) {
    // rho T / M < 1, where 2^-log_ratio has finite variance and the standard error is meaningful.
    const SchemeParams p{s, 4, 2, 2, 0.3};
    const Welford w = normalization_check(p, {samples, seed, workers});
    const double dev = std::abs(w.mean() - 1.0);
    rep.line(dev <= 3.0 * w.std_error(), std::string(to_string(s)) + " E[2^-log_ratio] = 1 at (4,2,2,0.3)",
             "mean " + num(w.mean()) + " stderr " + num(w.std_error()));
  }
}

void suite_asymptotics(Report& rep, std::uint64_t seed, std::int64_t samples) {
  for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}}) {
    const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
    const double sum = l1(m, n);
    const double quad = eig_density(m, n).expected_log2();
    rep.line(std::abs(sum - quad) <= 1e-6, "l1" + tag + " sum vs quadrature",
             num(sum) + " vs " + num(quad));
    const WishartLogMoments mc = wishart_log_moments(m, n, samples, seed);
    rep.line(std::abs(sum - mc.l1.mean) <= 3.0 * mc.l1.std_error, "l1" + tag + " vs eigenvalue MC",
             num(sum) + " vs " + num(mc.l1.mean) + " +- " + num(mc.l1.std_error));
    if (std::min(m, n) >= 2) {
      const double v = l2(m, n);
      rep.line(std::abs(v - mc.l2.mean) <= 3.0 * mc.l2.std_error, "l2" + tag + " vs eigenvalue MC",
               num(v) + " vs " + num(mc.l2.mean) + " +- " + num(mc.l2.std_error));
      if (std::min(m, n) == 2) {
        const double trace = expected_log2_gamma_moment(m * n - 1);
        rep.line(std::abs(v - trace) <= 1e-6, "l2" + tag + " vs trace identity",
                 num(v) + " vs " + num(trace));
      }
    }
  }
}

void write_plot(const std::string& script, const std::string& csv, int T, int N) {
  std::ofstream f(script, std::ios::binary);
  if (!f) throw ConfigError("cannot open plot file '" + script + "'");
  std::string image = script;
  const auto dot = image.rfind('.');
  if (dot != std::string::npos && image.find('/', dot) == std::string::npos) image.resize(dot);
  image += ".png";
  f << "set datafile separator ','\n"
    << "set terminal pngcairo size 800,600\n"
    << "set output '" << image << "'\n"
    << "set title 'Capacity, T=" << T << ", N=" << N << "'\n"
    << "set xlabel 'SNR (dB)'\n"
    << "set ylabel 'bits/s/Hz'\n"
    << "set key left top\n"
    << "set grid\n"
    << "plot '" << csv << "' every ::1 using 3:7 with linespoints title 'DUSTM', \\\n"
    << "     '" << csv << "' every ::1 using 3:9 with linespoints title 'USTM (best M)'\n";
}

}  // namespace

std::string csv_header() {
  return "scheme,T,M,N,rho_db,L,seed,mi_bits_per_block,mi_normalized,stderr,method,wall_ms\n";
}

std::string format_record(const RunRecord& r) {
  std::ostringstream os;
  os << to_string(r.scheme) << ',' << r.T << ',' << r.M << ',' << r.N << ',' << num(r.rho_db) << ','
     << r.samples << ',' << r.seed << ',' << num(r.mi_bits_per_block) << ',' << num(r.mi_normalized) << ','
     << num(r.std_error) << ',' << r.method << ',' << num(r.wall_ms) << '\n';
  return os.str();
}

std::vector<double> parse_real_range(std::string_view text) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    const std::string piece(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
    char* end = nullptr;
    const double v = std::strtod(piece.c_str(), &end);
    if (piece.empty() || end != piece.c_str() + piece.size() || !std::isfinite(v)) {
      throw ConfigError("bad range '" + std::string(text) + "'");
    }
    parts.push_back(v);
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() > 3) throw ConfigError("bad range '" + std::string(text) + "'");
  if (parts.size() == 1) return parts;
  const double a = parts[0], b = parts[1];
  const double step = parts.size() == 3 ? parts[2] : 1.0;
  if (!(step > 0.0)) throw ConfigError("range step must be positive in '" + std::string(text) + "'");
  std::vector<double> out;
  if (b < a) return out;
  const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) throw ConfigError("range '" + std::string(text) + "' is too long");
  for (std::int64_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

std::vector<int> parse_int_range(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_real_range(text)) {
    if (v != std::floor(v)) throw ConfigError("range '" + std::string(text) + "' must be integral");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

int default_workers() {
  static const int workers = [] {
    if (const char* env = std::getenv("NCMIMO_WORKERS")) {
      const int v = std::atoi(env);
      if (v >= 1) return v;
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  }();
  return workers;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-coherent MIMO mutual information and capacity (USTM / DUSTM)", "ncmimo"};
  app.require_subcommand(1);

  // mi
  CommonOptions mi_opt;
  std::string mi_scheme;
  int mi_t = 0, mi_m = 0, mi_n = 0;
  double mi_db = 0.0;
  auto* mi = app.add_subcommand("mi", "Mutual information at one operating point");
  mi->add_option("--scheme", mi_scheme, "ustm | dustm")->required()->check(CLI::IsMember({"ustm", "dustm"}));
  mi->add_option("--t", mi_t, "Coherence interval T")->required();
  mi->add_option("--m", mi_m, "Transmit antennas M")->required();
  mi->add_option("--n", mi_n, "Receive antennas N")->required();
  mi->add_option("--snr-db", mi_db, "SNR in dB")->required();
  add_common(mi, mi_opt);

  // sweep
  CommonOptions sw_opt;
  std::string sw_scheme = "both", sw_m = "1", sw_db = "0";
  int sw_t = 0, sw_n = 0;
  double sw_ratio = 0.0;
  auto* sweep = app.add_subcommand("sweep", "Grid over M and SNR");
  sweep->add_option("--scheme", sw_scheme, "ustm | dustm | both")->check(CLI::IsMember({"ustm", "dustm", "both"}));
  sweep->add_option("--m", sw_m, "M range a:b[:step]");
  sweep->add_option("--t", sw_t, "Fixed T (default 2M)");
  auto* sw_n_opt = sweep->add_option("--n", sw_n, "Fixed N");
  auto* sw_r_opt = sweep->add_option("--n-ratio", sw_ratio, "N = ratio * M");
  sw_n_opt->excludes(sw_r_opt);
  sweep->add_option("--snr-db", sw_db, "SNR range in dB a:b[:step]");
  add_common(sweep, sw_opt);

  // capacity
  CommonOptions cap_opt;
  int cap_t = 0, cap_n = 0;
  std::string cap_db = "0", cap_plot;
  auto* capacity = app.add_subcommand("capacity", "Capacity over M for both schemes");
  capacity->add_option("--t", cap_t, "Coherence interval T (even)")->required();
  capacity->add_option("--n", cap_n, "Receive antennas N")->required();
  capacity->add_option("--snr-db-range,--snr-db", cap_db, "SNR range in dB a:b[:step]");
  capacity->add_option("--emit-plot", cap_plot, "Write a gnuplot script to this path (needs --out)");
  add_common(capacity, cap_opt);

  // validate
  std::string val_suite = "all";
  std::uint64_t val_seed = 1;
  std::int64_t val_samples = 0;
  int val_workers = 0;
  auto* validate = app.add_subcommand("validate", "Run oracle suites");
  validate->add_option("--suite", val_suite, "unitary | density | asymptotics | all")
      ->check(CLI::IsMember({"unitary", "density", "asymptotics", "all"}));
  validate->add_option("--seed", val_seed, "Base seed");
  validate->add_option("--samples", val_samples, "Override per-suite sample counts");
  validate->add_option("--workers", val_workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mi) {
      const SchemeParams p{parse_scheme(mi_scheme), mi_t, mi_m, mi_n, snr_db_to_linear(mi_db)};
      p.validate();
      if (mi_opt.method == "mc" && mi_opt.samples < 100) throw ConfigError("--samples must be at least 100");
      const RunRecord r = evaluate_point(p, mi_db, mi_opt);
      Sink sink(mi_opt.out, out);
      *sink << csv_header() << format_record(r);
      return 0;
    }
    if (*sweep) {
      const std::vector<int> ms = parse_int_range(sw_m);
      const std::vector<double> dbs = parse_real_range(sw_db);
      if (sw_opt.method == "mc" && sw_opt.samples < 100) throw ConfigError("--samples must be at least 100");
      std::vector<Scheme> schemes;
      if (sw_scheme != "ustm") schemes.push_back(Scheme::dustm);
      if (sw_scheme != "dustm") schemes.push_back(Scheme::ustm);
      // Validate the whole grid before doing any work.
      std::vector<std::pair<SchemeParams, double>> grid;
      for (Scheme s : schemes)
        for (int m : ms)
          for (double db : dbs) {
            int n = sw_n;
            if (*sw_r_opt) n = static_cast<int>(std::lround(sw_ratio * m));
            if (!*sw_n_opt && !*sw_r_opt) n = m;
            const int t = sw_t > 0 ? sw_t : 2 * m;
            const SchemeParams p{s, t, m, n, snr_db_to_linear(db)};
            p.validate();
            grid.emplace_back(p, db);
          }
      Sink sink(sw_opt.out, out);
      *sink << csv_header();
      for (const auto& [p, db] : grid) *sink << format_record(evaluate_point(p, db, sw_opt)) << std::flush;
      return 0;
    }
    if (*capacity) {
      if (!cap_plot.empty() && cap_opt.out.empty()) throw ConfigError("--emit-plot needs --out");
      if (cap_opt.method == "mc" && cap_opt.samples < 100) throw ConfigError("--samples must be at least 100");
      const std::vector<double> dbs = parse_real_range(cap_db);
      const Estimator est = parse_estimator(method_name(cap_opt.method));
      const RunSpec run{cap_opt.samples, cap_opt.seed, cap_opt.workers > 0 ? cap_opt.workers : default_workers()};
      if (cap_t < 2 || cap_t % 2 != 0) throw ConfigError("--t must be even and at least 2");
      if (cap_n < 1) throw ConfigError("--n must be positive");
      Sink sink(cap_opt.out, out);
      *sink << "T,N,rho_db,method,L,seed,c_dustm,c_dustm_stderr,c_ustm,c_ustm_stderr,m_opt,wall_ms\n";
      for (double db : dbs) {
        const auto start = std::chrono::steady_clock::now();
        const double rho = snr_db_to_linear(db);
        const CapacityRow row = capacity_curves(cap_t, cap_n, std::span<const double>(&rho, 1), est, run).front();
        const std::int64_t used = est == Estimator::monte_carlo ? run.samples : 0;
        *sink << cap_t << ',' << cap_n << ',' << num(db) << ',' << to_string(est) << ',' << used << ','
              << cap_opt.seed << ',' << num(row.c_dustm) << ',' << num(row.c_dustm_se) << ','
              << num(row.c_ustm) << ',' << num(row.c_ustm_se) << ',' << row.m_opt << ','
              << num(cap_opt.no_timing ? 0.0 : elapsed_ms(start)) << '\n'
              << std::flush;
      }
      if (!cap_plot.empty()) write_plot(cap_plot, cap_opt.out, cap_t, cap_n);
      return 0;
    }
    if (*validate) {
      const int workers = val_workers > 0 ? val_workers : default_workers();
      Report rep{out};
      const bool all = val_suite == "all";
      if (all || val_suite == "unitary") suite_unitary(rep, val_seed, val_samples > 0 ? val_samples : 100000);
      if (all || val_suite == "density") suite_density(rep, val_seed, val_samples > 0 ? val_samples : 20000, workers);
      if (all || val_suite == "asymptotics") suite_asymptotics(rep, val_seed, val_samples > 0 ? val_samples : 200000);
      out << (rep.failures == 0 ? "all checks passed\n" : std::to_string(rep.failures) + " check(s) failed\n");
      return rep.failures == 0 ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ncmimo
