#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ncmimo/params.hpp"

namespace ncmimo {

/// One CSV row of a single-point estimate.
struct RunRecord {
  Scheme scheme = Scheme::ustm;
  int T = 0, M = 0, N = 0;
  double rho_db = 0.0;
  std::int64_t samples = 0;  // 0 for analytic methods
  std::uint64_t seed = 0;
  double mi_bits_per_block = 0.0;
  double mi_normalized = 0.0;
  double std_error = 0.0;
  std::string method = "mc";  // mc | low_snr | high_snr
  double wall_ms = 0.0;
};

std::string csv_header();
std::string format_record(const RunRecord& r);

/// "a", "a:b" or "a:b:step" (inclusive, step defaults to 1). b < a gives an empty list.
std::vector<double> parse_real_range(std::string_view text);
std::vector<int> parse_int_range(std::string_view text);

/// Worker count from NCMIMO_WORKERS, else the hardware concurrency (at least 1).
int default_workers();

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 1 numeric or validation failure, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncmimo
