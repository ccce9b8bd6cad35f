#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "ncmimo/asymptotics.hpp"
#include "ncmimo/cli.hpp"
#include "ncmimo/errors.hpp"

using namespace ncmimo;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"ncmimo"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("ranges") {
    CHECK(parse_real_range("3") == std::vector<double>{3.0});
    CHECK(parse_real_range("-6:0:3") == std::vector<double>{-6.0, -3.0, 0.0});
    CHECK(parse_int_range("1:4") == std::vector<int>{1, 2, 3, 4});
    CHECK(parse_real_range("0:1:0.25").size() == 5);
    CHECK(parse_real_range("5:4").empty());
    CHECK_THROWS_AS(parse_real_range("a:b"), ConfigError);
    CHECK_THROWS_AS(parse_real_range("1:2:0"), ConfigError);
    CHECK_THROWS_AS(parse_int_range("1.5"), ConfigError);
  }

  TEST_CASE("record formatting") {
    RunRecord r;
    r.scheme = Scheme::dustm;
    r.T = 4, r.M = 2, r.N = 2, r.rho_db = -6, r.samples = 500, r.seed = 7;
    r.mi_bits_per_block = 0.123456789012, r.mi_normalized = 0.0617283945, r.std_error = 1e-3;
    CHECK(csv_header() == "scheme,T,M,N,rho_db,L,seed,mi_bits_per_block,mi_normalized,stderr,method,wall_ms\n");
    CHECK(format_record(r) == "dustm,4,2,2,-6,500,7,0.123456789,0.0617283945,0.001,mc,0\n");
  }

  TEST_CASE("mi command") {
    const Result r = run({"mi", "--scheme", "dustm", "--t", "4", "--m", "2", "--n", "2", "--snr-db", "-6",
                          "--samples", "500", "--seed", "7", "--workers", "1"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    const auto f = fields(ls[1]);
    REQUIRE(f.size() == 12);
    CHECK(f[0] == "dustm");
    CHECK(f[5] == "500");
    CHECK(f[6] == "7");
    CHECK(f[10] == "mc");
  }

  TEST_CASE("T = M gives exactly zero") {
    const Result r = run({"mi", "--scheme", "ustm", "--t", "2", "--m", "2", "--n", "2", "--snr-db", "10",
                          "--samples", "200", "--workers", "1"});
    REQUIRE(r.code == 0);
    CHECK(fields(lines(r.out)[1])[8] == "0");
  }

  TEST_CASE("low SNR method dispatch") {
    const Result r = run({"mi", "--scheme", "dustm", "--t", "4", "--m", "2", "--n", "2", "--snr-db", "-20",
                          "--method", "low"});
    REQUIRE(r.code == 0);
    const auto f = fields(lines(r.out)[1]);
    CHECK(f[10] == "low_snr");
    CHECK(std::stod(f[8]) == doctest::Approx(dustm_low_snr({Scheme::dustm, 4, 2, 2, 0.01})).epsilon(1e-8));
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(run({"mi", "--scheme", "dustm", "--t", "5", "--m", "2", "--n", "2", "--snr-db", "0"}).code == 2);
    CHECK(run({"mi", "--scheme", "ustm", "--t", "4", "--m", "2", "--n", "2", "--snr-db", "0", "--bogus"}).code == 2);
    CHECK(run({"mi", "--scheme", "ustm"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"mi", "--scheme", "ustm", "--t", "4", "--m", "2", "--n", "2", "--snr-db", "0", "--samples", "10"}).code ==
          2);
    CHECK(run({"capacity", "--t", "7", "--n", "2", "--method", "high"}).code == 2);
  }

  TEST_CASE("sweep ordering and empty ranges") {
    const Result r = run({"sweep", "--scheme", "both", "--m", "1:2", "--snr-db", "0:10:10", "--method", "high"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 9);
    CHECK(ls[1].rfind("dustm,2,1,1,0,", 0) == 0);
    CHECK(ls[2].rfind("dustm,2,1,1,10,", 0) == 0);
    CHECK(ls[3].rfind("dustm,4,2,2,0,", 0) == 0);
    CHECK(ls[5].rfind("ustm,2,1,1,0,", 0) == 0);

    const Result ratio = run({"sweep", "--scheme", "ustm", "--m", "2", "--n-ratio", "0.5", "--snr-db", "0", "--method", "low"});
    REQUIRE(ratio.code == 0);
    CHECK(lines(ratio.out)[1].rfind("ustm,4,2,1,", 0) == 0);

    const Result empty = run({"sweep", "--m", "3:2", "--method", "high"});
    CHECK(empty.code == 0);
    CHECK(empty.out == csv_header());
  }

  TEST_CASE("identical invocations give identical files") {
    auto once = [](const char* workers) {
      return run({"sweep", "--scheme", "both", "--m", "1:2", "--snr-db", "0", "--samples", "300", "--seed", "3",
                  "--workers", workers, "--no-timing"})
          .out;
    };
    const std::string a = once("1");
    CHECK(a == once("4"));
    CHECK(a.find(",mc,0\n") != std::string::npos);
  }

  TEST_CASE("capacity with plot script") {
    const std::string csv = "cli_capacity_test.csv";
    const std::string gp = "cli_capacity_test.gp";
    const Result r = run({"capacity", "--t", "4", "--n", "1", "--snr-db-range", "0:20:10", "--method", "high",
                          "--out", csv.c_str(), "--emit-plot", gp.c_str()});
    REQUIRE(r.code == 0);
    std::ifstream f(csv);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto ls = lines(ss.str());
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "T,N,rho_db,method,L,seed,c_dustm,c_dustm_stderr,c_ustm,c_ustm_stderr,m_opt,wall_ms");
    CHECK(std::filesystem::exists(gp));
    std::ifstream g(gp);
    std::stringstream gs;
    gs << g.rdbuf();
    CHECK(gs.str().find(csv) != std::string::npos);
    std::filesystem::remove(csv);
    std::filesystem::remove(gp);

    CHECK(run({"capacity", "--t", "4", "--n", "1", "--emit-plot", "x.gp", "--method", "high"}).code == 2);
  }

  TEST_CASE("validate runs a suite") {
    const Result r = run({"validate", "--suite", "unitary", "--samples", "5000", "--seed", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS unitary m=4") != std::string::npos);
    CHECK(run({"validate", "--suite", "nope"}).code == 2);
  }
}
