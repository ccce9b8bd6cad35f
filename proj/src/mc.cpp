#include "ncmimo/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ncmimo/errors.hpp"

namespace ncmimo {

void Welford::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Welford::merge(const Welford& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double Welford::variance() const { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double Welford::std_error() const {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

namespace {

constexpr std::int64_t kBlock = 1024;

struct BlockResult {
  Welford stats;
  std::int64_t failed = 0;
  std::int64_t first_failed_index = -1;
  std::string first_failure;
};

}  // namespace

SampleStatistics run_samples(const RunSpec& spec, const SampleFn& fn) {
  if (spec.samples < 1) throw ConfigError("run_samples: need at least one sample");
  const std::int64_t blocks = (spec.samples + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(static_cast<std::size_t>(blocks));
  const int workers = static_cast<int>(std::clamp<std::int64_t>(spec.workers, 1, blocks));

  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](int w) {
    try {
      for (std::int64_t b = w; b < blocks; b += workers) {
        BlockResult& r = results[static_cast<std::size_t>(b)];
        const std::int64_t end = std::min(spec.samples, (b + 1) * kBlock);
        for (std::int64_t i = b * kBlock; i < end; ++i) {
          RngStream rng(spec.seed, static_cast<std::uint64_t>(i));
          try {
            const double v = fn(i, rng);
            if (!std::isfinite(v)) throw NumericError("non-finite sample value");
            r.stats.add(v);
          } catch (const NumericError& e) {
            if (r.failed++ == 0) r.first_failed_index = i, r.first_failure = e.what();
          } catch (const DomainError& e) {
            if (r.failed++ == 0) r.first_failed_index = i, r.first_failure = e.what();
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (std::thread& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  SampleStatistics out;
  for (const BlockResult& r : results) {
    out.stats.merge(r.stats);
    if (r.failed > 0 && out.failed == 0) {
      out.first_failure = "sample " + std::to_string(r.first_failed_index) + ": " + r.first_failure;
    }
    out.failed += r.failed;
  }
  if (static_cast<double>(out.failed) > kMaxFailureRate * static_cast<double>(spec.samples)) {
    throw NumericError(std::to_string(out.failed) + " of " + std::to_string(spec.samples) +
                       " samples failed; first: " + out.first_failure);
  }
  return out;
}

double sample_log_ratio(const SchemeParams& params, RngStream& rng) {
  if (params.scheme == Scheme::dustm) return dustm_log_ratio(sample_dustm(params, rng), params);
  return ustm_log_ratio(sample_ustm(params, rng), params);
}

MIEstimate estimate_mi(const SchemeParams& params, const RunSpec& spec) {
  params.validate();
  if (spec.samples < 100) throw ConfigError("estimate_mi: need at least 100 samples");
  if (spec.workers < 1) throw ConfigError("estimate_mi: workers must be at least 1");
  const SampleStatistics s =
      run_samples(spec, [&](std::int64_t, RngStream& rng) { return sample_log_ratio(params, rng); });
  const double norm = params.normalization();
  MIEstimate out;
  out.bits_per_block = s.stats.mean();
  out.normalized = s.stats.mean() / norm;
  out.std_error = s.stats.std_error() / norm;
  out.samples = s.stats.count();
  out.seed = spec.seed;
  out.failed = s.failed;
  return out;
}

Welford normalization_check(const SchemeParams& params, const RunSpec& spec) {
  params.validate();
  return run_samples(spec, [&](std::int64_t, RngStream& rng) {
           return std::exp2(-sample_log_ratio(params, rng));
         }).stats;
}

OracleEstimate haar_average_oracle(const ComplexMatrix& a, double beta, std::int64_t samples,
                                   std::uint64_t seed) {
  if (a.rows() != a.cols()) throw DomainError("haar_average_oracle: A must be square");
  const int m = static_cast<int>(a.rows());
  const SampleStatistics s = run_samples({samples, seed, 1}, [&](std::int64_t, RngStream& rng) {
    const ComplexMatrix u = sample_haar_unitary(m, rng);
    return std::exp(2.0 * beta * (a * u).trace().real());
  });
  return {s.stats.mean(), s.stats.std_error()};
}

OracleEstimate stiefel_average_oracle(const ComplexMatrix& x, int M, double alpha,
                                      std::int64_t samples, std::uint64_t seed) {
  const int t = static_cast<int>(x.rows());
  if (M < 1 || M > t) throw DomainError("stiefel_average_oracle: need 1 <= M <= T");
  const SampleStatistics s = run_samples({samples, seed, 1}, [&](std::int64_t, RngStream& rng) {
    const ComplexMatrix phi = sample_haar_unitary(t, rng).leftCols(M);
    return std::exp(alpha * (phi.adjoint() * x).squaredNorm());
  });
  return {s.stats.mean(), s.stats.std_error()};
}

ChannelSample channel_oracle_sample(const SchemeParams& params, RngStream& rng) {
  params.validate();
  const int M = params.M;
  const ComplexMatrix h = sample_gaussian(M, params.N, rng);
  const ComplexMatrix w = sample_gaussian(params.T, params.N, rng);
  const double gain = std::sqrt(params.rho * params.T / M);
  if (params.scheme == Scheme::dustm) {
    const ComplexMatrix s = (gain / std::sqrt(2.0)) * h;
    return DustmSample{s + w.topRows(M), s + w.bottomRows(M)};
  }
  const double unit = std::sqrt(1.0 + params.rho * params.T / M);
  return UstmSample{(gain * h + w.topRows(M)) / unit, w.bottomRows(params.T - M)};
}

namespace {

class ComplexMean {
 public:
  void add(Complex z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  MomentCheck check(std::string name, Complex expected) const {
    MomentCheck c;
    c.name = std::move(name);
    c.deviation = std::abs(Complex(re_.mean(), im_.mean()) - expected);
    c.tolerance = 4.0 * std::hypot(re_.std_error(), im_.std_error()) + 1e-12;
    c.passed = c.deviation <= c.tolerance;
    return c;
  }

 private:
  Welford re_;
  Welford im_;
};

}  // namespace

std::vector<MomentCheck> unitary_moment_suite(int m, std::int64_t samples, std::uint64_t seed) {
  if (m < 1) throw DomainError("unitary_moment_suite: m must be positive");
  const int last = m - 1;
  ComplexMean first, diag2, offrow2, offcol2, cross2, plain2, fourth, third;
  for (std::int64_t i = 0; i < samples; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const ComplexMatrix u = sample_haar_unitary(m, rng);
    const Complex a = u(0, 0);
    first.add(u(last, 0));
    diag2.add(a * std::conj(a));
    offrow2.add(a * std::conj(u(0, last)));
    offcol2.add(a * std::conj(u(last, 0)));
    cross2.add(a * std::conj(u(last, last)));
    plain2.add(a * u(last, last));
    fourth.add(std::norm(a) * std::norm(a));
    third.add(a * a * std::conj(u(last, 0)));
  }
  const double inv = 1.0 / m;
  const bool same = m == 1;
  return {
      first.check("E[U_m1] = 0", 0.0),
      diag2.check("E[|U_11|^2] = 1/m", inv),
      offrow2.check("E[U_11 conj(U_1m)] = delta/m", same ? inv : 0.0),
      offcol2.check("E[U_11 conj(U_m1)] = delta/m", same ? inv : 0.0),
      cross2.check("E[U_11 conj(U_mm)] = delta/m", same ? inv : 0.0),
      plain2.check("E[U_11 U_mm] = 0", 0.0),
      fourth.check("E[|U_11|^4] = 2/(m(m+1))", 2.0 / (m * (m + 1.0))),
      third.check("E[U_11^2 conj(U_m1)] = 0", 0.0),
  };
}

WishartLogMoments wishart_log_moments(int M, int N, std::int64_t samples, std::uint64_t seed) {
  if (M < 1 || N < 1) throw DomainError("wishart_log_moments: M and N must be positive");
  const int r = std::min(M, N);
  Welford l1, l2;
  for (std::int64_t i = 0; i < samples; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const ComplexMatrix z = sample_gaussian(M, N, rng);
    const Spectrum lam = hermitian_eigenvalues(M <= N ? ComplexMatrix(z * z.adjoint())
                                                      : ComplexMatrix(z.adjoint() * z));
    double s1 = 0.0;
    for (int k = 0; k < r; ++k) s1 += std::log2(lam[k]);
    l1.add(s1 / r);
    if (r >= 2) {
      double s2 = 0.0;
      for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) s2 += std::log2(lam[a] + lam[b]);
      l2.add(s2 / (r * (r - 1) / 2.0));
    }
  }
  WishartLogMoments out;
  out.l1 = {l1.mean(), l1.std_error()};
  out.l2 = r >= 2 ? OracleEstimate{l2.mean(), l2.std_error()}
                  : OracleEstimate{std::numeric_limits<double>::quiet_NaN(), 0.0};
  return out;
}

}  // namespace ncmimo
