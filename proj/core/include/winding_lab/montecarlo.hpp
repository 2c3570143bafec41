#pragma once

#include <array>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "winding_lab/config.hpp"
#include "winding_lab/explore.hpp"
#include "winding_lab/faces.hpp"

namespace winding_lab {

// ---------------------------------------------------------------------------
// Conditioning

enum class ConditionMode { four_arm, one_arm, one_arm_max };

// Smallest l with |dB(l)| >= k: 0 for k <= 1, otherwise ceil(k / 8).
int minimal_inner_radius(std::size_t sigma_size);

struct ConditionSpec {
  ColorSequence sigma;
  int inner_radius = 0;
  std::vector<int> outer_exponents;
  ConditionMode mode = ConditionMode::four_arm;

  static ConditionSpec make(ColorSequence sigma, ConditionMode mode,
                            std::vector<int> outer_exponents = {});
  // Color of the arm whose winding is reported.
  Color arm_color() const;
  std::string name() const;
};

class RejectionExhausted : public std::runtime_error {
 public:
  explicit RejectionExhausted(std::uint64_t tries)
      : std::runtime_error("rejection budget exhausted"), tries_(tries) {}
  std::uint64_t tries() const { return tries_; }

 private:
  std::uint64_t tries_;
};

// Fresh configurations for one shard: derive_stream(master, shard, 0), (.., 1), ...
class StreamCursor {
 public:
  StreamCursor(std::uint64_t master_seed, std::uint64_t shard)
      : master_seed_(master_seed), shard_(shard) {}
  Coloring next() { return derive_stream(master_seed_, shard_, replicate_++); }
  std::uint64_t shard() const { return shard_; }
  std::uint64_t replicate() const { return replicate_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t shard_;
  std::uint64_t replicate_ = 0;
};

struct SamplerOptions {
  std::uint64_t try_budget = 50'000'000;
  int first_stage = 3;
  bool staged = true;
};

struct ConditionedSample {
  Coloring coloring;
  double theta = 0.0;
  std::uint64_t tries = 0;
  std::uint64_t shard = 0;
  std::uint64_t replicate = 0;
};

// Arm event of `spec` from dB(l) to dB(radius).
bool condition_holds(const ConditionSpec& spec, const Coloring& c, int radius);

// Winding statistic of a configuration on A(l, radius): the balanced arm's
// winding, or theta_max of the sheet range in one_arm_max mode.
double measure_theta(const ConditionSpec& spec, const Coloring& c, int radius);

// Exact rejection sampling from P( . | dB(l) <->_sigma dB(2^n_exp)). With
// staging the event is tested at radii 2^j, j = first_stage .. n_exp, and
// a configuration is dropped at its first failure. Throws
// RejectionExhausted after try_budget configurations.
ConditionedSample sample_conditioned(const ConditionSpec& spec, int n_exp, StreamCursor& cursor,
                                     const SamplerOptions& options = {});

// Same, but only returns the accepted configuration (theta is not measured).
ConditionedSample draw_conditioned(const ConditionSpec& spec, int n_exp, StreamCursor& cursor,
                                   const SamplerOptions& options = {});

// ---------------------------------------------------------------------------
// Statistics

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

class EstimatorState {
 public:
  static constexpr int kBins = 480;
  static constexpr double kRange = 24.0 * kPi;
  static constexpr int kBlocks = 50;

  EstimatorState() = default;
  explicit EstimatorState(std::string cell) : cell_(std::move(cell)) {}

  const std::string& cell() const { return cell_; }
  std::uint64_t n() const { return n_; }
  double sum() const { return sum_; }
  double sum_sq() const { return sum_sq_; }
  std::uint64_t tries() const { return tries_; }
  const std::array<std::uint64_t, kBins>& histogram() const { return hist_; }
  const std::map<std::string, std::uint64_t>& tail_counters() const { return tails_; }

  // `block_key` selects the jackknife block (key mod kBlocks).
  void add(double theta, std::uint64_t tries, std::uint64_t block_key);
  void count(const std::string& tail, std::uint64_t k = 1) { tails_[tail] += k; }

  double mean() const;
  // Population variance sum_sq/n - mean^2.
  double variance() const;
  double tries_per_sample() const { return n_ ? double(tries_) / double(n_) : 0.0; }

  // Delete-one-block jackknife over the non-empty blocks.
  Estimate jackknife_mean() const;
  Estimate jackknife_variance() const;

  // Throws std::invalid_argument("cell mismatch").
  void merge(const EstimatorState& other);

 private:
  std::string cell_;
  std::uint64_t n_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::uint64_t tries_ = 0;
  std::array<std::uint64_t, kBins> hist_{};
  std::map<std::string, std::uint64_t> tails_;
  std::array<std::uint64_t, kBlocks> block_n_{};
  std::array<double, kBlocks> block_sum_{};
  std::array<double, kBlocks> block_sum_sq_{};
};

EstimatorState merge(const EstimatorState& a, const EstimatorState& b);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares of y on x. Throws std::invalid_argument on fewer
// than two points or a degenerate design.
FitResult fit_ols(std::span<const double> x, std::span<const double> y);

struct CltResult {
  double ks_stat = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

double normal_cdf(double x);
// Kolmogorov-Smirnov distance of the standardized samples to N(0, 1).
// Throws std::invalid_argument("zero variance") or on fewer than 2 samples.
CltResult clt_test(std::span<const double> samples);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic p-value of the two-sample KS statistic.
double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2);

// ---------------------------------------------------------------------------
// Shards

struct RunConfig {
  std::uint64_t seed = 0;
  int shards = 1;
  int threads = 0;  // 0: hardware concurrency
  SamplerOptions sampler;
};

// Sample counts per shard: N split as evenly as possible, lower shards first.
std::vector<int> shard_sizes(int total, int shards);

// Runs fn(shard, count) for every shard on a thread pool and returns the
// results in shard order. The first exception thrown by a shard is
// rethrown after all threads have joined.
template <typename R>
std::vector<R> run_shards(int total, const RunConfig& config,
                          const std::function<R(int shard, int count)>& fn) {
  const auto sizes = shard_sizes(total, config.shards);
  std::vector<R> results(sizes.size());
  std::vector<std::exception_ptr> errors(sizes.size());
  int threads = config.threads > 0 ? config.threads : int(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, int(sizes.size())));
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t job;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= sizes.size()) return;
        job = next++;
      }
      try {
        results[job] = fn(int(job), sizes[job]);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

// Master seed of one experiment cell, so that cells never share streams.
std::uint64_t cell_seed(std::uint64_t seed, const std::string& cell);

// ---------------------------------------------------------------------------
// Experiments

struct SampleRecord {
  std::uint64_t shard = 0;
  std::uint64_t replicate = 0;
  std::uint64_t stream_id = 0;
  int n_exp = 0;
  double theta = 0.0;
  std::uint64_t tries = 0;
  // Largest winding spread among the extracted arms (polychromatic only).
  double band = 0.0;
};

struct ScaleRow {
  int n_exp = 0;
  EstimatorState state;
  std::vector<SampleRecord> samples;
  Estimate mean;
  Estimate variance;

  std::vector<double> thetas() const;
};

// Spread max - min of the windings of the interface arms and the balanced
// arm of a polychromatic configuration on A(l, radius).
double arm_band(const Coloring& c, Annulus a);

// Conditioned winding statistics per scale. Records the arm band of every
// polychromatic sample.
std::vector<ScaleRow> variance_curve(const ConditionSpec& spec, const std::vector<int>& scales,
                                     int samples_per_scale, const RunConfig& config);

// OLS of the variance against ln n. Needs at least three scales.
FitResult fit_log_slope(const std::vector<ScaleRow>& rows);

struct TailCurve {
  std::vector<double> abscissa;
  std::vector<double> tail;
  std::vector<double> halfwidth;  // 1.96 binomial standard errors
  std::uint64_t samples = 0;
  // OLS of ln(tail) on the abscissa over the points with positive tail.
  FitResult fit;
  bool fit_ok = false;
};

void fit_tail(TailCurve& curve);

// P(count >= K ln(n/m)) for unconditioned configurations, with counts from
// count_disjoint_black_crossings.
TailCurve crossing_tail(int m, int n, const std::vector<double>& ks, int trials,
                        const RunConfig& config);

struct QuasiMultResult {
  double p13 = 0.0, p12 = 0.0, p23 = 0.0;
  double ratio = 0.0;
  double halfwidth = 0.0;  // 1.96 delta-method standard errors
  std::uint64_t samples = 0;
};

// r = P(n1 <-> n3) / (P(n1 <-> n2) P(n2 <-> n3)) for unconditioned
// configurations; throws std::runtime_error("insufficient samples") when
// an estimate is zero.
QuasiMultResult quasi_mult_check(int n1, int n2, int n3, const ColorSequence& sigma,
                                 int trials, const RunConfig& config);

// Frequency of good faces in A(p) over unconditioned configurations.
double good_face_frequency(int p, int trials, const RunConfig& config);

// P(no good faces in A(p0), ..., A(p0 + t)) for t = 0..t_max under the
// conditioned law at radius 2^n_exp.
TailCurve no_good_faces_run(const ConditionSpec& spec, int p0, int t_max, int n_exp,
                            int samples, const RunConfig& config);

// P(m(p) - p >= t) for t = 0..t_max under the conditioned law at radius
// 2^n_exp; an exhausted window counts toward every t.
TailCurve ladder_tail(const ConditionSpec& spec, int p, int q, int t_max, int n_exp,
                      int samples, const RunConfig& config);

struct TelescopingResult {
  bool applicable = false;  // every face found and the arm reaches them
  double total = 0.0;       // theta(Theta_0, Theta_q)
  double sum = 0.0;         // sum of the consecutive windings
  double residual = 0.0;
};

// Telescoping identity along `arm` (from dB(1) outward) for the faces
// Theta_1..Theta_q of the ladder.
TelescopingResult telescoping_check(const ScaleLadder& ladder, const ArmPath& arm);

struct TelescopingRun {
  std::uint64_t attempted = 0;
  std::uint64_t applicable = 0;
  double max_residual = 0.0;
};

// Draws conditioned samples at radius 2^n_exp until `samples` have a full
// ladder for q, or the try budget is spent.
TelescopingRun telescoping_run(const ConditionSpec& spec, int q, int n_exp, int samples,
                               const RunConfig& config);

struct IicResult {
  std::vector<int> m_exponents;
  std::vector<std::vector<double>> thetas;
  std::vector<double> ks_consecutive;
};

// Windings of the arm to radius 2^n_exp under one-arm conditioning to
// radius 2^m for each m in m_exponents.
IicResult iic_stability(int n_exp, const std::vector<int>& m_exponents, int samples,
                        const RunConfig& config);

}  // namespace winding_lab
