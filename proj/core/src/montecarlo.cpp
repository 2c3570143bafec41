#include "winding_lab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "winding_lab/winding.hpp"

namespace winding_lab {

// ---------------------------------------------------------------------------
// Conditioning

int minimal_inner_radius(std::size_t sigma_size) {
  if (sigma_size <= 1) return 0;
  return int((sigma_size + 7) / 8);
}

ConditionSpec ConditionSpec::make(ColorSequence sigma, ConditionMode mode,
                                  std::vector<int> outer_exponents) {
  ConditionSpec spec;
  spec.inner_radius = minimal_inner_radius(sigma.size());
  spec.sigma = std::move(sigma);
  spec.mode = mode;
  spec.outer_exponents = std::move(outer_exponents);
  return spec;
}

Color ConditionSpec::arm_color() const {
  for (Color c : sigma.colors()) {
    if (c == Color::black) return c;
  }
  return Color::white;
}

std::string ConditionSpec::name() const {
  const char* m = mode == ConditionMode::four_arm  ? "arms"
                  : mode == ConditionMode::one_arm ? "one_arm"
                                                   : "one_arm_max";
  return sigma.to_string() + "/l" + std::to_string(inner_radius) + "/" + m;
}

bool condition_holds(const ConditionSpec& spec, const Coloring& c, int radius) {
  return has_arm_event(c, Annulus(spec.inner_radius, radius), spec.sigma);
}

double measure_theta(const ConditionSpec& spec, const Coloring& c, int radius) {
  const Annulus a(spec.inner_radius, radius);
  if (spec.mode == ConditionMode::one_arm_max) {
    return winding_sheet_range(c, a).theta_max;
  }
  return arm_winding(balanced_arm(c, a, spec.arm_color()));
}

ConditionedSample draw_conditioned(const ConditionSpec& spec, int n_exp, StreamCursor& cursor,
                                   const SamplerOptions& options) {
  const int n = 1 << n_exp;
  if (n <= spec.inner_radius) throw std::invalid_argument("scale must exceed the inner radius");
  std::vector<int> radii;
  if (options.staged) {
    for (int j = options.first_stage; j < n_exp; ++j) {
      if ((1 << j) > spec.inner_radius) radii.push_back(1 << j);
    }
  }
  radii.push_back(n);
  for (std::uint64_t tries = 1; tries <= options.try_budget; ++tries) {
    const std::uint64_t replicate = cursor.replicate();
    Coloring c = cursor.next();
    bool ok = true;
    for (int r : radii) {
      if (!condition_holds(spec, c, r)) {
        ok = false;
        break;
      }
    }
    if (ok) return {std::move(c), 0.0, tries, cursor.shard(), replicate};
  }
  throw RejectionExhausted(options.try_budget);
}

ConditionedSample sample_conditioned(const ConditionSpec& spec, int n_exp, StreamCursor& cursor,
                                     const SamplerOptions& options) {
  ConditionedSample s = draw_conditioned(spec, n_exp, cursor, options);
  s.theta = measure_theta(spec, s.coloring, 1 << n_exp);
  return s;
}

// ---------------------------------------------------------------------------
// Statistics

void EstimatorState::add(double theta, std::uint64_t tries, std::uint64_t block_key) {
  ++n_;
  sum_ += theta;
  sum_sq_ += theta * theta;
  tries_ += tries;
  if (theta < -kRange) {
    ++tails_["underflow"];
  } else if (theta >= kRange) {
    ++tails_["overflow"];
  } else {
    const int bin = std::min(kBins - 1, int((theta + kRange) / (2 * kRange) * kBins));
    ++hist_[bin];
  }
  const auto b = block_key % kBlocks;
  ++block_n_[b];
  block_sum_[b] += theta;
  block_sum_sq_[b] += theta * theta;
}

double EstimatorState::mean() const { return n_ ? sum_ / double(n_) : 0.0; }

double EstimatorState::variance() const {
  if (n_ == 0) return 0.0;
  const double m = mean();
  return sum_sq_ / double(n_) - m * m;
}

namespace {

Estimate jackknife(const std::array<std::uint64_t, EstimatorState::kBlocks>& bn,
                   const std::array<double, EstimatorState::kBlocks>& bs,
                   const std::array<double, EstimatorState::kBlocks>& bq, std::uint64_t n,
                   double s, double q, bool variance) {
  auto stat = [variance](double cnt, double sum, double sq) {
    const double m = sum / cnt;
    return variance ? sq / cnt - m * m : m;
  };
  Estimate e;
  if (n == 0) return e;
  e.value = stat(double(n), s, q);
  std::vector<double> loo;
  for (int b = 0; b < EstimatorState::kBlocks; ++b) {
    if (bn[b] == 0 || bn[b] == n) continue;
    loo.push_back(stat(double(n - bn[b]), s - bs[b], q - bq[b]));
  }
  const double k = double(loo.size());
  if (k >= 2) {
    const double avg = std::accumulate(loo.begin(), loo.end(), 0.0) / k;
    double ss = 0.0;
    for (double v : loo) ss += (v - avg) * (v - avg);
    e.stderr_ = std::sqrt((k - 1) / k * ss);
  }
  e.lo = e.value - 1.96 * e.stderr_;
  e.hi = e.value + 1.96 * e.stderr_;
  return e;
}

}  // namespace

Estimate EstimatorState::jackknife_mean() const {
  return jackknife(block_n_, block_sum_, block_sum_sq_, n_, sum_, sum_sq_, false);
}

Estimate EstimatorState::jackknife_variance() const {
  return jackknife(block_n_, block_sum_, block_sum_sq_, n_, sum_, sum_sq_, true);
}

void EstimatorState::merge(const EstimatorState& other) {
  if (other.n_ == 0 && other.tails_.empty()) return;
  if (n_ == 0 && tails_.empty() && cell_.empty()) cell_ = other.cell_;
  if (cell_ != other.cell_) throw std::invalid_argument("cell mismatch");
  n_ += other.n_;
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
  tries_ += other.tries_;
  for (int i = 0; i < kBins; ++i) hist_[i] += other.hist_[i];
  for (const auto& [k, v] : other.tails_) tails_[k] += v;
  for (int b = 0; b < kBlocks; ++b) {
    block_n_[b] += other.block_n_[b];
    block_sum_[b] += other.block_sum_[b];
    block_sum_sq_[b] += other.block_sum_sq_[b];
  }
}

EstimatorState merge(const EstimatorState& a, const EstimatorState& b) {
  EstimatorState out = a;
  out.merge(b);
  return out;
}

FitResult fit_ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit needs at least two points");
  }
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("degenerate design");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.stderr_slope = x.size() > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  return f;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

CltResult clt_test(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("clt test needs samples");
  const double n = double(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : samples) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 <= 0.0) throw std::invalid_argument("zero variance");
  CltResult r;
  r.skewness = m3 / std::pow(m2, 1.5);
  r.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  const double sd = std::sqrt(m2 * n / (n - 1));
  std::vector<double> z(samples.begin(), samples.end());
  for (double& v : z) v = (v - mean) / sd;
  std::sort(z.begin(), z.end());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
  }
  r.ks_stat = d;
  return r;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2) {
  const double ne = double(n1) * double(n2) / double(n1 + n2);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Shards

std::vector<int> shard_sizes(int total, int shards) {
  if (shards < 1) throw std::invalid_argument("shards must be positive");
  std::vector<int> out(shards, total / shards);
  for (int i = 0; i < total % shards; ++i) ++out[i];
  return out;
}

std::uint64_t cell_seed(std::uint64_t seed, const std::string& cell) {
  std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
  for (unsigned char ch : cell) h = mix64(h ^ (ch + 0x100ull * h));
  return h;
}

// ---------------------------------------------------------------------------
// Experiments

std::vector<double> ScaleRow::thetas() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.theta);
  return out;
}

double arm_band(const Coloring& c, Annulus a) {
  const auto g = trace_interfaces(c, a);
  std::vector<double> w;
  for (const auto& arm : interface_arms(g, c)) w.push_back(arm_winding(arm));
  w.push_back(arm_winding(balanced_arm(c, a, Color::black)));
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  return *hi - *lo;
}

namespace {

struct ShardRows {
  std::vector<SampleRecord> records;
  EstimatorState state;
};

}  // namespace

std::vector<ScaleRow> variance_curve(const ConditionSpec& spec, const std::vector<int>& scales,
                                     int samples_per_scale, const RunConfig& config) {
  std::vector<ScaleRow> rows;
  const bool polychromatic = !spec.sigma.monochromatic();
  for (int n_exp : scales) {
    const std::string cell = spec.name() + "/n" + std::to_string(n_exp);
    const std::uint64_t seed = cell_seed(config.seed, cell);
    auto shards = run_shards<ShardRows>(
        samples_per_scale, config, [&](int shard, int count) {
          ShardRows out{{}, EstimatorState(cell)};
          StreamCursor cursor(seed, std::uint64_t(shard));
          for (int i = 0; i < count; ++i) {
            auto s = sample_conditioned(spec, n_exp, cursor, config.sampler);
            SampleRecord rec{s.shard, s.replicate, s.coloring.stream_id(), n_exp, s.theta, s.tries,
                             0.0};
            if (polychromatic) {
              rec.band = arm_band(s.coloring, Annulus(spec.inner_radius, 1 << n_exp));
              if (rec.band > kTwoPi) out.state.count("band_violation");
            }
            out.state.add(s.theta, s.tries, mix64(s.shard * 0x100000001b3ull + s.replicate));
            out.records.push_back(rec);
          }
          return out;
        });
    ScaleRow row;
    row.n_exp = n_exp;
    row.state = EstimatorState(cell);
    for (auto& sh : shards) {
      row.state.merge(sh.state);
      row.samples.insert(row.samples.end(), sh.records.begin(), sh.records.end());
    }
    row.mean = row.state.jackknife_mean();
    row.variance = row.state.jackknife_variance();
    rows.push_back(std::move(row));
  }
  return rows;
}

FitResult fit_log_slope(const std::vector<ScaleRow>& rows) {
  if (rows.size() < 3) throw std::invalid_argument("fit needs at least three scales");
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(std::log(double(1 << r.n_exp)));
    y.push_back(r.state.variance());
  }
  return fit_ols(x, y);
}

void fit_tail(TailCurve& curve) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < curve.tail.size(); ++i) {
    if (curve.tail[i] > 0.0) {
      x.push_back(curve.abscissa[i]);
      y.push_back(std::log(curve.tail[i]));
    }
  }
  curve.fit_ok = false;
  if (x.size() >= 2) {
    try {
      curve.fit = fit_ols(x, y);
      curve.fit_ok = true;
    } catch (const std::invalid_argument&) {
    }
  }
}

namespace {

void fill_binomial(TailCurve& curve, const std::vector<std::uint64_t>& hits, std::uint64_t n) {
  curve.samples = n;
  curve.tail.clear();
  curve.halfwidth.clear();
  for (auto h : hits) {
    const double p = n ? double(h) / double(n) : 0.0;
    curve.tail.push_back(p);
    curve.halfwidth.push_back(n ? 1.96 * std::sqrt(p * (1 - p) / double(n)) : 0.0);
  }
  fit_tail(curve);
}

std::vector<std::uint64_t> sum_hits(const std::vector<std::vector<std::uint64_t>>& parts,
                                    std::size_t size) {
  std::vector<std::uint64_t> hits(size, 0);
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < size; ++i) hits[i] += p[i];
  }
  return hits;
}

}  // namespace

TailCurve crossing_tail(int m, int n, const std::vector<double>& ks, int trials,
                        const RunConfig& config) {
  if (n < 2 * m) throw std::invalid_argument("crossing tail needs n >= 2m");
  const std::string cell = "crossings/m" + std::to_string(m) + "/n" + std::to_string(n);
  const std::uint64_t seed = cell_seed(config.seed, cell);
  const double scale = std::log(double(n) / double(m));
  auto parts = run_shards<std::vector<std::uint64_t>>(trials, config, [&](int shard, int count) {
    std::vector<std::uint64_t> hits(ks.size(), 0);
    StreamCursor cursor(seed, std::uint64_t(shard));
    for (int i = 0; i < count; ++i) {
      const int k = count_disjoint_black_crossings(cursor.next(), m, n);
      for (std::size_t j = 0; j < ks.size(); ++j) {
        if (k >= ks[j] * scale) ++hits[j];
      }
    }
    return hits;
  });
  TailCurve curve;
  curve.abscissa = ks;
  fill_binomial(curve, sum_hits(parts, ks.size()), std::uint64_t(trials));
  return curve;
}

QuasiMultResult quasi_mult_check(int n1, int n2, int n3, const ColorSequence& sigma, int trials,
                                 const RunConfig& config) {
  if (!(n1 < n2 && n2 < n3)) throw std::invalid_argument("need n1 < n2 < n3");
  const std::string cell = "quasimult/" + sigma.to_string() + "/" + std::to_string(n1) + "-" +
                           std::to_string(n2) + "-" + std::to_string(n3);
  const std::uint64_t seed = cell_seed(config.seed, cell);
  // Counts of I13, I12, I23 and their pairwise products.
  using Counts = std::array<std::uint64_t, 6>;
  auto parts = run_shards<Counts>(trials, config, [&](int shard, int count) {
    Counts k{};
    StreamCursor cursor(seed, std::uint64_t(shard));
    for (int i = 0; i < count; ++i) {
      const Coloring c = cursor.next();
      const bool a = has_arm_event(c, Annulus(n1, n3), sigma);
      const bool b = a || has_arm_event(c, Annulus(n1, n2), sigma);
      const bool d = a || has_arm_event(c, Annulus(n2, n3), sigma);
      k[0] += a;
      k[1] += b;
      k[2] += d;
      k[3] += a && b;
      k[4] += a && d;
      k[5] += b && d;
    }
    return k;
  });
  Counts k{};
  for (const auto& p : parts) {
    for (int i = 0; i < 6; ++i) k[i] += p[i];
  }
  const double n = double(trials);
  QuasiMultResult r;
  r.samples = std::uint64_t(trials);
  r.p13 = k[0] / n;
  r.p12 = k[1] / n;
  r.p23 = k[2] / n;
  if (k[0] == 0 || k[1] == 0 || k[2] == 0) throw std::runtime_error("insufficient samples");
  r.ratio = r.p13 / (r.p12 * r.p23);
  // Covariance of the three indicator means and the gradient of
  // log r = log p13 - log p12 - log p23.
  const double c11 = r.p13 * (1 - r.p13), c22 = r.p12 * (1 - r.p12), c33 = r.p23 * (1 - r.p23);
  const double c12 = k[3] / n - r.p13 * r.p12;
  const double c13 = k[4] / n - r.p13 * r.p23;
  const double c23 = k[5] / n - r.p12 * r.p23;
  const double g1 = 1 / r.p13, g2 = -1 / r.p12, g3 = -1 / r.p23;
  const double var = (g1 * g1 * c11 + g2 * g2 * c22 + g3 * g3 * c33 + 2 * g1 * g2 * c12 +
                      2 * g1 * g3 * c13 + 2 * g2 * g3 * c23) /
                     n;
  r.halfwidth = 1.96 * r.ratio * std::sqrt(std::max(0.0, var));
  return r;
}

double good_face_frequency(int p, int trials, const RunConfig& config) {
  const std::uint64_t seed = cell_seed(config.seed, "faces/p" + std::to_string(p));
  auto parts = run_shards<std::uint64_t>(trials, config, [&](int shard, int count) {
    std::uint64_t hits = 0;
    StreamCursor cursor(seed, std::uint64_t(shard));
    for (int i = 0; i < count; ++i) hits += detect_good_faces(cursor.next(), p).has_value();
    return hits;
  });
  return double(std::accumulate(parts.begin(), parts.end(), std::uint64_t(0))) / trials;
}

TailCurve no_good_faces_run(const ConditionSpec& spec, int p0, int t_max, int n_exp, int samples,
                            const RunConfig& config) {
  if (p0 + t_max + 1 > n_exp) throw std::invalid_argument("annuli exceed the conditioning radius");
  const std::string cell = "nofaces/" + spec.name() + "/p" + std::to_string(p0) + "/n" +
                           std::to_string(n_exp);
  const std::uint64_t seed = cell_seed(config.seed, cell);
  auto parts = run_shards<std::vector<std::uint64_t>>(samples, config, [&](int shard, int count) {
    std::vector<std::uint64_t> hits(t_max + 1, 0);
    StreamCursor cursor(seed, std::uint64_t(shard));
    for (int i = 0; i < count; ++i) {
      auto s = draw_conditioned(spec, n_exp, cursor, config.sampler);
      for (int t = 0; t <= t_max; ++t) {
        if (detect_good_faces(s.coloring, p0 + t)) break;
        ++hits[t];
      }
    }
    return hits;
  });
  TailCurve curve;
  for (int t = 0; t <= t_max; ++t) curve.abscissa.push_back(t);
  fill_binomial(curve, sum_hits(parts, t_max + 1), std::uint64_t(samples));
  return curve;
}

TailCurve ladder_tail(const ConditionSpec& spec, int p, int q, int t_max, int n_exp, int samples,
                      const RunConfig& config) {
  const std::string cell = "ladder/" + spec.name() + "/p" + std::to_string(p) + "/q" +
                           std::to_string(q) + "/n" + std::to_string(n_exp);
  const std::uint64_t seed = cell_seed(config.seed, cell);
  const int cap = std::min(ladder_window(p, q), n_exp - 1);
  auto parts = run_shards<std::vector<std::uint64_t>>(samples, config, [&](int shard, int count) {
    std::vector<std::uint64_t> hits(t_max + 1, 0);
    StreamCursor cursor(seed, std::uint64_t(shard));
    for (int i = 0; i < count; ++i) {
      auto s = draw_conditioned(spec, n_exp, cursor, config.sampler);
      int gap = t_max + 1;
      for (int t = p; t <= cap; ++t) {
        if (detect_good_faces(s.coloring, t)) {
          gap = t - p;
          break;
        }
      }
      for (int t = 0; t <= t_max; ++t) hits[t] += gap >= t;
    }
    return hits;
  });
  TailCurve curve;
  for (int t = 0; t <= t_max; ++t) curve.abscissa.push_back(t);
  fill_binomial(curve, sum_hits(parts, t_max + 1), std::uint64_t(samples));
  return curve;
}

TelescopingResult telescoping_check(const ScaleLadder& ladder, const ArmPath& arm) {
  TelescopingResult out;
  std::vector<const FaceRing*> faces;
  for (int p = 1; p <= ladder.q; ++p) {
    const auto m = ladder.m(p);
    if (!m) return out;
    faces.push_back(ladder.face_at(*m));
  }
  const auto& s = arm.sites;
  auto first_hit = [&](const FaceRing& f) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (f.on_face(s[i])) return std::ptrdiff_t(i);
    }
    return -1;
  };
  auto piece = [&](std::size_t from, std::size_t to) {
    return ArmPath{std::vector<Site>(s.begin() + from, s.begin() + to + 1), arm.color};
  };
  const Box inner{linf_norm(s.front())};
  std::vector<std::ptrdiff_t> first(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    first[i] = first_hit(*faces[i]);
    if (first[i] < 0) return out;
  }
  out.applicable = true;
  out.total = winding_from_inner(inner, *faces.back(), piece(0, first.back()));
  out.sum = winding_from_inner(inner, *faces.front(), piece(0, first.front()));
  for (std::size_t i = 0; i + 1 < faces.size(); ++i) {
    if (*faces[i] == *faces[i + 1]) continue;
    std::ptrdiff_t b = first[i + 1];
    while (b >= 0 && !faces[i]->on_face(s[b])) --b;
    out.sum += winding_between_faces(*faces[i], *faces[i + 1], piece(b, first[i + 1]));
  }
  out.residual = std::fabs(out.total - out.sum);
  return out;
}

TelescopingRun telescoping_run(const ConditionSpec& spec, int q, int n_exp, int samples,
                               const RunConfig& config) {
  const std::string cell = "telescoping/" + spec.name() + "/q" + std::to_string(q) + "/n" +
                           std::to_string(n_exp);
  const std::uint64_t seed = cell_seed(config.seed, cell);
  auto parts = run_shards<TelescopingRun>(samples, config, [&](int shard, int count) {
    TelescopingRun run;
    StreamCursor cursor(seed, std::uint64_t(shard));
    std::uint64_t spent = 0;
    while (run.applicable < std::uint64_t(count)) {
      SamplerOptions opts = config.sampler;
      if (spent >= opts.try_budget) throw RejectionExhausted(spent);
      opts.try_budget -= spent;
      auto s = draw_conditioned(spec, n_exp, cursor, opts);
      spent += s.tries;
      ++run.attempted;
      const auto ladder = build_scale_ladder(s.coloring, q, n_exp);
      if (!ladder.m(q)) continue;
      const Annulus a(spec.inner_radius, 1 << n_exp);
      const auto check = telescoping_check(ladder, balanced_arm(s.coloring, a, spec.arm_color()));
      if (!check.applicable) continue;
      ++run.applicable;
      run.max_residual = std::max(run.max_residual, check.residual);
    }
    return run;
  });
  TelescopingRun total;
  for (const auto& p : parts) {
    total.attempted += p.attempted;
    total.applicable += p.applicable;
    total.max_residual = std::max(total.max_residual, p.max_residual);
  }
  return total;
}

IicResult iic_stability(int n_exp, const std::vector<int>& m_exponents, int samples,
                        const RunConfig& config) {
  const auto spec = ConditionSpec::make(ColorSequence::parse("B"), ConditionMode::one_arm);
  IicResult out;
  out.m_exponents = m_exponents;
  for (int m : m_exponents) {
    if (m < n_exp) throw std::invalid_argument("outer radius below the measuring radius");
    const std::string cell = "iic/n" + std::to_string(n_exp) + "/m" + std::to_string(m);
    const std::uint64_t seed = cell_seed(config.seed, cell);
    auto parts = run_shards<std::vector<double>>(samples, config, [&](int shard, int count) {
      std::vector<double> thetas;
      StreamCursor cursor(seed, std::uint64_t(shard));
      for (int i = 0; i < count; ++i) {
        auto s = draw_conditioned(spec, m, cursor, config.sampler);
        thetas.push_back(measure_theta(spec, s.coloring, 1 << n_exp));
      }
      return thetas;
    });
    std::vector<double> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    out.thetas.push_back(std::move(all));
  }
  for (std::size_t i = 1; i < out.thetas.size(); ++i) {
    out.ks_consecutive.push_back(ks_two_sample(out.thetas[i - 1], out.thetas[i]));
  }
  return out;
}

}  // namespace winding_lab
