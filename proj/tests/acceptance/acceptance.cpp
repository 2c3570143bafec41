// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff every
// selected criterion passed. `--only 1,2,3,4` restricts the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "winding_lab/montecarlo.hpp"
#include "winding_lab/winding.hpp"

using namespace winding_lab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string join(const std::vector<double>& xs, const char* f) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : " ") + fmt(f, x);
  return out;
}

RunConfig config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.shards = 8;
  return cfg;
}

ConditionSpec four_arm() {
  return ConditionSpec::make(ColorSequence::parse("BWBW"), ConditionMode::four_arm);
}

// Criteria 1-4 share one run of the variance curve.
class CltRun {
 public:
  explicit CltRun(std::uint64_t seed) : seed_(seed) {}
  const std::vector<ScaleRow>& rows() {
    if (rows_.empty()) rows_ = variance_curve(four_arm(), {4, 5, 6, 7}, 3000, config(seed_));
    return rows_;
  }

 private:
  std::uint64_t seed_;
  std::vector<ScaleRow> rows_;
};

Verdict variance_growth(CltRun& run) {
  const auto& rows = run.rows();
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.state.variance());
  bool increasing = true;
  for (std::size_t i = 1; i < v.size(); ++i) increasing &= v[i] > v[i - 1];
  const auto fit = fit_log_slope(rows);
  return {increasing && fit.slope >= 0.15 && fit.slope <= 0.65,
          "var(n=16..128) = " + join(v, "%.3f") + ", slope " + fmt("%.3f", fit.slope) +
              " +- " + fmt("%.3f", fit.stderr_slope) + ", need increasing and slope in [0.15, 0.65]"};
}

Verdict clt_shape(CltRun& run) {
  const auto r = clt_test(run.rows().back().thetas());
  return {r.ks_stat < 0.05 && std::fabs(r.skewness) < 0.15,
          "n=128: KS " + fmt("%.4f", r.ks_stat) + " (< 0.05), skewness " + fmt("%.3f", r.skewness) +
              " (|.| < 0.15), excess kurtosis " + fmt("%.3f", r.excess_kurtosis)};
}

Verdict mean_symmetry(CltRun& run) {
  bool ok = true;
  std::string detail;
  for (const auto& r : run.rows()) {
    const auto m = r.state.jackknife_mean();
    ok &= std::fabs(m.value) < 3 * m.stderr_ && std::fabs(m.value) < kTwoPi;
    detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(1 << r.n_exp) +
              ": " + fmt("%.3f", m.value) + " (se " + fmt("%.3f", m.stderr_) + ")";
  }
  return {ok, "mean " + detail};
}

Verdict band(CltRun& run) {
  std::size_t samples = 0, violations = 0;
  double widest = 0.0;
  for (const auto& r : run.rows()) {
    for (const auto& s : r.samples) {
      ++samples;
      widest = std::max(widest, s.band);
      violations += s.band > kTwoPi;
    }
  }
  return {violations == 0 && samples > 0,
          std::to_string(violations) + " of " + std::to_string(samples) +
              " samples with arm windings spread over more than 2pi (widest " + fmt("%.3f", widest) + ")"};
}

Verdict telescoping(std::uint64_t seed) {
  // Conditioned samples at radius 2^8 until 1000 have a full ladder for
  // q = 4, capped at 4000 draws.
  const int q = 4, n_exp = 8, wanted = 1000, cap = 4000;
  const auto spec = four_arm();
  const std::uint64_t cs = cell_seed(seed, "acceptance/telescoping");
  struct Part {
    int drawn = 0, ladders = 0, applicable = 0;
    double worst = 0.0;
  };
  const auto parts = run_shards<Part>(cap, config(seed), [&](int shard, int count) {
    Part p;
    StreamCursor cursor(cs, std::uint64_t(shard));
    for (; p.drawn < count; ++p.drawn) {
      const auto s = draw_conditioned(spec, n_exp, cursor);
      const auto ladder = build_scale_ladder(s.coloring, q, n_exp);
      if (!ladder.m(q)) continue;
      ++p.ladders;
      const auto t = telescoping_check(ladder, balanced_arm(s.coloring, Annulus(1, 1 << n_exp)));
      if (!t.applicable) continue;
      ++p.applicable;
      p.worst = std::max(p.worst, t.residual);
    }
    return p;
  });
  Part total;
  for (const auto& p : parts) {
    total.drawn += p.drawn;
    total.ladders += p.ladders;
    total.applicable += p.applicable;
    total.worst = std::max(total.worst, p.worst);
  }
  return {total.applicable >= wanted && total.worst < 1e-9,
          std::to_string(total.applicable) + " samples with a full ladder (need " +
              std::to_string(wanted) + ") among " + std::to_string(total.drawn) +
              " conditioned draws, max residual " + fmt("%.2e", total.worst)};
}

Verdict face_frequency(std::uint64_t seed) {
  std::vector<double> f;
  for (int p = 3; p <= 6; ++p) f.push_back(good_face_frequency(p, 100000, config(seed)));
  const double lo = *std::min_element(f.begin(), f.end());
  const double hi = *std::max_element(f.begin(), f.end());
  return {lo > 1e-3 && hi <= 2 * lo,
          "P(R) at p=3..6 = " + join(f, "%.2e") + ", need > 1e-3 and within a factor 2"};
}

Verdict decay(const TailCurve& curve, double bound, const std::string& what) {
  // Empirical zeros are below the 1/N resolution: once the tail reaches 0
  // it must stay there, and the slope is fitted on the positive entries.
  bool decreasing = true;
  for (std::size_t i = 1; i < curve.tail.size(); ++i) {
    const double prev = curve.tail[i - 1], cur = curve.tail[i];
    decreasing &= prev > 0 ? cur < prev : cur == 0;
  }
  const bool ok = curve.fit_ok && decreasing && curve.fit.slope < bound;
  return {ok, what + " = " + join(curve.tail, "%.4g") + ", fitted slope " +
                  (curve.fit_ok ? fmt("%.3f", curve.fit.slope) : std::string("n/a")) + " (need < " +
                  fmt("%.1f", bound) + ", strictly decreasing until zero)"};
}

Verdict ladder(std::uint64_t seed) {
  const auto curve = ladder_tail(four_arm(), 2, 6, 4, 8, 2000, config(seed));
  return decay(curve, -0.3, "P(m(2) - 2 >= t), t=0..4");
}

Verdict no_faces(std::uint64_t seed) {
  const auto curve = no_good_faces_run(four_arm(), 2, 4, 8, 2000, config(seed));
  return decay(curve, -0.3, "P(no good faces in A(2..2+t)), t=0..4");
}

Verdict crossing_counts(std::uint64_t seed) {
  const auto curve = crossing_tail(4, 64, {2, 3, 4, 5, 6}, 20000, config(seed));
  return decay(curve, -0.5, "P(count >= K ln 16), K=2..6");
}

Verdict quasi_mult(std::uint64_t seed) {
  const auto r = quasi_mult_check(4, 8, 16, ColorSequence::parse("BWBW"), 1000000, config(seed));
  return {r.ratio <= 1 + 3 * r.halfwidth && r.ratio >= 0.02,
          "r = " + fmt("%.4f", r.ratio) + " +- " + fmt("%.4f", r.halfwidth) + " (p13 " +
              fmt("%.3e", r.p13) + ", p12 " + fmt("%.3e", r.p12) + ", p23 " + fmt("%.3e", r.p23) + ")"};
}

Verdict oracles() {
  const oracle::A12ArmOracle ref;
  const char* names[] = {"B", "BW", "BWBW"};
  std::vector<std::pair<ColorSequence, std::vector<Color>>> sigmas;
  for (const char* n : names) {
    const auto s = ColorSequence::parse(n);
    sigmas.push_back({s, s.colors()});
  }
  std::uint64_t checked = 0, mismatches = 0;
  for (std::uint32_t mask = 0; mask < (1u << 24); ++mask) {
    const Coloring c = oracle::a12_coloring(ref.sites(), mask);
    for (const auto& [sigma, colors] : sigmas) {
      ++checked;
      mismatches += has_arm_event(c, Annulus(1, 2), sigma) != ref.holds(mask, colors);
    }
  }
  const oracle::RectangleOracle rect(2, 5);
  std::uint64_t flow_mismatches = 0;
  for (std::uint64_t rep = 0; rep < 10000; ++rep) {
    const Coloring c = derive_stream(0xacce55, 0, rep);
    flow_mismatches += count_disjoint_black_crossings(c, 2, 5) != rect.max_crossings(c);
  }
  return {mismatches == 0 && flow_mismatches == 0,
          std::to_string(mismatches) + " mismatches in " + std::to_string(checked) +
              " arm checks on A(1,2) (all 2^24 colorings x B, BW, BWBW); " +
              std::to_string(flow_mismatches) + " mismatches in 10000 R(2,5) max-flow checks"};
}

Verdict iic(std::uint64_t seed) {
  const auto r = iic_stability(6, {7, 8}, 3000, config(seed));
  const double ks = r.ks_consecutive.at(0);
  const auto spec = ConditionSpec::make(ColorSequence::parse("B"), ConditionMode::one_arm_max);
  const auto rows = variance_curve(spec, {4, 5, 6, 7, 8}, 1000, config(seed));
  std::vector<double> x, y;
  for (const auto& row : rows) {
    x.push_back(std::log(double(1 << row.n_exp)));
    y.push_back(row.state.mean());
  }
  const auto fit = fit_ols(x, y);
  return {ks < 0.05 && fit.slope > 0,
          "KS(m=128 vs m=256) at n=64 = " + fmt("%.4f", ks) + " (< 0.05); E[theta_max] n=16..256 = " +
              join(y, "%.3f") + ", slope " + fmt("%.3f", fit.slope) + " (> 0)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  std::uint64_t seed = 20240601;
  app.add_option("--only", only, "criteria to run")->delimiter(',')->check(CLI::Range(1, 12));
  app.add_option("--seed", seed, "master seed");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}
                                              : std::set<int>(only.begin(), only.end());

  CltRun clt(seed);
  const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria = {
      {1, {"variance growth", [&] { return variance_growth(clt); }}},
      {2, {"CLT shape", [&] { return clt_shape(clt); }}},
      {3, {"mean symmetry", [&] { return mean_symmetry(clt); }}},
      {4, {"2pi band", [&] { return band(clt); }}},
      {5, {"telescoping", [&] { return telescoping(seed); }}},
      {6, {"good-face frequency", [&] { return face_frequency(seed); }}},
      {7, {"ladder tail", [&] { return ladder(seed); }}},
      {8, {"no-good-faces run", [&] { return no_faces(seed); }}},
      {9, {"crossing-count tail", [&] { return crossing_counts(seed); }}},
      {10, {"quasi-multiplicativity", [&] { return quasi_mult(seed); }}},
      {11, {"oracle equivalence", [&] { return oracles(); }}},
      {12, {"IIC stability", [&] { return iic(seed); }}},
  };

  bool all = true;
  for (int id : selected) {
    const auto& [name, fn] = criteria.at(id);
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all &= v.pass;
    std::printf("criterion %2d %-24s %s  %s [%.1fs]\n", id, name.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
