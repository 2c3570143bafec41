#include "commands.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

namespace wl_cli {

using namespace winding_lab;

RunConfig make_run_config(const CommonOptions& common, const SeedValue& seed) {
  if (common.shards < 1) throw ConfigError("--shards must be positive");
  if (common.threads < 0) throw ConfigError("--threads must be nonnegative");
  if (common.try_budget < 1) throw ConfigError("--try-budget must be positive");
  RunConfig cfg;
  cfg.seed = seed.value;
  cfg.shards = common.shards;
  cfg.threads = common.threads;
  cfg.sampler.try_budget = common.try_budget;
  return cfg;
}

namespace {

ColorSequence parse_sigma(const std::string& text) {
  try {
    return ColorSequence::parse(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("sigma must be a nonempty string over {B, W}");
  }
}

json common_json(const CommonOptions& c) {
  return {{"shards", c.shards},
          {"threads", c.threads},
          {"try_budget", c.try_budget},
          {"out_dir", c.out_dir}};
}

std::string csv_number(double v) { return format_double(v); }

json fit_json(const FitResult& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"stderr_slope", f.stderr_slope},
          {"r_squared", f.r_squared}};
}

json ladder_json(const ScaleLadder& ladder) {
  json entries = json::array();
  for (const auto& e : ladder.entries) {
    entries.push_back({{"p", e.p}, {"m", e.m ? json(*e.m) : json(nullptr)}});
  }
  return {{"q", ladder.q}, {"a_q", ladder.a_q_holds}, {"m", entries}};
}

void record_shards(json& shards, const std::string& cell, std::uint64_t cell_seed_value,
                   const std::map<std::uint64_t, std::uint64_t>& replicates) {
  for (const auto& [shard, count] : replicates) {
    shards.push_back({{"cell", cell},
                      {"cell_seed", cell_seed_value},
                      {"shard", shard},
                      {"replicates", count}});
  }
}

}  // namespace

void cmd_clt(const CltOptions& opt, const CommonOptions& common, const SeedValue& seed,
             RunOutputs& out) {
  const ColorSequence sigma = parse_sigma(opt.sigma);
  if (!sigma.alternating()) {
    throw ConfigError("sigma must be alternating with even length for this command");
  }
  const auto scales = parse_scales(opt.scales);
  if (opt.n < 100) throw ConfigError("--n must be at least 100");
  if (opt.ladder_q < 0) throw ConfigError("--ladder-q must be nonnegative");
  const RunConfig cfg = make_run_config(common, seed);
  const auto spec = ConditionSpec::make(sigma, ConditionMode::four_arm);

  out.config() = {{"command", "clt"},
                  {"sigma", opt.sigma},
                  {"inner_radius", spec.inner_radius},
                  {"scales", scales},
                  {"n", opt.n},
                  {"ladder_q", opt.ladder_q},
                  {"common", common_json(common)}};

  const auto rows = variance_curve(spec, scales, opt.n, cfg);

  std::ostringstream csv, jsonl;
  csv << "clt_summary.v1,n_exp,n,samples,mean,mean_stderr,mean_lo,mean_hi,variance,"
         "variance_stderr,variance_lo,variance_hi,tries_per_sample,ks,skewness,"
         "excess_kurtosis,band_max,band_violations\n";
  json per_scale = json::array();
  for (const auto& row : rows) {
    const std::string cell = row.state.cell();
    const std::uint64_t cseed = cell_seed(cfg.seed, cell);
    const auto thetas = row.thetas();
    CltResult clt;
    bool clt_ok = true;
    try {
      clt = clt_test(thetas);
    } catch (const std::invalid_argument&) {
      clt_ok = false;
    }
    double band_max = 0.0;
    std::uint64_t violations = 0;
    std::map<std::uint64_t, std::uint64_t> replicates;
    for (const auto& s : row.samples) {
      band_max = std::max(band_max, s.band);
      violations += s.band >= kTwoPi;
      auto& r = replicates[s.shard];
      r = std::max(r, s.replicate + 1);
      json rec;
      rec["cell"] = cell;
      rec["seed"] = seed.text;
      rec["shard"] = s.shard;
      rec["replicate"] = s.replicate;
      rec["stream_id"] = s.stream_id;
      rec["n"] = 1 << s.n_exp;
      rec["theta"] = s.theta;
      rec["tries"] = s.tries;
      rec["band"] = s.band;
      if (opt.ladder_q > 0) {
        const Coloring c = derive_stream(cseed, s.shard, s.replicate);
        rec["ladder"] = ladder_json(build_scale_ladder(c, opt.ladder_q, s.n_exp));
      } else {
        rec["ladder"] = nullptr;
      }
      jsonl << rec.dump() << '\n';
    }
    record_shards(out.shards(), cell, cseed, replicates);
    csv << cell << ',' << row.n_exp << ',' << (1 << row.n_exp) << ',' << row.state.n() << ','
        << csv_number(row.mean.value) << ',' << csv_number(row.mean.stderr_) << ','
        << csv_number(row.mean.lo) << ',' << csv_number(row.mean.hi) << ','
        << csv_number(row.variance.value) << ',' << csv_number(row.variance.stderr_) << ','
        << csv_number(row.variance.lo) << ',' << csv_number(row.variance.hi) << ','
        << csv_number(row.state.tries_per_sample()) << ','
        << (clt_ok ? csv_number(clt.ks_stat) : "") << ','
        << (clt_ok ? csv_number(clt.skewness) : "") << ','
        << (clt_ok ? csv_number(clt.excess_kurtosis) : "") << ',' << csv_number(band_max)
        << ',' << violations << '\n';
    per_scale.push_back({{"n", 1 << row.n_exp},
                         {"mean", row.mean.value},
                         {"variance", row.variance.value},
                         {"ks", clt_ok ? json(clt.ks_stat) : json(nullptr)},
                         {"band_violations", violations}});
    std::cout << "n=" << (1 << row.n_exp) << "  mean=" << row.mean.value
              << "  var=" << row.variance.value << " +- " << row.variance.stderr_
              << "  ks=" << (clt_ok ? clt.ks_stat : 0.0) << '\n';
  }
  out.results()["scales"] = per_scale;
  if (rows.size() >= 3) {
    const auto fit = fit_log_slope(rows);
    out.results()["variance_vs_log_n"] = fit_json(fit);
    std::cout << "slope of Var vs ln n: " << fit.slope << " +- " << fit.stderr_slope << '\n';
  }
  out.write("clt_summary.csv", csv.str());
  out.write("clt_samples.jsonl", jsonl.str());
}

namespace {

void write_tail(const std::string& kind, const std::string& abscissa_name,
                const TailCurve& curve, const std::vector<double>& thresholds, RunOutputs& out) {
  std::ostringstream csv;
  csv << "tails_" << kind << ".v1," << abscissa_name;
  if (!thresholds.empty()) csv << ",threshold";
  csv << ",tail,halfwidth,samples\n";
  for (std::size_t i = 0; i < curve.tail.size(); ++i) {
    csv << kind << ',' << csv_number(curve.abscissa[i]);
    if (!thresholds.empty()) csv << ',' << csv_number(thresholds[i]);
    csv << ',' << csv_number(curve.tail[i]) << ',' << csv_number(curve.halfwidth[i]) << ','
        << curve.samples << '\n';
    std::cout << abscissa_name << '=' << curve.abscissa[i] << "  tail=" << curve.tail[i]
              << " +- " << curve.halfwidth[i] << '\n';
  }
  out.write("tails_" + kind + ".csv", csv.str());

  std::ostringstream fit;
  fit << "tails_fit.v1,slope,intercept,stderr_slope,r_squared,points\n";
  std::size_t points = 0;
  for (double t : curve.tail) points += t > 0.0;
  if (curve.fit_ok) {
    fit << kind << ',' << csv_number(curve.fit.slope) << ',' << csv_number(curve.fit.intercept)
        << ',' << csv_number(curve.fit.stderr_slope) << ',' << csv_number(curve.fit.r_squared)
        << ',' << points << '\n';
    std::cout << "fitted rate: " << curve.fit.slope << '\n';
  } else {
    fit << kind << ",,,,," << points << '\n';
    std::cout << "fitted rate: unavailable (fewer than two positive tail points)\n";
  }
  out.write("tails_" + kind + "_fit.csv", fit.str());
  out.results()["fit"] = curve.fit_ok ? fit_json(curve.fit) : json(nullptr);
  out.results()["tail"] = curve.tail;
}

}  // namespace

void cmd_tails(const TailOptions& opt, const CommonOptions& common, const SeedValue& seed,
               RunOutputs& out) {
  const RunConfig cfg = make_run_config(common, seed);
  json config = {{"command", "tails"}, {"kind", opt.kind}};
  if (opt.kind == "crossings") {
    if (opt.m < 1 || opt.n < 2 * opt.m) throw ConfigError("crossings need 1 <= m and n >= 2m");
    if (opt.trials < 1) throw ConfigError("--trials must be positive");
    const auto ks = parse_number_list(opt.k_values);
    config.update({{"m", opt.m}, {"n", opt.n}, {"trials", opt.trials}, {"k", ks}});
    config["common"] = common_json(common);
    out.config() = config;
    const auto sizes = shard_sizes(opt.trials, cfg.shards);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      out.shards().push_back({{"shard", i}, {"replicates", sizes[i]}});
    }
    const auto curve = crossing_tail(opt.m, opt.n, ks, opt.trials, cfg);
    std::vector<double> thresholds;
    for (double k : ks) thresholds.push_back(k * std::log(double(opt.n) / opt.m));
    write_tail("crossings", "K", curve, thresholds, out);
    return;
  }

  const ColorSequence sigma = parse_sigma(opt.sigma);
  if (opt.samples < 1) throw ConfigError("--n-samples must be positive");
  if (opt.t_max < 0) throw ConfigError("--t-max must be nonnegative");
  if (opt.scale < 2 || opt.scale > 12) throw ConfigError("--scale must lie in 2..12");
  const auto spec = ConditionSpec::make(sigma, ConditionMode::four_arm);
  config.update({{"sigma", opt.sigma},
                 {"inner_radius", spec.inner_radius},
                 {"scale", opt.scale},
                 {"n_samples", opt.samples},
                 {"t_max", opt.t_max}});
  if (opt.kind == "ladder") {
    if (opt.p < 1 || opt.q < opt.p) throw ConfigError("ladder needs 1 <= p <= q");
    config.update({{"p", opt.p}, {"q", opt.q}});
    config["common"] = common_json(common);
    out.config() = config;
    const auto curve = ladder_tail(spec, opt.p, opt.q, opt.t_max, opt.scale, opt.samples, cfg);
    write_tail("ladder", "t", curve, {}, out);
  } else if (opt.kind == "nofaces") {
    if (opt.p < 1) throw ConfigError("--p0 must be at least 1");
    if (opt.p + opt.t_max + 1 > opt.scale) {
      throw ConfigError("annuli A(p0)..A(p0 + t-max) must lie inside the conditioning radius");
    }
    config["p0"] = opt.p;
    config["common"] = common_json(common);
    out.config() = config;
    const auto curve = no_good_faces_run(spec, opt.p, opt.t_max, opt.scale, opt.samples, cfg);
    write_tail("nofaces", "t", curve, {}, out);
  } else {
    throw ConfigError("unknown tail experiment '" + opt.kind + "'");
  }
}

}  // namespace wl_cli
