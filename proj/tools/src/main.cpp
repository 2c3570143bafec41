#include <CLI11.hpp>

#include <iostream>
#include <memory>

#include "commands.hpp"
#include "output.hpp"
#include "verify.hpp"
#include "winding_lab/version.hpp"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kBudgetExhausted = 2;
constexpr int kInternalError = 3;

void add_common(CLI::App* cmd, wl_cli::CommonOptions& common) {
  cmd->add_option("--seed", common.seed, "master seed, decimal or 0x hex (env WINDING_LAB_SEED)");
  cmd->add_option("--shards", common.shards, "number of independent shards")->capture_default_str();
  cmd->add_option("--threads", common.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  cmd->add_option("--try-budget", common.try_budget, "rejection tries per accepted sample")
      ->capture_default_str();
  cmd->add_option("--out-dir", common.out_dir, "output directory")->capture_default_str();
}

// Runs an experiment with manifest bookkeeping and the exit-code contract.
template <typename Fn>
int run_experiment(const std::string& name, const wl_cli::CommonOptions& common, Fn&& fn) {
  wl_cli::SeedValue seed;
  std::unique_ptr<wl_cli::RunOutputs> out;
  try {
    seed = wl_cli::resolve_seed(common.seed);
    out = std::make_unique<wl_cli::RunOutputs>(common.out_dir, name);
    fn(seed, *out);
    out->finish(seed, "complete");
    return kOk;
  } catch (const wl_cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const winding_lab::RejectionExhausted& e) {
    std::cerr << "error: " << e.what() << " after " << e.tries() << " tries\n";
    if (out) out->finish(seed, "partial", e.what());
    return kBudgetExhausted;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    if (out) out->finish(seed, "partial", e.what());
    return kInternalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Winding angles of critical percolation arms"};
  app.set_version_flag("--version", winding_lab::version_string());
  app.require_subcommand(1);

  wl_cli::CommonOptions common;

  wl_cli::CltOptions clt;
  auto* clt_cmd = app.add_subcommand("clt", "variance growth and CLT of the arm winding");
  clt_cmd->add_option("--sigma", clt.sigma, "alternating color sequence")->capture_default_str();
  clt_cmd->add_option("--scales", clt.scales, "exponent range a..b, n = 2^j")
      ->capture_default_str();
  clt_cmd->add_option("--n", clt.n, "conditioned samples per scale")->capture_default_str();
  clt_cmd->add_option("--ladder-q", clt.ladder_q, "add the scale ladder for q to each record");
  add_common(clt_cmd, common);

  wl_cli::TailOptions tails;
  auto* tails_cmd = app.add_subcommand("tails", "tail experiments");
  tails_cmd->require_subcommand(1);
  auto* crossings = tails_cmd->add_subcommand("crossings", "disjoint crossings of R(m, n)");
  crossings->add_option("--m", tails.m, "inner radius")->capture_default_str();
  crossings->add_option("--n", tails.n, "outer radius")->capture_default_str();
  crossings->add_option("--trials", tails.trials, "unconditioned configurations")
      ->capture_default_str();
  crossings->add_option("--k", tails.k_values, "K values, list or range")->capture_default_str();
  add_common(crossings, common);
  auto* ladder = tails_cmd->add_subcommand("ladder", "tail of m(p) - p");
  auto* nofaces = tails_cmd->add_subcommand("nofaces", "runs of annuli without good faces");
  for (auto* cmd : {ladder, nofaces}) {
    cmd->add_option("--sigma", tails.sigma, "conditioning color sequence")->capture_default_str();
    cmd->add_option("--t-max", tails.t_max, "largest t")->capture_default_str();
    cmd->add_option("--scale", tails.scale, "conditioning radius exponent")->capture_default_str();
    cmd->add_option("--n-samples", tails.samples, "conditioned samples")->capture_default_str();
    add_common(cmd, common);
  }
  ladder->add_option("--q", tails.q, "top exponent of the ladder")->capture_default_str();
  ladder->add_option("--p", tails.p, "starting exponent")->capture_default_str();
  nofaces->add_option("--p0", tails.p, "first annulus exponent")->capture_default_str();

  wl_cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "oracle equivalence batteries");
  verify_cmd->add_option("--filter", verify.filters, "batteries to run")
      ->check(CLI::IsMember(wl_cli::battery_names()));
  verify_cmd->add_option("--inject-fault", verify.inject_fault)
      ->check(CLI::IsMember({"turning"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (clt_cmd->parsed()) {
    return run_experiment("clt", common, [&](const wl_cli::SeedValue& seed, wl_cli::RunOutputs& out) {
      wl_cli::cmd_clt(clt, common, seed, out);
    });
  }
  if (tails_cmd->parsed()) {
    tails.kind = crossings->parsed() ? "crossings" : ladder->parsed() ? "ladder" : "nofaces";
    return run_experiment("tails_" + tails.kind, common,
                          [&](const wl_cli::SeedValue& seed, wl_cli::RunOutputs& out) {
                            wl_cli::cmd_tails(tails, common, seed, out);
                          });
  }
  try {
    return wl_cli::run_verify(verify, std::cout) ? kOk : kInternalError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
