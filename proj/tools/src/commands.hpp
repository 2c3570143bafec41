#pragma once

#include <optional>
#include <string>
#include <vector>

#include "output.hpp"
#include "winding_lab/montecarlo.hpp"

namespace wl_cli {

struct CommonOptions {
  std::optional<std::string> seed;
  int shards = 8;
  int threads = 0;
  std::uint64_t try_budget = 50'000'000;
  std::string out_dir = "out";
};

struct CltOptions {
  std::string sigma = "BWBW";
  std::string scales = "4..7";
  int n = 3000;
  int ladder_q = 0;  // 0: no ladder summary in the sample records
};

struct TailOptions {
  std::string kind;  // crossings | ladder | nofaces
  // crossings
  int m = 4;
  int n = 64;
  int trials = 20000;
  std::string k_values = "2..6";
  // ladder / nofaces
  std::string sigma = "BWBW";
  int q = 6;
  int p = 2;
  int t_max = 4;
  int scale = 8;
  int samples = 2000;
};

winding_lab::RunConfig make_run_config(const CommonOptions& common, const SeedValue& seed);

void cmd_clt(const CltOptions& opt, const CommonOptions& common, const SeedValue& seed,
             RunOutputs& out);
void cmd_tails(const TailOptions& opt, const CommonOptions& common, const SeedValue& seed,
               RunOutputs& out);

}  // namespace wl_cli
