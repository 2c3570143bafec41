#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wl_cli {

using json = nlohmann::ordered_json;

// Bad flags or values; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedValue {
  std::uint64_t value = 0;
  std::string text;    // as given
  std::string source;  // "flag", "env" or "default"
};

// Decimal or 0x-prefixed hex. Throws ConfigError.
std::uint64_t parse_seed(const std::string& text);
// --seed if given, else WINDING_LAB_SEED, else 0.
SeedValue resolve_seed(const std::optional<std::string>& flag);

// Inclusive exponent range "a..b" (or a single exponent).
std::vector<int> parse_scales(const std::string& text);
// Comma-separated numbers, or an inclusive integer range "a..b".
std::vector<double> parse_number_list(const std::string& text);

std::string sha256_hex(const std::string& bytes);
std::string format_double(double v);
std::string utc_timestamp(std::chrono::system_clock::time_point t);

// Collects output files for one run. Files are written through a
// temporary name and renamed into place; the manifest is written last.
class RunOutputs {
 public:
  RunOutputs(std::filesystem::path dir, std::string experiment);

  void write(const std::string& name, const std::string& contents);
  json& config() { return config_; }
  json& results() { return results_; }
  json& shards() { return shards_; }

  // status: "complete" or "partial"; `error` is recorded when nonempty.
  void finish(const SeedValue& seed, const std::string& status, const std::string& error = {});

 private:
  std::filesystem::path dir_;
  std::string experiment_;
  std::chrono::system_clock::time_point started_;
  json config_ = json::object();
  json results_ = json::object();
  json shards_ = json::array();
  json files_ = json::array();
};

void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace wl_cli
