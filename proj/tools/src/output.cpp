#include "output.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "winding_lab/version.hpp"

namespace wl_cli {

std::uint64_t parse_seed(const std::string& text) {
  std::string_view s = text;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("invalid seed '" + text + "'");
  }
  return v;
}

SeedValue resolve_seed(const std::optional<std::string>& flag) {
  if (flag) return {parse_seed(*flag), *flag, "flag"};
  if (const char* env = std::getenv("WINDING_LAB_SEED"); env != nullptr && *env != '\0') {
    return {parse_seed(env), env, "env"};
  }
  return {0, "0", "default"};
}

namespace {

int parse_int(std::string_view s, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("invalid " + what);
  }
  return v;
}

}  // namespace

std::vector<int> parse_scales(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<int> out;
  if (dots == std::string::npos) {
    out.push_back(parse_int(text, "scales '" + text + "'"));
  } else {
    const int a = parse_int(std::string_view(text).substr(0, dots), "scales '" + text + "'");
    const int b = parse_int(std::string_view(text).substr(dots + 2), "scales '" + text + "'");
    if (b < a) throw ConfigError("empty scale range '" + text + "'");
    for (int j = a; j <= b; ++j) out.push_back(j);
  }
  for (int j : out) {
    if (j < 1 || j > 12) throw ConfigError("scale exponents must lie in 1..12");
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int a = parse_int(std::string_view(text).substr(0, dots), "list '" + text + "'");
    const int b = parse_int(std::string_view(text).substr(dots + 2), "list '" + text + "'");
    if (b < a) throw ConfigError("empty range '" + text + "'");
    for (int v = a; v <= b; ++v) out.push_back(v);
    return out;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw ConfigError("invalid number '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  }
  return out.str();
}

std::string format_double(double v) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(17) << v;
  return out.str();
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

RunOutputs::RunOutputs(std::filesystem::path dir, std::string experiment)
    : dir_(std::move(dir)),
      experiment_(std::move(experiment)),
      started_(std::chrono::system_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir_.string());
}

void RunOutputs::write(const std::string& name, const std::string& contents) {
  write_atomically(dir_ / name, contents);
  files_.push_back({{"path", name}, {"bytes", contents.size()}, {"sha256", sha256_hex(contents)}});
}

void RunOutputs::finish(const SeedValue& seed, const std::string& status,
                        const std::string& error) {
  json m;
  m["tool"] = "winding-lab";
  m["version"] = winding_lab::version_string();
  m["experiment"] = experiment_;
  m["master_seed"] = {{"text", seed.text}, {"value", seed.value}, {"source", seed.source}};
  m["config"] = config_;
  m["started"] = utc_timestamp(started_);
  m["finished"] = utc_timestamp(std::chrono::system_clock::now());
  m["status"] = status;
  if (!error.empty()) m["error"] = error;
  m["streams"] = {{"rule", "stream_id = derive_stream_id(cell_seed(master_seed, cell), shard, "
                           "replicate) for replicate in [0, replicates)"},
                  {"shards", shards_}};
  m["results"] = results_;
  m["outputs"] = files_;
  write_atomically(dir_ / "manifest.json", m.dump(2) + "\n");
}

}  // namespace wl_cli
