#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(WINDING_LAB_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("winding_lab_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::size_t lines(const std::string& text) {
  return std::size_t(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("version and help") {
  const auto v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.output.find('.') != std::string::npos);
  CHECK(run("--help").code == 0);
  CHECK(run("clt --no-such-flag").code == 1);
}

TEST_CASE("clt writes a summary, samples and manifest") {
  const auto dir = scratch("clt");
  const auto r = run("clt --sigma BWBW --scales 3..5 --n 120 --seed 42 --shards 4 --out-dir " +
                     dir.string());
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const std::string summary = slurp(dir / "clt_summary.csv");
  CHECK(summary.rfind("clt_summary.v1,", 0) == 0);
  CHECK(lines(summary) == 4);
  CHECK(lines(slurp(dir / "clt_samples.jsonl")) == 360);

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["status"] == "complete");
  CHECK(manifest["master_seed"]["value"] == 42);
  CHECK(manifest["master_seed"]["source"] == "flag");
  REQUIRE(manifest["outputs"].size() == 2);
  for (const auto& o : manifest["outputs"]) {
    const std::string body = slurp(dir / o["path"].get<std::string>());
    CHECK(o["sha256"] == sha256(body));
    CHECK(o["bytes"] == body.size());
  }
}

TEST_CASE("identical invocations give identical samples") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "clt --sigma BWBW --scales 3..4 --n 100 --seed 0x2a --shards 3 --out-dir ";
  REQUIRE(run(args + a.string()).code == 0);
  REQUIRE(run(args + b.string()).code == 0);
  CHECK(slurp(a / "clt_samples.jsonl") == slurp(b / "clt_samples.jsonl"));
  CHECK(slurp(a / "clt_summary.csv") == slurp(b / "clt_summary.csv"));
}

TEST_CASE("seed from the environment") {
  const auto dir = scratch("env");
  const std::string cmd = "WINDING_LAB_SEED=7 " + std::string(WINDING_LAB_CLI) +
                          " clt --scales 3..3 --n 100 --out-dir " + dir.string() + " > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["master_seed"]["value"] == 7);
  CHECK(manifest["master_seed"]["source"] == "env");
}

TEST_CASE("clt validation") {
  const auto dir = scratch("bad");
  const auto odd = run("clt --sigma BWB --out-dir " + dir.string());
  CHECK(odd.code == 1);
  CHECK(odd.output.find("sigma must be alternating with even length for this command") !=
        std::string::npos);
  CHECK(run("clt --n 50 --out-dir " + dir.string()).code == 1);
  CHECK(run("clt --scales 9..3 --out-dir " + dir.string()).code == 1);
  CHECK(run("clt --seed banana --out-dir " + dir.string()).code == 1);
}

TEST_CASE("rejection budget exhaustion exits 2 with a partial manifest") {
  const auto dir = scratch("budget");
  const auto r = run("clt --scales 6..6 --n 100 --try-budget 5 --out-dir " + dir.string());
  CHECK(r.code == 2);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["status"] != "ok");
}

TEST_CASE("tails crossings") {
  const auto dir = scratch("tails");
  const auto r = run("tails crossings --m 4 --n 64 --trials 2000 --k 2..6 --seed 3 --out-dir " +
                     dir.string());
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const std::string csv = slurp(dir / "tails_crossings.csv");
  CHECK(csv.rfind("tails_crossings.v1,", 0) == 0);
  CHECK(lines(csv) == 6);
  CHECK(slurp(dir / "tails_crossings_fit.csv").rfind("tails_fit.v1,", 0) == 0);
  CHECK(run("tails crossings --m 8 --n 12 --out-dir " + dir.string()).code == 1);
}

TEST_CASE("tails ladder rows are nonincreasing") {
  const auto dir = scratch("ladder");
  const auto r = run("tails ladder --sigma BWBW --q 2 --p 1 --t-max 3 --scale 6 --n-samples 40 "
                     "--out-dir " + dir.string());
  REQUIRE_MESSAGE(r.code == 0, r.output);
  std::istringstream csv(slurp(dir / "tails_ladder.csv"));
  std::string line;
  std::getline(csv, line);
  double last = 2.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream fields(line);
    std::string cell, t, tail;
    std::getline(fields, cell, ',');
    std::getline(fields, t, ',');
    std::getline(fields, tail, ',');
    CHECK(std::stod(tail) <= last);
    last = std::stod(tail);
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("verify filter and fault injection") {
  const auto ok = run("verify --filter telescoping");
  CHECK(ok.code == 0);
  CHECK(lines(ok.output) == 1);
  const auto line = nlohmann::json::parse(ok.output);
  CHECK(line["battery"] == "telescoping");
  CHECK(line["status"] == "pass");

  const auto bad = run("verify --filter reflection --inject-fault turning");
  CHECK(bad.code != 0);
  CHECK(bad.output.find("\"fail\"") != std::string::npos);
  CHECK(run("verify --filter nonsense").code == 1);
}
