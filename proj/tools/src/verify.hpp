#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wl_cli {

struct VerifyOptions {
  std::vector<std::string> filters;  // empty: every battery
  std::string inject_fault;          // "" or "turning"
};

inline const std::vector<std::string>& battery_names() {
  static const std::vector<std::string> names = {"arms", "telescoping", "reflection", "peeling"};
  return names;
}

// Runs the selected batteries and writes one JSON object per battery to
// `report`. Returns true iff all of them pass.
bool run_verify(const VerifyOptions& opt, std::ostream& report);

}  // namespace wl_cli
