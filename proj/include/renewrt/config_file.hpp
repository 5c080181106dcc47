#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace renewrt {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// `key = value` lines; `#` starts a comment; blank lines are skipped. Keys
/// are normalized to the flag spelling (`theta_deg` -> `theta-deg`). A later
/// duplicate key wins. Throws InvalidArgument citing the line number.
std::vector<ConfigEntry> parse_config(std::istream& in);

}  // namespace renewrt
