#include "renewrt/config_file.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "renewrt/error.hpp"

namespace renewrt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "config line " << line << ": " << what;
  throw InvalidArgument(msg.str());
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::istream& in) {
  std::vector<ConfigEntry> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected `key = value`");
    std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    if (value.empty()) fail(line, "missing value for '" + key + "'");
    std::replace(key.begin(), key.end(), '_', '-');
    const bool ok = std::all_of(key.begin(), key.end(), [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
    if (!ok) fail(line, "bad key '" + key + "'");
    const auto dup = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.key == key; });
    if (dup != out.end()) out.erase(dup);
    out.push_back({key, value, line});
  }
  return out;
}

}  // namespace renewrt
