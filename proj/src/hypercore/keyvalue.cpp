#include "dlab/core.hpp"

#include <istream>
#include <set>

namespace dlab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw FormatError("line " + std::to_string(number) + ": expected key=value");
    auto key = trim(t.substr(0, eq));
    if (key.empty()) throw FormatError("line " + std::to_string(number) + ": empty key");
    if (!seen.insert(key).second) throw FormatError("line " + std::to_string(number) + ": repeated key " + key);
    out.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return out;
}

}  // namespace dlab
