#include "morseinf/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace morseinf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigParse("config line " + std::to_string(lineno) +
                        ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigParse("config line " + std::to_string(lineno) +
                        ": empty key");
    if (value == "<<<") {
      std::ostringstream block;
      bool closed = false;
      while (std::getline(in, line)) {
        ++lineno;
        if (trim(line) == ">>>") {
          closed = true;
          break;
        }
        block << line << '\n';
      }
      if (!closed)
        throw ConfigParse("config: unterminated <<< block for key '" + key +
                          "'");
      value = block.str();
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_text(buf.str());
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
      throw ConfigParse("config key '" + key + "': trailing junk in number");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigParse("config key '" + key + "': not a number: " + it->second);
  }
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size())
      throw ConfigParse("config key '" + key + "': trailing junk in integer");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigParse("config key '" + key +
                      "': not an integer: " + it->second);
  }
}

std::uint64_t KeyValueConfig::get_seed(const std::string& key,
                                       std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::invalid_argument&) {
    throw ConfigParse("config key '" + key + "': not a seed: " + it->second);
  }
}

}  // namespace morseinf
