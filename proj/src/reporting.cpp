#include "morseinf/reporting.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "morseinf/errors.hpp"

namespace morseinf {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_line(const std::vector<double>& row) {
  std::string out;
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += format_double(row[i]);
  }
  out += '\n';
  return out;
}

std::string artifact_header(const std::map<std::string, std::string>& config,
                            std::uint64_t seed, char comment_char) {
  std::ostringstream os;
  os << comment_char << ' ' << kToolVersion << '\n';
  os << comment_char << " seed=" << seed << '\n';
  for (const auto& [k, v] : config) {
    if (v.find('\n') != std::string::npos) continue;  // matrix blocks
    os << comment_char << " config " << k << '=' << v << '\n';
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open output file: " + path);
  f << body;
  if (!f) throw IoFailure("write failed: " + path);
}

std::string hypothesis_table_markdown(const HypothesisReport& rep) {
  std::ostringstream os;
  os << "| condition | pass | worst value | samples |\n";
  os << "|---|---|---|---|\n";
  for (const auto& e : rep.entries) {
    os << "| " << e.name << " | " << (e.pass ? "yes" : "NO") << " | "
       << format_double(e.worst_value) << " | " << e.samples_used << " |\n";
  }
  return os.str();
}

}  // namespace morseinf
