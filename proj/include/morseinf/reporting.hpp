#pragma once

#include <map>
#include <string>
#include <vector>

#include "morseinf/problem.hpp"

namespace morseinf {

inline constexpr const char* kToolVersion = "morseinf 0.1.0";

// 17 significant digits: doubles round-trip exactly through the CSV.
std::string format_double(double v);

std::string csv_line(const std::vector<double>& row);

// Deterministic artifact header: config echo + seed + tool version, no
// timestamps, so byte-identical runs stay byte-identical.
std::string artifact_header(const std::map<std::string, std::string>& config,
                            std::uint64_t seed, char comment_char);

void write_text_file(const std::string& path, const std::string& body);

std::string hypothesis_table_markdown(const HypothesisReport& rep);

}  // namespace morseinf
