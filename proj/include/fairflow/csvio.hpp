#pragma once

#include <string>

namespace fairflow {

// Fixed 12-significant-digit rendering so reruns produce byte-identical CSVs.
std::string fmt12(double v);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace fairflow
