// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal CSV table I/O with full-precision numeric round-tripping.

#ifndef DISTRICTCOOL_CSV_HPP
#define DISTRICTCOOL_CSV_HPP

#include <string>
#include <vector>

namespace dcool {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Serializes a double with 17 significant digits so re-parsing is exact.
std::string format_full(double v);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace dcool

#endif
