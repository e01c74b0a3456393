// Copyright 2026 The qstance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File, JSON-lines and CSV plumbing shared by all stages. Stage outputs are
// written to a temporary sibling and renamed into place so that a crashed
// stage never leaves a truncated file behind.

#ifndef QSTANCE_UTIL_IO_H_
#define QSTANCE_UTIL_IO_H_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qstance {

using Json = nlohmann::json;

std::string ReadFile(const std::string &path);
void WriteFileAtomic(const std::string &path, std::string_view contents);
bool FileExists(const std::string &path);

// Calls `fn(line, line_number)` for every non-blank line (1-based numbers).
void ForEachLine(const std::string &path,
                 const std::function<void(std::string_view, size_t)> &fn);

std::vector<Json> ReadJsonLines(const std::string &path);
std::string DumpJsonLines(const std::vector<Json> &rows);
void WriteJsonLines(const std::string &path, const std::vector<Json> &rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or -1.
  int Column(std::string_view name) const;
};

CsvTable ParseCsv(std::string_view text);
CsvTable ReadCsv(const std::string &path);
std::string FormatCsv(const CsvTable &table);
void WriteCsv(const std::string &path, const CsvTable &table);

// Fixed-point formatting used for every number written to CSV, so reports
// are byte-stable across platforms.
std::string FormatFixed(double value, int decimals);

std::string JoinPath(const std::string &dir, const std::string &name);
void EnsureDirectory(const std::string &dir);

}  // namespace qstance

#endif  // QSTANCE_UTIL_IO_H_
