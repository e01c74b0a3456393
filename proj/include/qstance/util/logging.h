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

#ifndef QSTANCE_UTIL_LOGGING_H_
#define QSTANCE_UTIL_LOGGING_H_

#include <string>

namespace qstance {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kQuiet = 4 };

void SetLogLevel(LogLevel level);
LogLevel GetLogLevel();

// Thread-safe; writes one line to stderr.
void Log(LogLevel level, const std::string &message);

inline void LogInfo(const std::string &m) { Log(LogLevel::kInfo, m); }
inline void LogWarning(const std::string &m) { Log(LogLevel::kWarning, m); }

}  // namespace qstance

#endif  // QSTANCE_UTIL_LOGGING_H_
