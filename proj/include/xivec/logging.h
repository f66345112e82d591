// include/xivec/logging.h

// Copyright 2026  Xivec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef XIVEC_LOGGING_H_
#define XIVEC_LOGGING_H_

#include <string>

namespace xivec {
namespace log {

enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold comes from the XIVEC_LOG environment variable
// (error|warn|info|debug or 0..3); defaults to info. Messages go to stderr.
Level threshold();
void emit(Level level, const std::string &msg);

inline void error(const std::string &msg) { emit(Level::kError, msg); }
inline void warn(const std::string &msg) { emit(Level::kWarn, msg); }
inline void info(const std::string &msg) { emit(Level::kInfo, msg); }
inline void debug(const std::string &msg) { emit(Level::kDebug, msg); }

}  // namespace log
}  // namespace xivec

#endif  // XIVEC_LOGGING_H_
