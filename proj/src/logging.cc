// src/logging.cc

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

#include "xivec/logging.h"

#include <cstdlib>
#include <iostream>
#include <string>

namespace xivec {
namespace log {

namespace {

Level parse_env() {
  const char *env = std::getenv("XIVEC_LOG");
  if (env == nullptr) return Level::kInfo;
  const std::string v(env);
  if (v == "error" || v == "0") return Level::kError;
  if (v == "warn" || v == "1") return Level::kWarn;
  if (v == "info" || v == "2") return Level::kInfo;
  if (v == "debug" || v == "3") return Level::kDebug;
  return Level::kInfo;
}

const char *tag(Level level) {
  switch (level) {
    case Level::kError: return "ERROR";
    case Level::kWarn: return "WARN";
    case Level::kInfo: return "INFO";
    case Level::kDebug: return "DEBUG";
  }
  return "?";
}

}  // namespace

Level threshold() {
  static const Level cached = parse_env();
  return cached;
}

void emit(Level level, const std::string &msg) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  std::cerr << "xivec " << tag(level) << ": " << msg << std::endl;
}

}  // namespace log
}  // namespace xivec
