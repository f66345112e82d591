// include/xivec/config.h

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

#ifndef XIVEC_CONFIG_H_
#define XIVEC_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xivec/error.h"

namespace xivec {

// key = value text configs; '#' starts a comment, blank lines are skipped.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string &path);
  static KeyValueConfig from_string(const std::string &text,
                                    const std::string &origin = "<string>");

  bool has(const std::string &key) const { return kv_.count(key) > 0; }
  std::string get_string(const std::string &key) const;
  std::string get_string(const std::string &key,
                         const std::string &fallback) const;
  int get_int(const std::string &key, int fallback) const;
  int require_int(const std::string &key) const;
  double get_double(const std::string &key, double fallback) const;
  bool get_bool(const std::string &key, bool fallback) const;
  uint64_t get_u64(const std::string &key, uint64_t fallback) const;
  // Comma-separated list, each entry trimmed.
  std::vector<std::string> get_list(const std::string &key) const;

  // Sub-config of every "prefix.xyz" key with the prefix stripped.
  KeyValueConfig sub(const std::string &prefix) const;

  std::vector<std::string> keys() const;
  const std::string &origin() const { return origin_; }

 private:
  std::map<std::string, std::string> kv_;
  std::string origin_;
};

}  // namespace xivec

#endif  // XIVEC_CONFIG_H_
