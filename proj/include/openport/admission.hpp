// Copyright 2026 The OpenPort Authors
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

#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "openport/clock.hpp"

namespace openport {

struct AdmissionConfig {
  std::chrono::seconds window{60};
  std::uint32_t limit = 240;
};

struct Admission {
  bool admitted = true;
  int retry_after_seconds = 0;  // set on denial, >= 1
};

/// Fixed-window limiter keyed by "agent:{keyId}:{ip}". A window opens at the
/// first request seen for a bucket, not on wall-clock minute boundaries.
class AdmissionController {
 public:
  explicit AdmissionController(AdmissionConfig cfg = {}) : cfg_(cfg) {}

  Admission admit(std::string_view key_id, std::string_view ip, Timestamp now);

  static std::string bucket_key(std::string_view key_id, std::string_view ip);

  std::size_t bucket_count() const;
  const AdmissionConfig& config() const { return cfg_; }

 private:
  struct Bucket {
    Timestamp window_start{};
    std::uint32_t count = 0;
  };

  void sweep_locked(Timestamp now);

  AdmissionConfig cfg_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, Bucket> buckets_;
};

}  // namespace openport
