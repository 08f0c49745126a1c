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

#include "openport/admission.hpp"

namespace openport {

namespace {
// Expired buckets are dropped once the table grows past this, so a flood of
// distinct source addresses cannot grow memory without bound across windows.
constexpr std::size_t kSweepThreshold = 4096;
}  // namespace

std::string AdmissionController::bucket_key(std::string_view key_id, std::string_view ip) {
  std::string k = "agent:";
  k += key_id;
  k += ':';
  k += ip;
  return k;
}

Admission AdmissionController::admit(std::string_view key_id, std::string_view ip, Timestamp now) {
  const auto window = std::chrono::duration_cast<std::chrono::milliseconds>(cfg_.window);
  std::lock_guard lock(mu_);
  if (buckets_.size() >= kSweepThreshold) sweep_locked(now);

  auto& b = buckets_[bucket_key(key_id, ip)];
  if (b.count == 0 || now - b.window_start >= window) {
    b.window_start = now;
    b.count = 0;
  }
  if (b.count < cfg_.limit) {
    ++b.count;
    return {};
  }
  const auto remaining = b.window_start + window - now;
  const auto secs = (remaining.count() + 999) / 1000;
  return {false, static_cast<int>(secs < 1 ? 1 : secs)};
}

void AdmissionController::sweep_locked(Timestamp now) {
  const auto window = std::chrono::duration_cast<std::chrono::milliseconds>(cfg_.window);
  std::erase_if(buckets_, [&](const auto& kv) { return now - kv.second.window_start >= window; });
}

std::size_t AdmissionController::bucket_count() const {
  std::lock_guard lock(mu_);
  return buckets_.size();
}

}  // namespace openport
