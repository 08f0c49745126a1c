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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace openport {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Date = std::chrono::year_month_day;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override;
};

/// Test clock; starts at the given instant and only moves when told to.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start) : ms_(start.time_since_epoch().count()) {}

  Timestamp now() const override { return Timestamp(std::chrono::milliseconds(ms_.load())); }
  void set(Timestamp t) { ms_.store(t.time_since_epoch().count()); }
  void advance(std::chrono::milliseconds d) { ms_.fetch_add(d.count()); }

 private:
  std::atomic<std::int64_t> ms_;
};

/// RFC 3339 UTC with millisecond precision, e.g. "2026-02-15T00:00:00.000Z".
std::string format_timestamp(Timestamp t);
/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff]Z".
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "YYYY-MM-DD".
std::string format_date(Date d);
std::optional<Date> parse_date(std::string_view text);
Date date_of(Timestamp t);

/// Whole days from `start` to `end` (negative if end precedes start).
int days_between(Date start, Date end);

}  // namespace openport
