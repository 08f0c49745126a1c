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

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace openport {

using json = nlohmann::json;

class CanonicalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RFC 8785 (JCS) output for one JSON value.
struct CanonicalBytes {
  std::string bytes;
  auto operator<=>(const CanonicalBytes&) const = default;
};

/// Lowercase hex SHA-256 digest, always 64 characters.
class Digest {
 public:
  /// Throws std::invalid_argument unless `hex` is 64 lowercase hex characters.
  explicit Digest(std::string hex);

  static bool is_valid_hex(std::string_view hex);

  const std::string& hex() const { return hex_; }
  auto operator<=>(const Digest&) const = default;

 private:
  std::string hex_;
};

/// JCS canonicalization: UTF-16 ordered object keys, ECMAScript number
/// formatting, minimal string escaping. Throws CanonicalizationError for
/// non-finite numbers, invalid UTF-8, or binary values.
CanonicalBytes canonicalize(const json& value);

/// ECMAScript Number.prototype.toString for finite doubles.
std::string format_number(double value);

Digest sha256(std::string_view bytes);

/// Hash binding a tool name, its payload, and the server-computed impact summary.
/// The triple is hashed as the canonical object {action, payload, impact}.
Digest preflight_hash(std::string_view tool_name, const json& payload, const json& impact);

/// Hash of a state witness snapshot.
Digest witness_hash(const json& witness);

}  // namespace openport
