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

#include "openport/secrets.hpp"

#include <cctype>
#include <cstddef>

namespace openport {

namespace {

constexpr std::size_t kMinSecretRun = 32;

bool is_base62(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// [begin, end) of the next suspicious run at or after `from`, or npos.
std::pair<std::size_t, std::size_t> next_secret(std::string_view text, std::size_t from) {
  std::size_t i = from;
  while (i < text.size()) {
    if (text.compare(i, kTokenPrefix.size(), kTokenPrefix) == 0) {
      std::size_t end = i + kTokenPrefix.size();
      while (end < text.size() && is_base62(text[end])) ++end;
      return {i, end};
    }
    if (!is_base62(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    bool upper = false, lower = false, digit = false;
    while (end < text.size() && is_base62(text[end])) {
      const auto c = static_cast<unsigned char>(text[end]);
      upper |= std::isupper(c) != 0;
      lower |= std::islower(c) != 0;
      digit |= std::isdigit(c) != 0;
      ++end;
    }
    // Lowercase hex (digests, identifiers) never has uppercase, so it passes.
    if (end - i >= kMinSecretRun && upper && lower && digit) return {i, end};
    i = end;
  }
  return {std::string_view::npos, std::string_view::npos};
}

}  // namespace

bool looks_like_secret(std::string_view text) { return next_secret(text, 0).first != std::string_view::npos; }

std::string scrub_secrets(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    auto [b, e] = next_secret(text, pos);
    if (b == std::string_view::npos) break;
    out.append(text.substr(pos, b - pos));
    out.append("[SECRET]");
    pos = e;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace openport
