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

#include "openport/ids.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

#include "openport/secrets.hpp"

namespace openport {

namespace {

template <std::size_t N>
std::array<unsigned char, N> random_bytes() {
  std::array<unsigned char, N> out{};
  if (RAND_bytes(out.data(), static_cast<int>(N)) != 1) throw std::runtime_error("RAND_bytes failed");
  return out;
}

}  // namespace

std::string new_id(std::string_view prefix) {
  static constexpr char kHex[] = "0123456789abcdef";
  auto bytes = random_bytes<8>();
  std::string id(prefix);
  for (auto b : bytes) {
    id.push_back(kHex[b >> 4]);
    id.push_back(kHex[b & 0xF]);
  }
  return id;
}

std::string new_agent_secret() {
  static constexpr char kAlphabet[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  auto bytes = random_bytes<32>();
  // Big-endian base conversion by repeated division.
  std::vector<unsigned> num(bytes.begin(), bytes.end());
  std::string digits;
  while (std::any_of(num.begin(), num.end(), [](unsigned v) { return v != 0; })) {
    unsigned rem = 0;
    for (auto& v : num) {
      unsigned cur = rem * 256 + v;
      v = cur / 62;
      rem = cur % 62;
    }
    digits.push_back(kAlphabet[rem]);
  }
  // 32 bytes always fit in 43 base62 digits; pad so every secret has the same length.
  while (digits.size() < 43) digits.push_back('0');
  std::reverse(digits.begin(), digits.end());
  return std::string(kTokenPrefix) + digits;
}

}  // namespace openport
