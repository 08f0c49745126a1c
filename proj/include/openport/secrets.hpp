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

#include <string>
#include <string_view>

namespace openport {

inline constexpr std::string_view kTokenPrefix = "opk_";

// Heuristic secret detection shared by envelopes and the audit sink: the agent
// token prefix, or any run of >= 32 base62 characters mixing letters and digits.
bool looks_like_secret(std::string_view text);

// Replaces every detected secret run with "[SECRET]".
std::string scrub_secrets(std::string_view text);

}  // namespace openport
