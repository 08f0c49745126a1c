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

// Server-issued identifiers: prefix + 16 lowercase hex chars, e.g. "drf_9f1c...".
std::string new_id(std::string_view prefix);

// Agent bearer secret: "opk_" + base62 encoding of 32 random bytes.
std::string new_agent_secret();

}  // namespace openport
