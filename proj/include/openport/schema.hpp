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

#include <optional>
#include <string>

#include "json.hpp"

namespace openport {

using json = nlohmann::json;

// Structural validation against the JSON Schema subset used by tool and
// endpoint schemas: type, properties, required, additionalProperties (bool),
// items, enum, minLength/maxLength, minimum/maximum, maxItems, and
// format "date" / "date-time". Returns the first violation as "<path>: <reason>".
std::optional<std::string> validate_schema(const json& schema, const json& value);

}  // namespace openport
