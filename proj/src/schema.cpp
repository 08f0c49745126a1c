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

#include "openport/schema.hpp"

#include "openport/clock.hpp"

namespace openport {

namespace {

bool type_matches(const std::string& type, const json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
  if (type == "number") return v.is_number();
  return false;
}

std::optional<std::string> check(const json& schema, const json& v, const std::string& path) {
  if (!schema.is_object()) return std::nullopt;

  if (auto t = schema.find("type"); t != schema.end() && t->is_string()) {
    if (!type_matches(t->get<std::string>(), v)) return path + ": expected " + t->get<std::string>();
  }
  if (auto e = schema.find("enum"); e != schema.end() && e->is_array()) {
    bool found = false;
    for (const auto& candidate : *e) found |= candidate == v;
    if (!found) return path + ": value not in enum";
  }
  if (v.is_string()) {
    const auto len = v.get_ref<const std::string&>().size();
    if (auto m = schema.find("minLength"); m != schema.end() && m->is_number_unsigned() && len < m->get<std::size_t>()) {
      return path + ": string too short";
    }
    if (auto m = schema.find("maxLength"); m != schema.end() && m->is_number_unsigned() && len > m->get<std::size_t>()) {
      return path + ": string too long";
    }
    if (auto f = schema.find("format"); f != schema.end() && f->is_string()) {
      const auto& s = v.get_ref<const std::string&>();
      if (*f == "date" && !parse_date(s)) return path + ": expected YYYY-MM-DD date";
      if (*f == "date-time" && !parse_timestamp(s)) return path + ": expected RFC 3339 UTC timestamp";
    }
  }
  if (v.is_number()) {
    const double d = v.get<double>();
    if (auto m = schema.find("minimum"); m != schema.end() && m->is_number() && d < m->get<double>()) {
      return path + ": below minimum";
    }
    if (auto m = schema.find("maximum"); m != schema.end() && m->is_number() && d > m->get<double>()) {
      return path + ": above maximum";
    }
  }
  if (v.is_object()) {
    const auto props = schema.find("properties");
    if (auto r = schema.find("required"); r != schema.end() && r->is_array()) {
      for (const auto& name : *r) {
        if (name.is_string() && !v.contains(name.get<std::string>())) return path + ": missing " + name.get<std::string>();
      }
    }
    const auto extra = schema.find("additionalProperties");
    const bool closed = extra != schema.end() && extra->is_boolean() && !extra->get<bool>();
    for (const auto& [key, child] : v.items()) {
      if (props != schema.end() && props->is_object() && props->contains(key)) {
        if (auto err = check(props->at(key), child, path + "." + key)) return err;
      } else if (closed) {
        return path + ": unexpected property " + key;
      }
    }
  }
  if (v.is_array()) {
    if (auto m = schema.find("maxItems"); m != schema.end() && m->is_number_unsigned() && v.size() > m->get<std::size_t>()) {
      return path + ": too many items";
    }
    if (auto items = schema.find("items"); items != schema.end()) {
      std::size_t i = 0;
      for (const auto& child : v) {
        if (auto err = check(*items, child, path + "[" + std::to_string(i++) + "]")) return err;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_schema(const json& schema, const json& value) { return check(schema, value, "$"); }

}  // namespace openport
