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

#include "openport/envelope.hpp"

#include <algorithm>

#include "openport/secrets.hpp"

namespace openport {

namespace {

using enum RetryClass;

constexpr std::array<ReasonCode, 22> kRegistry{{
    {codes::kOk, 200, SuccessEquivalent},
    {codes::kTokenInvalid, 401, Stop},
    {codes::kTokenExpired, 401, Stop},
    {codes::kScopeDenied, 403, RefreshDiscovery},
    {codes::kPolicyDenied, 403, Operator},
    {codes::kForbidden, 403, Operator},
    {codes::kActionUnknown, 404, RefreshDiscovery},
    {codes::kActionInvalid, 422, RefreshDiscovery},
    {codes::kPreflightRequired, 409, RePreflight},
    {codes::kPreflightMismatch, 409, RePreflight},
    {codes::kPreflightNotFound, 404, RePreflight},
    {codes::kPreconditionFailed, 409, RePreflight},
    {codes::kIdempotencyRequired, 409, RePreflight},
    {codes::kIdempotencyReplay, 200, SuccessEquivalent},
    {codes::kAutoExecuteDisabled, 403, Operator},
    {codes::kAutoExecuteExpired, 403, Operator},
    {codes::kAutoExecuteDenied, 403, Operator},
    {codes::kDraftNotFound, 404, Stop},
    {codes::kDraftAlreadyFinal, 409, Stop},
    {codes::kStepUpRequired, 403, Operator},
    {codes::kStepUpInvalid, 403, Operator},
    {codes::kRateLimited, 429, Backoff},
}};

bool valid_code_shape(const json& j) {
  if (!j.is_string()) return false;
  return is_registered(j.get_ref<const std::string&>());
}

json scrub(json value) {
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (looks_like_secret(s)) return scrub_secrets(s);
    return value;
  }
  if (value.is_object() || value.is_array()) {
    for (auto& child : value) child = scrub(std::move(child));
  }
  return value;
}

}  // namespace

std::string_view to_string(RetryClass rc) {
  switch (rc) {
    case Stop: return "stop";
    case RefreshDiscovery: return "refresh-discovery";
    case Operator: return "operator";
    case Backoff: return "backoff";
    case SuccessEquivalent: return "success-equivalent";
    case RePreflight: return "re-preflight";
  }
  return "stop";
}

std::span<const ReasonCode> reason_codes() { return kRegistry; }

const ReasonCode& reason(std::string_view id) {
  auto it = std::find_if(kRegistry.begin(), kRegistry.end(), [&](const ReasonCode& rc) { return rc.id == id; });
  if (it == kRegistry.end()) throw std::out_of_range("unregistered reason code: " + std::string(id));
  return *it;
}

bool is_registered(std::string_view id) {
  return std::any_of(kRegistry.begin(), kRegistry.end(), [&](const ReasonCode& rc) { return rc.id == id; });
}

std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::Authn: return "authn";
    case Predicate::Net: return "net";
    case Predicate::Rate: return "rate";
    case Predicate::Scope: return "scope";
    case Predicate::Policy: return "policy";
    case Predicate::Boundary: return "boundary";
  }
  return "authn";
}

const ReasonCode& code_for_first_failure(Predicate p, bool credential_expired) {
  switch (p) {
    case Predicate::Authn: return reason(credential_expired ? codes::kTokenExpired : codes::kTokenInvalid);
    case Predicate::Net: return reason(codes::kPolicyDenied);
    case Predicate::Rate: return reason(codes::kRateLimited);
    case Predicate::Scope: return reason(codes::kScopeDenied);
    case Predicate::Policy: return reason(codes::kPolicyDenied);
    case Predicate::Boundary: return reason(codes::kForbidden);
  }
  return reason(codes::kTokenInvalid);
}

int Denial::status() const { return http_status != 0 ? http_status : reason(code).http_status; }

Denial deny(std::string_view code, std::string message, std::optional<json> details) {
  // Throws on unregistered codes so a typo can never reach the wire.
  (void)reason(code);
  return Denial{std::string(code), std::move(message), std::move(details), 0};
}

json bound_details(json details) {
  auto serialized = details.dump(-1, ' ', false, json::error_handler_t::replace);
  if (serialized.size() <= kMaxDetailsBytes) return details;
  return json{{"truncated", true}, {"originalBytes", serialized.size()}};
}

json Envelope::to_json() const {
  json j = json::object();
  j["ok"] = ok;
  j["code"] = code;
  if (ok) {
    j["data"] = data;
  } else {
    j["message"] = scrub_secrets(message);
    if (details) j["details"] = bound_details(scrub(*details));
  }
  return j;
}

std::string Envelope::dump() const { return to_json().dump(-1, ' ', false, json::error_handler_t::replace); }

std::optional<Envelope> Envelope::from_json(const json& j) {
  if (!j.is_object()) return std::nullopt;
  auto ok_it = j.find("ok");
  if (ok_it == j.end() || !ok_it->is_boolean()) return std::nullopt;
  auto code_it = j.find("code");
  if (code_it == j.end() || !valid_code_shape(*code_it)) return std::nullopt;

  Envelope e;
  e.ok = ok_it->get<bool>();
  e.code = code_it->get<std::string>();
  if (e.ok) {
    if (j.size() != 3 || !j.contains("data")) return std::nullopt;
    e.data = j.at("data");
    return e;
  }
  auto msg_it = j.find("message");
  if (msg_it == j.end() || !msg_it->is_string()) return std::nullopt;
  e.message = msg_it->get<std::string>();
  std::size_t expected = 3;
  if (auto d = j.find("details"); d != j.end()) {
    e.details = *d;
    ++expected;
  }
  if (j.size() != expected) return std::nullopt;
  return e;
}

std::optional<Envelope> Envelope::parse(std::string_view body) {
  json j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return from_json(j);
}

Envelope wrap_success(std::string_view code, json data) {
  (void)reason(code);
  Envelope e;
  e.ok = true;
  e.code = std::string(code);
  e.data = data.is_null() ? json::object() : std::move(data);
  return e;
}

Envelope wrap_success(json data) { return wrap_success(codes::kOk, std::move(data)); }

Envelope wrap_error(std::string_view code, std::string message, std::optional<json> details) {
  (void)reason(code);
  Envelope e;
  e.ok = false;
  e.code = std::string(code);
  e.message = std::move(message);
  e.details = std::move(details);
  return e;
}

Envelope wrap_error(const Denial& d) { return wrap_error(d.code, d.message, d.details); }

}  // namespace openport
