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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "http_transport.hpp"
#include "openport/conformance.hpp"

#ifndef OPENPORT_DEFAULT_PROFILE
#define OPENPORT_DEFAULT_PROFILE "profiles/core-v1.json"
#endif

namespace cf = openport::conformance;

namespace {

struct Target {
  std::optional<cf::LocalTarget> local;
  cf::Transport transport;
  std::string token;
};

// Local mode when no base URL is given; remote mode needs both URL and token.
std::optional<Target> make_target(const std::string& base_url, const std::string& token) {
  Target t;
  if (base_url.empty()) {
    if (!token.empty()) {
      std::cerr << "--token given without --base-url\n";
      return std::nullopt;
    }
    t.local.emplace();
    t.transport = t.local->transport();
    t.token = t.local->agent_token();
    return t;
  }
  if (token.empty()) {
    std::cerr << "remote mode requires --token\n";
    return std::nullopt;
  }
  t.transport = openport::tools::http_transport(base_url);
  t.token = token;
  return t;
}

void write_report(const std::string& path, const openport::json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write report to " << path << "\n";
    return;
  }
  out << j.dump(2) << '\n';
  std::cout << "report written to " << path << '\n';
}

void print_fuzz(const cf::FuzzReport& r) {
  std::cout << "fuzz: " << r.total << " requests, " << r.count_5xx << " 5xx, " << r.count_envelope_violations
            << " envelope violations, " << (r.pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& f : r.failures) std::cout << "  " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OpenPort conformance kit"};
  app.require_subcommand(1);

  std::string profile_path, base_url, token, report_path;
  auto* run = app.add_subcommand("run", "Run a conformance profile against a local or remote target");
  run->add_option("--profile", profile_path, "Profile JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--base-url", base_url, "Remote server, e.g. http://127.0.0.1:8080 (local mode if omitted)");
  run->add_option("--token", token, "Agent bearer token for remote mode");
  run->add_option("--report", report_path, "JSON report path")->default_val("conformance-report.json");

  std::size_t count = 80;
  std::uint64_t seed = 1;
  auto* fuzz = app.add_subcommand("fuzz", "Send a seeded corpus of malformed requests");
  fuzz->add_option("--count", count, "Corpus size")->check(CLI::Range(80, 1000000));
  fuzz->add_option("--seed", seed, "PRNG seed");
  fuzz->add_option("--base-url", base_url, "Remote server (local mode if omitted)");
  fuzz->add_option("--token", token, "Agent bearer token for remote mode");
  fuzz->add_option("--report", report_path, "JSON report path")->default_val("fuzz-report.json");

  std::string ctest_dir;
  std::string gate_profile = OPENPORT_DEFAULT_PROFILE;
  auto* gate = app.add_subcommand("gate", "Unit suites, core profile, fuzz and reason-code regressions");
  gate->add_option("--ctest-dir", ctest_dir, "Build tree whose unit and property suites run first");
  gate->add_option("--profile", gate_profile, "Core profile file")->check(CLI::ExistingFile);
  gate->add_option("--seed", seed, "Fuzz seed");
  gate->add_option("--report", report_path, "JSON report path")->default_val("gate-report.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto profile = cf::ConformanceProfile::load(profile_path);
      if (!profile.enabled) std::cout << "note: profile " << profile.name << " is an extension and not enabled by default\n";
      auto target = make_target(base_url, token);
      if (!target) return 2;
      const auto report = cf::run_profile(profile, target->transport, target->token);
      std::cout << report.summary();
      write_report(report_path, report.to_json());
      return report.pass() ? 0 : 1;
    }
    if (*fuzz) {
      auto target = make_target(base_url, token);
      if (!target) return 2;
      const auto report = cf::run_fuzz(target->transport, target->token, count, seed);
      print_fuzz(report);
      write_report(report_path, report.to_json());
      return report.pass() ? 0 : 1;
    }

    // gate
    bool ok = true;
    openport::json out = openport::json::object();
    if (!ctest_dir.empty()) {
      const std::string cmd = "ctest --test-dir \"" + ctest_dir + "\" --output-on-failure -E '^gate$'";
      const int rc = std::system(cmd.c_str());
      std::cout << "unit and property suites: " << (rc == 0 ? "PASS" : "FAIL") << '\n';
      out["unitSuites"] = rc == 0;
      ok = ok && rc == 0;
    } else {
      std::cout << "unit and property suites: skipped (no --ctest-dir)\n";
    }

    cf::LocalTarget local;
    const auto core = cf::run_profile(cf::ConformanceProfile::load(gate_profile), local.transport(), local.agent_token());
    std::cout << core.summary();
    out["profile"] = core.to_json();
    ok = ok && core.pass();

    cf::LocalTarget fuzz_target;
    const auto fz = cf::run_fuzz(fuzz_target.transport(), fuzz_target.agent_token(), 80, seed);
    print_fuzz(fz);
    out["fuzz"] = fz.to_json();
    ok = ok && fz.pass();

    openport::json regs = openport::json::array();
    for (const auto& r : cf::run_reason_code_regressions()) {
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  observed: " << r.observed << '\n';
      regs.push_back({{"id", r.id}, {"pass", r.pass}, {"observed", r.observed}, {"expected", r.expected}});
      ok = ok && r.pass;
    }
    out["reasonCodes"] = regs;
    out["pass"] = ok;
    write_report(report_path, out);
    std::cout << "gate: " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
