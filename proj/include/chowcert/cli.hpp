#pragma once

// Command-line front end: orchestrates the fibre, complex, quotient,
// genus-2, torsion, and surjectivity computations and emits deterministic
// reports, either human-readable or as JSON with a fixed key order.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chowcert/boundary.hpp"
#include "chowcert/chowcx.hpp"
#include "chowcert/fibre.hpp"
#include "chowcert/pch.hpp"
#include "chowcert/polygon.hpp"
#include "chowcert/surface.hpp"

namespace chowcert {

inline constexpr const char* kToolName = "chowcert";
inline constexpr const char* kToolVersion = "0.1.0";

// Envelope around every subcommand's output. Keys are emitted in the fixed
// order tool, version, command, parameters, multiplicity_profile, outcome,
// payload, elapsed_seconds; the elapsed time sits outside the payload so
// that payloads are bit-identical across runs.
struct RunReport {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::string profile = "default";
  std::string outcome = "pass";
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  double elapsed_seconds = 0.0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["parameters"] = parameters;
    j["multiplicity_profile"] = profile;
    j["outcome"] = outcome;
    j["payload"] = payload;
    j["elapsed_seconds"] = elapsed_seconds;
    return j;
  }
};

namespace detail {

struct SweepRange {
  std::string name;
  int lo = 0;
  int hi = 0;
};

inline std::vector<SweepRange> parse_sweep(const std::string& spec) {
  std::vector<SweepRange> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    const auto dots = part.find("..");
    if (eq == std::string::npos || dots == std::string::npos || dots < eq)
      throw precondition_error("malformed sweep specification: " + part);
    SweepRange r;
    r.name = part.substr(0, eq);
    if (r.name != "k1" && r.name != "k2")
      throw precondition_error("sweep variables must be k1 or k2");
    try {
      r.lo = std::stoi(part.substr(eq + 1, dots - eq - 1));
      r.hi = std::stoi(part.substr(dots + 2));
    } catch (const std::exception&) {
      throw precondition_error("malformed sweep bounds: " + part);
    }
    if (r.lo > r.hi) throw precondition_error("empty sweep range: " + part);
    for (const auto& prev : out)
      if (prev.name == r.name) throw precondition_error("duplicate sweep variable: " + r.name);
    out.push_back(r);
  }
  if (out.empty()) throw precondition_error("empty sweep specification");
  return out;
}

// Grid of (k1, k2) points; listed sweep ranges vary (first listed is the
// outer loop), unswept coordinates stay at their flag values.
inline std::vector<std::pair<int, int>> sweep_points(const std::string& spec, int k1, int k2) {
  if (spec.empty()) return {{k1, k2}};
  auto ranges = parse_sweep(spec);
  auto point = [&](int outer_val, const SweepRange& outer, int inner_val,
                   const SweepRange* inner) {
    int p1 = k1, p2 = k2;
    (outer.name == "k1" ? p1 : p2) = outer_val;
    if (inner) (inner->name == "k1" ? p1 : p2) = inner_val;
    return std::make_pair(p1, p2);
  };
  std::vector<std::pair<int, int>> pts;
  if (ranges.size() == 1) {
    for (int v = ranges[0].lo; v <= ranges[0].hi; ++v)
      pts.push_back(point(v, ranges[0], 0, nullptr));
  } else {
    for (int v0 = ranges[0].lo; v0 <= ranges[0].hi; ++v0)
      for (int v1 = ranges[1].lo; v1 <= ranges[1].hi; ++v1)
        pts.push_back(point(v0, ranges[0], v1, &ranges[1]));
  }
  return pts;
}

}  // namespace detail

// Parses and executes one invocation. Returns the process exit code:
// 0 when every internal assertion passed, 1 when a mathematical assertion
// failed, 2 on usage or precondition errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"exact verification workbench for degenerate product surfaces"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  int k1 = 5, k2 = 5;
  long a = 2;
  int s = 0, r = 3, t = 3;
  bool json_mode = false;
  std::string out_path, profile_name = "default", sweep;

  app.add_flag("--json", json_mode, "emit the report as JSON");
  app.add_option("--out", out_path, "write the JSON report to this path");
  app.add_option("--multiplicity-profile", profile_name,
                 "component multiplicity profile (default | all-ones)")
      ->check(CLI::IsMember({"default", "all-ones"}));
  app.add_option("--sweep", sweep, "grid sweep such as k1=3..8,k2=3..8");

  std::string chosen;
  CLI::Option* torsion_k1 = nullptr;
  CLI::Option* torsion_k2 = nullptr;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                  const std::string& tag) {
    CLI::App* c = parent->add_subcommand(name, desc);
    c->fallthrough();
    // Parent callbacks run after child callbacks, so only leaves may tag.
    if (!tag.empty()) c->callback([&chosen, tag] { chosen = tag; });
    return c;
  };
  auto add_lengths = [&](CLI::App* c) {
    c->add_option("--k1", k1, "polygon length of the first factor");
    c->add_option("--k2", k2, "polygon length of the second factor");
  };

  CLI::App* fibre_cmd = app.add_subcommand("fibre", "special fibre combinatorics");
  fibre_cmd->fallthrough();
  fibre_cmd->require_subcommand(1);
  add_lengths(leaf(fibre_cmd, "stats", "component, curve, and point counts", "fibre stats"));

  CLI::App* complex_cmd = app.add_subcommand("complex", "double complex consistency");
  complex_cmd->fallthrough();
  complex_cmd->require_subcommand(1);
  add_lengths(leaf(complex_cmd, "verify", "exact composite and weighted-sum identities",
                   "complex verify"));

  CLI::App* pch_cmd = app.add_subcommand("pch", "kernel-modulo-image quotient");
  pch_cmd->fallthrough();
  pch_cmd->require_subcommand(1);
  add_lengths(leaf(pch_cmd, "dim", "quotient dimension", "pch dim"));
  add_lengths(leaf(pch_cmd, "generators", "generator cycles and their coordinates",
                   "pch generators"));

  CLI::App* genus2 = leaf(&app, "genus2", "genus-2 model divisor solve", "");
  genus2->require_subcommand(1);
  CLI::App* genus2_solve =
      leaf(genus2, "solve", "function divisor coefficients on the chain graph", "genus2 solve");
  genus2_solve->add_option("--r", r, "length of the first polygon chain");
  genus2_solve->add_option("--s", s, "length of the connecting chain");
  genus2_solve->add_option("--t", t, "length of the second polygon chain");

  CLI::App* torsion = leaf(&app, "torsion", "torsion pairing certificates", "");
  torsion->require_subcommand(1);
  CLI::App* torsion_check =
      leaf(torsion, "check", "anti-isometry, dual composite, and projection kernel",
           "torsion check");
  torsion_check->add_option("--a", a, "isogeny multiplier");
  torsion_k1 = torsion_check->add_option("--k1", k1, "polygon length (defaults to a^2+1)");
  torsion_k2 = torsion_check->add_option("--k2", k2, "polygon length (defaults to a^2+1)");

  CLI::App* surj = leaf(&app, "surjectivity", "boundary surjectivity certificate", "surjectivity");
  add_lengths(surj);
  surj->add_option("--a", a, "isogeny multiplier");
  surj->add_option("--s", s, "connecting chain length of the genus-2 model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const MultiplicityProfile profile = profile_name == "all-ones"
                                          ? MultiplicityProfile::all_ones
                                          : MultiplicityProfile::blowup_default;

  RunReport report;
  report.command = chosen;
  report.profile = profile_name;

  // Parameters relevant to the chosen subcommand; recorded before execution
  // so error reports still carry them.
  if (chosen == "fibre stats" || chosen == "complex verify" || chosen == "pch dim" ||
      chosen == "pch generators") {
    report.parameters = {{"k1", k1}, {"k2", k2}};
    if (!sweep.empty()) report.parameters["sweep"] = sweep;
  } else if (chosen == "genus2 solve") {
    report.parameters = {{"r", r}, {"s", s}, {"t", t}};
  } else if (chosen == "torsion check") {
    const long n = a * a + 1;
    if (torsion_k1->count() == 0) k1 = static_cast<int>(n);
    if (torsion_k2->count() == 0) k2 = static_cast<int>(n);
    report.parameters = {{"a", a}, {"k1", k1}, {"k2", k2}};
  } else if (chosen == "surjectivity") {
    report.parameters = {{"k1", k1}, {"k2", k2}, {"a", a}, {"s", s}};
  }

  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (!sweep.empty() && chosen != "fibre stats" && chosen != "complex verify" &&
        chosen != "pch dim")
      throw precondition_error(
          "--sweep is supported for fibre stats, complex verify, and pch dim only");

    auto over_grid = [&](auto&& single) {
      // single(k1, k2) -> (payload, pass)
      if (sweep.empty()) {
        auto [payload, pass] = single(k1, k2);
        report.payload = std::move(payload);
        report.outcome = pass ? "pass" : "fail";
        return;
      }
      auto points = nlohmann::ordered_json::array();
      bool all_pass = true;
      for (const auto& [p1, p2] : detail::sweep_points(sweep, k1, k2)) {
        auto [payload, pass] = single(p1, p2);
        nlohmann::ordered_json entry = {{"k1", p1}, {"k2", p2}};
        entry.update(payload);
        points.push_back(std::move(entry));
        all_pass = all_pass && pass;
      }
      report.payload = {{"points", std::move(points)}};
      report.outcome = all_pass ? "pass" : "fail";
    };

    if (chosen == "fibre stats") {
      over_grid([&](int p1, int p2) {
        ProductFibre f(p1, p2, profile);
        return std::make_pair(fibre_summary_json(f), true);
      });
    } else if (chosen == "complex verify") {
      over_grid([&](int p1, int p2) {
        ComplexVerifyReport rep = verify_complex(ProductFibre(p1, p2, profile));
        return std::make_pair(rep.to_json(), rep.holds());
      });
    } else if (chosen == "pch dim") {
      over_grid([&](int p1, int p2) {
        PchSpace space(ProductFibre(p1, p2, profile));
        nlohmann::ordered_json payload = {{"dim", space.quotient_dim()}};
        return std::make_pair(payload, true);
      });
    } else if (chosen == "pch generators") {
      PchSpace space(ProductFibre(k1, k2, profile));
      report.payload = space.summary_json();
      report.outcome = space.quotient_dim() == 3 ? "pass" : "fail";
    } else if (chosen == "genus2 solve") {
      ClosedFormReport rep = closed_form_check(r, s, t);
      report.payload = rep.to_json();
      report.outcome = rep.matches ? "pass" : "fail";
    } else if (chosen == "torsion check") {
      AntiisometryReport anti = antiisometry_check(a, k1, k2);
      DualCompositeReport dual = dual_composite_check(a, k1, k2);
      FreyKaniReport kernel = frey_kani_kernel_check(a, a * a + 1);
      report.payload = {{"antiisometry", anti.to_json()},
                        {"dual_composite", dual.to_json()},
                        {"projection_kernel", kernel.to_json()}};
      const bool pass = anti.holds && dual.is_mult_by_n_minus_1 && kernel.equals_graph &&
                        kernel.kernel_size == (a * a + 1) * (a * a + 1);
      report.outcome = pass ? "pass" : "fail";
    } else if (chosen == "surjectivity") {
      SurjectivityCertificate cert = surjectivity_certificate(k1, k2, a, s);
      report.payload = cert.to_json();
      report.outcome = cert.surjective() && cert.all_checks_pass() ? "pass" : "fail";
    }
    code = report.outcome == "pass" ? 0 : 1;
  } catch (const precondition_error& e) {
    report.outcome = "error";
    report.payload = {{"message", e.what()}};
    code = 2;
  } catch (const consistency_error& e) {
    report.outcome = "fail";
    report.payload = {{"message", e.what()}};
    code = 1;
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string dumped = report.to_json().dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) {
      err << "error: cannot open output path " << out_path << "\n";
      return 2;
    }
    file << dumped;
    if (!json_mode) out << "report written to " << out_path << "\n";
  } else if (json_mode) {
    out << dumped;
  } else {
    out << kToolName << " " << kToolVersion << " :: " << report.command << "\n";
    out << "parameters: " << report.parameters.dump() << "\n";
    out << "outcome: " << report.outcome << "\n";
    out << "payload: " << report.payload.dump(2) << "\n";
  }
  if (report.outcome == "error") err << "error: " << report.payload["message"].get<std::string>() << "\n";
  return code;
}

}  // namespace chowcert
