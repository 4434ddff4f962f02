// strain-dec: command-line front end for the pointwise strain / stress-energy
// toolkit. Exit codes: 0 success, 1 verification failure, 2 usage or
// configuration error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "strain_dec/harness/campaign.hpp"
#include "strain_dec/strain_dec.hpp"

namespace {

using strain_dec::harness::json;
namespace sd = strain_dec;
namespace hs = strain_dec::harness;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

sd::PointGeometry load_geometry(const std::string& path, json* document = nullptr) {
  json j = hs::parse_json_file(path);
  const hs::FieldReader r(j, "");
  hs::require_schema_version(r);
  sd::PointGeometry geom = hs::geometry_from_json(r);
  if (document) *document = std::move(j);
  return geom;
}

int run_verify(const std::string& config_path, const std::string& out_path, int jobs) {
  const hs::CampaignConfig config = hs::campaign_config_from_json(hs::parse_json_file(config_path));
  const hs::CampaignReport report = hs::run_campaign(config, hs::effective_jobs(jobs));
  const std::string text = hs::to_json(report).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    hs::write_text_file(out_path, text);
  }
  std::cerr << "strain-dec verify: " << config.num_samples << " samples, "
            << report.failures() << " failures, " << report.fixtures.size() << " fixtures ("
            << report.duration_seconds << " s)\n";
  for (const auto& [name, c] : report.counts) {
    std::cerr << "  " << name << ": pass " << c.pass << ", fail " << c.fail << ", vacuous "
              << c.vacuous << ", warning " << c.warning << "\n";
  }
  return report.verification_failed() ? kExitVerificationFailure : kExitOk;
}

int run_invariants(const std::string& geometry_path) {
  const sd::PointGeometry geom = load_geometry(geometry_path);
  const sd::StrainTensor st = sd::strain(geom);
  const auto charpoly = sd::invariants_charpoly(st.D);
  const auto newton = sd::invariants_newton(st.D);
  const auto wedge = sd::invariants_wedge(st.D);
  const json out{{"charpoly", hs::vector_to_json(charpoly.s)},
                 {"newton", hs::vector_to_json(newton.s)},
                 {"wedge", hs::vector_to_json(wedge.s)},
                 {"power_sums", hs::vector_to_json(charpoly.p)},
                 {"rank_of_map", sd::rank_of_map(geom.dphi)},
                 {"rank_of_strain", charpoly.rank_estimate},
                 {"max_route_discrepancy", sd::route_discrepancy(st.D)}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_stress(const std::string& geometry_path, std::optional<int> degree, double step,
               bool richardson, double tol) {
  json document;
  const sd::PointGeometry geom = load_geometry(geometry_path, &document);
  sd::LagrangianConfig lagrangian;
  if (degree) {
    lagrangian.name = "elementary";
    lagrangian.degree = *degree;
  } else if (document.contains("lagrangian")) {
    lagrangian = hs::lagrangian_config_from_json(hs::FieldReader(document["lagrangian"], "/lagrangian"));
  }
  const sd::LagrangianSpec spec = sd::make_lagrangian(lagrangian);
  const sd::StressEnergy closed = degree ? sd::stress_sj(geom, *degree) : sd::stress_general(geom, spec);
  const sd::StressEnergy oracle = sd::stress_variational(geom, spec, {step, richardson, 3});
  const double residual = sd::stress_residual(closed, oracle);
  const json out{{"lagrangian", hs::to_json(lagrangian)},
                 {"closed_form", hs::to_json(closed.T)},
                 {"closed_form_provenance", std::string(sd::to_string(closed.provenance))},
                 {"variational", hs::to_json(oracle.T)},
                 {"scale", closed.scale},
                 {"relative_residual", residual},
                 {"tolerance", tol}};
  std::cout << out.dump(2) << "\n";
  return residual <= tol ? kExitOk : kExitVerificationFailure;
}

int run_replay(const std::string& fixture_path) {
  const hs::Fixture fixture = hs::load_fixture(fixture_path);
  const sd::DECVerdict verdict = hs::replay_fixture(fixture);
  const bool identical = hs::verdicts_identical(verdict, fixture.verdict);
  const json out{{"check", fixture.check},
                 {"verdict", hs::to_json(verdict)},
                 {"matches_recorded", identical}};
  std::cout << out.dump(2) << "\n";
  return identical ? kExitOk : kExitVerificationFailure;
}

int run_audit(const std::string& config_path, std::optional<int> samples,
              std::optional<std::uint64_t> seed) {
  const json j = hs::parse_json_file(config_path);
  const hs::FieldReader r(j, "");
  hs::require_schema_version(r);
  const sd::LagrangianSpec spec =
      sd::make_lagrangian(hs::lagrangian_config_from_json(r.object("lagrangian")));
  sd::DomainSampler sampler;
  sampler.dim = static_cast<int>(r.integer("m_plus_1"));
  sampler.half_width = r.number_or("box_half_width", sampler.half_width);
  if (sampler.dim < 1) throw sd::ConfigError("audit config: m_plus_1 must be >= 1");
  const int count = samples.value_or(r.has("samples") ? static_cast<int>(r.integer("samples")) : 1000);
  const std::uint64_t s = seed.value_or(r.has("seed") ? r.unsigned_integer("seed") : 0);
  const sd::FlagReport report = sd::verify_flags(spec, count, sampler, s);

  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back(json{{"name", c.name},
                          {"required", c.required},
                          {"tested", c.tested},
                          {"violations", c.violations},
                          {"worst_margin", c.tested > 0 ? json(c.worst_margin) : json(nullptr)},
                          {"passed", c.passed()}});
  }
  const json out{{"lagrangian", report.lagrangian},
                 {"declared_flags", hs::to_json(report.declared)},
                 {"checks", checks},
                 {"passed", report.passed()}};
  std::cout << out.dump(2) << "\n";
  return report.passed() ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strain tensors, stress-energy tensors and dominant-energy-condition checks"};
  app.require_subcommand(1);

  std::string config_path, out_path, geometry_path, fixture_path;
  int jobs = 1;
  auto* verify = app.add_subcommand("verify", "Run a randomized verification campaign");
  verify->add_option("--config", config_path, "Campaign config JSON")->required();
  verify->add_option("--out", out_path, "Report path (stdout when omitted)");
  verify->add_option("--jobs", jobs, "Worker threads (STRAIN_DEC_JOBS overrides)")->check(CLI::PositiveNumber);

  auto* invariants = app.add_subcommand("invariants", "Print s_1..s_{m+1} from all three routes");
  invariants->add_option("--geometry", geometry_path, "Geometry JSON")->required();

  std::optional<int> degree;
  double step = -1.0;
  bool richardson = false;
  double stress_tol = 1e-6;
  auto* stress = app.add_subcommand("stress", "Print T in closed form and from the variational oracle");
  stress->add_option("--geometry", geometry_path, "Geometry JSON (may carry a 'lagrangian' block)")->required();
  stress->add_option("--degree", degree, "Use L = s_j instead of the file's Lagrangian");
  stress->add_option("--step", step, "Finite-difference step (default 1e-6 |g^-1|)");
  stress->add_flag("--richardson", richardson, "Apply one Richardson refinement");
  stress->add_option("--tol", stress_tol, "Relative residual tolerance");

  auto* replay = app.add_subcommand("replay", "Replay a failure fixture");
  replay->add_option("fixture", fixture_path, "Fixture JSON")->required();

  std::optional<int> audit_samples;
  std::optional<std::uint64_t> audit_seed;
  auto* audit = app.add_subcommand("audit-lagrangian", "Audit the admissibility flags of a Lagrangian");
  audit->add_option("--config", config_path, "Audit config JSON")->required();
  audit->add_option("--samples", audit_samples, "Number of sampled points");
  audit->add_option("--seed", audit_seed, "Sampler seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) return run_verify(config_path, out_path, jobs);
    if (*invariants) return run_invariants(geometry_path);
    if (*stress) return run_stress(geometry_path, degree, step, richardson, stress_tol);
    if (*replay) return run_replay(fixture_path);
    if (*audit) return run_audit(config_path, audit_samples, audit_seed);
  } catch (const strain_dec::Error& e) {
    std::cerr << "strain-dec: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "strain-dec: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
