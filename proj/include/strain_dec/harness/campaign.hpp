#pragma once

// Randomized verification campaigns: configuration, per-sample evaluation
// of every pointwise check, deterministic aggregation, reports, and
// self-contained failure fixtures that replay to the recorded verdict.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "strain_dec/dec.hpp"
#include "strain_dec/errors.hpp"
#include "strain_dec/harness/json_io.hpp"
#include "strain_dec/harness/sampling.hpp"
#include "strain_dec/invariants.hpp"
#include "strain_dec/lagrangian.hpp"
#include "strain_dec/random.hpp"
#include "strain_dec/stress_energy.hpp"

namespace strain_dec::harness {

enum class CampaignMode { Verify, ViolationSearch };

struct Tolerances {
  double algebraic = 1e-9;
  double dec = 1e-9;
  double oracle = 1e-6;
};

/// Check groups a campaign can run.
inline const std::vector<std::string>& all_check_groups() {
  static const std::vector<std::string> groups{"dec",  "lemma",     "decomposition", "rank",
                                               "corollary", "oracle", "invariants"};
  return groups;
}

struct CampaignConfig {
  int m_plus_1 = 2;
  int n = 2;
  LagrangianConfig lagrangian;
  int num_samples = 100;
  int num_directions_per_sample = 8;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  double entry_range = 1.0;
  double boost_cap = 5.0;
  std::optional<int> rank_override;
  CampaignMode mode = CampaignMode::Verify;
  std::vector<std::string> checks = all_check_groups();
  std::optional<std::string> fixture_dir;

  bool runs(const std::string& group) const {
    return std::find(checks.begin(), checks.end(), group) != checks.end();
  }
};

inline void validate(const CampaignConfig& c) {
  const auto fail = [](const std::string& msg) { throw ConfigError("campaign config: " + msg); };
  if (c.m_plus_1 < 1 || c.m_plus_1 > 8) fail("m_plus_1 must be in [1, 8]");
  if (c.n < 1 || c.n > 8) fail("n must be in [1, 8]");
  if (c.num_samples < 1) fail("num_samples must be >= 1");
  if (c.num_directions_per_sample < 1) fail("num_directions_per_sample must be >= 1");
  if (!(c.tolerances.algebraic > 0.0) || !(c.tolerances.dec > 0.0) || !(c.tolerances.oracle > 0.0)) {
    fail("tolerances must be positive");
  }
  if (!(c.entry_range > 0.0)) fail("entry_range must be positive");
  if (!(c.boost_cap >= 0.0)) fail("boost_cap must be non-negative");
  if (c.rank_override && (*c.rank_override < 0 || *c.rank_override > std::min(c.m_plus_1, c.n))) {
    fail("rank_override must be in [0, min(m_plus_1, n)]");
  }
  for (const auto& check : c.checks) {
    const auto& groups = all_check_groups();
    if (std::find(groups.begin(), groups.end(), check) == groups.end()) {
      fail("unknown check group '" + check + "'");
    }
  }
  make_lagrangian(c.lagrangian);
}

inline json to_json(const CampaignConfig& c) {
  json out{{"schema_version", kSchemaVersion},
           {"m_plus_1", c.m_plus_1},
           {"n", c.n},
           {"lagrangian", to_json(c.lagrangian)},
           {"num_samples", c.num_samples},
           {"num_directions_per_sample", c.num_directions_per_sample},
           {"seed", c.seed},
           {"tolerances",
            {{"algebraic", c.tolerances.algebraic}, {"dec", c.tolerances.dec}, {"oracle", c.tolerances.oracle}}},
           {"entry_range", c.entry_range},
           {"boost_cap", c.boost_cap},
           {"mode", c.mode == CampaignMode::Verify ? "verify" : "violation_search"},
           {"checks", c.checks}};
  out["rank_override"] = c.rank_override ? json(*c.rank_override) : json(nullptr);
  if (c.fixture_dir) out["fixture_dir"] = *c.fixture_dir;
  return out;
}

inline CampaignConfig campaign_config_from_json(const json& j) {
  const FieldReader r(j, "");
  require_schema_version(r);
  CampaignConfig c;
  c.m_plus_1 = static_cast<int>(r.integer("m_plus_1"));
  c.n = static_cast<int>(r.integer("n"));
  c.lagrangian = lagrangian_config_from_json(r.object("lagrangian"));
  c.num_samples = static_cast<int>(r.integer("num_samples"));
  c.num_directions_per_sample = r.has("num_directions_per_sample")
                                    ? static_cast<int>(r.integer("num_directions_per_sample"))
                                    : c.num_directions_per_sample;
  c.seed = r.unsigned_integer("seed");
  if (r.has("tolerances")) {
    const FieldReader t = r.object("tolerances");
    c.tolerances.algebraic = t.number_or("algebraic", c.tolerances.algebraic);
    c.tolerances.dec = t.number_or("dec", c.tolerances.dec);
    c.tolerances.oracle = t.number_or("oracle", c.tolerances.oracle);
  }
  c.entry_range = r.number_or("entry_range", c.entry_range);
  c.boost_cap = r.number_or("boost_cap", c.boost_cap);
  if (r.has("rank_override")) c.rank_override = static_cast<int>(r.integer("rank_override"));
  if (r.has("mode")) {
    const std::string mode = r.string("mode");
    if (mode == "verify") {
      c.mode = CampaignMode::Verify;
    } else if (mode == "violation_search") {
      c.mode = CampaignMode::ViolationSearch;
    } else {
      throw ParseError("field '/mode': expected \"verify\" or \"violation_search\"");
    }
  }
  if (r.has("checks")) {
    const json& arr = r.at("checks");
    if (!arr.is_array()) throw ParseError("field '/checks': expected an array of strings");
    c.checks.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) throw ParseError("field '/checks/" + std::to_string(i) + "': expected a string");
      c.checks.push_back(arr[i].get<std::string>());
    }
  }
  if (r.has("fixture_dir")) c.fixture_dir = r.string("fixture_dir");
  return c;
}

// ---------------------------------------------------------------------------
// Verdict / fixture encoding

inline json to_json(const DECVerdict& v) {
  json witnesses = json::array();
  for (const auto& w : v.witnesses) {
    witnesses.push_back(json{{"X", vector_to_json(w.X)},
                             {"energy", w.energy},
                             {"q", w.q},
                             {"flux_class", std::string(to_string(w.flux_class))},
                             {"energy_margin", w.energy_margin},
                             {"flux_margin", w.flux_margin},
                             {"energy_ok", w.energy_ok},
                             {"flux_ok", w.flux_ok}});
  }
  return json{{"energy_positivity", std::string(to_string(v.energy_positivity))},
              {"flux_causality", std::string(to_string(v.flux_causality))},
              {"residual_scale", v.residual_scale},
              {"t_norm", v.t_norm},
              {"witnesses", witnesses}};
}

inline DECVerdict verdict_from_json(const FieldReader& r) {
  DECVerdict v;
  try {
    v.energy_positivity = check_outcome_from_string(r.string("energy_positivity"));
    v.flux_causality = check_outcome_from_string(r.string("flux_causality"));
  } catch (const ArgumentError& e) {
    throw ParseError("field '" + r.path() + "': " + e.what());
  }
  v.residual_scale = r.number("residual_scale");
  v.t_norm = r.number("t_norm");
  const json& arr = r.at("witnesses");
  if (!arr.is_array()) throw ParseError("field '" + r.child("witnesses") + "': expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const FieldReader w(arr[i], r.child("witnesses") + "/" + std::to_string(i));
    Witness out;
    out.X = vector_from_json(w.at("X"), w.child("X"));
    out.energy = w.number("energy");
    out.q = w.number("q");
    try {
      out.flux_class = causal_class_from_string(w.string("flux_class"));
    } catch (const ArgumentError& e) {
      throw ParseError("field '" + w.child("flux_class") + "': " + e.what());
    }
    out.energy_margin = w.number("energy_margin");
    out.flux_margin = w.number("flux_margin");
    out.energy_ok = w.boolean("energy_ok");
    out.flux_ok = w.boolean("flux_ok");
    v.witnesses.push_back(std::move(out));
  }
  return v;
}

/// Exact (bitwise for doubles) equality of two verdicts.
inline bool verdicts_identical(const DECVerdict& a, const DECVerdict& b) {
  if (a.energy_positivity != b.energy_positivity || a.flux_causality != b.flux_causality ||
      a.residual_scale != b.residual_scale || a.t_norm != b.t_norm ||
      a.witnesses.size() != b.witnesses.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
    const Witness& x = a.witnesses[i];
    const Witness& y = b.witnesses[i];
    if (x.X != y.X || x.energy != y.energy || x.q != y.q || x.flux_class != y.flux_class ||
        x.energy_margin != y.energy_margin || x.flux_margin != y.flux_margin ||
        x.energy_ok != y.energy_ok || x.flux_ok != y.flux_ok) {
      return false;
    }
  }
  return true;
}

struct Fixture {
  std::string check;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  PointGeometry geometry;
  Vector direction;
  LagrangianConfig lagrangian;
  DECOptions options;
  DECVerdict verdict;
  std::string detail;
};

inline json to_json(const Fixture& f) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "strain-dec-fixture"},
              {"check", f.check},
              {"seed", f.seed},
              {"sample_index", f.sample_index},
              {"geometry", to_json(f.geometry)},
              {"X", vector_to_json(f.direction)},
              {"lagrangian", to_json(f.lagrangian)},
              {"tolerances",
               {{"dec", f.options.tol}, {"vacuous", f.options.vacuous_tol}, {"boost_cap", f.options.boost_cap}}},
              {"verdict", to_json(f.verdict)},
              {"detail", f.detail}};
}

inline Fixture fixture_from_json(const json& j) {
  const FieldReader r(j, "");
  require_schema_version(r);
  Fixture f{.check = r.string("check"),
            .seed = r.unsigned_integer("seed"),
            .sample_index = r.unsigned_integer("sample_index"),
            .geometry = geometry_from_json(r.object("geometry")),
            .direction = vector_from_json(r.at("X"), r.child("X")),
            .lagrangian = lagrangian_config_from_json(r.object("lagrangian")),
            .options = {},
            .verdict = {},
            .detail = r.has("detail") ? r.string("detail") : std::string()};
  const FieldReader t = r.object("tolerances");
  f.options.tol = t.number("dec");
  f.options.vacuous_tol = t.number("vacuous");
  f.options.boost_cap = t.number("boost_cap");
  f.verdict = verdict_from_json(r.object("verdict"));
  return f;
}

/// Recomputes the DEC verdict recorded in a fixture.
inline DECVerdict replay_fixture(const Fixture& f) {
  const LagrangianSpec spec = make_lagrangian(f.lagrangian);
  const std::vector<Vector> dirs{f.direction};
  return check_dec(f.geometry, spec, std::span<const Vector>(dirs), f.options);
}

inline Fixture load_fixture(const std::string& path) { return fixture_from_json(parse_json_file(path)); }

// ---------------------------------------------------------------------------
// Campaign execution

struct CheckCounts {
  std::int64_t pass = 0;
  std::int64_t fail = 0;
  std::int64_t vacuous = 0;
  std::int64_t warning = 0;

  std::int64_t total() const { return pass + fail + vacuous + warning; }

  CheckCounts& operator+=(const CheckCounts& o) {
    pass += o.pass;
    fail += o.fail;
    vacuous += o.vacuous;
    warning += o.warning;
    return *this;
  }
};

struct WorstCase {
  std::optional<double> min_energy_margin;
  std::optional<double> max_flux_margin;
  std::optional<double> max_oracle_residual;
  std::optional<double> max_invariant_residual;
  std::optional<double> max_decomposition_residual;

  static void lower(std::optional<double>& slot, double v) { slot = slot ? std::min(*slot, v) : v; }
  static void raise(std::optional<double>& slot, double v) { slot = slot ? std::max(*slot, v) : v; }

  void merge(const WorstCase& o) {
    if (o.min_energy_margin) lower(min_energy_margin, *o.min_energy_margin);
    if (o.max_flux_margin) raise(max_flux_margin, *o.max_flux_margin);
    if (o.max_oracle_residual) raise(max_oracle_residual, *o.max_oracle_residual);
    if (o.max_invariant_residual) raise(max_invariant_residual, *o.max_invariant_residual);
    if (o.max_decomposition_residual) raise(max_decomposition_residual, *o.max_decomposition_residual);
  }
};

struct CampaignReport {
  CampaignConfig config;
  std::map<std::string, CheckCounts> counts;
  WorstCase worst;
  std::vector<Fixture> fixtures;
  std::int64_t geometry_attempts = 0;
  std::int64_t geometries_accepted = 0;
  double duration_seconds = 0.0;

  std::int64_t failures() const {
    std::int64_t total = 0;
    for (const auto& [name, c] : counts) total += c.fail;
    return total;
  }

  /// Nonzero exit status is warranted: some non-vacuous check failed in
  /// verification mode.
  bool verification_failed() const { return config.mode == CampaignMode::Verify && failures() > 0; }
};

namespace detail {

struct SampleOutcome {
  std::map<std::string, CheckCounts> counts;
  WorstCase worst;
  std::vector<Fixture> fixtures;
  std::int64_t attempts = 0;
  std::exception_ptr error;
};

inline double decomposition_scale(const PointGeometry& geom, const OrthonormalFrame& frame, int j) {
  const Matrix framed = frame.matrix().transpose() * strain(geom).pullback * frame.matrix();
  return strain_dec::detail::binomial(geom.source_dim(), j) * std::pow(framed.norm(), j);
}

inline SampleOutcome run_sample(const CampaignConfig& config, const LagrangianSpec& spec,
                                std::uint64_t index) {
  SampleOutcome out;
  Rng rng = Rng::for_sample(config.seed, index);
  const DECOptions options{config.tolerances.dec, 1e-10, config.boost_cap};

  std::optional<PointGeometry> geom;
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts && !geom; ++attempt) {
    ++out.attempts;
    PointGeometry candidate =
        sample_geometry(config.m_plus_1, config.n, config.entry_range, config.rank_override, rng);
    if (spec.in_domain(invariants_charpoly(strain(candidate).D).s)) geom = std::move(candidate);
  }
  if (!geom) {
    throw ConfigError("domain sampler starved for '" + spec.name() + "' at sample " +
                      std::to_string(index) + " (0 of " + std::to_string(kMaxAttempts) +
                      " geometries accepted)");
  }

  const DegreeStresses parts = stress_all_degrees(*geom);
  const StressEnergy t = stress_general(*geom, spec, parts);
  const std::vector<Vector> dirs =
      sample_directions(geom->g, config.num_directions_per_sample, config.boost_cap, rng);

  const auto record_fixture = [&](const std::string& check, const Vector& x, std::string detail) {
    const std::vector<Vector> one{x};
    out.fixtures.push_back(Fixture{check, config.seed, index, *geom, x, config.lagrangian, options,
                                   check_dec_tensor(geom->g, t, std::span<const Vector>(one), options),
                                   std::move(detail)});
  };

  if (config.runs("dec")) {
    const DECVerdict v = check_dec_tensor(geom->g, t, std::span<const Vector>(dirs), options);
    const bool vacuous = v.energy_positivity == CheckOutcome::VacuousTZero;
    auto& energy = out.counts["energy_positivity"];
    auto& flux = out.counts["flux_causality"];
    for (const auto& w : v.witnesses) {
      if (vacuous) {
        ++energy.vacuous;
        ++flux.vacuous;
        continue;
      }
      WorstCase::lower(out.worst.min_energy_margin, w.energy_margin);
      WorstCase::raise(out.worst.max_flux_margin, w.flux_margin);
      if (w.energy_ok) {
        ++energy.pass;
      } else {
        ++energy.fail;
        record_fixture("energy_positivity", w.X, "T(X,X) = " + std::to_string(w.energy));
      }
      if (w.flux_ok) {
        ++flux.pass;
      } else {
        ++flux.fail;
        record_fixture("flux_causality", w.X,
                       "flux " + std::string(to_string(w.flux_class)) + ", q = " + std::to_string(w.q));
      }
    }
  }

  if (config.runs("lemma")) {
    auto& lemma = out.counts["convexity_lemma"];
    for (const auto& x : dirs) {
      const ConvexityLemmaResult r = check_convexity_lemma(*geom, spec, parts, x, options);
      if (!r.hypothesis_met) {
        ++lemma.vacuous;
      } else if (r.lemma_holds && r.supporting_hyperplane) {
        ++lemma.pass;
      } else {
        ++lemma.fail;
        record_fixture("convexity_lemma", x,
                       "combined flux " + std::string(to_string(r.combined_flux)));
      }
    }
  }

  if (config.runs("decomposition")) {
    auto& decomposition = out.counts["decomposition_identity"];
    for (const auto& x : dirs) {
      const OrthonormalFrame frame = orthonormalize(geom->g, x);
      bool ok = true;
      for (int j = 1; j <= config.m_plus_1; ++j) {
        const StressEnergy& tj = parts.by_degree[static_cast<std::size_t>(j - 1)];
        const WedgeDecomposition d = wedge_decomposition_T(*geom, j, frame);
        const double half_sum = 0.5 * (d.perp_sum + d.parallel_sum);
        const double energy = x.dot(tj.T * x);
        const double ref = std::max({tj.scale * x.squaredNorm(), decomposition_scale(*geom, frame, j), 1e-300});
        const double residual = std::abs(energy - half_sum) / ref;
        WorstCase::raise(out.worst.max_decomposition_residual, residual);
        const double flux2 = d.flux_components.squaredNorm();
        ok = ok && residual <= config.tolerances.algebraic && half_sum >= -config.tolerances.algebraic * ref &&
             flux2 <= half_sum * half_sum + config.tolerances.algebraic * ref * ref;
      }
      if (ok) {
        ++decomposition.pass;
      } else {
        ++decomposition.fail;
        record_fixture("decomposition_identity", x, "wedge decomposition identity violated");
      }
    }
  }

  if (config.runs("rank")) {
    auto& rank = out.counts["rank_condition"];
    for (int j = 1; j <= config.m_plus_1; ++j) {
      const RankConditionResult r = check_rank_condition(*geom, j, config.tolerances.dec);
      if (r.consistent) {
        ++rank.pass;
      } else if (r.genericity_warning) {
        ++rank.warning;
      } else {
        ++rank.fail;
        record_fixture("rank_condition", dirs.front(),
                       "j = " + std::to_string(j) + ", rank = " + std::to_string(r.rank));
      }
    }
  }

  if (config.runs("corollary")) {
    const auto& f = spec.flags();
    if (f.defocusing && f.nondegenerate && f.zeroed) {
      auto& corollary = out.counts["pointwise_corollary"];
      if (check_pointwise_corollary(*geom, spec, config.tolerances.dec)) {
        ++corollary.pass;
      } else {
        ++corollary.fail;
        record_fixture("pointwise_corollary", dirs.front(), "T vanishes with dphi nonzero");
      }
    }
  }

  if (config.runs("oracle")) {
    auto& oracle = out.counts["oracle_agreement"];
    try {
      const double residual = stress_residual(t, stress_variational(*geom, spec));
      WorstCase::raise(out.worst.max_oracle_residual, residual);
      if (residual <= config.tolerances.oracle) {
        ++oracle.pass;
      } else {
        ++oracle.fail;
        record_fixture("oracle_agreement", dirs.front(), "residual " + std::to_string(residual));
      }
    } catch (const StepError&) {
      ++oracle.warning;
    }
  }

  if (config.runs("invariants")) {
    auto& routes = out.counts["invariant_routes"];
    const double residual = route_discrepancy(parts.strain.D);
    WorstCase::raise(out.worst.max_invariant_residual, residual);
    if (residual <= config.tolerances.algebraic) {
      ++routes.pass;
    } else {
      ++routes.fail;
      record_fixture("invariant_routes", dirs.front(), "route discrepancy " + std::to_string(residual));
    }
  }
  return out;
}

}  // namespace detail

/// Worker count: STRAIN_DEC_JOBS when set, else `requested`, at least 1.
inline int effective_jobs(int requested) {
  if (const char* env = std::getenv("STRAIN_DEC_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("STRAIN_DEC_JOBS must be a positive integer, got '" + std::string(env) + "'");
  }
  return std::max(1, requested);
}

/// Runs every configured check on `num_samples` independent samples. Each
/// sample draws from its own stream derive_seed(seed, index); results are
/// folded in index order, so the report does not depend on `jobs`.
inline CampaignReport run_campaign(const CampaignConfig& config, int jobs = 1) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const LagrangianSpec spec = make_lagrangian(config.lagrangian);
  const auto total = static_cast<std::size_t>(config.num_samples);
  std::vector<detail::SampleOutcome> outcomes(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      try {
        outcomes[i] = detail::run_sample(config, spec, i);
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CampaignReport report;
  report.config = config;
  std::int64_t exceptions = 0;
  std::exception_ptr first_error;
  for (auto& o : outcomes) {
    if (o.error) {
      if (!first_error) first_error = o.error;
      ++exceptions;
      continue;
    }
    for (const auto& [name, c] : o.counts) report.counts[name] += c;
    report.worst.merge(o.worst);
    report.geometry_attempts += o.attempts;
    ++report.geometries_accepted;
    for (auto& f : o.fixtures) report.fixtures.push_back(std::move(f));
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + "; " + std::to_string(exceptions) + " of " +
                        std::to_string(total) + " samples failed, acceptance rate " +
                        std::to_string(report.geometry_attempts > 0
                                           ? double(report.geometries_accepted) / double(report.geometry_attempts)
                                           : 0.0));
    }
  }

  if (config.fixture_dir) {
    std::filesystem::create_directories(*config.fixture_dir);
    for (std::size_t k = 0; k < report.fixtures.size(); ++k) {
      const auto path = std::filesystem::path(*config.fixture_dir) /
                        ("fixture_" + std::to_string(report.fixtures[k].sample_index) + "_" +
                         std::to_string(k) + ".json");
      write_text_file(path.string(), to_json(report.fixtures[k]).dump(2) + "\n");
    }
  }
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline json to_json(const CheckCounts& c) {
  return json{{"pass", c.pass}, {"fail", c.fail}, {"vacuous", c.vacuous}, {"warning", c.warning}};
}

inline json to_json(const CampaignReport& r) {
  const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json counts = json::object();
  for (const auto& [name, c] : r.counts) counts[name] = to_json(c);
  json fixtures = json::array();
  for (const auto& f : r.fixtures) fixtures.push_back(to_json(f));
  return json{{"schema_version", kSchemaVersion},
              {"kind", "strain-dec-report"},
              {"config", to_json(r.config)},
              {"checks", counts},
              {"worst_case",
               {{"min_energy_margin", opt(r.worst.min_energy_margin)},
                {"max_flux_margin", opt(r.worst.max_flux_margin)},
                {"max_oracle_residual", opt(r.worst.max_oracle_residual)},
                {"max_invariant_residual", opt(r.worst.max_invariant_residual)},
                {"max_decomposition_residual", opt(r.worst.max_decomposition_residual)}}},
              {"sampler",
               {{"attempts", r.geometry_attempts},
                {"accepted", r.geometries_accepted},
                {"acceptance_rate", r.geometry_attempts > 0
                                        ? double(r.geometries_accepted) / double(r.geometry_attempts)
                                        : 0.0}}},
              {"failures", r.failures()},
              {"fixtures", fixtures},
              {"duration_seconds", r.duration_seconds}};
}

/// Report text without the wall-clock field, for byte-level comparisons.
inline std::string deterministic_dump(const CampaignReport& r) {
  json j = to_json(r);
  j.erase("duration_seconds");
  return j.dump(2);
}

}  // namespace strain_dec::harness
