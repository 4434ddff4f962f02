// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "strain_dec/harness/campaign.hpp"
#include "strain_dec/strain_dec.hpp"
#include "test_support.hpp"

namespace sd = strain_dec;
namespace hs = strain_dec::harness;
namespace lg = strain_dec::lagrangians;
using sd::Matrix;
using sd::Vector;

namespace {

constexpr double kDecTol = 1e-9;
constexpr double kRouteTol = 1e-9;
constexpr double kOracleTol = 1e-6;
constexpr double kRankTol = 1e-9;
constexpr double kRankGenericFraction = 0.999;
constexpr double kDecompositionTol = 1e-9;
constexpr double kCorollaryTol = 1e-9;
constexpr double kCorollaryMinMap = 0.1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int jobs() { return hs::effective_jobs(static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))); }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

sd::LagrangianConfig config_for(const std::string& name, std::vector<double> c = {}, double b = 10) {
  sd::LagrangianConfig out;
  out.name = name;
  out.coefficients = std::move(c);
  out.b = b;
  return out;
}

// ---------------------------------------------------------------------------

Outcome ac1_dec_suite() {
  const std::vector<sd::LagrangianConfig> specs{
      config_for("wave_map"), config_for("skyrme", {1, 1}), config_for("skyrme", {2, 0.5}),
      config_for("linear_combination", {1, 1, 1}), config_for("born_infeld", {}, 10)};
  std::int64_t failures = 0, vacuous = 0, checked = 0;
  double worst_energy = INFINITY, worst_flux = -INFINITY;
  std::uint64_t seed = 1000;
  const auto tally = [&](const hs::CampaignReport& report) {
    for (const char* name : {"energy_positivity", "flux_causality"}) {
      const auto& counts = report.counts.at(name);
      failures += counts.fail;
      vacuous += counts.vacuous;
      checked += counts.total();
    }
    if (report.worst.min_energy_margin) worst_energy = std::min(worst_energy, *report.worst.min_energy_margin);
    if (report.worst.max_flux_margin) worst_flux = std::max(worst_flux, *report.worst.max_flux_margin);
  };
  for (const auto& spec : specs) {
    for (int m1 = 2; m1 <= 4; ++m1) {
      for (int n = 1; n <= 4; ++n) {
        hs::CampaignConfig c;
        c.m_plus_1 = m1;
        c.n = n;
        c.lagrangian = spec;
        c.num_samples = 10000;
        c.num_directions_per_sample = 8;
        c.seed = seed++;
        c.tolerances.dec = kDecTol;
        c.checks = {"dec"};
        const auto report = hs::run_campaign(c, jobs());
        tally(report);
      }
    }
  }
  // sqrt(s_m) on its PSD domain, which needs rank(dphi) >= m
  for (int m1 = 2; m1 <= 4; ++m1) {
    for (int n = m1 - 1; n <= 4; ++n) {
      hs::CampaignConfig c;
      c.m_plus_1 = m1;
      c.n = n;
      c.lagrangian = config_for("sqrt_sm");
      c.num_samples = 10000;
      c.seed = seed++;
      c.tolerances.dec = kDecTol;
      c.checks = {"dec"};
      tally(hs::run_campaign(c, jobs()));
    }
  }
  return {failures == 0, fmt("%lld checks, %lld failures, %lld vacuous, min T(X,X)/scale %.3g, max q/scale %.3g",
                             (long long)checked, (long long)failures, (long long)vacuous, worst_energy, worst_flux)};
}

Outcome ac2_invariant_routes() {
  sd::Rng rng(2);
  double worst = 0.0;
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const Matrix d = rng.uniform_matrix(n, n, -2.0, 2.0);
    const Vector a = sd::invariants_charpoly(d).s;
    const Vector b = sd::invariants_newton(d).s;
    const Vector c = sd::invariants_wedge(d).s;
    const Vector scale = sd::invariant_scales(d);
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      const double diff = std::max({std::abs(a(j) - b(j)), std::abs(a(j) - c(j)), std::abs(b(j) - c(j))});
      const double rel = diff / std::max(scale(j), 1e-300);
      worst = std::max(worst, rel);
      ok = ok && rel <= kRouteTol;
    }
    bad += !ok;
  }
  return {bad == 0, fmt("1000 matrices, %d disagreeing, worst relative discrepancy %.3g", bad, worst)};
}

Outcome ac3_oracle_agreement() {
  struct Case {
    std::string label;
    std::function<sd::LagrangianSpec(int)> make;
    bool closed_form_sj = false;
  };
  const std::vector<Case> cases{
      {"s_j", [](int j) { return lg::elementary(j); }, true},
      {"wave_map", [](int) { return lg::wave_map(); }},
      {"skyrme(1,1)", [](int) { return lg::skyrme(1, 1); }},
      {"skyrme(2,0.5)", [](int) { return lg::skyrme(2, 0.5); }},
      {"skyrme(2,3)", [](int) { return lg::skyrme(2, 3); }},
      {"linear_combination(1,1,1)", [](int) { return lg::linear_combination({1, 1, 1}); }},
      {"linear_combination(1,-5)", [](int) { return lg::linear_combination({1, -5}); }},
      {"born_infeld(10)", [](int) { return lg::born_infeld(10); }},
      {"born_infeld(1)", [](int) { return lg::born_infeld(1); }},
      {"sqrt_sm", [](int) { return lg::sqrt_sm(); }},
  };
  sd::Rng rng(3);
  double worst = 0.0, worst_cov = 0.0;
  std::string worst_label;
  int bad = 0, pairs = 0;
  while (pairs < 1000) {
    const Case& cs = cases[static_cast<std::size_t>(pairs) % cases.size()];
    // sqrt(s_m) needs rank(dphi) >= m to be off the boundary
    const int m1 = rng.uniform_int(2, 4), n = rng.uniform_int(cs.label == "sqrt_sm" ? m1 - 1 : 1, 4);
    const int j = rng.uniform_int(1, m1);
    const sd::LagrangianSpec spec = cs.make(j);
    // rejection sampling into the domain, as the campaign does
    std::optional<sd::PointGeometry> geom;
    for (int attempt = 0; attempt < 100 && !geom; ++attempt) {
      auto candidate = hs::sample_geometry(m1, n, 1.0, std::nullopt, rng);
      if (spec.in_domain(sd::invariants_charpoly(sd::strain(candidate).D).s)) geom = std::move(candidate);
    }
    if (!geom) return {false, "domain sampler starved for " + cs.label};
    ++pairs;
    const sd::StressEnergy closed = cs.closed_form_sj ? sd::stress_sj(*geom, j) : sd::stress_general(*geom, spec);
    const sd::StressEnergy oracle = sd::stress_variational(*geom, spec);
    const double r = sd::stress_residual(closed, oracle);
    // second, independent oracle: variation of the covariant metric
    const Matrix cov = strain_dec::testing::covariant_variation_stress(
        geom->g.matrix(), sd::strain(*geom).pullback, [&](const Vector& s) { return spec.value(s); });
    const double rc = (closed.T - cov).norm() / std::max(closed.scale, 1e-300);
    if (r > worst) {
      worst = r;
      worst_label = cs.label;
    }
    worst_cov = std::max(worst_cov, rc);
    bad += r > kOracleTol || rc > kOracleTol;
  }
  return {bad == 0, fmt("%d pairs over %zu Lagrangians, %d above tolerance, worst residual %.3g (%s), "
                        "covariant-variation cross-check worst %.3g",
                        pairs, cases.size(), bad, worst, worst_label.c_str(), worst_cov)};
}

Outcome ac4_rank_condition() {
  std::int64_t cells = 0, forward_fail = 0, generic_cells_low = 0;
  std::int64_t warnings = 0, generic_total = 0;
  double worst_fraction = 1.0;
  std::uint64_t cell_seed = 0;
  for (int m1 = 2; m1 <= 4; ++m1) {
    for (int n = 1; n <= 4; ++n) {
      for (int r = 0; r <= std::min(m1, n); ++r) {
        for (int j = 1; j <= m1; ++j) {
          ++cells;
          ++cell_seed;
          int nonzero = 0;
          for (int k = 0; k < 1000; ++k) {
            auto rng = sd::Rng::for_sample(4000 + cell_seed, static_cast<std::uint64_t>(k));
            const auto geom = hs::sample_geometry(m1, n, 1.0, r, rng);
            const auto t = sd::stress_sj(geom, j);
            const bool vanishes = t.T.norm() <= kRankTol * t.scale;
            if (j > r) {
              forward_fail += !vanishes;
            } else {
              nonzero += !vanishes;
            }
          }
          if (j <= r) {
            const double fraction = nonzero / 1000.0;
            worst_fraction = std::min(worst_fraction, fraction);
            generic_total += 1000;
            warnings += 1000 - nonzero;
            generic_cells_low += fraction < kRankGenericFraction;
          }
        }
      }
    }
  }
  return {forward_fail == 0 && generic_cells_low == 0,
          fmt("%lld cells x 1000 samples: %lld vanishing violations for j > r, "
              "%lld genericity warnings of %lld for j <= r (worst cell %.4f nonzero)",
              (long long)cells, (long long)forward_fail, (long long)warnings, (long long)generic_total,
              worst_fraction)};
}

Outcome ac5_decomposition() {
  sd::Rng rng(5);
  double worst_identity = 0.0, worst_cs = -INFINITY;
  int bad = 0, total = 0;
  for (int j = 1; j <= 3; ++j) {
    for (int k = 0; k < 1000; ++k) {
      const int m1 = rng.uniform_int(std::max(2, j), 4), n = rng.uniform_int(1, 4);
      const auto geom = hs::sample_geometry(m1, n, 1.0, std::nullopt, rng);
      const Vector x = sd::sample_directions(geom.g, 1, 5.0, rng)[0];
      const auto frame = sd::orthonormalize(geom.g, x);
      const auto t = sd::stress_sj(geom, j);
      const auto d = sd::wedge_decomposition_T(geom, j, frame);
      const Vector e0 = frame.vector(0);
      const double txx = e0.dot(t.T * e0);
      // scale of the wedge sums themselves, in frame components
      const Matrix framed = frame.matrix().transpose() * sd::strain(geom).pullback * frame.matrix();
      const double ref = std::max({t.scale * e0.squaredNorm(), sd::detail::binomial(m1, j) * std::pow(framed.norm(), j), 1e-300});
      const double identity = std::abs(txx - 0.5 * (d.perp_sum + d.parallel_sum)) / ref;
      double flux2 = 0.0;
      for (int i = 1; i < m1; ++i) {
        const double txi = frame.vector(i).dot(t.T * e0);
        flux2 += txi * txi;
      }
      const double cs_margin = (flux2 - txx * txx) / (ref * ref);
      worst_identity = std::max(worst_identity, identity);
      worst_cs = std::max(worst_cs, cs_margin);
      bad += identity > kDecompositionTol || cs_margin > kDecompositionTol || txx < -kDecompositionTol * ref;
      ++total;
    }
  }
  return {bad == 0, fmt("%d samples (j = 1, 2, 3), %d violations, worst identity residual %.3g, "
                        "worst (sum T(X,e_i)^2 - T(X,X)^2)/scale^2 %.3g",
                        total, bad, worst_identity, worst_cs)};
}

Outcome ac6_flag_audits() {
  const std::vector<std::string> required{"zeroed",        "defocusing",  "nondegenerate",
                                          "concavity",     "subadditivity", "supporting_hyperplane"};
  std::string failures;
  int audits = 0;
  for (const auto& spec : {lg::skyrme(1, 1), lg::skyrme(2, 0.5), lg::born_infeld(10)}) {
    for (int m1 = 2; m1 <= 4; ++m1) {
      ++audits;
      const auto report = sd::verify_flags(spec, 1000, {m1, 5.0}, 600 + static_cast<std::uint64_t>(m1));
      for (const auto& name : required) {
        const auto& c = report.check(name);
        if (!c.passed() || c.tested == 0) failures += " " + spec.name() + "/" + std::to_string(m1) + ":" + name;
      }
      if (!report.passed()) failures += " " + spec.name() + "/" + std::to_string(m1) + ":report";
    }
  }
  const auto misflagged = lg::linear_combination({1, -5}).with_flags({true, true, true});
  const auto caught = sd::verify_flags(misflagged, 1000, {2, 5.0}, 606);
  const bool detected = !caught.check("defocusing").passed() && !caught.passed();
  if (!detected) failures += " misflagged-not-caught";
  return {failures.empty(),
          fmt("%d audits x 1000 samples, failing checks: %s; mis-flagged linear_combination(1,-5) %s (%d violations)",
              audits, failures.empty() ? "none" : failures.c_str() + 1, detected ? "caught" : "NOT caught",
              caught.check("defocusing").violations)};
}

Outcome ac7_corollary() {
  sd::Rng rng(7);
  int bad = 0, total = 0;
  double worst = INFINITY;
  for (const auto& spec : {lg::wave_map(), lg::skyrme(1, 1)}) {
    for (int k = 0; k < 10000; ++k) {
      const int m1 = rng.uniform_int(2, 4), n = rng.uniform_int(1, 4);
      // mix generic and low-rank maps; rescale to |dphi| in [0.1, 2]
      std::optional<int> rank;
      if (k % 2) rank = rng.uniform_int(1, std::min(m1, n));
      auto geom = hs::sample_geometry(m1, n, 1.0, rank, rng);
      if (geom.dphi.norm() == 0.0) continue;
      const double target = rng.uniform(kCorollaryMinMap, 2.0);
      geom = sd::PointGeometry::make(geom.g, geom.h, geom.dphi * (target / geom.dphi.norm()));
      const auto t = sd::stress_general(geom, spec);
      const double ratio = t.T.norm() / t.scale;
      worst = std::min(worst, ratio);
      bad += !(ratio > kCorollaryTol) || !sd::check_pointwise_corollary(geom, spec, kCorollaryTol);
      ++total;
    }
  }
  return {bad == 0 && total == 20000,
          fmt("%d samples with |dphi| >= 0.1, %d with T = 0, min |T|/scale %.3g", total, bad, worst)};
}

Outcome ac8_determinism() {
  hs::CampaignConfig c;
  c.m_plus_1 = 3;
  c.n = 3;
  c.lagrangian = config_for("skyrme", {1, 1});
  c.num_samples = 500;
  c.seed = 8;
  const std::string serial = hs::deterministic_dump(hs::run_campaign(c, 1));
  const std::string serial_again = hs::deterministic_dump(hs::run_campaign(c, 1));
  const std::string parallel = hs::deterministic_dump(hs::run_campaign(c, 4));

  hs::CampaignConfig v = c;
  v.lagrangian = config_for("linear_combination", {1, -5});
  v.mode = hs::CampaignMode::ViolationSearch;
  const auto search_serial = hs::run_campaign(v, 1);
  const bool with_fixtures = hs::deterministic_dump(search_serial) == hs::deterministic_dump(hs::run_campaign(v, 4));

  const bool ok = serial == serial_again && serial == parallel && with_fixtures;
  return {ok, fmt("report %zu bytes; serial rerun %s, 4-way parallel %s; violation-search report with %zu fixtures %s",
                  serial.size(), serial == serial_again ? "identical" : "DIFFERS",
                  serial == parallel ? "identical" : "DIFFERS", search_serial.fixtures.size(),
                  with_fixtures ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"AC1", "DEC holds for defocusing built-ins (5 specs x 12 dims, plus sqrt_sm, x 1e4 samples x 8 directions)", ac1_dec_suite},
      {"AC2", "three invariant routes agree to 1e-9", ac2_invariant_routes},
      {"AC3", "closed-form stress matches variational oracle to 1e-6", ac3_oracle_agreement},
      {"AC4", "rank condition: T_j = 0 iff j > rank(dphi)", ac4_rank_condition},
      {"AC5", "wedge decomposition identity and flux bound", ac5_decomposition},
      {"AC6", "Lagrangian flag audits", ac6_flag_audits},
      {"AC7", "pointwise corollary: |dphi| >= 0.1 gives T != 0", ac7_corollary},
      {"AC8", "campaign reports identical serial vs 4-way parallel", ac8_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
