#pragma once

// Pointwise predicates for the dominant energy condition, the rank
// condition for L = s_j, the convexity lemma and the pointwise corollary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "strain_dec/errors.hpp"
#include "strain_dec/invariants.hpp"
#include "strain_dec/lagrangian.hpp"
#include "strain_dec/multilinear.hpp"
#include "strain_dec/random.hpp"
#include "strain_dec/stress_energy.hpp"

namespace strain_dec {

enum class CheckOutcome { Pass, Fail, VacuousTZero };

inline std::string_view to_string(CheckOutcome c) {
  switch (c) {
    case CheckOutcome::Pass: return "pass";
    case CheckOutcome::Fail: return "fail";
    case CheckOutcome::VacuousTZero: return "vacuous_T_zero";
  }
  return "unknown";
}

inline CheckOutcome check_outcome_from_string(std::string_view s) {
  for (auto c : {CheckOutcome::Pass, CheckOutcome::Fail, CheckOutcome::VacuousTZero}) {
    if (to_string(c) == s) return c;
  }
  throw ArgumentError("unknown check outcome '" + std::string(s) + "'");
}

struct DECOptions {
  double tol = 1e-9;           ///< relative tolerance of both inequalities
  double vacuous_tol = 1e-10;  ///< |T| <= vacuous_tol * scale means T = 0
  double boost_cap = 5.0;      ///< maximum rapidity of sampled directions
};

struct Witness {
  Vector X;
  double energy = 0.0;  ///< T(X,X)
  double q = 0.0;       ///< (T g^{-1} T)(X,X) = g(Y,Y), Y = g^{-1} T X
  CausalClass flux_class = CausalClass::Zero;
  double energy_margin = 0.0;  ///< T(X,X) / (scale |X|^2)
  double flux_margin = 0.0;    ///< q / (scale^2 |g^{-1}| |X|^2)
  bool energy_ok = true;
  bool flux_ok = true;
};

struct DECVerdict {
  CheckOutcome energy_positivity = CheckOutcome::Pass;
  CheckOutcome flux_causality = CheckOutcome::Pass;
  std::vector<Witness> witnesses;
  double residual_scale = 0.0;
  double t_norm = 0.0;

  bool failed() const {
    return energy_positivity == CheckOutcome::Fail || flux_causality == CheckOutcome::Fail;
  }
};

/// Unit future timelike vector cosh(psi) e_0 + sinh(psi) n in the frame,
/// with n uniform on the spatial sphere and psi uniform in [0, boost_cap].
inline Vector sample_timelike_direction(const OrthonormalFrame& frame, double boost_cap, Rng& rng) {
  const int dim = frame.dim();
  const double psi = rng.uniform(0.0, boost_cap);
  Vector coords = Vector::Zero(dim);
  coords(0) = std::cosh(psi);
  if (dim > 1) {
    Vector n = rng.normal_vector(dim - 1);
    while (n.norm() == 0.0) n = rng.normal_vector(dim - 1);
    coords.tail(dim - 1) = std::sinh(psi) * n / n.norm();
  }
  return frame.matrix() * coords;
}

namespace detail {

inline void require_unit_timelike(const LorentzianMetric& g, const Vector& x, std::string_view what) {
  if (x.size() != g.dim()) throw ArgumentError(std::string(what) + ": direction has wrong dimension");
  const double norm = g(x, x);
  if (!(std::abs(norm + 1.0) <= tolerance::kFrame * std::max(1.0, x.squaredNorm()))) {
    throw PreconditionError(std::string(what) + ": direction is not unit timelike (g(X,X) = " +
                            std::to_string(norm) + ")");
  }
}

inline Witness evaluate_witness(const LorentzianMetric& g, const StressEnergy& t, const Vector& x,
                                const DECOptions& options) {
  Witness w;
  w.X = x;
  const Vector tx = t.T * x;
  const Vector y = g.inverse() * tx;
  w.energy = x.dot(tx);
  w.q = tx.dot(y);
  const double x2 = x.squaredNorm();
  const double energy_scale = t.scale * x2;
  const double flux_scale = t.scale * t.scale * g.inverse().norm() * x2;
  w.energy_margin = energy_scale > 0.0 ? w.energy / energy_scale : 0.0;
  w.flux_margin = flux_scale > 0.0 ? w.q / flux_scale : 0.0;
  const double zero_floor = options.vacuous_tol * t.scale * g.inverse().norm() * std::sqrt(x2);
  w.flux_class = causal_classify(g, x, y, options.tol, zero_floor);
  w.energy_ok = w.energy >= -options.tol * energy_scale;
  w.flux_ok = w.q <= options.tol * flux_scale && is_past_causal_or_zero(w.flux_class);
  return w;
}

}  // namespace detail

/// DEC verdict of a given T at explicit unit timelike directions.
inline DECVerdict check_dec_tensor(const LorentzianMetric& g, const StressEnergy& t,
                                   std::span<const Vector> directions,
                                   const DECOptions& options = {}) {
  DECVerdict verdict;
  verdict.residual_scale = t.scale;
  verdict.t_norm = t.T.norm();
  const bool vacuous = verdict.t_norm <= options.vacuous_tol * t.scale;
  bool energy_ok = true;
  bool flux_ok = true;
  for (const Vector& x : directions) {
    detail::require_unit_timelike(g, x, "check_dec");
    Witness w = detail::evaluate_witness(g, t, x, options);
    energy_ok = energy_ok && w.energy_ok;
    flux_ok = flux_ok && w.flux_ok;
    verdict.witnesses.push_back(std::move(w));
  }
  if (vacuous) {
    verdict.energy_positivity = CheckOutcome::VacuousTZero;
    verdict.flux_causality = CheckOutcome::VacuousTZero;
  } else {
    verdict.energy_positivity = energy_ok ? CheckOutcome::Pass : CheckOutcome::Fail;
    verdict.flux_causality = flux_ok ? CheckOutcome::Pass : CheckOutcome::Fail;
  }
  return verdict;
}

inline DECVerdict check_dec(const PointGeometry& geom, const LagrangianSpec& spec,
                            std::span<const Vector> directions, const DECOptions& options = {}) {
  return check_dec_tensor(geom.g, stress_general(geom, spec), directions, options);
}

/// Draws `num_directions` unit future timelike directions for a geometry.
inline std::vector<Vector> sample_directions(const LorentzianMetric& g, int num_directions,
                                             double boost_cap, Rng& rng) {
  const OrthonormalFrame frame = orthonormalize(g, future_time_direction(g));
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(num_directions));
  for (int k = 0; k < num_directions; ++k) {
    Vector x = sample_timelike_direction(frame, boost_cap, rng);
    out.push_back(x / std::sqrt(-g(x, x)));
  }
  return out;
}

inline DECVerdict check_dec(const PointGeometry& geom, const LagrangianSpec& spec,
                            int num_directions, std::uint64_t seed,
                            const DECOptions& options = {}) {
  if (num_directions < 1) throw ArgumentError("check_dec: num_directions must be >= 1");
  Rng rng(seed);
  const auto dirs = sample_directions(geom.g, num_directions, options.boost_cap, rng);
  return check_dec(geom, spec, std::span<const Vector>(dirs), options);
}

struct RankConditionResult {
  int rank = 0;
  double t_norm = 0.0;
  double scale = 0.0;
  bool t_vanishes = false;
  bool consistent = true;
  bool genericity_warning = false;  ///< j <= rank but T_j numerically zero
};

/// T_j = 0 exactly when j exceeds the rank of dphi.
inline RankConditionResult check_rank_condition(const PointGeometry& geom, int j,
                                                double tol = 1e-9) {
  RankConditionResult out;
  const StressEnergy t = stress_sj(geom, j);
  out.rank = rank_of_map(geom.dphi);
  out.t_norm = t.T.norm();
  out.scale = t.scale;
  out.t_vanishes = out.t_norm <= tol * t.scale;
  out.consistent = out.t_vanishes == (j > out.rank);
  out.genericity_warning = !out.consistent && j <= out.rank;
  return out;
}

struct ConvexityLemmaResult {
  std::vector<CausalClass> component_fluxes;  ///< Y_i = g^{-1} T_i X, i = 1..m+1
  CausalClass combined_flux = CausalClass::Zero;
  bool hypothesis_met = true;   ///< all d_i F(s) >= 0 at this sample
  bool premise_holds = true;    ///< every nonzero Y_i is past-causal
  bool conclusion_holds = true; ///< Y past-causal or zero
  bool supporting_hyperplane = true;  ///< F(s) >= sum d_i F(s) s_i
  bool lemma_holds = true;      ///< hypothesis and premise imply conclusion
};

inline ConvexityLemmaResult check_convexity_lemma(const PointGeometry& geom,
                                                  const LagrangianSpec& spec,
                                                  const DegreeStresses& parts, const Vector& x,
                                                  const DECOptions& options = {}) {
  detail::require_unit_timelike(geom.g, x, "check_convexity_lemma");
  ConvexityLemmaResult out;
  const auto classify = [&](const StressEnergy& t) {
    const Vector y = geom.g.inverse() * (t.T * x);
    const double floor = options.vacuous_tol * t.scale * geom.g.inverse().norm() * x.norm();
    return causal_classify(geom.g, x, y, options.tol, floor);
  };
  for (const auto& t : parts.by_degree) {
    const CausalClass c = classify(t);
    out.component_fluxes.push_back(c);
    out.premise_holds = out.premise_holds && is_past_causal_or_zero(c);
  }
  const StressEnergy combined = stress_general(geom, spec, parts);
  out.combined_flux = classify(combined);
  out.conclusion_holds = is_past_causal_or_zero(out.combined_flux);

  const Vector grad = spec.gradient(parts.s);
  const double f = spec.value(parts.s);
  out.hypothesis_met = grad.minCoeff() >= -1e-10;
  const double linear = grad.dot(parts.s);
  out.supporting_hyperplane =
      f >= linear - options.tol * std::max({1.0, std::abs(f), std::abs(linear)});
  out.lemma_holds = !(out.hypothesis_met && out.premise_holds) || out.conclusion_holds;
  return out;
}

inline ConvexityLemmaResult check_convexity_lemma(const PointGeometry& geom,
                                                  const LagrangianSpec& spec, const Vector& x,
                                                  const DECOptions& options = {}) {
  return check_convexity_lemma(geom, spec, stress_all_degrees(geom), x, options);
}

/// For defocusing, non-degenerate, zeroed F: T = 0 forces dphi = 0.
inline bool check_pointwise_corollary(const PointGeometry& geom, const LagrangianSpec& spec,
                                      double tol = 1e-9) {
  const auto& flags = spec.flags();
  if (!(flags.defocusing && flags.nondegenerate && flags.zeroed)) {
    throw PreconditionError("check_pointwise_corollary: '" + spec.name() +
                            "' is not declared defocusing, non-degenerate and zeroed");
  }
  const StressEnergy t = stress_general(geom, spec);
  const bool t_zero = t.T.norm() <= tol * t.scale;
  const bool dphi_zero = geom.dphi.norm() <= tol;
  return !t_zero || dphi_zero;
}

}  // namespace strain_dec
