#pragma once

// Admissible functions F(s_1, ..., s_{m+1}) with gradients, domain
// predicates and declared flags, plus the empirical flag audit.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "strain_dec/errors.hpp"
#include "strain_dec/multilinear.hpp"
#include "strain_dec/random.hpp"

namespace strain_dec {

struct LagrangianFlags {
  bool defocusing = false;
  bool zeroed = false;
  bool nondegenerate = false;

  friend bool operator==(const LagrangianFlags&, const LagrangianFlags&) = default;
};

/// Serializable description of a built-in Lagrangian.
struct LagrangianConfig {
  std::string name = "wave_map";
  std::vector<double> coefficients;  ///< linear_combination, skyrme
  double b = 10.0;                    ///< born_infeld
  int degree = 1;                     ///< elementary
  double domain_margin = 1e-10;       ///< born_infeld, sqrt_sm
  std::optional<LagrangianFlags> declared_flags;
};

/// F, its gradient and its domain. Functions accept invariant vectors of any
/// length m+1; the value never depends on entries the definition ignores.
class LagrangianSpec {
 public:
  using Function = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;
  using Predicate = std::function<bool(const Vector&)>;

  LagrangianSpec(std::string name, Function f, Gradient grad, Predicate domain,
                 LagrangianFlags flags, LagrangianConfig config = {})
      : name_(std::move(name)),
        f_(std::move(f)),
        grad_(std::move(grad)),
        domain_(std::move(domain)),
        flags_(flags),
        config_(std::move(config)) {}

  const std::string& name() const { return name_; }
  const LagrangianFlags& flags() const { return flags_; }
  const LagrangianConfig& config() const { return config_; }

  double value(const Vector& v) const { return f_(v); }
  Vector gradient(const Vector& v) const { return grad_(v); }
  bool in_domain(const Vector& v) const { return domain_(v); }

  /// Same F with different declared flags (used to model mis-flagged specs).
  LagrangianSpec with_flags(LagrangianFlags flags) const {
    LagrangianSpec copy = *this;
    copy.flags_ = flags;
    copy.config_.declared_flags = flags;
    return copy;
  }

 private:
  std::string name_;
  Function f_;
  Gradient grad_;
  Predicate domain_;
  LagrangianFlags flags_;
  LagrangianConfig config_;
};

namespace lagrangians {

inline LagrangianSpec linear_combination(std::vector<double> c) {
  const bool all_nonneg = std::all_of(c.begin(), c.end(), [](double x) { return x >= 0.0; });
  const bool leading_positive = !c.empty() && c.front() > 0.0;
  LagrangianConfig config;
  config.name = "linear_combination";
  config.coefficients = c;
  auto f = [c](const Vector& v) {
    double acc = 0.0;
    const auto n = std::min<std::size_t>(c.size(), static_cast<std::size_t>(v.size()));
    for (std::size_t i = 0; i < n; ++i) acc += c[i] * v(static_cast<Eigen::Index>(i));
    return acc;
  };
  auto grad = [c](const Vector& v) {
    Vector g = Vector::Zero(v.size());
    const auto n = std::min<std::size_t>(c.size(), static_cast<std::size_t>(v.size()));
    for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i)) = c[i];
    return g;
  };
  return LagrangianSpec("linear_combination", f, grad, [](const Vector&) { return true; },
                        LagrangianFlags{all_nonneg, true, all_nonneg && leading_positive},
                        std::move(config));
}

/// L = s_j.
inline LagrangianSpec elementary(int j) {
  if (j < 1) throw ArgumentError("elementary: degree must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(j), 0.0);
  c.back() = 1.0;
  LagrangianSpec spec = linear_combination(std::move(c));
  LagrangianConfig config;
  config.name = "elementary";
  config.degree = j;
  return LagrangianSpec("s_" + std::to_string(j),
                        [spec](const Vector& v) { return spec.value(v); },
                        [spec](const Vector& v) { return spec.gradient(v); },
                        [](const Vector&) { return true; },
                        LagrangianFlags{true, true, j == 1}, std::move(config));
}

inline LagrangianSpec wave_map() {
  LagrangianSpec spec = linear_combination({1.0});
  LagrangianConfig config;
  config.name = "wave_map";
  return LagrangianSpec("wave_map", [spec](const Vector& v) { return spec.value(v); },
                        [spec](const Vector& v) { return spec.gradient(v); },
                        [](const Vector&) { return true; }, spec.flags(), std::move(config));
}

inline LagrangianSpec skyrme(double c1, double c2) {
  LagrangianSpec spec = linear_combination({c1, c2});
  LagrangianConfig config;
  config.name = "skyrme";
  config.coefficients = {c1, c2};
  return LagrangianSpec("skyrme", [spec](const Vector& v) { return spec.value(v); },
                        [spec](const Vector& v) { return spec.gradient(v); },
                        [](const Vector&) { return true; }, spec.flags(), std::move(config));
}

/// sqrt(det(b I + D)) - sqrt(b^{m+1}), with det(b I + D) = sum_j b^{m+1-j} s_j.
inline LagrangianSpec born_infeld(double b, double margin = 1e-10) {
  if (!(b > 0.0)) throw ArgumentError("born_infeld: b must be positive");
  const auto argument = [b](const Vector& v) {
    const auto n = v.size();
    double acc = std::pow(b, static_cast<double>(n));
    for (Eigen::Index j = 1; j <= n; ++j) acc += std::pow(b, static_cast<double>(n - j)) * v(j - 1);
    return acc;
  };
  LagrangianConfig config;
  config.name = "born_infeld";
  config.b = b;
  config.domain_margin = margin;
  auto f = [b, argument](const Vector& v) {
    return std::sqrt(argument(v)) - std::sqrt(std::pow(b, static_cast<double>(v.size())));
  };
  auto grad = [b, argument](const Vector& v) {
    const auto n = v.size();
    const double root = std::sqrt(argument(v));
    Vector g(n);
    for (Eigen::Index j = 1; j <= n; ++j) {
      g(j - 1) = std::pow(b, static_cast<double>(n - j)) / (2.0 * root);
    }
    return g;
  };
  auto domain = [argument, margin](const Vector& v) { return argument(v) >= margin; };
  return LagrangianSpec("born_infeld", f, grad, domain, LagrangianFlags{true, true, true},
                        std::move(config));
}

/// sqrt(s_m) on s_m >= margin, where m+1 is the length of the invariant vector.
inline LagrangianSpec sqrt_sm(double margin = 1e-10) {
  LagrangianConfig config;
  config.name = "sqrt_sm";
  config.domain_margin = margin;
  const auto index = [](const Vector& v) {
    if (v.size() < 2) throw ArgumentError("sqrt_sm: needs m+1 >= 2");
    return v.size() - 2;
  };
  auto f = [index](const Vector& v) { return std::sqrt(std::max(v(index(v)), 0.0)); };
  auto grad = [index](const Vector& v) {
    Vector g = Vector::Zero(v.size());
    g(index(v)) = 0.5 / std::sqrt(v(index(v)));
    return g;
  };
  auto domain = [index, margin](const Vector& v) { return v(index(v)) >= margin; };
  // zeroed (F(0) = 0) and defocusing; d_1 F vanishes identically for m >= 2.
  return LagrangianSpec("sqrt_sm", f, grad, domain, LagrangianFlags{true, true, false},
                        std::move(config));
}

}  // namespace lagrangians

inline LagrangianSpec make_lagrangian(const LagrangianConfig& config) {
  auto resolve = [&]() -> LagrangianSpec {
    if (config.name == "wave_map") return lagrangians::wave_map();
    if (config.name == "skyrme") {
      if (config.coefficients.size() != 2) {
        throw ConfigError("skyrme: expected exactly two coefficients [c1, c2]");
      }
      return lagrangians::skyrme(config.coefficients[0], config.coefficients[1]);
    }
    if (config.name == "linear_combination") {
      if (config.coefficients.empty()) throw ConfigError("linear_combination: no coefficients");
      return lagrangians::linear_combination(config.coefficients);
    }
    if (config.name == "elementary") return lagrangians::elementary(config.degree);
    if (config.name == "born_infeld") return lagrangians::born_infeld(config.b, config.domain_margin);
    if (config.name == "sqrt_sm") return lagrangians::sqrt_sm(config.domain_margin);
    throw ConfigError("unknown lagrangian '" + config.name + "'");
  };
  LagrangianSpec spec = resolve();
  if (config.declared_flags) spec = spec.with_flags(*config.declared_flags);
  return spec;
}

/// F(s), rejecting points outside the domain.
inline double evaluate_lagrangian(const LagrangianSpec& spec, const Vector& s) {
  if (!spec.in_domain(s)) {
    throw DomainError("lagrangian '" + spec.name() + "': invariant vector outside the domain", s);
  }
  return spec.value(s);
}

/// Rejection sampler over the box [-half_width, half_width]^dim.
struct DomainSampler {
  int dim = 2;
  double half_width = 5.0;
  int max_attempts = 100;

  Vector draw(const LagrangianSpec& spec, Rng& rng) const {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      Vector v(dim);
      for (int i = 0; i < dim; ++i) v(i) = rng.uniform(-half_width, half_width);
      if (spec.in_domain(v)) return v;
    }
    throw ConfigError("domain sampler for '" + spec.name() + "' found no domain point in " +
                      std::to_string(max_attempts) + " attempts");
  }
};

struct FlagCheck {
  std::string name;
  bool required = false;  ///< admissibility check, or a declared flag
  int tested = 0;
  int violations = 0;
  double worst_margin = INFINITY;  ///< most negative slack seen (>= 0 when passing)

  bool passed() const { return violations == 0; }

  void record(double margin) {
    ++tested;
    worst_margin = std::min(worst_margin, margin);
    if (margin < 0.0) ++violations;
  }
};

struct FlagReport {
  std::string lagrangian;
  LagrangianFlags declared;
  std::vector<FlagCheck> checks;

  const FlagCheck& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw ArgumentError("FlagReport: no check named '" + name + "'");
  }

  /// All admissibility checks and all declared flags hold on the samples.
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const FlagCheck& c) { return !c.required || c.passed(); });
  }
};

namespace detail {

/// Five-point central difference step for coordinate i at v.
inline double fd_step(const Vector& v, Eigen::Index i) {
  return 1e-3 * std::max(1.0, std::abs(v(i)));
}

inline bool stencil_in_domain(const LagrangianSpec& spec, const Vector& v, Eigen::Index i,
                              double reach) {
  Vector lo = v, hi = v;
  lo(i) -= reach;
  hi(i) += reach;
  return spec.in_domain(lo) && spec.in_domain(hi);
}

inline double five_point(const LagrangianSpec& spec, const Vector& v, Eigen::Index i, double h) {
  auto at = [&](double t) {
    Vector w = v;
    w(i) += t;
    return spec.value(w);
  };
  return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
}

inline Matrix fd_hessian(const LagrangianSpec& spec, const Vector& v, double h) {
  const auto n = v.size();
  Matrix hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      auto at = [&](double a, double b) {
        Vector w = v;
        w(i) += a;
        w(j) += b;
        return spec.value(w);
      };
      hess(i, j) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
    }
  }
  return symmetrize(hess);
}

}  // namespace detail

/// Empirically audits the admissibility conditions and the declared flags of
/// `spec` on `sample_count` domain points (and pairs of points). Undeclared
/// flags are still measured but never promoted to declared.
inline FlagReport verify_flags(const LagrangianSpec& spec, int sample_count,
                               const DomainSampler& sampler, std::uint64_t seed) {
  if (sample_count < 1) throw ConfigError("verify_flags: sample_count must be >= 1");
  constexpr double kRel = 1e-9;
  constexpr double kGradRel = 1e-6;

  FlagReport report;
  report.lagrangian = spec.name();
  report.declared = spec.flags();
  FlagCheck f_zero_nonneg{"f_zero_nonnegative", true};
  FlagCheck zeroed{"zeroed", spec.flags().zeroed};
  FlagCheck defocusing{"defocusing", spec.flags().defocusing};
  FlagCheck nondegenerate{"nondegenerate", spec.flags().nondegenerate};
  FlagCheck concavity{"concavity", true};
  FlagCheck hessian{"hessian_nsd", true};
  FlagCheck subadditivity{"subadditivity", true};
  FlagCheck hyperplane{"supporting_hyperplane", true};
  FlagCheck gradient{"gradient_consistency", true};

  // F is continuous up to the boundary of its domain, so F(0) is evaluated
  // even when 0 lies on that boundary.
  const double f0 = spec.value(Vector::Zero(sampler.dim));
  f_zero_nonneg.record(f0 + tolerance::kZeroFloor);
  zeroed.record(tolerance::kZeroFloor - std::abs(f0));

  for (int k = 0; k < sample_count; ++k) {
    Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(k));
    const Vector u = sampler.draw(spec, rng);
    const Vector v = sampler.draw(spec, rng);
    const double fu = spec.value(u);
    const double fv = spec.value(v);
    const Vector gu = spec.gradient(u);
    const double scale = std::max({1.0, std::abs(fu), std::abs(fv)});

    defocusing.record(gu.minCoeff() + 1e-10);
    nondegenerate.record(gu(0) - 1e-10);

    const Vector mid = 0.5 * (u + v);
    if (spec.in_domain(mid)) {
      concavity.record(spec.value(mid) - 0.5 * (fu + fv) + kRel * scale);
    }
    const Vector sum = u + v;
    if (spec.in_domain(sum)) {
      const double fs = spec.value(sum);
      subadditivity.record(fu + fv - fs + kRel * std::max(scale, std::abs(fs)));
    }
    hyperplane.record(fu - gu.dot(u) + kRel * std::max(scale, std::abs(gu.dot(u))));

    const double grad_scale = std::max(gu.cwiseAbs().maxCoeff(), tolerance::kZeroFloor);
    double worst_grad = INFINITY;
    bool any_interior = false;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double h = detail::fd_step(u, i);
      if (!detail::stencil_in_domain(spec, u, i, 50 * h)) continue;
      any_interior = true;
      const double fd = detail::five_point(spec, u, i, h);
      worst_grad = std::min(worst_grad, kGradRel * grad_scale - std::abs(fd - gu(i)));
    }
    if (any_interior) gradient.record(worst_grad);

    const double hh = 1e-3 * std::max(1.0, u.cwiseAbs().maxCoeff());
    bool hess_interior = true;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      hess_interior = hess_interior && detail::stencil_in_domain(spec, u, i, 50 * hh);
    }
    if (hess_interior) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(detail::fd_hessian(spec, u, hh),
                                                Eigen::EigenvaluesOnly);
      hessian.record(1e-5 * std::max(1.0, std::abs(fu)) - eig.eigenvalues().maxCoeff());
    }
  }

  report.checks = {f_zero_nonneg, zeroed,        defocusing, nondegenerate, concavity,
                   hessian,       subadditivity, hyperplane, gradient};
  return report;
}

}  // namespace strain_dec
