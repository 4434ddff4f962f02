#pragma once

// Stress-energy tensors T = dL/dg^{-1} - (1/2) L g, assembled in closed form
// for L = s_j, by the chain rule for L = F(s), and by finite differences of
// the density L sqrt|det g| with respect to g^{-1}.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "strain_dec/errors.hpp"
#include "strain_dec/invariants.hpp"
#include "strain_dec/lagrangian.hpp"
#include "strain_dec/multilinear.hpp"

namespace strain_dec {

enum class Provenance { ClosedForm, Combination, VariationalOracle };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed_form";
    case Provenance::Combination: return "combination";
    case Provenance::VariationalOracle: return "variational_oracle";
  }
  return "unknown";
}

struct StressEnergy {
  Matrix T;
  Provenance provenance = Provenance::ClosedForm;
  std::string lagrangian_name;
  /// Magnitude the entries of T are built from; zero tests and relative
  /// comparisons are made against it rather than against |T| itself.
  double scale = 0.0;
};

namespace detail {

/// Reference magnitude of T_j = sym(P N_j) - s_j g / 2 built from |P|, |g|,
/// |g^{-1}| without cancellation.
inline double degree_scale(const PointGeometry& geom, const Matrix& pullback, int j) {
  const int n = geom.source_dim();
  const double p = pullback.norm();
  const double d = geom.g.inverse().norm() * p;
  return binomial(n - 1, j - 1) * p * std::pow(d, j - 1) +
         0.5 * binomial(n, j) * std::pow(d, j) * geom.g.matrix().norm();
}

inline void require_degree(const PointGeometry& geom, int j, std::string_view what) {
  if (j < 1 || j > geom.source_dim()) {
    throw ArgumentError(std::string(what) + ": degree " + std::to_string(j) + " outside [1, " +
                        std::to_string(geom.source_dim()) + "]");
  }
}

}  // namespace detail

/// T_1..T_{m+1} (closed form) together with s and the strain, computed from a
/// single pass of the characteristic-polynomial recursion.
struct DegreeStresses {
  StrainTensor strain;
  Vector s;
  std::vector<StressEnergy> by_degree;  ///< by_degree[j-1] is T for L = s_j
};

inline DegreeStresses stress_all_degrees(const PointGeometry& geom, int max_degree = -1) {
  const int n = geom.source_dim();
  if (max_degree < 0) max_degree = n;
  DegreeStresses out;
  out.strain = strain(geom);
  CharpolyRecursion rec = charpoly_recursion(out.strain.D, max_degree);
  out.s = Vector::Zero(n);
  out.s.head(max_degree) = rec.s;
  out.by_degree.reserve(static_cast<std::size_t>(max_degree));
  for (int j = 1; j <= max_degree; ++j) {
    // d s_j = tr(N_j dD) and dD = dg^{-1} P, so dL/dg^{-1} = P N_j, which is
    // symmetric because N_j is a polynomial in g^{-1} P.
    Matrix t = detail::symmetrize(out.strain.pullback * rec.gradients[static_cast<std::size_t>(j - 1)]) -
               0.5 * rec.s(j - 1) * geom.g.matrix();
    out.by_degree.push_back(StressEnergy{std::move(t), Provenance::ClosedForm,
                                         "s_" + std::to_string(j),
                                         detail::degree_scale(geom, out.strain.pullback, j)});
  }
  return out;
}

/// T for L = s_j.
inline StressEnergy stress_sj(const PointGeometry& geom, int j) {
  detail::require_degree(geom, j, "stress_sj");
  DegreeStresses all = stress_all_degrees(geom, j);
  return std::move(all.by_degree.back());
}

/// T = sum_i dF_i T_i - (F - sum_i dF_i s_i) g / 2 for L = F(s).
inline StressEnergy stress_general(const PointGeometry& geom, const LagrangianSpec& spec,
                                   const DegreeStresses& parts) {
  const Vector& s = parts.s;
  const double f = evaluate_lagrangian(spec, s);
  const Vector grad = spec.gradient(s);
  const int n = geom.source_dim();
  Matrix t = Matrix::Zero(n, n);
  double scale = 0.0;
  double linear_part = 0.0;
  for (int i = 0; i < n; ++i) {
    if (grad(i) == 0.0) continue;
    t += grad(i) * parts.by_degree[static_cast<std::size_t>(i)].T;
    scale += std::abs(grad(i)) * parts.by_degree[static_cast<std::size_t>(i)].scale;
    linear_part += grad(i) * s(i);
  }
  const double remainder = f - linear_part;
  t -= 0.5 * remainder * geom.g.matrix();
  scale += 0.5 * std::abs(remainder) * geom.g.matrix().norm();
  return StressEnergy{detail::symmetrize(t), Provenance::Combination, spec.name(), scale};
}

inline StressEnergy stress_general(const PointGeometry& geom, const LagrangianSpec& spec) {
  return stress_general(geom, spec, stress_all_degrees(geom));
}

struct VariationalOptions {
  double step = -1.0;  ///< <= 0 selects 1e-6 |g^{-1}|_F
  bool richardson = false;
  int max_retries = 3;
};

namespace detail {

inline bool lorentzian_inverse(const Matrix& ginv) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ginv, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double smallest = ev.cwiseAbs().minCoeff();
  if (!(smallest > 0.0) || ev.cwiseAbs().maxCoeff() / smallest > tolerance::kConditionBound) {
    return false;
  }
  return (ev.array() < 0.0).count() == 1;
}

}  // namespace detail

/// Finite-difference oracle. For each symmetric pair (a, b) the inverse
/// metric is moved by +-step along E_ab + E_ba (E_aa on the diagonal), the
/// density F(s(g^{-1} P)) |det g^{-1}|^{-1/2} is recomputed from scratch and
/// central-differenced, then divided by sqrt|det g|.
inline StressEnergy stress_variational(const PointGeometry& geom, const LagrangianSpec& spec,
                                       const VariationalOptions& options = {}) {
  const int n = geom.source_dim();
  const Matrix pullback = detail::symmetrize(geom.dphi.transpose() * geom.h.matrix() * geom.dphi);
  const Matrix& ginv0 = geom.g.inverse();

  const auto density = [&](const Matrix& ginv) {
    const Vector s = invariants_charpoly(ginv * pullback).s;
    if (!spec.in_domain(s)) {
      throw DomainError("stress_variational: perturbed invariants leave the domain", s);
    }
    return spec.value(s) / std::sqrt(std::abs(ginv.determinant()));
  };

  const Vector s0 = invariants_charpoly(ginv0 * pullback).s;
  if (!spec.in_domain(s0)) {
    throw DomainError("stress_variational: invariant vector outside the domain", s0);
  }
  double step = options.step > 0.0 ? options.step : 1e-6 * ginv0.norm();
  const double root_det_g = 1.0 / std::sqrt(std::abs(ginv0.determinant()));

  for (int attempt = 0; attempt <= options.max_retries; ++attempt, step /= 10.0) {
    bool admissible = true;
    const auto derivative = [&](int a, int b, double h) {
      Matrix dir = Matrix::Zero(n, n);
      dir(a, b) = 1.0;
      dir(b, a) = 1.0;
      const Matrix plus = ginv0 + h * dir;
      const Matrix minus = ginv0 - h * dir;
      if (!detail::lorentzian_inverse(plus) || !detail::lorentzian_inverse(minus)) {
        admissible = false;
        return 0.0;
      }
      try {
        return (density(plus) - density(minus)) / (2.0 * h);
      } catch (const DomainError&) {
        admissible = false;
        return 0.0;
      }
    };

    Matrix t(n, n);
    for (int a = 0; a < n && admissible; ++a) {
      for (int b = a; b < n && admissible; ++b) {
        double d = derivative(a, b, step);
        if (options.richardson) d = (4.0 * derivative(a, b, step / 2.0) - d) / 3.0;
        // Off-diagonal directions move both g^{ab} and g^{ba}.
        const double value = (a == b ? d : 0.5 * d) / root_det_g;
        t(a, b) = value;
        t(b, a) = value;
      }
    }
    if (admissible) {
      return StressEnergy{std::move(t), Provenance::VariationalOracle, spec.name(),
                          stress_general(geom, spec).scale};
    }
  }
  throw StepError("stress_variational: perturbed metric left the admissible set after " +
                  std::to_string(options.max_retries) + " step reductions");
}

/// |A - B|_F relative to the larger of the two reference scales.
inline double stress_residual(const StressEnergy& a, const StressEnergy& b) {
  const double scale = std::max({a.scale, b.scale, 1e-300});
  return (a.T - b.T).norm() / scale;
}

struct MixedTerm {
  int spatial_index = 0;        ///< i in e_i
  std::vector<int> shared;      ///< eta = e_K, K a (j-1)-subset of {1..m} without i
  double value = 0.0;           ///< phi^*(h^{(j)})(e_0 ^ eta, e_i ^ eta)
};

struct WedgeDecomposition {
  double perp_sum = 0.0;      ///< sum over wedges containing e_0
  double parallel_sum = 0.0;  ///< sum over purely spatial wedges
  std::vector<MixedTerm> mixed_terms;
  Vector flux_components;     ///< T(e_0, e_i), i = 1..m, as sums of mixed terms
};

/// Splits phi^*(h^{(j)}) over the orthonormal wedge basis built from `frame`:
/// T(e_0,e_0) = (perp_sum + parallel_sum)/2 and T(e_0,e_i) = sum of the
/// mixed terms with spatial index i.
inline WedgeDecomposition wedge_decomposition_T(const PointGeometry& geom, int j,
                                                const OrthonormalFrame& frame) {
  detail::require_degree(geom, j, "wedge_decomposition_T");
  if (!frame.is_orthonormal(geom.g)) {
    throw PreconditionError("wedge_decomposition_T: frame is not orthonormal for g");
  }
  const int n = geom.source_dim();
  const Matrix& e = frame.matrix();
  const Matrix pullback = strain(geom).pullback;
  const Matrix framed = detail::symmetrize(e.transpose() * pullback * e);

  WedgeDecomposition out;
  const WedgeBasisIndex index(n, j);
  const Matrix gram = induced_metric_on_wedge(framed, j);
  for (std::size_t k = 0; k < index.size(); ++k) {
    const double norm = gram(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    if (index.contains_index(k, OrthonormalFrame::kTimeIndex)) {
      out.perp_sum += norm;
    } else {
      out.parallel_sum += norm;
    }
  }

  out.flux_components = Vector::Zero(n - 1);
  if (j - 1 > n - 2) return out;  // no room for eta next to e_0 and e_i
  for (int i = 1; i < n; ++i) {
    std::vector<int> others;
    for (int a = 1; a < n; ++a)
      if (a != i) others.push_back(a);
    const auto visit = [&](const std::vector<int>& shared) {
      std::vector<int> rows{0}, cols{i};
      rows.insert(rows.end(), shared.begin(), shared.end());
      cols.insert(cols.end(), shared.begin(), shared.end());
      const double value = Matrix(framed(rows, cols)).determinant();
      out.mixed_terms.push_back(MixedTerm{i, shared, value});
      out.flux_components(i - 1) += value;
    };
    if (j == 1) {
      visit({});
      continue;
    }
    const WedgeBasisIndex subsets(static_cast<int>(others.size()), j - 1);
    for (const auto& local : subsets.subsets()) {
      std::vector<int> shared;
      for (int idx : local) shared.push_back(others[static_cast<std::size_t>(idx)]);
      visit(shared);
    }
  }
  return out;
}

}  // namespace strain_dec
