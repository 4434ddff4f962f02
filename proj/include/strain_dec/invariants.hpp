#pragma once

// Jet data at a point, the strain tensor D = g^{-1} phi^*h, and its
// spectral invariants s_1..s_{m+1} computed three independent ways.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strain_dec/errors.hpp"
#include "strain_dec/multilinear.hpp"

namespace strain_dec {

/// (g, h, dphi) at a single point. dphi is n x (m+1): column a is the image
/// of the a-th coordinate vector of the source tangent space.
struct PointGeometry {
  LorentzianMetric g;
  RiemannianMetric h;
  Matrix dphi;

  static PointGeometry make(LorentzianMetric g, RiemannianMetric h, Matrix dphi) {
    if (dphi.rows() != h.dim() || dphi.cols() != g.dim()) {
      throw ArgumentError("PointGeometry: dphi is " + std::to_string(dphi.rows()) + "x" +
                          std::to_string(dphi.cols()) + ", expected " +
                          std::to_string(h.dim()) + "x" + std::to_string(g.dim()));
    }
    return PointGeometry{std::move(g), std::move(h), std::move(dphi)};
  }

  static PointGeometry make(const Matrix& g, const Matrix& h, Matrix dphi,
                            double condition_bound = tolerance::kConditionBound) {
    return make(LorentzianMetric::from_matrix(g, condition_bound), RiemannianMetric::from_matrix(h),
                std::move(dphi));
  }

  int source_dim() const { return g.dim(); }
  int target_dim() const { return h.dim(); }
};

struct StrainTensor {
  Matrix D;         ///< mixed tensor g^{-1} phi^*h
  Matrix pullback;  ///< phi^*h = dphi^T h dphi
};

inline StrainTensor strain(const PointGeometry& geom) {
  Matrix pullback = detail::symmetrize(geom.dphi.transpose() * geom.h.matrix() * geom.dphi);
  Matrix d = geom.g.inverse() * pullback;
  return StrainTensor{std::move(d), std::move(pullback)};
}

struct InvariantVector {
  Vector s;  ///< s_1..s_{m+1}; index 0 holds s_1
  Vector p;  ///< power sums p_1..p_{m+1}
  int rank_estimate = 0;

  /// s_j with the conventions s_0 = 1 and s_j = 0 beyond the matrix size.
  double elementary(int j) const {
    if (j == 0) return 1.0;
    if (j < 0 || j > s.size()) return 0.0;
    return s(j - 1);
  }
};

/// Numerical rank by singular-value thresholding at tol * sigma_max.
inline int rank_of_map(const Matrix& a, double tol = tolerance::kRankCutoff) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  return static_cast<int>((sv.array() > tol * sv(0)).count());
}

inline Vector power_sums(const Matrix& d) {
  const auto n = d.rows();
  Vector p(n);
  Matrix power = d;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k > 0) power = power * d;
    p(k) = power.trace();
  }
  return p;
}

/// Trace recursion N_1 = I, s_k = tr(D N_k)/k, N_{k+1} = s_k I - D N_k.
/// N_k = sum_{i<k} (-1)^i s_{k-1-i} D^i is the gradient of s_k with respect
/// to D (d s_k = tr(N_k dD)); the stress-energy assembly reuses it.
struct CharpolyRecursion {
  Vector s;
  std::vector<Matrix> gradients;  ///< gradients[k-1] = N_k
};

inline CharpolyRecursion charpoly_recursion(const Matrix& d, int max_degree) {
  detail::require_square(d, "charpoly_recursion");
  const auto n = d.rows();
  CharpolyRecursion out;
  out.s = Vector::Zero(max_degree);
  out.gradients.reserve(static_cast<std::size_t>(max_degree));
  Matrix nk = Matrix::Identity(n, n);
  for (int k = 1; k <= max_degree; ++k) {
    if (k > 1) {
      nk = out.s(k - 2) * Matrix::Identity(n, n) - d * nk;
    }
    out.gradients.push_back(nk);
    out.s(k - 1) = (d * nk).trace() / k;
  }
  return out;
}

inline InvariantVector invariants_charpoly(const Matrix& d) {
  detail::require_square(d, "invariants_charpoly");
  const int n = static_cast<int>(d.rows());
  return InvariantVector{charpoly_recursion(d, n).s, power_sums(d), rank_of_map(d)};
}

/// Newton's identities j s_j = sum_{i=1}^j (-1)^{i-1} s_{j-i} p_i.
inline InvariantVector invariants_newton(const Matrix& d) {
  detail::require_square(d, "invariants_newton");
  const int n = static_cast<int>(d.rows());
  Vector p = power_sums(d);
  Vector s = Vector::Zero(n);
  for (int j = 1; j <= n; ++j) {
    double acc = 0.0;
    double sign = 1.0;
    for (int i = 1; i <= j; ++i) {
      const double prev = j - i == 0 ? 1.0 : s(j - i - 1);
      acc += sign * prev * p(i - 1);
      sign = -sign;
    }
    s(j - 1) = acc / j;
  }
  return InvariantVector{std::move(s), std::move(p), rank_of_map(d)};
}

/// s_j as the trace of the j-th compound matrix.
inline InvariantVector invariants_wedge(const Matrix& d) {
  detail::require_square(d, "invariants_wedge");
  const int n = static_cast<int>(d.rows());
  Vector s(n);
  for (int j = 1; j <= n; ++j) s(j - 1) = exterior_power(d, j).trace();
  return InvariantVector{std::move(s), power_sums(d), rank_of_map(d)};
}

/// Magnitude bound C(n, j) |D|_2^j on |s_j|, used as the reference scale
/// for relative comparisons of invariant components.
inline Vector invariant_scales(const Matrix& d) {
  const int n = static_cast<int>(d.rows());
  const double norm = d.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(d).singularValues()(0);
  Vector out(n);
  for (int j = 1; j <= n; ++j) out(j - 1) = detail::binomial(n, j) * std::pow(norm, j);
  return out;
}

/// Largest pairwise discrepancy between the three routes, per component
/// relative to invariant_scales.
inline double route_discrepancy(const Matrix& d) {
  const Vector a = invariants_charpoly(d).s;
  const Vector b = invariants_newton(d).s;
  const Vector c = invariants_wedge(d).s;
  const Vector scale = invariant_scales(d);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double ref = std::max(scale(j), 1e-300);
    const double diff = std::max({std::abs(a(j) - b(j)), std::abs(a(j) - c(j)),
                                  std::abs(b(j) - c(j))});
    worst = std::max(worst, diff / ref);
  }
  return worst;
}

}  // namespace strain_dec
