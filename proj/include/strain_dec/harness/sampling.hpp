#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "strain_dec/errors.hpp"
#include "strain_dec/invariants.hpp"
#include "strain_dec/multilinear.hpp"
#include "strain_dec/random.hpp"

namespace strain_dec::harness {

/// n x r matrix with orthonormal columns (Householder QR of a Gaussian matrix).
inline Matrix random_orthonormal_columns(int n, int r, Rng& rng) {
  Matrix a(n, r);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < r; ++k) a(i, k) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, r);
}

/// dphi = U diag(sigma) V^T with sigma in [0.5, 1.5] * entry_range.
inline Matrix random_rank_map(int n, int m_plus_1, int rank, double entry_range, Rng& rng) {
  if (rank == 0) return Matrix::Zero(n, m_plus_1);
  const Matrix u = random_orthonormal_columns(n, rank, rng);
  const Matrix v = random_orthonormal_columns(m_plus_1, rank, rng);
  Vector sigma(rank);
  for (int k = 0; k < rank; ++k) sigma(k) = entry_range * rng.uniform(0.5, 1.5);
  return u * sigma.asDiagonal() * v.transpose();
}

struct GeometrySamplerOptions {
  double metric_perturbation = 0.3;  ///< epsilon in L = I + epsilon R
  double h_shift = 0.1;              ///< mu in h = A^T A + mu I
  double condition_bound = tolerance::kConditionBound;
  int max_retries = 10;
};

/// g = L^T eta L with L = I + eps R, h = A^T A + mu I, and dphi uniform in
/// [-entry_range, entry_range] or of exact rank `rank_override`.
inline PointGeometry sample_geometry(int m_plus_1, int n, double entry_range,
                                     std::optional<int> rank_override, Rng& rng,
                                     const GeometrySamplerOptions& options = {}) {
  if (m_plus_1 < 1 || n < 1) throw ConfigError("sample_geometry: dimensions must be >= 1");
  if (rank_override && (*rank_override < 0 || *rank_override > std::min(m_plus_1, n))) {
    throw ConfigError("sample_geometry: rank_override " + std::to_string(*rank_override) +
                      " outside [0, min(m+1, n)]");
  }
  Matrix eta = Matrix::Identity(m_plus_1, m_plus_1);
  eta(0, 0) = -1.0;

  double eps = options.metric_perturbation;
  std::optional<LorentzianMetric> g;
  for (int attempt = 0; attempt < options.max_retries && !g; ++attempt, eps *= 0.5) {
    const Matrix l = Matrix::Identity(m_plus_1, m_plus_1) +
                     eps * rng.uniform_matrix(m_plus_1, m_plus_1, -1.0, 1.0);
    try {
      g = LorentzianMetric::from_matrix(l.transpose() * eta * l, options.condition_bound);
    } catch (const ConditioningError&) {
    } catch (const ArgumentError&) {
    }
  }
  if (!g) throw ConfigError("sample_geometry: condition bound unreachable after retries");

  const Matrix a = rng.uniform_matrix(n, n, -1.0, 1.0);
  Matrix h = a.transpose() * a + options.h_shift * Matrix::Identity(n, n);

  Matrix dphi = rank_override ? random_rank_map(n, m_plus_1, *rank_override, entry_range, rng)
                              : rng.uniform_matrix(n, m_plus_1, -entry_range, entry_range);
  return PointGeometry::make(std::move(*g), RiemannianMetric::from_matrix(h), std::move(dphi));
}

/// Coordinate change S on the source: g -> S^T g S, dphi -> dphi S.
inline PointGeometry change_coordinates(const PointGeometry& geom, const Matrix& s) {
  return PointGeometry::make(
      LorentzianMetric::from_matrix(s.transpose() * geom.g.matrix() * s, INFINITY),
      geom.h, geom.dphi * s);
}

/// Random well-conditioned invertible matrix I + 0.5 R.
inline Matrix random_coordinate_change(int dim, Rng& rng) {
  while (true) {
    Matrix s = Matrix::Identity(dim, dim) + 0.5 * rng.uniform_matrix(dim, dim, -1.0, 1.0);
    Eigen::JacobiSVD<Matrix> svd(s);
    const Vector& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 0.2) return s;
  }
}

}  // namespace strain_dec::harness
