#pragma once

// Dense multilinear algebra over an indefinite metric: validated metric
// types, g-orthonormal frames, causal classification and exterior powers
// (compound matrices).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "strain_dec/errors.hpp"

namespace strain_dec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tolerance {
inline constexpr double kSymmetry = 1e-12;
inline constexpr double kConditionBound = 1e8;
inline constexpr double kFrame = 1e-10;
inline constexpr double kAlgebraic = 1e-10;
inline constexpr double kFunctorial = 1e-9;
inline constexpr double kZeroFloor = 1e-12;
inline constexpr double kRankCutoff = 1e-10;
}  // namespace tolerance

namespace detail {

inline void require_square(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ArgumentError(std::string(what) + ": expected a non-empty square matrix, got " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline void require_symmetric(const Matrix& a, std::string_view what) {
  require_square(a, what);
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > tolerance::kSymmetry * scale) {
    throw ArgumentError(std::string(what) + ": matrix is not symmetric (relative asymmetry " +
                        std::to_string(asym / scale) + ")");
  }
}

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// Symmetric non-degenerate form of signature (-,+,...,+), with its inverse.
class LorentzianMetric {
 public:
  static LorentzianMetric from_matrix(const Matrix& g,
                                      double condition_bound = tolerance::kConditionBound) {
    detail::require_symmetric(g, "LorentzianMetric");
    LorentzianMetric out;
    out.g_ = detail::symmetrize(g);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(out.g_, Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();
    const double largest = ev.cwiseAbs().maxCoeff();
    const double smallest = ev.cwiseAbs().minCoeff();
    if (!(smallest > 0.0) || largest / smallest > condition_bound) {
      throw ConditioningError("LorentzianMetric: condition number " +
                              std::to_string(smallest > 0.0 ? largest / smallest : INFINITY) +
                              " exceeds bound " + std::to_string(condition_bound));
    }
    const auto negatives = (ev.array() < 0.0).count();
    if (negatives != 1) {
      throw ArgumentError("LorentzianMetric: signature must be (-,+,...,+), found " +
                          std::to_string(negatives) + " negative eigenvalues");
    }
    out.condition_ = largest / smallest;
    out.inverse_ = detail::symmetrize(out.g_.inverse());
    return out;
  }

  static LorentzianMetric minkowski(int dim) {
    Matrix eta = Matrix::Identity(dim, dim);
    eta(0, 0) = -1.0;
    return from_matrix(eta);
  }

  int dim() const { return static_cast<int>(g_.rows()); }
  const Matrix& matrix() const { return g_; }
  const Matrix& inverse() const { return inverse_; }
  double condition_number() const { return condition_; }

  double operator()(const Vector& x, const Vector& y) const { return x.dot(g_ * y); }

 private:
  Matrix g_;
  Matrix inverse_;
  double condition_ = 1.0;
};

class RiemannianMetric {
 public:
  static RiemannianMetric from_matrix(const Matrix& h) {
    detail::require_symmetric(h, "RiemannianMetric");
    RiemannianMetric out;
    out.h_ = detail::symmetrize(h);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(out.h_, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) {
      throw ArgumentError("RiemannianMetric: matrix is not positive definite");
    }
    return out;
  }

  static RiemannianMetric euclidean(int dim) { return from_matrix(Matrix::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(h_.rows()); }
  const Matrix& matrix() const { return h_; }

 private:
  Matrix h_;
};

/// Columns e_0..e_m with g(e_a, e_b) = diag(-1, 1, ..., 1); e_0 is timelike.
class OrthonormalFrame {
 public:
  static constexpr int kTimeIndex = 0;

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& matrix() const { return basis_; }
  Vector vector(int a) const { return basis_.col(a); }

  /// Largest deviation of the Gram matrix E^T g E from diag(-1,1,...,1).
  double orthonormality_defect(const LorentzianMetric& g) const {
    if (g.dim() != dim()) return INFINITY;
    Matrix gram = basis_.transpose() * g.matrix() * basis_;
    gram(0, 0) += 2.0;
    return (gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }

  bool is_orthonormal(const LorentzianMetric& g, double tol = tolerance::kFrame) const {
    return orthonormality_defect(g) <= tol;
  }

 private:
  friend OrthonormalFrame orthonormalize(const LorentzianMetric&, const Vector&);
  explicit OrthonormalFrame(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// Gram-Schmidt against g starting from a timelike seed. Spatial vectors are
/// drawn from the coordinate basis, always taking the candidate with the
/// largest remaining g-norm (ties broken by coordinate index).
inline OrthonormalFrame orthonormalize(const LorentzianMetric& g, const Vector& seed_timelike) {
  const int dim = g.dim();
  if (seed_timelike.size() != dim) {
    throw ArgumentError("orthonormalize: seed has dimension " +
                        std::to_string(seed_timelike.size()) + ", metric has " +
                        std::to_string(dim));
  }
  const double seed_norm = g(seed_timelike, seed_timelike);
  const double seed_scale = g.matrix().norm() * seed_timelike.squaredNorm();
  if (!(seed_norm < -tolerance::kZeroFloor * seed_scale)) {
    throw PreconditionError("orthonormalize: seed vector is not timelike");
  }

  Matrix basis(dim, dim);
  basis.col(0) = seed_timelike / std::sqrt(-seed_norm);
  std::vector<bool> used(static_cast<std::size_t>(dim), false);

  const auto project = [&](Vector v, int filled) {
    // g(e_0,e_0) = -1 flips the sign of the time component of the projection.
    for (int pass = 0; pass < 2; ++pass) {
      for (int a = 0; a < filled; ++a) {
        const Vector ea = basis.col(a);
        const double sign = a == 0 ? -1.0 : 1.0;
        v -= sign * g(ea, v) * ea;
      }
    }
    return v;
  };

  for (int filled = 1; filled < dim; ++filled) {
    int best = -1;
    double best_norm = 0.0;
    Vector best_vec;
    for (int k = 0; k < dim; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      Vector v = project(Vector::Unit(dim, k), filled);
      const double n = g(v, v);
      if (best < 0 || n > best_norm) {
        best = k;
        best_norm = n;
        best_vec = std::move(v);
      }
    }
    const double floor = 1e-10 * std::max(1.0, g.matrix().cwiseAbs().maxCoeff());
    if (!(best_norm > floor)) {
      throw ConditioningError("orthonormalize: metric is too close to degenerate");
    }
    used[static_cast<std::size_t>(best)] = true;
    basis.col(filled) = best_vec / std::sqrt(best_norm);
  }

  OrthonormalFrame frame(std::move(basis));
  if (!frame.is_orthonormal(g)) {
    throw ConditioningError("orthonormalize: frame defect " +
                            std::to_string(frame.orthonormality_defect(g)) +
                            " exceeds tolerance");
  }
  return frame;
}

/// Unit timelike vector used as the future time reference of g: the
/// eigenvector of the negative eigenvalue with its first non-negligible
/// coordinate positive.
inline Vector future_time_direction(const LorentzianMetric& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.matrix());
  Vector t = eig.eigenvectors().col(0);
  for (int i = 0; i < t.size(); ++i) {
    if (std::abs(t(i)) > 1e-8) {
      if (t(i) < 0.0) t = -t;
      break;
    }
  }
  return t / std::sqrt(-g(t, t));
}

enum class CausalClass { FutureTimelike, FutureNull, PastTimelike, PastNull, Spacelike, Zero };

inline std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::FutureTimelike: return "future-timelike";
    case CausalClass::FutureNull: return "future-null";
    case CausalClass::PastTimelike: return "past-timelike";
    case CausalClass::PastNull: return "past-null";
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Zero: return "zero";
  }
  return "unknown";
}

inline CausalClass causal_class_from_string(std::string_view s) {
  for (auto c : {CausalClass::FutureTimelike, CausalClass::FutureNull, CausalClass::PastTimelike,
                 CausalClass::PastNull, CausalClass::Spacelike, CausalClass::Zero}) {
    if (to_string(c) == s) return c;
  }
  throw ArgumentError("unknown causal class '" + std::string(s) + "'");
}

inline bool is_past_causal(CausalClass c) {
  return c == CausalClass::PastTimelike || c == CausalClass::PastNull;
}

inline bool is_past_causal_or_zero(CausalClass c) {
  return is_past_causal(c) || c == CausalClass::Zero;
}

/// Classifies Y relative to the future timelike reference X_ref. g(Y,Y) is
/// compared against tol * |g|_F * |Y|^2; "past" means g(X_ref, Y) > 0.
/// Vectors with Euclidean norm at or below zero_floor are Zero.
inline CausalClass causal_classify(const LorentzianMetric& g, const Vector& x_ref,
                                   const Vector& y, double tol,
                                   double zero_floor = tolerance::kZeroFloor) {
  if (x_ref.size() != g.dim() || y.size() != g.dim()) {
    throw ArgumentError("causal_classify: dimension mismatch");
  }
  const double ref_norm = g(x_ref, x_ref);
  if (!(ref_norm < -tolerance::kZeroFloor * g.matrix().norm() * x_ref.squaredNorm())) {
    throw PreconditionError("causal_classify: reference vector is not timelike");
  }
  if (y.norm() <= zero_floor) return CausalClass::Zero;

  const double q = g(y, y);
  const double band = tol * g.matrix().norm() * y.squaredNorm();
  if (q > band) return CausalClass::Spacelike;
  const bool past = g(x_ref, y) > 0.0;
  if (q < -band) return past ? CausalClass::PastTimelike : CausalClass::FutureTimelike;
  return past ? CausalClass::PastNull : CausalClass::FutureNull;
}

/// Strictly increasing j-subsets of {0,...,dim-1} in lexicographic order.
class WedgeBasisIndex {
 public:
  WedgeBasisIndex(int dim, int degree) : dim_(dim), degree_(degree) {
    if (degree < 1 || degree > dim) {
      throw ArgumentError("WedgeBasisIndex: degree " + std::to_string(degree) +
                          " outside [1, " + std::to_string(dim) + "]");
    }
    std::vector<int> current(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) current[static_cast<std::size_t>(i)] = i;
    while (true) {
      subsets_.push_back(current);
      int pos = degree - 1;
      while (pos >= 0 && current[static_cast<std::size_t>(pos)] == dim - degree + pos) --pos;
      if (pos < 0) break;
      ++current[static_cast<std::size_t>(pos)];
      for (int k = pos + 1; k < degree; ++k) {
        current[static_cast<std::size_t>(k)] = current[static_cast<std::size_t>(k - 1)] + 1;
      }
    }
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return subsets_.size(); }
  const std::vector<int>& operator[](std::size_t i) const { return subsets_[i]; }
  const std::vector<std::vector<int>>& subsets() const { return subsets_; }

  bool contains_index(std::size_t i, int coordinate) const {
    const auto& s = subsets_[i];
    return std::binary_search(s.begin(), s.end(), coordinate);
  }

 private:
  int dim_;
  int degree_;
  std::vector<std::vector<int>> subsets_;
};

namespace detail {

inline Matrix compound(const Matrix& a, const WedgeBasisIndex& index) {
  const auto count = static_cast<Eigen::Index>(index.size());
  Matrix out(count, count);
  for (Eigen::Index r = 0; r < count; ++r) {
    const auto& rows = index[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < count; ++c) {
      const auto& cols = index[static_cast<std::size_t>(c)];
      out(r, c) = Matrix(a(rows, cols)).determinant();
    }
  }
  return out;
}

}  // namespace detail

/// j-th compound matrix: entry (I, J) is the minor of A with rows I and
/// columns J, indexed by WedgeBasisIndex. trace(A^{(j)}) = s_j(A); a wedge
/// normalization carrying 1/j! would scale that trace by j!.
inline Matrix exterior_power(const Matrix& a, int degree) {
  detail::require_square(a, "exterior_power");
  WedgeBasisIndex index(static_cast<int>(a.rows()), degree);
  return detail::compound(a, index);
}

/// Gram-determinant form on j-vectors: entry (I, J) = det[Q(e_{I_a}, e_{J_b})].
/// Orthonormal wedges have norm +-1; PSD Q gives a PSD result.
inline Matrix induced_metric_on_wedge(const Matrix& q, int degree) {
  detail::require_symmetric(q, "induced_metric_on_wedge");
  WedgeBasisIndex index(static_cast<int>(q.rows()), degree);
  return detail::symmetrize(detail::compound(q, index));
}

}  // namespace strain_dec
