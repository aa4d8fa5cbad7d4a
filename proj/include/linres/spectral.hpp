#pragma once

#include "linres/matrix.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace linres {

// Every spectral quantity the convergence conditions consume, computed once
// per (A, B, X) triple:
//   a_spec = ||A||_2, a_min = sigma_min(A), likewise b_* for B,
//   x_spec = ||X||_2, x_fro = ||X||_F, x_col_max = max_j ||X e_j||_2,
//   x_sigma_r = r-th largest singular value of X, kappa = x_spec^2 / x_sigma_r^2.
struct SpectralStats {
  double a_spec = 0.0;
  double a_min = 0.0;
  double b_spec = 0.0;
  double b_min = 0.0;
  double x_spec = 0.0;
  double x_fro = 0.0;
  double x_col_max = 0.0;
  double x_sigma_r = 0.0;
  int x_rank = 0;
  double kappa = 1.0;
};

// Singular values of M, sorted descending.
inline std::vector<double> singular_values(const Matrix& m) {
  require_finite(m, "singular_values input");
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

inline double default_rank_tolerance(const Matrix& m, double sigma_max) {
  const double dim = static_cast<double>(std::max(m.rows(), m.cols()));
  return dim * std::numeric_limits<double>::epsilon() * sigma_max;
}

// Count of singular values above tol; tol defaults to
// max(rows, cols) * machine_eps * sigma_max.
inline int numerical_rank(const Matrix& m,
                          std::optional<double> tol = std::nullopt) {
  const std::vector<double> sv = singular_values(m);
  if (sv.empty()) return 0;
  const double threshold = tol ? *tol : default_rank_tolerance(m, sv.front());
  int rank = 0;
  for (double s : sv)
    if (s > threshold) ++rank;
  return rank;
}

// rank_override replaces the numerically detected rank of X when the caller
// knows the intended rank (sigma_r then reads off that index).
inline SpectralStats spectral_stats(const Matrix& a, const Matrix& b,
                                    const Matrix& x,
                                    std::optional<int> rank_override = std::nullopt) {
  require(a.cols() == x.rows(), "spectral_stats: A columns must match X rows");
  require(b.cols() == a.rows(), "spectral_stats: B columns must match A rows");
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(x, "X");

  SpectralStats s;
  const std::vector<double> sv_a = singular_values(a);
  const std::vector<double> sv_b = singular_values(b);
  const std::vector<double> sv_x = singular_values(x);
  s.a_spec = sv_a.empty() ? 0.0 : sv_a.front();
  s.a_min = sv_a.empty() ? 0.0 : sv_a.back();
  s.b_spec = sv_b.empty() ? 0.0 : sv_b.front();
  s.b_min = sv_b.empty() ? 0.0 : sv_b.back();
  s.x_spec = sv_x.empty() ? 0.0 : sv_x.front();
  s.x_fro = x.norm();
  s.x_col_max = x.cols() > 0 ? x.colwise().norm().maxCoeff() : 0.0;

  int rank = rank_override ? *rank_override : 0;
  if (!rank_override) {
    const double tol = sv_x.empty() ? 0.0 : default_rank_tolerance(x, sv_x.front());
    for (double v : sv_x)
      if (v > tol) ++rank;
  }
  require(rank >= 0 && rank <= static_cast<int>(sv_x.size()),
          "spectral_stats: rank override out of range");
  s.x_rank = rank;
  s.x_sigma_r = rank > 0 ? sv_x[static_cast<std::size_t>(rank - 1)] : 0.0;
  s.kappa = s.x_sigma_r > 0.0
                ? (s.x_spec * s.x_spec) / (s.x_sigma_r * s.x_sigma_r)
                : std::numeric_limits<double>::infinity();
  return s;
}

struct LeastSquaresMap {
  Matrix phi;           // k x d
  double optimal_loss;  // (1/2) ||phi X - Y||_F^2
  int rank_used;
};

// Minimum-norm least squares map phi = Y X^+ with SVD-based pseudo-inverse,
// truncated at the numerical rank (or the supplied override).
inline LeastSquaresMap least_squares_map(
    const Matrix& x, const Matrix& y,
    std::optional<int> rank_override = std::nullopt) {
  require(x.cols() == y.cols(), "least_squares_map: X and Y column counts differ");
  require_finite(x, "X");
  require_finite(y, "Y");

  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (rank_override) {
    rank = *rank_override;
    require(rank >= 0 && rank <= static_cast<int>(sv.size()),
            "least_squares_map: rank override out of range");
  } else {
    const double tol = sv.size() > 0 ? default_rank_tolerance(x, sv(0)) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > tol) ++rank;
  }

  LeastSquaresMap fit;
  fit.rank_used = rank;
  if (rank == 0) {
    fit.phi = Matrix::Zero(y.rows(), x.rows());
  } else {
    const Matrix u_r = svd.matrixU().leftCols(rank);
    const Matrix v_r = svd.matrixV().leftCols(rank);
    Vector inv_sigma(rank);
    for (int i = 0; i < rank; ++i) inv_sigma(i) = 1.0 / sv(i);
    fit.phi = ((y * v_r) * inv_sigma.asDiagonal()) * u_r.transpose();
  }
  fit.optimal_loss = 0.5 * (fit.phi * x - y).squaredNorm();
  return fit;
}

}  // namespace linres
