#pragma once

#include "linres/model.hpp"
#include "linres/spectral.hpp"

namespace linres {

// Global minimum of the regression problem: phi minimizes (1/2)||U X - Y||_F^2
// over all k x d maps U, and optimal_loss is the attained value. Every network
// loss decomposes as this floor plus the excess above it.
struct OptimalFit {
  Matrix phi;
  double optimal_loss = 0.0;
  int rank_used = 0;
};

inline OptimalFit fit_optimum(const Dataset& data,
                              std::optional<int> rank_override = std::nullopt) {
  const LeastSquaresMap fit =
      least_squares_map(data.x, data.y, rank_override ? rank_override
                                                      : std::optional<int>(data.rank));
  return OptimalFit{fit.phi, fit.optimal_loss, fit.rank_used};
}

struct ResidualDecomposition {
  double total = 0.0;   // ||U X - Y||_F^2
  double excess = 0.0;  // ||U X - phi X||_F^2
  double floor = 0.0;   // ||phi X - Y||_F^2 = 2 * optimal_loss
};

// Pythagorean split of the residual: total = excess + floor holds because the
// optimal residual is orthogonal to everything reachable through X.
inline ResidualDecomposition residual_decomposition(const Matrix& u,
                                                    const Dataset& data,
                                                    const OptimalFit& fit) {
  require(u.rows() == data.k() && u.cols() == data.d(),
          "residual_decomposition: U must be k x d");
  require_finite(u, "U");
  ResidualDecomposition out;
  out.total = (u * data.x - data.y).squaredNorm();
  out.excess = ((u - fit.phi) * data.x).squaredNorm();
  out.floor = 2.0 * fit.optimal_loss;
  return out;
}

}  // namespace linres
