#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace linres {

// Dense 64-bit real matrices are the universal numeric carrier. Eigen supplies
// storage and products; every public operation validates finiteness and shape
// at its boundary and throws std::invalid_argument on violation.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite()) throw std::invalid_argument(name + " has non-finite entries");
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double rel_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max({a.norm(), b.norm(), 1.0});
  return (a - b).norm() <= rel_tol * scale;
}

// Exact entrywise equality; the reproducibility tests compare at bit level.
inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a.array() == b.array()).all();
}

}  // namespace linres
