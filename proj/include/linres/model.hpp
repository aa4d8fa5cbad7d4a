#pragma once

#include "linres/matrix.hpp"
#include "linres/spectral.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace linres {

// Regression dataset: X is d x n, Y is k x n. `rank` is the numerical rank of
// X unless explicitly overridden at construction.
struct Dataset {
  Matrix x;
  Matrix y;
  int rank = 0;

  int d() const { return static_cast<int>(x.rows()); }
  int k() const { return static_cast<int>(y.rows()); }
  int n() const { return static_cast<int>(x.cols()); }
};

inline Dataset make_dataset(Matrix x, Matrix y,
                            std::optional<int> rank_override = std::nullopt) {
  require(x.cols() == y.cols(), "make_dataset: X and Y column counts differ");
  require(x.cols() > 0, "make_dataset: empty dataset");
  require_finite(x, "X");
  require_finite(y, "Y");
  Dataset data;
  data.rank = rank_override ? *rank_override : numerical_rank(x);
  require(data.rank >= 0 && data.rank <= static_cast<int>(std::min(x.rows(), x.cols())),
          "make_dataset: rank override out of range");
  data.x = std::move(x);
  data.y = std::move(y);
  return data;
}

// Weights of the linear residual network x -> B (I + W_L) ... (I + W_1) A x.
// The input map A (m x d) and output map B (k x m) are fixed at construction
// and only readable afterwards; trainers update the hidden stack only.
class ResNetParams {
 public:
  ResNetParams(Matrix input_map, Matrix output_map, std::vector<Matrix> hidden)
      : input_map_(std::move(input_map)),
        output_map_(std::move(output_map)),
        hidden_(std::move(hidden)) {
    require(!hidden_.empty(), "ResNetParams: at least one hidden layer required");
    const Eigen::Index m = input_map_.rows();
    require(output_map_.cols() == m, "ResNetParams: B columns must match A rows");
    require(m >= std::max(input_map_.cols(), output_map_.rows()),
            "ResNetParams: hidden width must be at least max(d, k)");
    require_finite(input_map_, "A");
    require_finite(output_map_, "B");
    for (const Matrix& w : hidden_) {
      require(w.rows() == m && w.cols() == m,
              "ResNetParams: hidden layers must be m x m");
      require_finite(w, "hidden layer");
    }
  }

  const Matrix& input_map() const { return input_map_; }
  const Matrix& output_map() const { return output_map_; }
  const std::vector<Matrix>& hidden() const { return hidden_; }
  std::vector<Matrix>& hidden() { return hidden_; }

  int m() const { return static_cast<int>(input_map_.rows()); }
  int d() const { return static_cast<int>(input_map_.cols()); }
  int k() const { return static_cast<int>(output_map_.rows()); }
  int depth() const { return static_cast<int>(hidden_.size()); }

 private:
  Matrix input_map_;
  Matrix output_map_;
  std::vector<Matrix> hidden_;
};

namespace detail {

// (I + W) M without forming I + W.
inline Matrix apply_skip_left(const Matrix& w, const Matrix& m) {
  return m + w * m;
}

// M (I + W).
inline Matrix apply_skip_right(const Matrix& m, const Matrix& w) {
  return m + m * w;
}

// End-to-end map of the plain product network B W_L ... W_1 A (no skips).
inline Matrix end_to_end_no_skip(const ResNetParams& p) {
  Matrix acc = p.input_map();
  for (const Matrix& w : p.hidden()) acc = w * acc;
  return p.output_map() * acc;
}

}  // namespace detail

// All hidden layers start at exactly zero, so the initial end-to-end map is BA.
inline ResNetParams zero_init(const Matrix& input_map, const Matrix& output_map,
                              int depth) {
  require(depth >= 1, "zero_init: depth must be at least 1");
  const Eigen::Index m = input_map.rows();
  std::vector<Matrix> hidden(static_cast<std::size_t>(depth), Matrix::Zero(m, m));
  return ResNetParams(input_map, output_map, std::move(hidden));
}

// U = B (I + W_L) ... (I + W_1) A, accumulated left to right from A.
inline Matrix end_to_end(const ResNetParams& p) {
  Matrix acc = p.input_map();
  for (const Matrix& w : p.hidden()) acc = detail::apply_skip_left(w, acc);
  return p.output_map() * acc;
}

inline Matrix forward(const ResNetParams& p, const Matrix& x) {
  require(x.rows() == p.d(), "forward: X row count must equal input dimension");
  require_finite(x, "X");
  return end_to_end(p) * x;
}

inline double loss(const ResNetParams& p, const Dataset& data) {
  require(data.d() == p.d() && data.k() == p.k(), "loss: dataset dims mismatch");
  return 0.5 * (forward(p, data.x) - data.y).squaredNorm();
}

// Factors around hidden layer l (1-based):
//   suffix = B (I + W_L) ... (I + W_{l+1})        (k x m)
//   prefix = (I + W_{l-1}) ... (I + W_1) A        (m x d)
// so that suffix (I + W_l) prefix composes back to the end-to-end map.
struct LayerFactors {
  Matrix suffix;
  Matrix prefix;
};

inline LayerFactors layer_factors(const ResNetParams& p, int layer) {
  const int depth = p.depth();
  if (layer < 1 || layer > depth)
    throw std::out_of_range("layer_factors: layer index out of range");
  LayerFactors f;
  f.suffix = p.output_map();
  for (int j = depth; j > layer; --j)
    f.suffix = detail::apply_skip_right(f.suffix, p.hidden()[static_cast<std::size_t>(j - 1)]);
  f.prefix = p.input_map();
  for (int j = 1; j < layer; ++j)
    f.prefix = detail::apply_skip_left(p.hidden()[static_cast<std::size_t>(j - 1)], f.prefix);
  return f;
}

// Baseline architecture of the depth comparison: same weights, no identity
// skip, i.e. B W_L ... W_1 A x.
inline Matrix standard_linear_forward(const ResNetParams& p, const Matrix& x) {
  require(x.rows() == p.d(),
          "standard_linear_forward: X row count must equal input dimension");
  require_finite(x, "X");
  return detail::end_to_end_no_skip(p) * x;
}

}  // namespace linres
