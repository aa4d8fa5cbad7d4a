#pragma once

#include "linres/model.hpp"

#include <set>
#include <vector>

namespace linres {

// Per-layer gradients of the square loss, with a tag recording what they were
// taken against (full batch, one example, or an n/B-scaled minibatch).
struct GradientSet {
  enum class Source { Full, Example, Minibatch };

  std::vector<Matrix> layers;
  Source source = Source::Full;
  int example_index = -1;
  std::vector<int> batch;

  double squared_fro_sum() const {
    double s = 0.0;
    for (const Matrix& g : layers) s += g.squaredNorm();
    return s;
  }
};

namespace detail {

struct ChainGradient {
  std::vector<Matrix> layer_grads;
  double loss = 0.0;
};

// Shared gradient core for both architectures. With factors
//   prefix_l = E_{l-1} ... E_1 A,  suffix_l = B E_L ... E_{l+1},
// where E_j = I + W_j (residual) or E_j = W_j (plain product), the layer
// gradient is suffix_l^T (U X - Y) (prefix_l X)^T, evaluated here as
// suffix_l^T (R X^T) prefix_l^T to avoid m x n intermediates.
inline ChainGradient chain_gradient(const Matrix& a, const Matrix& b,
                                    const std::vector<Matrix>& hidden,
                                    const Matrix& x, const Matrix& y, bool skip,
                                    double scale) {
  const std::size_t depth = hidden.size();
  std::vector<Matrix> prefix(depth);
  prefix[0] = a;
  for (std::size_t l = 1; l < depth; ++l)
    prefix[l] = skip ? apply_skip_left(hidden[l - 1], prefix[l - 1])
                     : Matrix(hidden[l - 1] * prefix[l - 1]);
  const Matrix full = skip ? apply_skip_left(hidden[depth - 1], prefix[depth - 1])
                           : Matrix(hidden[depth - 1] * prefix[depth - 1]);
  std::vector<Matrix> suffix(depth);
  suffix[depth - 1] = b;
  for (std::size_t l = depth - 1; l-- > 0;)
    suffix[l] = skip ? apply_skip_right(suffix[l + 1], hidden[l + 1])
                     : Matrix(suffix[l + 1] * hidden[l + 1]);

  const Matrix u = b * full;
  const Matrix residual = u * x - y;
  ChainGradient out;
  out.loss = 0.5 * residual.squaredNorm();
  const Matrix residual_xt = residual * x.transpose();
  out.layer_grads.reserve(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    Matrix g = (suffix[l].transpose() * residual_xt) * prefix[l].transpose();
    if (scale != 1.0) g *= scale;
    out.layer_grads.push_back(std::move(g));
  }
  return out;
}

}  // namespace detail

inline GradientSet full_gradient(const ResNetParams& p, const Dataset& data) {
  require(data.d() == p.d() && data.k() == p.k(),
          "full_gradient: dataset dims mismatch");
  GradientSet g;
  g.layers = detail::chain_gradient(p.input_map(), p.output_map(), p.hidden(),
                                    data.x, data.y, /*skip=*/true, 1.0)
                 .layer_grads;
  g.source = GradientSet::Source::Full;
  return g;
}

inline GradientSet example_gradient(const ResNetParams& p, const Vector& x,
                                    const Vector& y) {
  require(x.size() == p.d(), "example_gradient: input length mismatch");
  require(y.size() == p.k(), "example_gradient: output length mismatch");
  GradientSet g;
  g.layers = detail::chain_gradient(p.input_map(), p.output_map(), p.hidden(),
                                    x, y, /*skip=*/true, 1.0)
                 .layer_grads;
  g.source = GradientSet::Source::Example;
  return g;
}

// (n/B) * sum_{i in batch} per-example gradient, computed in matrix form over
// the gathered batch columns. Indices are 0-based, must be distinct and within
// [0, n). batch covering all of [0, n) in order reproduces full_gradient.
inline GradientSet minibatch_gradient(const ResNetParams& p, const Dataset& data,
                                      const std::vector<int>& batch, int n) {
  require(n == data.n(), "minibatch_gradient: n must equal dataset size");
  require(!batch.empty(), "minibatch_gradient: empty batch");
  std::set<int> seen;
  for (int i : batch) {
    require(i >= 0 && i < n, "minibatch_gradient: index out of range");
    require(seen.insert(i).second, "minibatch_gradient: duplicate index");
  }
  const int b = static_cast<int>(batch.size());
  Matrix xb(data.x.rows(), b);
  Matrix yb(data.y.rows(), b);
  for (int j = 0; j < b; ++j) {
    xb.col(j) = data.x.col(batch[static_cast<std::size_t>(j)]);
    yb.col(j) = data.y.col(batch[static_cast<std::size_t>(j)]);
  }
  const double scale = static_cast<double>(n) / static_cast<double>(b);
  GradientSet g;
  g.layers = detail::chain_gradient(p.input_map(), p.output_map(), p.hidden(),
                                    xb, yb, /*skip=*/true, scale)
                 .layer_grads;
  g.source = GradientSet::Source::Minibatch;
  g.batch = batch;
  return g;
}

// Central-difference oracle, independent of the analytic path: perturbs every
// hidden entry by +/-h and differences the loss.
inline GradientSet fd_gradient(const ResNetParams& p, const Dataset& data,
                               double h = 1e-5) {
  require(h > 0.0, "fd_gradient: step must be positive");
  require(data.d() == p.d() && data.k() == p.k(),
          "fd_gradient: dataset dims mismatch");
  GradientSet g;
  g.source = GradientSet::Source::Full;
  ResNetParams work = p;
  const int depth = p.depth();
  const int m = p.m();
  g.layers.assign(static_cast<std::size_t>(depth), Matrix::Zero(m, m));
  for (int l = 0; l < depth; ++l) {
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        const double saved = work.hidden()[static_cast<std::size_t>(l)](r, c);
        work.hidden()[static_cast<std::size_t>(l)](r, c) = saved + h;
        const double plus = loss(work, data);
        work.hidden()[static_cast<std::size_t>(l)](r, c) = saved - h;
        const double minus = loss(work, data);
        work.hidden()[static_cast<std::size_t>(l)](r, c) = saved;
        g.layers[static_cast<std::size_t>(l)](r, c) = (plus - minus) / (2.0 * h);
      }
    }
  }
  return g;
}

}  // namespace linres
