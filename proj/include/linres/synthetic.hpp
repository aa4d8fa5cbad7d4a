#pragma once

#include "linres/model.hpp"
#include "linres/rng.hpp"

#include <optional>
#include <string>

namespace linres {

// Ground-truth map for synthetic regression targets.
enum class MapKind { NegIdentity, RandomGaussian, Custom };

inline MapKind map_kind_from_string(const std::string& s) {
  if (s == "neg_identity") return MapKind::NegIdentity;
  if (s == "random_gaussian") return MapKind::RandomGaussian;
  if (s == "custom") return MapKind::Custom;
  throw std::invalid_argument("unknown map kind: " + s);
}

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::NegIdentity: return "neg_identity";
    case MapKind::RandomGaussian: return "random_gaussian";
    case MapKind::Custom: return "custom";
  }
  return "unknown";
}

struct SyntheticData {
  Dataset data;
  Matrix phi_true;  // k x d map that generated Y (before noise)
};

// X has i.i.d. standard normal entries and Y = phi X + noise * E with E also
// standard normal. Draw order under one seed stream: phi (when random), then
// X, then E, all row-major; this order is part of the determinism contract.
inline SyntheticData gen_synthetic(int d, int k, int n, double noise,
                                   std::uint64_t seed, MapKind kind,
                                   std::optional<Matrix> custom_phi = std::nullopt) {
  require(d >= 1 && k >= 1 && n >= 1, "gen_synthetic: dims must be positive");
  require(noise >= 0.0, "gen_synthetic: noise must be non-negative");
  Rng rng(seed);

  Matrix phi;
  switch (kind) {
    case MapKind::NegIdentity:
      require(k == d, "gen_synthetic: neg_identity needs k == d");
      phi = -Matrix::Identity(k, d);
      break;
    case MapKind::RandomGaussian:
      phi = rng.gaussian_matrix(k, d, 1.0);
      break;
    case MapKind::Custom:
      require(custom_phi.has_value(), "gen_synthetic: custom map not provided");
      require(custom_phi->rows() == k && custom_phi->cols() == d,
              "gen_synthetic: custom map must be k x d");
      phi = *custom_phi;
      break;
  }

  Matrix x = rng.gaussian_matrix(d, n, 1.0);
  Matrix y = phi * x;
  if (noise > 0.0) y += noise * rng.gaussian_matrix(k, n, 1.0);

  SyntheticData out;
  out.data = make_dataset(std::move(x), std::move(y));
  out.phi_true = std::move(phi);
  return out;
}

}  // namespace linres
