#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "actis/error.hpp"
#include "actis/potential.hpp"
#include "actis/rng.hpp"

namespace actis {

/// Set of boundary nodes: the lattice {-L, -L+a, ..., +L}^D, optionally with
/// a per-coordinate random deformation of amplitude delta.
template <int D>
struct NodeSet {
  std::vector<Point<D>> nodes;
  double extent = 0.0;       // Lambda
  double spacing = 0.0;      // a
  double deformation = 0.0;  // delta
  std::uint64_t seed = 0;
  bool deformed = false;

  int per_axis() const {
    return static_cast<int>(std::lround(2.0 * extent / spacing)) + 1;
  }
};

/// Lattice nodes in row-major order (first coordinate slowest).
template <int D>
NodeSet<D> make_regular_grid(double extent, double spacing) {
  if (!(extent > 0.0) || !(spacing > 0.0))
    throw Error(ErrorCode::invalid_grid, "extent and spacing must be positive");
  const double ratio = 2.0 * extent / spacing;
  if (std::abs(ratio - std::lround(ratio)) > 1e-9)
    throw Error(ErrorCode::invalid_grid, "2*extent/spacing must be integral");
  const int n = static_cast<int>(std::lround(ratio)) + 1;

  NodeSet<D> set;
  set.extent = extent;
  set.spacing = spacing;
  if constexpr (D == 1) {
    set.nodes.reserve(n);
    for (int i = 0; i < n; ++i) set.nodes.push_back({-extent + i * spacing});
  } else {
    set.nodes.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        set.nodes.push_back({-extent + i * spacing, -extent + j * spacing});
  }
  return set;
}

/// Displaces every coordinate by an independent uniform draw from
/// [-delta, +delta], keyed by (seed, node index, coordinate index); the output
/// is identical for identical seeds regardless of evaluation order.
template <int D>
NodeSet<D> deform_grid(const NodeSet<D>& regular, double delta, std::uint64_t seed) {
  if (regular.deformed)
    throw Error(ErrorCode::config, "deform_grid expects a regular grid");
  if (delta < 0.0) throw Error(ErrorCode::config, "deformation must be >= 0");
  if (delta >= 0.5 * regular.spacing)
    throw Error(ErrorCode::overlap_risk,
                "deformation >= spacing/2: deformed nodes could cross");
  NodeSet<D> out = regular;
  out.deformation = delta;
  out.seed = seed;
  out.deformed = delta > 0.0;
  for (std::size_t k = 0; k < out.nodes.size(); ++k)
    for (int d = 0; d < D; ++d)
      out.nodes[k][d] += rng::uniform(-delta, delta, seed, k, static_cast<std::uint64_t>(d));
  return out;
}

}  // namespace actis
