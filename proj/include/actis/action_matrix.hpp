#pragma once

#include <cstddef>
#include <sstream>
#include <vector>

#include "actis/action.hpp"
#include "actis/bvp.hpp"
#include "actis/error.hpp"
#include "actis/grid.hpp"
#include "actis/parallel.hpp"
#include "actis/potential.hpp"

namespace actis {

/// Real symmetric matrix of classical actions between all node pairs, with
/// the provenance needed to reproduce it.
template <int D>
struct ActionMatrix {
  std::vector<double> values;  // row-major N x N, exactly symmetric
  NodeSet<D> nodes;
  double travel_time = 0.0;
  SystemParams system;
  PolynomialPotential<D> potential;
  double worst_residual = 0.0;
  std::size_t caustic_pairs = 0;

  std::size_t size() const { return nodes.nodes.size(); }
  double at(std::size_t k, std::size_t l) const { return values[k * size() + l]; }
};

/// Computes the upper triangle (including diagonal) with one boundary-value
/// solve per pair, then mirrors. Pairs are independent; with `workers` > 1
/// they are solved in parallel with per-pair output slots, so the result is
/// bit-identical for any worker count. Any bvp failure aborts the assembly
/// naming the offending pair; caustic warnings are only counted.
template <int D>
ActionMatrix<D> assemble_action_matrix(const SystemParams& sys,
                                       const PolynomialPotential<D>& pot,
                                       const NodeSet<D>& nodes, double T,
                                       const BvpOptions& opt = {}, int workers = 1) {
  validate_system<D>(sys);
  if (!(T > 0.0)) throw Error(ErrorCode::config, "travel time must be positive");
  const std::size_t n = nodes.nodes.size();
  if (n == 0) throw Error(ErrorCode::config, "empty node set");

  struct PairResult {
    double action = 0.0;
    double residual = 0.0;
    bool caustic = false;
  };
  const std::size_t n_pairs = n * (n + 1) / 2;
  std::vector<PairResult> slots(n_pairs);

  // pair index -> (k, l), upper triangle row by row
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(n_pairs);
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t l = k; l < n; ++l) pairs.emplace_back(k, l);

  parallel_for(n_pairs, workers, [&](std::size_t idx) {
    const auto [k, l] = pairs[idx];
    try {
      const Trajectory<D> traj =
          solve_trajectory_bvp<D>(sys, pot, nodes.nodes[k], nodes.nodes[l], T, opt);
      const ActionValue a = evaluate_action(sys, pot, traj);
      slots[idx] = {a.value, traj.residual, traj.caustic_warning};
    } catch (const Error& e) {
      std::ostringstream os;
      os << "assembly failed at pair (" << k << ", " << l << "): " << e.what();
      throw Error(ErrorCode::assembly, os.str());
    }
  });

  ActionMatrix<D> mat;
  mat.values.assign(n * n, 0.0);
  mat.nodes = nodes;
  mat.travel_time = T;
  mat.system = sys;
  mat.potential = pot;
  for (std::size_t idx = 0; idx < n_pairs; ++idx) {
    const auto [k, l] = pairs[idx];
    mat.values[k * n + l] = slots[idx].action;
    mat.values[l * n + k] = slots[idx].action;
    if (slots[idx].residual > mat.worst_residual) mat.worst_residual = slots[idx].residual;
    if (slots[idx].caustic) ++mat.caustic_pairs;
  }
  return mat;
}

}  // namespace actis
