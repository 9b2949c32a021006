#pragma once

#include <span>
#include <string>
#include <vector>

#include "pcrof/pcr.hpp"

// The finite-dimensional weighted-graph reduction of the ROF model for
// PCR data and a gap-certified first-order solver:
//   E(u) = 1/2 sum_i v_i (u_i - f_i)^2 + alpha sum_e a_e |u_i - u_j|
// with node weights v_i = cell volumes and edge weights a_e = shared
// face measures.

namespace pcrof {

struct GraphEdge {
  int a = -1;  // lexicographically smaller cell index
  int b = -1;
  double weight = 0.0;
};

struct CellGraph {
  std::vector<double> volume;
  std::vector<double> datum;
  std::vector<GraphEdge> edges;

  int node_count() const { return static_cast<int>(volume.size()); }
};

CellGraph build_graph(const PcrFunction& f);

double energy(const CellGraph& g, std::span<const double> u, double alpha);

/// Divergence with sign + at the smaller endpoint of each edge.
std::vector<double> divergence(const CellGraph& g,
                               std::span<const double> flows);

/// Dual objective for clipped flows; a lower bound on the primal minimum.
/// If clip is non-null, receives the largest feasibility violation of the
/// input flows before clipping.
double dual_energy(const CellGraph& g, std::span<const double> flows,
                   double alpha, double* clip = nullptr);

struct SolverConfig {
  double alpha = 1.0;
  double tol_gap = 0.0;  // absolute; <= 0 selects 1e-9 * (1 + energy(f))
  long max_iters = 200000;
  double step_ratio = 1.0;
};

struct RofSolution {
  std::vector<double> u;
  std::vector<double> flows;  // dual-feasible edge flows
  // Certified duality gap, evaluated in a cancellation-free form (it can
  // differ from primal - dual by the rounding error of those two values).
  double gap = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  long iterations = 0;
  bool certified = false;
};

/// Preconditioned primal-dual iteration with per-edge interval projection
/// and per-node weighted quadratic steps; deterministic, stops when the
/// duality gap certifies the solution. If tol_gap lies below the rounding
/// floor of the gap the iteration runs until the gap stops improving and
/// returns uncertified with the floor gap.
RofSolution solve(const CellGraph& g, const SolverConfig& cfg);

/// Exact minimizer for path graphs (nodes in chain order, edge k joins
/// k and k+1): message-passing with derivative clipping, the discrete
/// taut-string construction. Independent oracle for the main solver.
std::vector<double> solve_1d_taut_string(std::span<const double> volumes,
                                         std::span<const double> data,
                                         std::span<const double> edge_weights,
                                         double alpha);

struct KktReport {
  bool pass = true;
  double stationarity = 0.0;  // max |u_i - f_i + div(q)_i / v_i|
  double feasibility = 0.0;   // max (|q_e| - alpha a_e)_+
  double alignment = 0.0;     // max |q_e - alpha a_e sign(jump)| over jumps
};

/// Optimality conditions: u = f - div(q)/v, dual feasibility, and flow
/// alignment across jumps larger than sqrt(tol).
KktReport check_kkt(const CellGraph& g, const RofSolution& sol, double alpha,
                    double tol);

/// Independent dual route: maximize the dual objective over the flow box
/// by accelerated projected gradient. Returns the flows.
std::vector<double> solve_dual_projected(const CellGraph& g, double alpha,
                                         long iters);

}  // namespace pcrof
