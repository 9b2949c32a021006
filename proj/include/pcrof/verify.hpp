#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcrof/pcr.hpp"
#include "pcrof/solver.hpp"

// Refinement-invariance harness: the continuous minimizer for PCR data f
// is itself PCR on the minimal grid of f, so solving on that grid and on
// any refinement of it must produce the same function. The harness solves
// both problems with certified gaps and measures the disagreement.

namespace pcrof {

struct RefinementSpec {
  // One entry per axis, or a single entry broadcast to all axes. Each
  // grid interval is subdivided into this many equal parts.
  std::vector<int> splits_per_axis = {2};
  // Additional plane coordinates merged in per axis (may be empty).
  std::vector<std::vector<double>> extra_planes;
};

/// Refined grid: every cell side split uniformly, extra planes merged.
/// The input grid must contain the domain's boundary grid.
Grid refine(const Grid& grid, const RefinementSpec& spec,
            const RectPolytope& domain);

struct TheoremReport {
  std::string instance_id;
  PcrFunction coarse;   // minimizer on the minimal grid of f
  PcrFunction refined;  // minimizer on the refined grid
  // Largest spread of refined values within one coarse cell.
  double constancy_residual = 0.0;
  // Largest deviation between the coarse minimizer and the cell averages
  // of the refined one.
  double agreement_residual = 0.0;
  double coarse_gap = 0.0;
  double refined_gap = 0.0;
  bool certified = false;  // both solves reached their gap tolerance
  bool pass = false;       // certified and both residuals within tol
};

/// Solves the instance on its minimal grid and on a refinement; the two
/// minimizers must coincide. A solve that misses its gap tolerance makes
/// the report inconclusive (certified = false, never PASS).
TheoremReport verify_theorem(const PcrPieces& f, double alpha,
                             const RefinementSpec& spec, double tol,
                             std::string instance_id = {});

struct RandomInstance {
  PcrPieces f;
  double alpha = 1.0;
  std::string id;
};

/// Deterministic randomized instance: box, L-shaped or holed domain in
/// dimension 2 or 3, a modest grid (at most 40 cells in 2-D, 27 in 3-D),
/// quantized cell values and alpha from a three-decade ladder.
RandomInstance random_instance(std::uint64_t seed, long index);

struct SuiteResult {
  std::string name;
  int cases = 0;
  bool pass = true;
  double worst = 0.0;  // largest residual observed, 0 when clean
  std::string detail;

  bool operator==(const SuiteResult&) const = default;
};

struct PropertyReport {
  bool pass = true;
  std::vector<SuiteResult> suites;

  bool operator==(const PropertyReport&) const = default;
};

/// Seeded randomized property suites: averaging inequalities (Jensen,
/// contraction, total-variation monotonicity), subgradient preservation
/// under cell averaging, solver duality and oracle agreement, total
/// variation monotone in alpha, and refinement idempotence. count is the
/// number of cases per suite; 0 yields an empty passing report.
/// quadrature_depth controls the test-field integrals of the subgradient
/// suite (2^depth midpoint points per axis, capped at 4 in 3-D).
PropertyReport run_property_suites(std::uint64_t seed, int count,
                                   int quadrature_depth = 6);

}  // namespace pcrof
