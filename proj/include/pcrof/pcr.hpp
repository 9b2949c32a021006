#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pcrof/geometry.hpp"

// Piecewise-constant-on-rectilinear-grid functions: level-set
// representation, minimal grids, cell averaging and the exact
// l1-anisotropic total variation.

namespace pcrof {

/// A function given by level sets: pairwise disjoint polytopes with
/// pairwise distinct values whose union is the domain. Construction
/// normalizes arbitrary (possibly overlapping) input pieces; uncovered
/// parts of the domain get value 0. Overlapping pieces with different
/// values are rejected.
class PcrPieces {
 public:
  PcrPieces() = default;  // empty; usable only after make
  static PcrPieces make(const RectPolytope& domain,
                        const std::vector<std::pair<RectPolytope, double>>& pieces);

  const RectPolytope& domain() const { return domain_; }
  const std::vector<std::pair<RectPolytope, double>>& level_sets() const {
    return level_sets_;
  }

 private:
  RectPolytope domain_;
  std::vector<std::pair<RectPolytope, double>> level_sets_;
};

/// A PCR function as one value per cell of a partition whose grid
/// contains the domain's boundary grid.
struct PcrFunction {
  Partition partition;
  std::vector<double> values;
};

/// A pointwise-evaluable field for averaging; integrals use midpoint-rule
/// tensor quadrature with 2^quadrature_depth subdivisions per axis.
struct SampledField {
  std::function<double(std::span<const double>)> eval;
  int quadrature_depth = 6;
};

/// G_f: union of the boundary grids of all level-set polytopes.
Grid minimal_grid(const PcrPieces& f);

/// Representation change onto Q(grid); requires grid to contain G_f.
PcrFunction resample(const PcrPieces& f, const Grid& grid);

/// A_G for PCR input: exact volume-weighted sub-cell means. The input
/// grid must refine `grid`.
PcrFunction average(const PcrFunction& u, const Grid& grid,
                    const RectPolytope& domain);

/// A_G for sampled input (quadrature path).
PcrFunction average(const SampledField& u, const Grid& grid,
                    const RectPolytope& domain);

/// J(u) for PCR u: sum over shared faces of measure * |jump|.
double tv_pcr(const PcrFunction& u);

enum class Norm { L1, L2, Linf };

/// Volume-weighted l^p norm of a PCR function.
double lp_norm(const PcrFunction& u, Norm p);

}  // namespace pcrof
