#pragma once

#include <span>
#include <string>
#include <vector>

#include "pcrof/geometry.hpp"
#include "pcrof/pcr.hpp"

// Membership checks for the PCR part of the TV subdifferential at zero:
// per-axis running fiber integrals stay within the bound and vanish at
// fiber endpoints. Since candidates are piecewise constant, partial
// integrals are piecewise affine in the integration variable, so the sup
// is attained at cell breakpoints and the whole check is finite.

namespace pcrof {

struct AxisComponent {
  int axis = 0;
  PcrFunction g;
};

struct GammaElement {
  std::vector<AxisComponent> components;  // distinct axes, shared grid
  double bound = 1.0;                     // alpha
};

struct MembershipReport {
  bool pass = true;
  double worst_partial = 0.0;   // max |running integral| over all fibers
  double worst_endpoint = 0.0;  // max |full-fiber integral|
  int failing_axis = -1;
  std::string detail;
};

/// Checks one axis component against the bound: every running partial
/// integral along every fiber must stay within [-bound-tol, bound+tol]
/// and the full-fiber integral must vanish within tol. One representative
/// transverse midpoint per (n-1)-dimensional cell shadow suffices.
MembershipReport check_axis_membership(const AxisComponent& c,
                                       const RectPolytope& domain,
                                       double bound, double tol);

/// Conjunction over all components with the element's bound.
MembershipReport check_gamma(const GammaElement& e, const RectPolytope& domain,
                             double tol);

/// The piecewise-affine vector field with components
/// H_i(x) = integral of g_i from the fiber's left endpoint to x_i.
/// Affine in x_i, piecewise constant transversally; vanishes at fiber
/// endpoints and satisfies sup |H_i| <= bound when membership holds.
class DualField {
 public:
  double value(int axis, std::span<const double> x) const;
  /// Distributional x_axis-derivative at x: the stored per-cell slope.
  double slope(int axis, std::span<const double> x) const;
  /// Max |H_axis| over all breakpoints (where the extrema live).
  double sup_abs(int axis) const;
  int dim() const { return static_cast<int>(axes_.size()); }
  double bound() const { return bound_; }

 private:
  struct Segment {
    double x0, x1;  // cell extent along the axis
    double v0;      // H at x0
    double g;       // slope (the component value on the cell)
  };
  struct AxisData {
    std::vector<std::vector<double>> tcoords;  // transverse plane coords
    std::vector<std::vector<Segment>> columns;  // per flat transverse box
    std::vector<size_t> tstrides;
  };
  std::vector<AxisData> axes_;
  double bound_ = 0.0;

  friend DualField build_dual_field(const GammaElement& e,
                                    const RectPolytope& domain);
};

/// Requires check_gamma to pass (tol 1e-9); throws otherwise.
DualField build_dual_field(const GammaElement& e, const RectPolytope& domain);

/// A smooth compactly supported test field: component i is
/// amplitude_i * prod_j bump(x_j) with quartic bumps on the support box,
/// normalized to sup 1 per factor. Analytic derivatives, |H_i| <= bound.
class BumpField {
 public:
  BumpField(HyperRect support, std::vector<double> amplitudes);

  int dim() const { return support_.dim(); }
  double bound() const;
  const HyperRect& support() const { return support_; }

  double amplitude(int i) const { return amplitudes_[static_cast<size_t>(i)]; }
  double component(int i, std::span<const double> x) const;
  /// d H_i / d x_i at x.
  double component_derivative(int i, std::span<const double> x) const;
  /// Antiderivative helper: the bump factor on axis `axis` evaluated at t.
  double factor(int axis, double t) const;

 private:
  HyperRect support_;
  std::vector<double> amplitudes_;
};

/// Components g_i = A_grid(dH_i/dx_i). The axis-i factor integrates the
/// analytic derivative exactly (difference of bump values at the cell
/// faces); transverse factors use midpoint quadrature with
/// 2^quadrature_depth subdivisions per axis.
GammaElement averaged_divergence(const BumpField& h, const Grid& grid,
                                 const RectPolytope& domain,
                                 int quadrature_depth = 6);

}  // namespace pcrof
