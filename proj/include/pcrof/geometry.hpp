#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Exact float geometry of rectilinear n-polytopes, grids, partitions,
// fibers and faces. All predicates compare input coordinates directly;
// no epsilons. Every value here is immutable after construction.

namespace pcrof {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool proper() const { return lo < hi; }
};

class HyperRect {
 public:
  HyperRect() = default;
  explicit HyperRect(std::vector<Interval> sides);

  int dim() const { return static_cast<int>(sides_.size()); }
  const Interval& side(int i) const { return sides_[static_cast<size_t>(i)]; }
  const std::vector<Interval>& sides() const { return sides_; }
  double volume() const;
  std::vector<double> midpoint() const;

 private:
  std::vector<Interval> sides_;
};

/// A rectilinear grid: per-axis sorted, duplicate-free plane coordinates.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<std::vector<double>> planes);

  int dim() const { return static_cast<int>(planes_.size()); }
  const std::vector<double>& axis(int i) const {
    return planes_[static_cast<size_t>(i)];
  }
  const std::vector<std::vector<double>>& planes() const { return planes_; }

  /// True if this grid contains every plane of `other` (per axis).
  bool contains(const Grid& other) const;

  bool operator==(const Grid& other) const { return planes_ == other.planes_; }

 private:
  std::vector<std::vector<double>> planes_;
};

Grid union_grids(const Grid& a, const Grid& b);

/// A finite union of axis-aligned boxes, stored canonicalized: the input
/// boxes are subdivided along all their boundary planes and the resulting
/// elementary boxes inside the union are kept. Pieces have pairwise
/// disjoint interiors and their union equals the original set (up to the
/// closure of shared faces).
class RectPolytope {
 public:
  RectPolytope() = default;  // empty; usable only after from_boxes
  static RectPolytope from_boxes(const std::vector<HyperRect>& boxes);

  int dim() const { return dim_; }
  double volume() const;
  const std::vector<HyperRect>& pieces() const { return pieces_; }

  /// Per-axis sorted coordinates of the canonical subdivision.
  const std::vector<std::vector<double>>& arrangement() const {
    return coords_;
  }

  /// Interior membership. A point on internal subdivision planes is
  /// interior iff all adjacent elementary boxes belong to the polytope.
  bool contains_interior(std::span<const double> x) const;

  HyperRect bounding_box() const;

 private:
  bool cell_inside(std::span<const int> idx) const;
  size_t flat_index(std::span<const int> idx) const;

  int dim_ = 0;
  std::vector<std::vector<double>> coords_;
  std::vector<std::uint8_t> inside_;  // one flag per elementary box
  std::vector<size_t> strides_;
  std::vector<HyperRect> pieces_;

  friend Grid boundary_grid(const RectPolytope& p);
  friend std::vector<Interval> fibers(const RectPolytope& domain, int axis,
                                      std::span<const double> base);
};

/// G(P): the smallest grid whose plane union covers the boundary of P.
Grid boundary_grid(const RectPolytope& p);

/// Maximal open intervals of {x_axis : point in domain} with the other
/// coordinates fixed by `base` (length dim-1, axis skipped).
std::vector<Interval> fibers(const RectPolytope& domain, int axis,
                             std::span<const double> base);

/// Cells of the partition Q(G) of a domain, for a grid containing the
/// domain's boundary grid. Cells are the open grid boxes whose midpoints
/// lie in the interior of the domain, indexed in lexicographic order of
/// their lower corners.
class Partition {
 public:
  Partition() = default;  // empty; usable only after make_partition
  const RectPolytope& domain() const { return domain_; }
  const Grid& grid() const { return grid_; }
  int dim() const { return domain_.dim(); }
  const std::vector<HyperRect>& cells() const { return cells_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }

  /// Cell containing x, or -1. x must not lie on a grid plane.
  int cell_at(std::span<const double> x) const;

  /// Cell id of the grid box with the given per-axis interval indices,
  /// or -1 if that box is outside the domain.
  int box_to_cell(std::span<const int> idx) const;

  /// Number of grid intervals per axis.
  const std::vector<int>& axis_sizes() const { return sizes_; }

 private:
  RectPolytope domain_;
  Grid grid_;
  std::vector<HyperRect> cells_;
  std::vector<int> cell_of_box_;  // flat grid box -> cell id or -1
  std::vector<int> sizes_;
  std::vector<size_t> strides_;

  friend Partition make_partition(const RectPolytope& domain, const Grid& g);
};

Partition make_partition(const RectPolytope& domain, const Grid& grid);

struct Face {
  int cell_a = -1;
  int cell_b = -1;
  int axis = -1;
  double measure = 0.0;  // (n-1)-volume of the shared boundary
};

/// One face per unordered cell pair sharing positive (n-1)-measure in a
/// common grid plane. Deterministic order: by cell_a, then axis.
std::vector<Face> face_adjacency(const Partition& p);

}  // namespace pcrof
