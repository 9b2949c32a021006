#include "pcrof/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcrof {

namespace {

// Candidate elementary interval indices for coordinate x on a sorted axis.
// Returns false if x lies outside [coords.front(), coords.back()] or the
// membership cannot hold (boundary of the arrangement). Indices refer to
// intervals (coords[k], coords[k+1]).
bool interval_candidates(const std::vector<double>& coords, double x,
                         int out[2], int& count) {
  const int m = static_cast<int>(coords.size());
  if (m < 2 || x < coords.front() || x > coords.back()) return false;
  auto it = std::lower_bound(coords.begin(), coords.end(), x);
  int k = static_cast<int>(it - coords.begin());
  if (it != coords.end() && *it == x) {
    // On a plane: both adjacent intervals must be checked.
    if (k == 0 || k == m - 1) return false;  // arrangement boundary
    out[0] = k - 1;
    out[1] = k;
    count = 2;
  } else {
    out[0] = k - 1;
    count = 1;
  }
  return true;
}

void check_dim(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

HyperRect::HyperRect(std::vector<Interval> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw std::invalid_argument("HyperRect: empty sides");
  for (const Interval& s : sides_) {
    if (!(s.lo < s.hi)) {
      throw std::invalid_argument("HyperRect: improper interval [" +
                                  std::to_string(s.lo) + ", " +
                                  std::to_string(s.hi) + "]");
    }
  }
}

double HyperRect::volume() const {
  double v = 1.0;
  for (const Interval& s : sides_) v *= s.length();
  return v;
}

std::vector<double> HyperRect::midpoint() const {
  std::vector<double> m(sides_.size());
  for (size_t i = 0; i < sides_.size(); ++i) m[i] = sides_[i].mid();
  return m;
}

Grid::Grid(std::vector<std::vector<double>> planes)
    : planes_(std::move(planes)) {
  for (auto& axis : planes_) {
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    for (double c : axis) {
      if (!std::isfinite(c)) throw std::invalid_argument("Grid: non-finite plane");
    }
  }
}

bool Grid::contains(const Grid& other) const {
  if (dim() != other.dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const auto& mine = planes_[static_cast<size_t>(i)];
    for (double c : other.axis(i)) {
      if (!std::binary_search(mine.begin(), mine.end(), c)) return false;
    }
  }
  return true;
}

Grid union_grids(const Grid& a, const Grid& b) {
  check_dim(a.dim(), b.dim(), "union_grids");
  std::vector<std::vector<double>> planes(static_cast<size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) {
    auto& out = planes[static_cast<size_t>(i)];
    std::merge(a.axis(i).begin(), a.axis(i).end(), b.axis(i).begin(),
               b.axis(i).end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return Grid(std::move(planes));
}

RectPolytope RectPolytope::from_boxes(const std::vector<HyperRect>& boxes) {
  if (boxes.empty())
    throw std::invalid_argument("RectPolytope: no boxes given");
  const int n = boxes.front().dim();
  for (const HyperRect& b : boxes) check_dim(b.dim(), n, "RectPolytope");

  RectPolytope p;
  p.dim_ = n;
  p.coords_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& axis = p.coords_[static_cast<size_t>(i)];
    for (const HyperRect& b : boxes) {
      axis.push_back(b.side(i).lo);
      axis.push_back(b.side(i).hi);
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }

  p.strides_.assign(static_cast<size_t>(n), 1);
  size_t total = 1;
  for (int i = n - 1; i >= 0; --i) {
    p.strides_[static_cast<size_t>(i)] = total;
    total *= p.coords_[static_cast<size_t>(i)].size() - 1;
  }
  p.inside_.assign(total, 0);

  // Classify elementary boxes by midpoint against the input boxes.
  std::vector<int> idx(static_cast<size_t>(n), 0);
  std::vector<double> mid(static_cast<size_t>(n));
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rest = flat;
    for (int i = 0; i < n; ++i) {
      idx[static_cast<size_t>(i)] =
          static_cast<int>(rest / p.strides_[static_cast<size_t>(i)]);
      rest %= p.strides_[static_cast<size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      const auto& axis = p.coords_[static_cast<size_t>(i)];
      mid[static_cast<size_t>(i)] =
          0.5 * (axis[static_cast<size_t>(idx[static_cast<size_t>(i)])] +
                 axis[static_cast<size_t>(idx[static_cast<size_t>(i)]) + 1]);
    }
    for (const HyperRect& b : boxes) {
      bool in = true;
      for (int i = 0; i < n && in; ++i) {
        in = b.side(i).lo < mid[static_cast<size_t>(i)] &&
             mid[static_cast<size_t>(i)] < b.side(i).hi;
      }
      if (in) {
        p.inside_[flat] = 1;
        break;
      }
    }
  }

  for (size_t flat = 0; flat < total; ++flat) {
    if (!p.inside_[flat]) continue;
    size_t rest = flat;
    std::vector<Interval> sides(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      int k = static_cast<int>(rest / p.strides_[static_cast<size_t>(i)]);
      rest %= p.strides_[static_cast<size_t>(i)];
      const auto& axis = p.coords_[static_cast<size_t>(i)];
      sides[static_cast<size_t>(i)] = {axis[static_cast<size_t>(k)],
                                       axis[static_cast<size_t>(k) + 1]};
    }
    p.pieces_.emplace_back(std::move(sides));
  }
  if (p.pieces_.empty())
    throw std::invalid_argument("RectPolytope: empty union");
  return p;
}

size_t RectPolytope::flat_index(std::span<const int> idx) const {
  size_t flat = 0;
  for (int i = 0; i < dim_; ++i)
    flat += static_cast<size_t>(idx[static_cast<size_t>(i)]) *
            strides_[static_cast<size_t>(i)];
  return flat;
}

bool RectPolytope::cell_inside(std::span<const int> idx) const {
  return inside_[flat_index(idx)] != 0;
}

double RectPolytope::volume() const {
  double v = 0.0;
  for (const HyperRect& b : pieces_) v += b.volume();
  return v;
}

HyperRect RectPolytope::bounding_box() const {
  std::vector<Interval> sides(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    sides[static_cast<size_t>(i)] = {coords_[static_cast<size_t>(i)].front(),
                                     coords_[static_cast<size_t>(i)].back()};
  }
  return HyperRect(std::move(sides));
}

bool RectPolytope::contains_interior(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("contains_interior: wrong point dimension");
  // Per-axis candidate intervals; all combinations must be inside.
  std::vector<int> cand(static_cast<size_t>(2 * dim_));
  std::vector<int> counts(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    int c2[2];
    int cnt = 0;
    if (!interval_candidates(coords_[static_cast<size_t>(i)],
                             x[static_cast<size_t>(i)], c2, cnt))
      return false;
    cand[static_cast<size_t>(2 * i)] = c2[0];
    cand[static_cast<size_t>(2 * i + 1)] = cnt == 2 ? c2[1] : c2[0];
    counts[static_cast<size_t>(i)] = cnt;
  }
  std::vector<int> pick(static_cast<size_t>(dim_), 0);
  std::vector<int> idx(static_cast<size_t>(dim_));
  while (true) {
    for (int i = 0; i < dim_; ++i) {
      idx[static_cast<size_t>(i)] =
          cand[static_cast<size_t>(2 * i + pick[static_cast<size_t>(i)])];
    }
    if (!cell_inside(idx)) return false;
    int i = dim_ - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] + 1 >=
                         counts[static_cast<size_t>(i)]) {
      pick[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++pick[static_cast<size_t>(i)];
  }
  return true;
}

Grid boundary_grid(const RectPolytope& p) {
  const int n = p.dim();
  std::vector<std::vector<double>> planes(static_cast<size_t>(n));
  // A plane is needed iff membership flips across it for some transverse
  // elementary cell (outside the arrangement counts as outside).
  std::vector<int> idx(static_cast<size_t>(n), 0);
  for (int axis = 0; axis < n; ++axis) {
    const auto& coords = p.coords_[static_cast<size_t>(axis)];
    const int m = static_cast<int>(coords.size());
    std::vector<char> needed(static_cast<size_t>(m), 0);

    // Enumerate transverse elementary cells.
    std::vector<int> sizes(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      sizes[static_cast<size_t>(i)] =
          static_cast<int>(p.coords_[static_cast<size_t>(i)].size()) - 1;
    std::fill(idx.begin(), idx.end(), 0);
    bool done = false;
    while (!done) {
      for (int k = 0; k < m; ++k) {
        bool below = false, above = false;
        if (k > 0) {
          idx[static_cast<size_t>(axis)] = k - 1;
          below = p.cell_inside(idx);
        }
        if (k < m - 1) {
          idx[static_cast<size_t>(axis)] = k;
          above = p.cell_inside(idx);
        }
        if (below != above) needed[static_cast<size_t>(k)] = 1;
      }
      // Advance transverse multi-index (skip `axis`).
      int i = n - 1;
      while (i >= 0) {
        if (i == axis) {
          --i;
          continue;
        }
        if (idx[static_cast<size_t>(i)] + 1 < sizes[static_cast<size_t>(i)]) {
          ++idx[static_cast<size_t>(i)];
          break;
        }
        idx[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) done = true;
    }
    for (int k = 0; k < m; ++k) {
      if (needed[static_cast<size_t>(k)])
        planes[static_cast<size_t>(axis)].push_back(
            coords[static_cast<size_t>(k)]);
    }
  }
  return Grid(std::move(planes));
}

std::vector<Interval> fibers(const RectPolytope& domain, int axis,
                             std::span<const double> base) {
  const int n = domain.dim();
  if (axis < 0 || axis >= n)
    throw std::invalid_argument("fibers: axis out of range");
  if (static_cast<int>(base.size()) != n - 1)
    throw std::invalid_argument("fibers: base must fix dim-1 coordinates");

  const auto& coords = domain.coords_[static_cast<size_t>(axis)];
  const int segs = static_cast<int>(coords.size()) - 1;
  std::vector<double> point(static_cast<size_t>(n));
  for (int i = 0, j = 0; i < n; ++i) {
    if (i != axis) point[static_cast<size_t>(i)] = base[static_cast<size_t>(j++)];
  }

  std::vector<char> in(static_cast<size_t>(segs), 0);
  for (int k = 0; k < segs; ++k) {
    point[static_cast<size_t>(axis)] =
        0.5 * (coords[static_cast<size_t>(k)] + coords[static_cast<size_t>(k) + 1]);
    in[static_cast<size_t>(k)] = domain.contains_interior(point) ? 1 : 0;
  }

  std::vector<Interval> out;
  int k = 0;
  while (k < segs) {
    if (!in[static_cast<size_t>(k)]) {
      ++k;
      continue;
    }
    int j = k;
    while (j + 1 < segs && in[static_cast<size_t>(j) + 1]) ++j;
    out.push_back({coords[static_cast<size_t>(k)], coords[static_cast<size_t>(j) + 1]});
    k = j + 1;
  }
  return out;
}

Partition make_partition(const RectPolytope& domain, const Grid& grid) {
  check_dim(domain.dim(), grid.dim(), "make_partition");
  const Grid gb = boundary_grid(domain);
  for (int i = 0; i < domain.dim(); ++i) {
    const auto& have = grid.axis(i);
    for (double c : gb.axis(i)) {
      if (!std::binary_search(have.begin(), have.end(), c)) {
        throw std::invalid_argument(
            "make_partition: grid is missing domain boundary plane x_" +
            std::to_string(i) + " = " + std::to_string(c));
      }
    }
  }

  const int n = domain.dim();
  Partition p;
  p.domain_ = domain;
  p.grid_ = grid;
  p.sizes_.resize(static_cast<size_t>(n));
  p.strides_.assign(static_cast<size_t>(n), 1);
  size_t total = 1;
  for (int i = n - 1; i >= 0; --i) {
    p.sizes_[static_cast<size_t>(i)] =
        static_cast<int>(grid.axis(i).size()) - 1;
    p.strides_[static_cast<size_t>(i)] = total;
    total *= static_cast<size_t>(p.sizes_[static_cast<size_t>(i)]);
  }
  p.cell_of_box_.assign(total, -1);

  std::vector<int> idx(static_cast<size_t>(n), 0);
  std::vector<double> mid(static_cast<size_t>(n));
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rest = flat;
    for (int i = 0; i < n; ++i) {
      idx[static_cast<size_t>(i)] =
          static_cast<int>(rest / p.strides_[static_cast<size_t>(i)]);
      rest %= p.strides_[static_cast<size_t>(i)];
    }
    std::vector<Interval> sides(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& axis = grid.axis(i);
      int k = idx[static_cast<size_t>(i)];
      sides[static_cast<size_t>(i)] = {axis[static_cast<size_t>(k)],
                                       axis[static_cast<size_t>(k) + 1]};
      mid[static_cast<size_t>(i)] = sides[static_cast<size_t>(i)].mid();
    }
    if (domain.contains_interior(mid)) {
      p.cell_of_box_[flat] = static_cast<int>(p.cells_.size());
      p.cells_.emplace_back(std::move(sides));
    }
  }
  return p;
}

int Partition::box_to_cell(std::span<const int> idx) const {
  size_t flat = 0;
  for (int i = 0; i < dim(); ++i) {
    int k = idx[static_cast<size_t>(i)];
    if (k < 0 || k >= sizes_[static_cast<size_t>(i)]) return -1;
    flat += static_cast<size_t>(k) * strides_[static_cast<size_t>(i)];
  }
  return cell_of_box_[flat];
}

int Partition::cell_at(std::span<const double> x) const {
  std::vector<int> idx(static_cast<size_t>(dim()));
  for (int i = 0; i < dim(); ++i) {
    const auto& axis = grid_.axis(i);
    double xi = x[static_cast<size_t>(i)];
    if (xi < axis.front() || xi > axis.back()) return -1;
    auto it = std::upper_bound(axis.begin(), axis.end(), xi);
    int k = static_cast<int>(it - axis.begin()) - 1;
    if (k < 0 || k >= sizes_[static_cast<size_t>(i)]) return -1;
    if (axis[static_cast<size_t>(k)] == xi) return -1;  // on a plane
    idx[static_cast<size_t>(i)] = k;
  }
  return box_to_cell(idx);
}

std::vector<Face> face_adjacency(const Partition& p) {
  const int n = p.dim();
  std::vector<Face> faces;
  std::vector<int> idx(static_cast<size_t>(n));
  for (int a = 0; a < p.cell_count(); ++a) {
    const HyperRect& cell = p.cells()[static_cast<size_t>(a)];
    for (int i = 0; i < n; ++i) {
      const auto& axis = p.grid().axis(i);
      idx[static_cast<size_t>(i)] = static_cast<int>(
          std::lower_bound(axis.begin(), axis.end(), cell.side(i).lo) -
          axis.begin());
    }
    for (int i = 0; i < n; ++i) {
      ++idx[static_cast<size_t>(i)];
      int b = p.box_to_cell(idx);
      --idx[static_cast<size_t>(i)];
      if (b < 0) continue;
      double measure = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) measure *= cell.side(j).length();
      }
      faces.push_back({a, b, i, measure});
    }
  }
  return faces;
}

}  // namespace pcrof
