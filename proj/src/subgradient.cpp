#include "pcrof/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcrof {

namespace {

// Visit the (n-1)-dimensional transverse boxes of a grid, skipping `axis`.
// fn receives the transverse midpoint embedded as a base vector (length
// n-1, axis omitted).
template <typename F>
void for_each_transverse_box(const Grid& grid, int axis, F&& fn) {
  const int n = grid.dim();
  std::vector<int> sizes, axes;
  for (int i = 0; i < n; ++i) {
    if (i == axis) continue;
    axes.push_back(i);
    sizes.push_back(static_cast<int>(grid.axis(i).size()) - 1);
  }
  for (int s : sizes) {
    if (s <= 0) return;
  }
  std::vector<int> idx(sizes.size(), 0);
  std::vector<double> base(sizes.size());
  while (true) {
    for (size_t j = 0; j < axes.size(); ++j) {
      const auto& coords = grid.axis(axes[j]);
      base[j] = 0.5 * (coords[static_cast<size_t>(idx[j])] +
                       coords[static_cast<size_t>(idx[j]) + 1]);
    }
    fn(std::span<const double>(base), std::span<const int>(idx));
    int j = static_cast<int>(sizes.size()) - 1;
    while (j >= 0 && idx[static_cast<size_t>(j)] + 1 >= sizes[static_cast<size_t>(j)]) {
      idx[static_cast<size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
    ++idx[static_cast<size_t>(j)];
  }
}

std::vector<double> embed_point(std::span<const double> base, int axis,
                                double xi) {
  std::vector<double> x(base.size() + 1);
  for (size_t i = 0, j = 0; i < x.size(); ++i) {
    x[i] = (static_cast<int>(i) == axis) ? xi : base[j++];
  }
  return x;
}

double midpoint_mean(const BumpField& h, int axis, const Interval& cell,
                     int depth) {
  const long m = 1L << depth;
  double sum = 0.0;
  const double step = cell.length() / static_cast<double>(m);
  for (long k = 0; k < m; ++k) {
    sum += h.factor(axis, cell.lo + (static_cast<double>(k) + 0.5) * step);
  }
  return sum / static_cast<double>(m);
}

}  // namespace

MembershipReport check_axis_membership(const AxisComponent& c,
                                       const RectPolytope& domain,
                                       double bound, double tol) {
  const int axis = c.axis;
  const Partition& part = c.g.partition;
  if (axis < 0 || axis >= domain.dim())
    throw std::invalid_argument("check_axis_membership: axis out of range");
  if (!part.grid().contains(boundary_grid(domain)))
    throw std::invalid_argument(
        "check_axis_membership: component grid does not contain the domain "
        "boundary grid");

  MembershipReport report;
  const auto& coords = part.grid().axis(axis);
  for_each_transverse_box(
      part.grid(), axis,
      [&](std::span<const double> base, std::span<const int>) {
        for (const Interval& fiber : fibers(domain, axis, base)) {
          auto lo = std::lower_bound(coords.begin(), coords.end(), fiber.lo);
          auto hi = std::lower_bound(coords.begin(), coords.end(), fiber.hi);
          double run = 0.0;
          for (auto it = lo; it != hi; ++it) {
            const double a = *it, b = *(it + 1);
            auto x = embed_point(base, axis, 0.5 * (a + b));
            const int cell = part.cell_at(x);
            if (cell < 0)
              throw std::logic_error(
                  "check_axis_membership: fiber segment without a cell");
            run += (b - a) * c.g.values[static_cast<size_t>(cell)];
            report.worst_partial = std::max(report.worst_partial, std::abs(run));
          }
          report.worst_endpoint =
              std::max(report.worst_endpoint, std::abs(run));
        }
      });
  report.pass = report.worst_partial <= bound + tol &&
                report.worst_endpoint <= tol;
  if (!report.pass) report.failing_axis = axis;
  return report;
}

MembershipReport check_gamma(const GammaElement& e, const RectPolytope& domain,
                             double tol) {
  MembershipReport total;
  for (size_t i = 0; i < e.components.size(); ++i) {
    for (size_t j = i + 1; j < e.components.size(); ++j) {
      if (e.components[i].axis == e.components[j].axis)
        throw std::invalid_argument("check_gamma: duplicate axis component");
      if (!(e.components[i].g.partition.grid() ==
            e.components[j].g.partition.grid()))
        throw std::invalid_argument("check_gamma: components on different grids");
    }
  }
  for (const AxisComponent& c : e.components) {
    MembershipReport r = check_axis_membership(c, domain, e.bound, tol);
    total.worst_partial = std::max(total.worst_partial, r.worst_partial);
    total.worst_endpoint = std::max(total.worst_endpoint, r.worst_endpoint);
    if (!r.pass && total.pass) {
      total.pass = false;
      total.failing_axis = c.axis;
      total.detail = "axis " + std::to_string(c.axis) +
                     " violates the bound or endpoint condition";
    }
  }
  return total;
}

double DualField::value(int axis, std::span<const double> x) const {
  const AxisData& data = axes_[static_cast<size_t>(axis)];
  if (data.columns.empty()) return 0.0;
  size_t flat = 0;
  size_t j = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (static_cast<int>(i) == axis) continue;
    const auto& coords = data.tcoords[j];
    const double xi = x[i];
    if (xi < coords.front() || xi >= coords.back()) return 0.0;
    auto it = std::upper_bound(coords.begin(), coords.end(), xi);
    flat += static_cast<size_t>(it - coords.begin() - 1) * data.tstrides[j];
    ++j;
  }
  const double xi = x[static_cast<size_t>(axis)];
  for (const Segment& s : data.columns[flat]) {
    if (s.x0 <= xi && xi <= s.x1) return s.v0 + s.g * (xi - s.x0);
  }
  return 0.0;
}

double DualField::slope(int axis, std::span<const double> x) const {
  const AxisData& data = axes_[static_cast<size_t>(axis)];
  if (data.columns.empty()) return 0.0;
  size_t flat = 0;
  size_t j = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (static_cast<int>(i) == axis) continue;
    const auto& coords = data.tcoords[j];
    const double xi = x[i];
    if (xi < coords.front() || xi >= coords.back()) return 0.0;
    auto it = std::upper_bound(coords.begin(), coords.end(), xi);
    flat += static_cast<size_t>(it - coords.begin() - 1) * data.tstrides[j];
    ++j;
  }
  const double xi = x[static_cast<size_t>(axis)];
  for (const Segment& s : data.columns[flat]) {
    if (s.x0 <= xi && xi < s.x1) return s.g;
  }
  return 0.0;
}

double DualField::sup_abs(int axis) const {
  double sup = 0.0;
  for (const auto& column : axes_[static_cast<size_t>(axis)].columns) {
    for (const Segment& s : column) {
      sup = std::max(sup, std::abs(s.v0));
      sup = std::max(sup, std::abs(s.v0 + s.g * (s.x1 - s.x0)));
    }
  }
  return sup;
}

DualField build_dual_field(const GammaElement& e, const RectPolytope& domain) {
  MembershipReport check = check_gamma(e, domain, 1e-9);
  if (!check.pass)
    throw std::invalid_argument("build_dual_field: " + check.detail);

  const int n = domain.dim();
  DualField field;
  field.bound_ = e.bound;
  field.axes_.resize(static_cast<size_t>(n));
  for (const AxisComponent& c : e.components) {
    const int axis = c.axis;
    const Partition& part = c.g.partition;
    {
      auto& data = field.axes_[static_cast<size_t>(axis)];
      size_t total = 1;
      for (int i = 0; i < n; ++i) {
        if (i == axis) continue;
        data.tcoords.push_back(part.grid().axis(i));
      }
      data.tstrides.assign(data.tcoords.size(), 1);
      for (int i = static_cast<int>(data.tcoords.size()) - 1; i >= 0; --i) {
        data.tstrides[static_cast<size_t>(i)] = total;
        total *= data.tcoords[static_cast<size_t>(i)].size() - 1;
      }
      data.columns.assign(total, {});

      const auto& coords = part.grid().axis(axis);
      for_each_transverse_box(
          part.grid(), axis,
          [&](std::span<const double> base, std::span<const int> tidx) {
            size_t flat = 0;
            for (size_t i = 0; i < tidx.size(); ++i)
              flat += static_cast<size_t>(tidx[i]) * data.tstrides[i];
            auto& column = data.columns[flat];
            for (const Interval& fiber : fibers(domain, axis, base)) {
              auto lo = std::lower_bound(coords.begin(), coords.end(), fiber.lo);
              auto hi = std::lower_bound(coords.begin(), coords.end(), fiber.hi);
              double run = 0.0;
              for (auto it = lo; it != hi; ++it) {
                const double a = *it, b = *(it + 1);
                auto x = embed_point(base, axis, 0.5 * (a + b));
                const int cell = part.cell_at(x);
                const double g = c.g.values[static_cast<size_t>(cell)];
                column.push_back({a, b, run, g});
                run += (b - a) * g;
              }
            }
          });
    }
  }
  return field;
}

BumpField::BumpField(HyperRect support, std::vector<double> amplitudes)
    : support_(std::move(support)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<int>(amplitudes_.size()) != support_.dim())
    throw std::invalid_argument("BumpField: one amplitude per component");
}

double BumpField::bound() const {
  double b = 0.0;
  for (double a : amplitudes_) b = std::max(b, std::abs(a));
  return b;
}

double BumpField::factor(int axis, double t) const {
  const Interval& s = support_.side(axis);
  if (t <= s.lo || t >= s.hi) return 0.0;
  const double w = s.length();
  const double p = (t - s.lo) * (s.hi - t);
  return 16.0 * p * p / (w * w * w * w);
}

double BumpField::component(int i, std::span<const double> x) const {
  double v = amplitudes_[static_cast<size_t>(i)];
  for (int j = 0; j < dim(); ++j) v *= factor(j, x[static_cast<size_t>(j)]);
  return v;
}

double BumpField::component_derivative(int i, std::span<const double> x) const {
  const Interval& s = support_.side(i);
  const double t = x[static_cast<size_t>(i)];
  if (t <= s.lo || t >= s.hi) return 0.0;
  const double w = s.length();
  const double p = (t - s.lo) * (s.hi - t);
  const double dfactor = 32.0 * p * (s.lo + s.hi - 2.0 * t) / (w * w * w * w);
  double v = amplitudes_[static_cast<size_t>(i)] * dfactor;
  for (int j = 0; j < dim(); ++j) {
    if (j != i) v *= factor(j, x[static_cast<size_t>(j)]);
  }
  return v;
}

GammaElement averaged_divergence(const BumpField& h, const Grid& grid,
                                 const RectPolytope& domain,
                                 int quadrature_depth) {
  if (quadrature_depth < 1 || quadrature_depth > 20)
    throw std::invalid_argument("averaged_divergence: quadrature depth");
  const int n = domain.dim();
  if (h.dim() != n)
    throw std::invalid_argument("averaged_divergence: dimension mismatch");
  Partition part = make_partition(domain, grid);

  GammaElement e;
  e.bound = h.bound();
  for (int axis = 0; axis < n; ++axis) {
    PcrFunction g;
    g.partition = part;
    g.values.resize(static_cast<size_t>(part.cell_count()));
    for (int c = 0; c < part.cell_count(); ++c) {
      const HyperRect& cell = part.cells()[static_cast<size_t>(c)];
      // Mean of dH_axis/dx_axis over the cell. The axis factor integrates
      // exactly (difference of bump values at the faces); the transverse
      // factors are midpoint-rule means.
      double v = (h.factor(axis, cell.side(axis).hi) -
                  h.factor(axis, cell.side(axis).lo)) /
                 cell.side(axis).length();
      for (int j = 0; j < n; ++j) {
        if (j == axis) continue;
        v *= midpoint_mean(h, j, cell.side(j), quadrature_depth);
      }
      v *= h.amplitude(axis);
      if (!std::isfinite(v))
        throw std::runtime_error("averaged_divergence: non-finite sample");
      g.values[static_cast<size_t>(c)] = v;
    }
    e.components.push_back({axis, std::move(g)});
  }
  return e;
}

}  // namespace pcrof
