#include "pcrof/pcr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pcrof {

namespace {

std::vector<std::vector<double>> merged_arrangement(
    const RectPolytope& domain,
    const std::vector<std::pair<RectPolytope, double>>& pieces) {
  const int n = domain.dim();
  std::vector<std::vector<double>> coords(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& axis = coords[static_cast<size_t>(i)];
    axis = domain.arrangement()[static_cast<size_t>(i)];
    for (const auto& [poly, value] : pieces) {
      const auto& pa = poly.arrangement()[static_cast<size_t>(i)];
      axis.insert(axis.end(), pa.begin(), pa.end());
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }
  return coords;
}

// Visit elementary boxes of a coordinate arrangement.
template <typename F>
void for_each_cell(const std::vector<std::vector<double>>& coords, F&& fn) {
  const int n = static_cast<int>(coords.size());
  std::vector<int> idx(static_cast<size_t>(n), 0);
  std::vector<Interval> cell(static_cast<size_t>(n));
  bool done = false;
  for (int i = 0; i < n; ++i) {
    if (coords[static_cast<size_t>(i)].size() < 2) done = true;
  }
  while (!done) {
    for (int i = 0; i < n; ++i) {
      const auto& axis = coords[static_cast<size_t>(i)];
      int k = idx[static_cast<size_t>(i)];
      cell[static_cast<size_t>(i)] = {axis[static_cast<size_t>(k)],
                                      axis[static_cast<size_t>(k) + 1]};
    }
    fn(cell);
    int i = n - 1;
    while (i >= 0 &&
           idx[static_cast<size_t>(i)] + 2 >=
               static_cast<int>(coords[static_cast<size_t>(i)].size())) {
      idx[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
  }
}

}  // namespace

PcrPieces PcrPieces::make(
    const RectPolytope& domain,
    const std::vector<std::pair<RectPolytope, double>>& pieces) {
  const int n = domain.dim();
  for (const auto& [poly, value] : pieces) {
    if (poly.dim() != n)
      throw std::invalid_argument("PcrPieces: piece dimension mismatch");
    if (!std::isfinite(value))
      throw std::invalid_argument("PcrPieces: non-finite piece value");
  }

  auto coords = merged_arrangement(domain, pieces);
  std::map<double, std::vector<HyperRect>> by_value;
  for_each_cell(coords, [&](const std::vector<Interval>& cell) {
    std::vector<double> mid(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) mid[static_cast<size_t>(i)] =
        cell[static_cast<size_t>(i)].mid();
    const bool in_domain = domain.contains_interior(mid);
    bool have = false;
    double value = 0.0;
    for (const auto& [poly, v] : pieces) {
      if (!poly.contains_interior(mid)) continue;
      if (have && v != value)
        throw std::invalid_argument(
            "PcrPieces: overlapping pieces with conflicting values");
      have = true;
      value = v;
    }
    if (have && !in_domain)
      throw std::invalid_argument("PcrPieces: piece extends outside the domain");
    if (in_domain) by_value[have ? value : 0.0].push_back(HyperRect(cell));
  });

  PcrPieces out;
  out.domain_ = domain;
  for (auto& [value, boxes] : by_value)
    out.level_sets_.emplace_back(RectPolytope::from_boxes(boxes), value);
  return out;
}

Grid minimal_grid(const PcrPieces& f) {
  Grid g(std::vector<std::vector<double>>(
      static_cast<size_t>(f.domain().dim())));
  for (const auto& [poly, value] : f.level_sets())
    g = union_grids(g, boundary_grid(poly));
  return g;
}

PcrFunction resample(const PcrPieces& f, const Grid& grid) {
  if (!grid.contains(minimal_grid(f)))
    throw std::invalid_argument(
        "resample: grid too coarse (does not contain the minimal grid)");
  PcrFunction out;
  out.partition = make_partition(f.domain(), grid);
  out.values.resize(static_cast<size_t>(out.partition.cell_count()));
  for (int c = 0; c < out.partition.cell_count(); ++c) {
    auto mid = out.partition.cells()[static_cast<size_t>(c)].midpoint();
    bool found = false;
    for (const auto& [poly, value] : f.level_sets()) {
      if (poly.contains_interior(mid)) {
        out.values[static_cast<size_t>(c)] = value;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error("resample: cell midpoint not covered by any level set");
  }
  return out;
}

PcrFunction average(const PcrFunction& u, const Grid& grid,
                    const RectPolytope& domain) {
  if (!u.partition.grid().contains(grid))
    throw std::invalid_argument(
        "average: input grid is not a refinement of the target grid");
  PcrFunction out;
  out.partition = make_partition(domain, grid);
  const int cells = out.partition.cell_count();
  std::vector<double> mass(static_cast<size_t>(cells), 0.0);
  std::vector<double> vol(static_cast<size_t>(cells), 0.0);
  for (int c = 0; c < u.partition.cell_count(); ++c) {
    const HyperRect& fine = u.partition.cells()[static_cast<size_t>(c)];
    int coarse = out.partition.cell_at(fine.midpoint());
    if (coarse < 0)
      throw std::logic_error("average: fine cell not covered by target partition");
    const double v = fine.volume();
    mass[static_cast<size_t>(coarse)] += v * u.values[static_cast<size_t>(c)];
    vol[static_cast<size_t>(coarse)] += v;
  }
  out.values.resize(static_cast<size_t>(cells));
  for (int c = 0; c < cells; ++c) {
    if (vol[static_cast<size_t>(c)] <= 0.0)
      throw std::logic_error("average: empty coarse cell");
    out.values[static_cast<size_t>(c)] =
        mass[static_cast<size_t>(c)] / vol[static_cast<size_t>(c)];
  }
  return out;
}

PcrFunction average(const SampledField& u, const Grid& grid,
                    const RectPolytope& domain) {
  if (u.quadrature_depth < 1 || u.quadrature_depth > 20)
    throw std::invalid_argument("average: quadrature_depth out of range");
  PcrFunction out;
  out.partition = make_partition(domain, grid);
  const int n = domain.dim();
  const long m = 1L << u.quadrature_depth;
  out.values.resize(static_cast<size_t>(out.partition.cell_count()));
  std::vector<double> x(static_cast<size_t>(n));
  std::vector<long> k(static_cast<size_t>(n));
  for (int c = 0; c < out.partition.cell_count(); ++c) {
    const HyperRect& cell = out.partition.cells()[static_cast<size_t>(c)];
    double sum = 0.0;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= m;
    std::fill(k.begin(), k.end(), 0);
    for (long s = 0; s < total; ++s) {
      for (int i = 0; i < n; ++i) {
        const Interval& side = cell.side(i);
        x[static_cast<size_t>(i)] =
            side.lo + (static_cast<double>(k[static_cast<size_t>(i)]) + 0.5) *
                          side.length() / static_cast<double>(m);
      }
      const double v = u.eval(x);
      if (!std::isfinite(v))
        throw std::runtime_error("average: non-finite field sample");
      sum += v;
      int i = n - 1;
      while (i >= 0 && k[static_cast<size_t>(i)] + 1 >= m) {
        k[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i >= 0) ++k[static_cast<size_t>(i)];
    }
    out.values[static_cast<size_t>(c)] = sum / static_cast<double>(total);
  }
  return out;
}

double tv_pcr(const PcrFunction& u) {
  double total = 0.0;
  for (const Face& f : face_adjacency(u.partition)) {
    total += f.measure * std::abs(u.values[static_cast<size_t>(f.cell_a)] -
                                  u.values[static_cast<size_t>(f.cell_b)]);
  }
  return total;
}

double lp_norm(const PcrFunction& u, Norm p) {
  double acc = 0.0;
  for (int c = 0; c < u.partition.cell_count(); ++c) {
    const double v = std::abs(u.values[static_cast<size_t>(c)]);
    const double vol = u.partition.cells()[static_cast<size_t>(c)].volume();
    switch (p) {
      case Norm::L1: acc += vol * v; break;
      case Norm::L2: acc += vol * v * v; break;
      case Norm::Linf: acc = std::max(acc, v); break;
    }
  }
  return p == Norm::L2 ? std::sqrt(acc) : acc;
}

}  // namespace pcrof
