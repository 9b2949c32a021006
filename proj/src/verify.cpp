#include "pcrof/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "pcrof/subgradient.hpp"

namespace pcrof {

namespace {

std::vector<int> resolve_splits(const RefinementSpec& spec, int dim) {
  std::vector<int> splits;
  if (spec.splits_per_axis.size() == 1) {
    splits.assign(static_cast<size_t>(dim), spec.splits_per_axis[0]);
  } else if (spec.splits_per_axis.size() == static_cast<size_t>(dim)) {
    splits = spec.splits_per_axis;
  } else {
    throw std::invalid_argument(
        "RefinementSpec: splits_per_axis must have one entry or one per axis");
  }
  for (int s : splits) {
    if (s < 1)
      throw std::invalid_argument("RefinementSpec: splits must be >= 1");
  }
  return splits;
}

}  // namespace

Grid refine(const Grid& grid, const RefinementSpec& spec,
            const RectPolytope& domain) {
  if (!grid.contains(boundary_grid(domain)))
    throw std::invalid_argument(
        "refine: grid must contain the domain boundary grid");
  const int dim = grid.dim();
  const std::vector<int> splits = resolve_splits(spec, dim);
  if (!spec.extra_planes.empty() &&
      spec.extra_planes.size() != static_cast<size_t>(dim))
    throw std::invalid_argument("refine: extra_planes must have one list per axis");

  std::vector<std::vector<double>> planes(static_cast<size_t>(dim));
  for (int ax = 0; ax < dim; ++ax) {
    const std::vector<double>& axis = grid.axis(ax);
    std::vector<double>& out = planes[static_cast<size_t>(ax)];
    const int k = splits[static_cast<size_t>(ax)];
    for (size_t i = 0; i < axis.size(); ++i) {
      out.push_back(axis[i]);
      if (i + 1 < axis.size()) {
        for (int j = 1; j < k; ++j)
          out.push_back(axis[i] + (axis[i + 1] - axis[i]) * j / k);
      }
    }
    if (!spec.extra_planes.empty()) {
      const auto& extra = spec.extra_planes[static_cast<size_t>(ax)];
      out.insert(out.end(), extra.begin(), extra.end());
    }
  }
  return Grid(std::move(planes));
}

TheoremReport verify_theorem(const PcrPieces& f, double alpha,
                             const RefinementSpec& spec, double tol,
                             std::string instance_id) {
  if (!(alpha > 0.0)) throw std::invalid_argument("verify_theorem: alpha must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("verify_theorem: tol must be > 0");
  TheoremReport rep;
  rep.instance_id = std::move(instance_id);

  const RectPolytope& dom = f.domain();
  const Grid gf = union_grids(minimal_grid(f), boundary_grid(dom));
  const Grid gr = refine(gf, spec, dom);
  const PcrFunction fc = resample(f, gf);
  const PcrFunction fr = resample(f, gr);

  // The gap tolerance is chosen so the strong-convexity error bound
  // ||u - u*||_inf <= sqrt(2 gap / min v_i) stays well below tol.
  auto run = [&](const PcrFunction& data, double& gap_out, bool& certified) {
    CellGraph g = build_graph(data);
    const double vmin = *std::min_element(g.volume.begin(), g.volume.end());
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.tol_gap = std::max(1e-15, vmin * tol * tol / 32.0);
    RofSolution s = solve(g, cfg);
    gap_out = s.gap;
    certified = s.certified;
    return PcrFunction{data.partition, std::move(s.u)};
  };
  bool coarse_ok = false, refined_ok = false;
  rep.coarse = run(fc, rep.coarse_gap, coarse_ok);
  rep.refined = run(fr, rep.refined_gap, refined_ok);
  rep.certified = coarse_ok && refined_ok;

  const int nc = rep.coarse.partition.cell_count();
  std::vector<double> lo(static_cast<size_t>(nc),
                         std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<size_t>(nc),
                         -std::numeric_limits<double>::infinity());
  const auto& refined_cells = rep.refined.partition.cells();
  for (size_t c = 0; c < refined_cells.size(); ++c) {
    const int parent = rep.coarse.partition.cell_at(refined_cells[c].midpoint());
    if (parent < 0)
      throw std::logic_error("verify_theorem: refined cell outside coarse partition");
    lo[static_cast<size_t>(parent)] =
        std::min(lo[static_cast<size_t>(parent)], rep.refined.values[c]);
    hi[static_cast<size_t>(parent)] =
        std::max(hi[static_cast<size_t>(parent)], rep.refined.values[c]);
  }
  for (int c = 0; c < nc; ++c) {
    rep.constancy_residual =
        std::max(rep.constancy_residual,
                 hi[static_cast<size_t>(c)] - lo[static_cast<size_t>(c)]);
  }

  const PcrFunction averaged = average(rep.refined, gf, dom);
  for (int c = 0; c < nc; ++c) {
    rep.agreement_residual =
        std::max(rep.agreement_residual,
                 std::abs(averaged.values[static_cast<size_t>(c)] -
                          rep.coarse.values[static_cast<size_t>(c)]));
  }

  rep.pass = rep.certified && rep.constancy_residual <= tol &&
             rep.agreement_residual <= tol;
  return rep;
}

namespace {

RectPolytope random_domain(std::mt19937_64& rng, int dim) {
  auto span = [&](double max_len) {
    return Interval{0.0, 2.0 + static_cast<double>(rng() % static_cast<unsigned>(max_len))};
  };
  switch (rng() % 3) {
    case 0: {  // plain box
      std::vector<Interval> sides;
      for (int i = 0; i < dim; ++i) sides.push_back(span(3));
      return RectPolytope::from_boxes({HyperRect(std::move(sides))});
    }
    case 1: {  // L-shape: two overlapping boxes sharing the origin corner
      std::vector<Interval> a, b;
      for (int i = 0; i < dim; ++i) {
        a.push_back(span(3));
        b.push_back(span(3));
      }
      // Make them genuinely different along the first two axes.
      a[0].hi = std::max(a[0].hi, b[0].hi + 1.0);
      if (dim > 1) b[1].hi = std::max(b[1].hi, a[1].hi + 1.0);
      return RectPolytope::from_boxes({HyperRect(a), HyperRect(b)});
    }
    default: {  // frame with a hole through the middle
      const double s = 3.0 + static_cast<double>(rng() % 2);
      std::vector<HyperRect> boxes;
      auto cross = [&](Interval x, Interval y) {
        std::vector<Interval> sides{x, y};
        for (int i = 2; i < dim; ++i) sides.push_back({0.0, 2.0});
        return HyperRect(std::move(sides));
      };
      boxes.push_back(cross({0.0, s}, {0.0, 1.0}));
      boxes.push_back(cross({0.0, s}, {2.0, s}));
      boxes.push_back(cross({0.0, 1.0}, {1.0, 2.0}));
      boxes.push_back(cross({2.0, s}, {1.0, 2.0}));
      return RectPolytope::from_boxes(boxes);
    }
  }
}

// Adds interior planes up to a per-axis interval cap, keeping the total
// cell count within the desk-scale budget.
Grid random_instance_grid(std::mt19937_64& rng, const RectPolytope& dom) {
  const int dim = dom.dim();
  const int cap = dim >= 3 ? 3 : 6;
  auto planes = boundary_grid(dom).planes();
  const HyperRect bb = dom.bounding_box();
  for (int ax = 0; ax < dim; ++ax) {
    auto& axis = planes[static_cast<size_t>(ax)];
    while (static_cast<int>(axis.size()) - 1 < cap && rng() % 3 != 0) {
      // Planes on the eighths lattice of the bounding span, so cell
      // volumes stay bounded away from zero.
      const Interval& s = bb.side(ax);
      const double x = s.lo + s.length() * static_cast<double>(1 + rng() % 7) / 8.0;
      if (std::find(axis.begin(), axis.end(), x) == axis.end()) {
        axis.push_back(x);
        std::sort(axis.begin(), axis.end());
      }
    }
  }
  return Grid(std::move(planes));
}

PcrPieces random_pieces(std::mt19937_64& rng, const RectPolytope& dom,
                        const Grid& grid) {
  const Partition part = make_partition(dom, grid);
  std::vector<std::pair<RectPolytope, double>> pieces;
  for (const HyperRect& cell : part.cells()) {
    const double value = 0.25 * static_cast<double>(rng() % 9) - 1.0;
    pieces.push_back({RectPolytope::from_boxes({cell}), value});
  }
  return PcrPieces::make(dom, pieces);
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, long index) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL +
                      static_cast<std::uint64_t>(index) + 1);
  const int dim = rng() % 2 == 0 ? 2 : 3;
  const RectPolytope dom = random_domain(rng, dim);
  const Grid grid = random_instance_grid(rng, dom);
  PcrPieces f = random_pieces(rng, dom, grid);
  const double ladder[] = {0.1, 1.0, 10.0};
  const double alpha = ladder[rng() % 3] * 0.1;
  std::string id = "inst-" + std::to_string(seed) + "-" + std::to_string(index) +
                   "-n" + std::to_string(dim);
  return RandomInstance{std::move(f), alpha, std::move(id)};
}

namespace {

void record(SuiteResult& r, double residual, double tol) {
  r.worst = std::max(r.worst, residual);
  if (residual > tol) r.pass = false;
  ++r.cases;
}

SuiteResult averaging_suite(std::uint64_t seed, int count) {
  SuiteResult r;
  r.name = "averaging";
  std::mt19937_64 rng(seed ^ 0xa1u);
  std::uniform_real_distribution<double> val(-1.5, 1.5);
  for (int c = 0; c < count; ++c) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    const RectPolytope dom = random_domain(rng, dim);
    const Grid coarse = random_instance_grid(rng, dom);
    const Grid fine = refine(coarse, RefinementSpec{}, dom);
    const Partition fine_part = make_partition(dom, fine);
    PcrFunction u{fine_part, {}};
    for (int i = 0; i < fine_part.cell_count(); ++i) u.values.push_back(val(rng));

    const PcrFunction au = average(u, coarse, dom);
    // Jensen: mean of phi dominates phi of mean, cell by cell in volume.
    auto moment = [](const PcrFunction& w, auto&& phi) {
      double s = 0.0;
      for (int i = 0; i < w.partition.cell_count(); ++i)
        s += w.partition.cells()[static_cast<size_t>(i)].volume() *
             phi(w.values[static_cast<size_t>(i)]);
      return s;
    };
    auto sq = [](double t) { return t * t; };
    auto ab = [](double t) { return std::abs(t); };
    auto ex = [](double t) { return std::exp(t); };
    record(r, moment(au, sq) - moment(u, sq), 1e-10);
    record(r, moment(au, ab) - moment(u, ab), 1e-10);
    record(r, moment(au, ex) - moment(u, ex), 1e-10);
    // Contraction in L2 and total-variation monotonicity.
    record(r, lp_norm(au, Norm::L2) - lp_norm(u, Norm::L2), 1e-10);
    record(r, tv_pcr(au) - tv_pcr(u), 1e-10);
  }
  return r;
}

SuiteResult subgradient_suite(std::uint64_t seed, int count, int depth) {
  SuiteResult r;
  r.name = "subgradient-preservation";
  std::mt19937_64 rng(seed ^ 0xb2u);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), u01(0.0, 1.0);
  for (int c = 0; c < count; ++c) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    const RectPolytope dom = random_domain(rng, dim);
    const Grid grid = random_instance_grid(rng, dom);
    // Support box strictly inside a random canonical piece.
    const auto& piece = dom.pieces()[rng() % dom.pieces().size()];
    std::vector<Interval> sides;
    for (int i = 0; i < piece.dim(); ++i) {
      const Interval& s = piece.side(i);
      sides.push_back({s.lo + 0.2 * s.length(), s.hi - 0.2 * s.length()});
    }
    std::vector<double> amps(static_cast<size_t>(piece.dim()));
    for (auto& a : amps) a = amp(rng);
    BumpField h(HyperRect(std::move(sides)), amps);
    GammaElement e =
        averaged_divergence(h, grid, dom,
                            piece.dim() >= 3 ? std::min(depth, 4) : depth);
    const MembershipReport m = check_gamma(e, dom, 1e-6);
    record(r, std::max(m.worst_partial - e.bound, m.worst_endpoint), 1e-6);
    if (!m.pass && r.detail.empty())
      r.detail = "axis " + std::to_string(m.failing_axis);
  }
  return r;
}

SuiteResult solver_suite(std::uint64_t seed, int count) {
  SuiteResult r;
  r.name = "solver-duality";
  std::mt19937_64 rng(seed ^ 0xc3u);
  std::uniform_real_distribution<double> vol(0.3, 2.0), dat(-2.0, 2.0),
      wgt(0.2, 1.5), alp(0.1, 2.0);
  for (int c = 0; c < count; ++c) {
    const int n = 4 + static_cast<int>(rng() % 5);
    std::vector<double> volumes, data, weights;
    for (int i = 0; i < n; ++i) {
      volumes.push_back(vol(rng));
      data.push_back(dat(rng));
      if (i + 1 < n) weights.push_back(wgt(rng));
    }
    CellGraph g;
    g.volume = volumes;
    g.datum = data;
    for (int i = 0; i + 1 < n; ++i)
      g.edges.push_back({i, i + 1, weights[static_cast<size_t>(i)]});
    const double alpha = alp(rng);
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.tol_gap = 1e-300;
    const RofSolution s = solve(g, cfg);
    record(r, s.gap, 1e-12);
    const std::vector<double> exact =
        solve_1d_taut_string(volumes, data, weights, alpha);
    double err = 0.0;
    for (int i = 0; i < n; ++i)
      err = std::max(err, std::abs(s.u[static_cast<size_t>(i)] -
                                   exact[static_cast<size_t>(i)]));
    record(r, err, 1e-7);
    record(r, s.dual - s.primal, 1e-10);  // weak duality
  }
  return r;
}

SuiteResult alpha_monotonicity_suite(std::uint64_t seed, int count) {
  SuiteResult r;
  r.name = "alpha-monotonicity";
  std::mt19937_64 rng(seed ^ 0xd4u);
  for (int c = 0; c < count; ++c) {
    RandomInstance inst = random_instance(seed ^ 0xd4u, c);
    const Grid gf =
        union_grids(minimal_grid(inst.f), boundary_grid(inst.f.domain()));
    const PcrFunction data = resample(inst.f, gf);
    CellGraph g = build_graph(data);
    SolverConfig cfg;
    cfg.alpha = inst.alpha;
    cfg.tol_gap = 1e-300;  // run to the numerical floor
    PcrFunction u1{data.partition, solve(g, cfg).u};
    cfg.alpha = inst.alpha * (1.5 + static_cast<double>(rng() % 4));
    PcrFunction u2{data.partition, solve(g, cfg).u};
    record(r, tv_pcr(u2) - tv_pcr(u1), 1e-8);
  }
  return r;
}

SuiteResult idempotence_suite(std::uint64_t seed, int count) {
  SuiteResult r;
  r.name = "refinement-idempotence";
  for (int c = 0; c < count; ++c) {
    RandomInstance inst = random_instance(seed ^ 0xe5u, c);
    const RectPolytope& dom = inst.f.domain();
    const Grid gf = union_grids(minimal_grid(inst.f), boundary_grid(dom));
    const Grid g1 = refine(gf, RefinementSpec{}, dom);
    const Grid g2 = refine(g1, RefinementSpec{}, dom);
    auto run = [&](const Grid& grid) {
      const PcrFunction data = resample(inst.f, grid);
      CellGraph g = build_graph(data);
      const double vmin = *std::min_element(g.volume.begin(), g.volume.end());
      SolverConfig cfg;
      cfg.alpha = inst.alpha;
      cfg.tol_gap = std::max(1e-15, vmin * 1e-10 / 32.0);
      return PcrFunction{data.partition, solve(g, cfg).u};
    };
    const PcrFunction u1 = run(g1);
    const PcrFunction u2 = average(run(g2), g1, dom);
    double err = 0.0;
    for (size_t i = 0; i < u1.values.size(); ++i)
      err = std::max(err, std::abs(u1.values[i] - u2.values[i]));
    record(r, err, 1e-5);
  }
  return r;
}

}  // namespace

PropertyReport run_property_suites(std::uint64_t seed, int count,
                                   int quadrature_depth) {
  PropertyReport report;
  if (count <= 0) return report;
  report.suites.push_back(averaging_suite(seed, count));
  report.suites.push_back(subgradient_suite(seed, count, quadrature_depth));
  report.suites.push_back(solver_suite(seed, count));
  report.suites.push_back(alpha_monotonicity_suite(seed, count));
  report.suites.push_back(idempotence_suite(seed, std::min(count, 5)));
  for (const SuiteResult& s : report.suites) report.pass = report.pass && s.pass;
  return report;
}

}  // namespace pcrof
