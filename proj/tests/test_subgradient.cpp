#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "pcrof/subgradient.hpp"
#include "test_helpers.hpp"

using namespace pcrof;
using namespace pcrof::testing;

namespace {

RectPolytope segment(double a, double b) {
  return RectPolytope::from_boxes({HyperRect({{a, b}})});
}

PcrFunction on_grid(const RectPolytope& domain, Grid grid,
                    std::vector<double> values) {
  PcrFunction f;
  f.partition = make_partition(domain, std::move(grid));
  REQUIRE(f.partition.cell_count() == static_cast<int>(values.size()));
  f.values = std::move(values);
  return f;
}

// A support box compactly contained in the domain: a random canonical
// piece shrunk towards its midpoint.
HyperRect inner_box(std::mt19937_64& rng, const RectPolytope& domain) {
  const auto& pieces = domain.pieces();
  const auto& piece = pieces[rng() % pieces.size()];
  std::vector<Interval> sides(static_cast<size_t>(piece.dim()));
  for (int i = 0; i < piece.dim(); ++i) {
    const Interval& s = piece.side(i);
    sides[static_cast<size_t>(i)] = {s.lo + 0.15 * s.length(),
                                     s.hi - 0.15 * s.length()};
  }
  return HyperRect(std::move(sides));
}

Grid random_refining_grid(std::mt19937_64& rng, const RectPolytope& domain) {
  auto planes = boundary_grid(domain).planes();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (auto& axis : planes) {
    std::vector<double> extra;
    for (size_t k = 0; k + 1 < axis.size(); ++k) {
      if (rng() % 2 == 0)
        extra.push_back(axis[k] + (axis[k + 1] - axis[k]) * u01(rng));
    }
    axis.insert(axis.end(), extra.begin(), extra.end());
  }
  return Grid(std::move(planes));
}

}  // namespace

TEST_CASE("zero component passes membership") {
  auto dom = segment(0, 2);
  auto g = on_grid(dom, Grid({{0, 1, 2}}), {0.0, 0.0});
  auto r = check_axis_membership({0, g}, dom, 1.0, 0.0);
  CHECK(r.pass);
  CHECK(r.worst_partial == 0.0);
  CHECK(r.worst_endpoint == 0.0);
}

TEST_CASE("telescoping 1-D pattern attains the bound exactly") {
  auto dom = segment(0, 2);
  auto g = on_grid(dom, Grid({{0, 1, 2}}), {1.0, -1.0});
  auto r = check_axis_membership({0, g}, dom, 1.0, 0.0);
  CHECK(r.pass);
  CHECK(r.worst_partial == 1.0);
  CHECK(r.worst_endpoint == 0.0);
}

TEST_CASE("bound violation is reported with the worst partial") {
  auto dom = segment(0, 2);
  auto g = on_grid(dom, Grid({{0, 1, 2}}), {1.5, -1.5});
  auto r = check_axis_membership({0, g}, dom, 1.0, 1e-12);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_partial == 1.5);
}

TEST_CASE("gamma check is a conjunction over axes") {
  auto dom = RectPolytope::from_boxes({box2(0, 2, 0, 2)});
  Grid grid({{0, 1, 2}, {0, 1, 2}});
  // Axis-0 component: the (1,-1) pattern, constant in x2.
  Partition part = make_partition(dom, grid);
  PcrFunction g0{part, {0, 0, 0, 0}}, g1{part, {0, 0, 0, 0}};
  for (int c = 0; c < part.cell_count(); ++c) {
    auto mid = part.cells()[static_cast<size_t>(c)].midpoint();
    g0.values[static_cast<size_t>(c)] = mid[0] < 1 ? 1.0 : -1.0;
    g1.values[static_cast<size_t>(c)] = mid[1] < 1 ? 1.0 : -1.0;
  }
  GammaElement e{{{0, g0}, {1, g1}}, 1.0};
  auto r = check_gamma(e, dom, 0.0);
  CHECK(r.pass);
  CHECK(r.worst_partial == 1.0);

  GammaElement zero{{}, 1.0};
  CHECK(check_gamma(zero, dom, 0.0).pass);

  // One failing component fails the whole element with its axis.
  for (auto& v : g1.values) v *= 1.5;
  GammaElement bad{{{0, g0}, {1, g1}}, 1.0};
  auto rb = check_gamma(bad, dom, 1e-12);
  CHECK_FALSE(rb.pass);
  CHECK(rb.failing_axis == 1);
}

TEST_CASE("scaling equivalence of membership reports") {
  std::mt19937_64 rng(31);
  auto dom = RectPolytope::from_boxes({box2(0, 3, 0, 2)});
  Grid grid({{0, 1, 2, 3}, {0, 1, 2}});
  Partition part = make_partition(dom, grid);
  std::uniform_real_distribution<double> val(-0.8, 0.8);
  for (int trial = 0; trial < 20; ++trial) {
    PcrFunction g{part, {}};
    g.values.resize(static_cast<size_t>(part.cell_count()));
    for (auto& v : g.values) v = val(rng);
    const double lambda = 0.25 + 3.0 * std::generate_canonical<double, 53>(rng);
    PcrFunction gs = g;
    for (auto& v : gs.values) v *= lambda;
    auto r1 = check_axis_membership({0, g}, dom, 1.0, 0.0);
    auto r2 = check_axis_membership({0, gs}, dom, lambda, 1e-12);
    CHECK(r1.pass == r2.pass);
    CHECK(r2.worst_partial == doctest::Approx(lambda * r1.worst_partial));
  }
}

TEST_CASE("dual field of the 1-D hat pattern") {
  auto dom = segment(0, 2);
  auto g = on_grid(dom, Grid({{0, 1, 2}}), {1.0, -1.0});
  GammaElement e{{{0, g}}, 1.0};
  DualField h = build_dual_field(e, dom);
  CHECK(h.value(0, std::vector<double>{0.0}) == 0.0);
  CHECK(h.value(0, std::vector<double>{0.5}) == doctest::Approx(0.5));
  CHECK(h.value(0, std::vector<double>{1.0}) == doctest::Approx(1.0));
  CHECK(h.value(0, std::vector<double>{1.5}) == doctest::Approx(0.5));
  CHECK(h.value(0, std::vector<double>{2.0}) == doctest::Approx(0.0));
  CHECK(h.sup_abs(0) == doctest::Approx(1.0));
  // Round trip: slopes recover g exactly.
  CHECK(h.slope(0, std::vector<double>{0.5}) == 1.0);
  CHECK(h.slope(0, std::vector<double>{1.5}) == -1.0);
}

TEST_CASE("dual field of the zero element vanishes") {
  auto dom = RectPolytope::from_boxes({box2(0, 1, 0, 1)});
  auto part = make_partition(dom, boundary_grid(dom));
  GammaElement e{{{0, PcrFunction{part, {0.0}}}}, 1.0};
  DualField h = build_dual_field(e, dom);
  CHECK(h.value(0, std::vector<double>{0.5, 0.5}) == 0.0);
  CHECK(h.sup_abs(0) == 0.0);
}

TEST_CASE("build_dual_field rejects non-members") {
  auto dom = segment(0, 2);
  auto g = on_grid(dom, Grid({{0, 1, 2}}), {2.0, -2.0});
  GammaElement e{{{0, g}}, 1.0};
  CHECK_THROWS_AS(build_dual_field(e, dom), std::invalid_argument);
}

TEST_CASE("averaged divergence of the 1-D bump matches the closed form") {
  auto dom = segment(0, 1);
  BumpField h(HyperRect({{0, 1}}), {1.0});
  CHECK(h.component(0, std::vector<double>{0.5}) == doctest::Approx(1.0));
  GammaElement e = averaged_divergence(h, Grid({{0, 0.5, 1}}), dom, 6);
  REQUIRE(e.components.size() == 1);
  REQUIRE(e.components[0].g.values.size() == 2);
  CHECK(e.components[0].g.values[0] == doctest::Approx(2.0));
  CHECK(e.components[0].g.values[1] == doctest::Approx(-2.0));
  CHECK(check_gamma(e, dom, 1e-9).pass);
}

TEST_CASE("averaged divergence of the zero field is zero") {
  auto dom = RectPolytope::from_boxes({box2(0, 1, 0, 1)});
  BumpField h(HyperRect({{0.2, 0.8}, {0.2, 0.8}}), {0.0, 0.0});
  GammaElement e = averaged_divergence(h, boundary_grid(dom), dom, 4);
  for (const auto& c : e.components) {
    for (double v : c.g.values) CHECK(v == 0.0);
  }
}

TEST_CASE("subgradient preservation on randomized fields and grids") {
  std::mt19937_64 rng(41);
  int cases = 0;
  while (cases < 60) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    RectPolytope dom;
    switch (rng() % 3) {
      case 0:
        dom = random_polytope(rng, dim, 1);
        break;
      case 1: {  // L-shape style union
        dom = random_polytope(rng, dim, 2);
        break;
      }
      default:
        dom = random_polytope(rng, dim, 4);
        break;
    }
    Grid grid = random_refining_grid(rng, dom);
    std::vector<double> amps(static_cast<size_t>(dim));
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (auto& a : amps) a = amp(rng);
    BumpField h(inner_box(rng, dom), amps);
    GammaElement e = averaged_divergence(h, grid, dom, dim == 3 ? 4 : 6);
    CHECK(e.bound == h.bound());
    auto r = check_gamma(e, dom, 1e-6);
    CHECK(r.pass);
    CHECK(r.worst_endpoint <= 1e-10);  // endpoint cancellation is exact

    if (r.pass && h.bound() > 0) {
      DualField field = build_dual_field(e, dom);
      for (int axis = 0; axis < dim; ++axis)
        CHECK(field.sup_abs(axis) <= e.bound + 1e-12);
      // Slopes reproduce the components exactly at cell midpoints.
      const auto& part = e.components[0].g.partition;
      for (int c = 0; c < part.cell_count(); ++c) {
        auto mid = part.cells()[static_cast<size_t>(c)].midpoint();
        for (const auto& comp : e.components) {
          CHECK(field.slope(comp.axis, mid) ==
                comp.g.values[static_cast<size_t>(c)]);
        }
      }
    }
    ++cases;
  }
}
