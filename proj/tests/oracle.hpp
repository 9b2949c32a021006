#pragma once

// Test-only independent oracles for the graph ROF energy. These never
// call the primal-dual solver path.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pcrof/solver.hpp"

namespace pcrof::testing {

// Exact 1-D minimization of the energy in u[node] with all others fixed.
inline double best_coordinate(const CellGraph& g, const std::vector<double>& u,
                              int node, double alpha) {
  std::vector<std::pair<double, double>> pulls;  // (neighbour value, weight)
  for (const GraphEdge& e : g.edges) {
    if (e.a == node) pulls.push_back({u[static_cast<size_t>(e.b)], e.weight});
    if (e.b == node) pulls.push_back({u[static_cast<size_t>(e.a)], e.weight});
  }
  std::vector<double> breaks;
  for (auto& [b, w] : pulls) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double v = g.volume[static_cast<size_t>(node)];
  const double f = g.datum[static_cast<size_t>(node)];
  auto piece_energy = [&](double x) {
    double s = 0.5 * v * (x - f) * (x - f);
    for (auto& [b, w] : pulls) s += alpha * w * std::abs(x - b);
    return s;
  };

  double best_x = f, best_e = piece_energy(f);
  auto consider = [&](double x) {
    const double e = piece_energy(x);
    if (e < best_e) {
      best_e = e;
      best_x = x;
    }
  };
  for (double b : breaks) consider(b);
  // Stationary point inside each linear region of the TV part.
  for (size_t r = 0; r <= breaks.size(); ++r) {
    double lo = r == 0 ? -std::numeric_limits<double>::infinity() : breaks[r - 1];
    double hi = r == breaks.size() ? std::numeric_limits<double>::infinity()
                                   : breaks[r];
    double pull = 0.0;
    for (auto& [b, w] : pulls) pull += w * (0.5 * (lo + hi) > b ? 1.0 : -1.0);
    if (r == 0) {
      pull = 0.0;
      for (auto& [b, w] : pulls) pull -= w;
    }
    if (r == breaks.size() && !breaks.empty()) {
      pull = 0.0;
      for (auto& [b, w] : pulls) pull += w;
    }
    double x = f - alpha * pull / v;
    if (x > lo && x < hi) consider(x);
  }
  return best_x;
}

// Exact line minimization moving all nodes in `group` by a common shift.
inline double best_group_shift(const CellGraph& g, const std::vector<double>& u,
                               const std::vector<char>& in_group,
                               double alpha) {
  double vol = 0.0, pull0 = 0.0;
  std::vector<std::pair<double, double>> cut;  // (jump at delta=0, weight)
  for (size_t i = 0; i < u.size(); ++i) {
    if (!in_group[i]) continue;
    vol += g.volume[i];
    pull0 += g.volume[i] * (u[i] - g.datum[i]);
  }
  if (vol == 0.0) return 0.0;
  for (const GraphEdge& e : g.edges) {
    const bool a_in = in_group[static_cast<size_t>(e.a)];
    const bool b_in = in_group[static_cast<size_t>(e.b)];
    if (a_in == b_in) continue;
    const double jump = a_in ? u[static_cast<size_t>(e.a)] -
                                   u[static_cast<size_t>(e.b)]
                             : u[static_cast<size_t>(e.b)] -
                                   u[static_cast<size_t>(e.a)];
    cut.push_back({jump, e.weight});
  }
  auto objective = [&](double d) {
    double s = 0.5 * vol * d * d + pull0 * d;
    for (auto& [jump, w] : cut) s += alpha * w * std::abs(jump + d);
    return s;
  };
  std::vector<double> breaks;
  for (auto& [jump, w] : cut) breaks.push_back(-jump);
  breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  double best_d = 0.0, best_o = objective(0.0);
  auto consider = [&](double d) {
    const double o = objective(d);
    if (o < best_o) {
      best_o = o;
      best_d = d;
    }
  };
  for (double b : breaks) consider(b);
  for (size_t r = 0; r <= breaks.size(); ++r) {
    double lo = r == 0 ? breaks.front() - 1e6 : breaks[r - 1];
    double hi = r == breaks.size() ? breaks.back() + 1e6 : breaks[r];
    double slope = 0.0;
    const double mid = 0.5 * (lo + hi);
    for (auto& [jump, w] : cut) slope += w * (jump + mid > 0 ? 1.0 : -1.0);
    double d = -(pull0 + alpha * slope) / vol;
    if (d > lo && d < hi) consider(d);
  }
  return best_d;
}

// Brute-force minimizer for graphs with at most ~4 nodes: coarse grid
// search followed by exact coordinate and group-shift descent.
inline std::vector<double> brute_force_minimize(const CellGraph& g,
                                                double alpha) {
  const int n = g.node_count();
  const double lo = *std::min_element(g.datum.begin(), g.datum.end());
  const double hi = *std::max_element(g.datum.begin(), g.datum.end());
  const int steps = 20;
  const double h = (hi - lo) / steps;

  std::vector<double> best(g.datum.begin(), g.datum.end());
  double best_e = energy(g, best, alpha);
  if (h > 0) {
    std::vector<int> k(static_cast<size_t>(n), 0);
    std::vector<double> u(static_cast<size_t>(n));
    while (true) {
      for (int i = 0; i < n; ++i)
        u[static_cast<size_t>(i)] = lo + h * k[static_cast<size_t>(i)];
      const double e = energy(g, u, alpha);
      if (e < best_e) {
        best_e = e;
        best = u;
      }
      int i = n - 1;
      while (i >= 0 && k[static_cast<size_t>(i)] + 1 > steps) {
        k[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++k[static_cast<size_t>(i)];
    }
  }

  for (int sweep = 0; sweep < 400; ++sweep) {
    double before = energy(g, best, alpha);
    for (int i = 0; i < n; ++i)
      best[static_cast<size_t>(i)] = best_coordinate(g, best, i, alpha);
    // All nonempty node subsets as rigid groups.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<char> in_group(static_cast<size_t>(n), 0);
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) in_group[static_cast<size_t>(i)] = 1;
      const double d = best_group_shift(g, best, in_group, alpha);
      if (d != 0.0) {
        std::vector<double> moved = best;
        for (int i = 0; i < n; ++i)
          if (in_group[static_cast<size_t>(i)]) moved[static_cast<size_t>(i)] += d;
        if (energy(g, moved, alpha) < energy(g, best, alpha)) best = moved;
      }
    }
    if (before - energy(g, best, alpha) < 1e-14 * (1.0 + std::abs(before)))
      break;
  }
  return best;
}

// Closed form for the 2-node problem.
inline std::vector<double> two_node_closed_form(double v1, double v2, double f1,
                                                double f2, double a,
                                                double alpha) {
  const double s = f2 >= f1 ? 1.0 : -1.0;
  double u1 = f1 + s * alpha * a / v1;
  double u2 = f2 - s * alpha * a / v2;
  if (s * (u2 - u1) >= 0.0) return {u1, u2};
  const double mean = (v1 * f1 + v2 * f2) / (v1 + v2);
  return {mean, mean};
}

}  // namespace pcrof::testing
