#include "pcrof/api.hpp"

#include <utility>

#include "pcrof/solver.hpp"
#include "pcrof/verify.hpp"

namespace pcrof {

namespace {

using nlohmann::ordered_json;

PcrFunction data_function(const InstanceDocument& doc) {
  const Grid gf =
      union_grids(minimal_grid(doc.f), boundary_grid(doc.f.domain()));
  return resample(doc.f, gf);
}

ordered_json theorem_record(const TheoremReport& rep) {
  ordered_json r;
  r["id"] = rep.instance_id;
  r["pass"] = rep.pass;
  r["certified"] = rep.certified;
  r["constancy_residual"] = rep.constancy_residual;
  r["agreement_residual"] = rep.agreement_residual;
  r["coarse_gap"] = rep.coarse_gap;
  r["refined_gap"] = rep.refined_gap;
  return r;
}

}  // namespace

ordered_json solve_report(const InstanceDocument& doc, double alpha_override,
                          double tol_gap, long max_iters) {
  const PcrFunction f = data_function(doc);
  SolverConfig cfg;
  cfg.alpha = alpha_override > 0.0 ? alpha_override : doc.alpha;
  cfg.tol_gap = tol_gap;
  cfg.max_iters = max_iters;
  const CellGraph g = build_graph(f);
  const RofSolution s = solve(g, cfg);

  ordered_json rep = make_report("solve", instance_digest(doc));
  rep["alpha"] = cfg.alpha;
  rep["solution"] = function_to_json(PcrFunction{f.partition, s.u});
  rep["primal"] = s.primal;
  rep["dual"] = s.dual;
  rep["gap"] = s.gap;
  rep["iterations"] = s.iterations;
  rep["certified"] = s.certified;
  return rep;
}

ordered_json energy_report(const InstanceDocument& doc, double alpha_override) {
  const PcrFunction f = data_function(doc);
  const double alpha = alpha_override > 0.0 ? alpha_override : doc.alpha;
  ordered_json rep = make_report("energy", instance_digest(doc));
  rep["alpha"] = alpha;
  rep["cells"] = f.partition.cell_count();
  rep["total_variation"] = tv_pcr(f);
  rep["norm_l1"] = lp_norm(f, Norm::L1);
  rep["norm_l2"] = lp_norm(f, Norm::L2);
  rep["norm_linf"] = lp_norm(f, Norm::Linf);
  rep["energy"] = alpha * tv_pcr(f);
  return rep;
}

ordered_json grid_report(const InstanceDocument& doc) {
  const Grid gf =
      union_grids(minimal_grid(doc.f), boundary_grid(doc.f.domain()));
  ordered_json rep = make_report("grid", instance_digest(doc));
  rep["planes"] = gf.planes();
  rep["cells"] = make_partition(doc.f.domain(), gf).cell_count();
  return rep;
}

ordered_json verify_instance_report(const InstanceDocument& doc,
                                    double alpha_override, int splits,
                                    double tol, const std::string& id) {
  RefinementSpec spec;
  spec.splits_per_axis = {splits};
  const double alpha = alpha_override > 0.0 ? alpha_override : doc.alpha;
  const TheoremReport r = verify_theorem(doc.f, alpha, spec, tol, id);

  ordered_json rep = make_report("verify-theorem", instance_digest(doc));
  rep["tol"] = tol;
  rep["records"] = ordered_json::array({theorem_record(r)});
  rep["pass"] = r.pass;
  return rep;
}

ordered_json verify_batch_report(std::uint64_t seed, int count, int splits,
                                 double tol) {
  RefinementSpec spec;
  spec.splits_per_axis = {splits};
  ordered_json rep = make_report("verify-theorem", "batch");
  rep["seed"] = seed;
  rep["tol"] = tol;
  ordered_json records = ordered_json::array();
  bool all_pass = true;
  for (int i = 0; i < count; ++i) {
    const RandomInstance inst = random_instance(seed, i);
    const TheoremReport r =
        verify_theorem(inst.f, inst.alpha, spec, tol, inst.id);
    records.push_back(theorem_record(r));
    all_pass = all_pass && r.pass;
  }
  rep["records"] = std::move(records);
  rep["pass"] = all_pass;
  return rep;
}

ordered_json properties_report(std::uint64_t seed, int count,
                               int quadrature_depth) {
  const PropertyReport report =
      run_property_suites(seed, count, quadrature_depth);
  ordered_json rep = make_report("verify-properties", "none");
  rep["seed"] = seed;
  rep["count"] = count;
  ordered_json suites = ordered_json::array();
  for (const SuiteResult& s : report.suites) {
    ordered_json r;
    r["name"] = s.name;
    r["cases"] = s.cases;
    r["pass"] = s.pass;
    r["worst_residual"] = s.worst;
    if (!s.detail.empty()) r["detail"] = s.detail;
    suites.push_back(std::move(r));
  }
  rep["suites"] = std::move(suites);
  rep["pass"] = report.pass;
  return rep;
}

InstanceDocument generated_instance(std::uint64_t seed, long index) {
  const RandomInstance inst = random_instance(seed, index);
  InstanceDocument doc;
  doc.dimension = inst.f.domain().dim();
  doc.alpha = inst.alpha;
  doc.f = inst.f;
  return doc;
}

}  // namespace pcrof
