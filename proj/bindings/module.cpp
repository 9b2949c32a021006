#include <pybind11/pybind11.h>

#include <string>

#include "pcrof/api.hpp"

// Python bindings. Instances and reports cross the boundary as JSON
// strings; the pcrof python package wraps them into dicts.

namespace py = pybind11;

namespace {

pcrof::InstanceDocument parse(const std::string& text) {
  try {
    return pcrof::parse_instance(text);
  } catch (const pcrof::ParseError& e) {
    throw py::value_error(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "PCR denoising via the l1-anisotropic ROF model";

  m.def(
      "solve",
      [](const std::string& instance, double alpha, double tol_gap,
         long max_iters) {
        return pcrof::solve_report(parse(instance), alpha, tol_gap, max_iters)
            .dump();
      },
      py::arg("instance"), py::arg("alpha") = 0.0, py::arg("tol_gap") = 0.0,
      py::arg("max_iters") = 200000L,
      "Minimize the ROF energy; returns the solve report as JSON.");

  m.def(
      "energy",
      [](const std::string& instance, double alpha) {
        return pcrof::energy_report(parse(instance), alpha).dump();
      },
      py::arg("instance"), py::arg("alpha") = 0.0,
      "Data norms and total variation as JSON.");

  m.def(
      "grid",
      [](const std::string& instance) {
        return pcrof::grid_report(parse(instance)).dump();
      },
      py::arg("instance"), "Minimal grid planes and cell count as JSON.");

  m.def(
      "verify_theorem",
      [](const std::string& instance, double alpha, int splits, double tol) {
        return pcrof::verify_instance_report(parse(instance), alpha, splits,
                                             tol, "instance")
            .dump();
      },
      py::arg("instance"), py::arg("alpha") = 0.0, py::arg("splits") = 2,
      py::arg("tol") = 1e-5,
      "Refinement invariance of the minimizer on one instance.");

  m.def(
      "verify_theorem_batch",
      [](std::uint64_t seed, int count, int splits, double tol) {
        return pcrof::verify_batch_report(seed, count, splits, tol).dump();
      },
      py::arg("seed") = 7, py::arg("count") = 20, py::arg("splits") = 2,
      py::arg("tol") = 1e-5,
      "Refinement invariance on a seeded batch of generated instances.");

  m.def(
      "verify_properties",
      [](std::uint64_t seed, int count, int quadrature_depth) {
        return pcrof::properties_report(seed, count, quadrature_depth).dump();
      },
      py::arg("seed") = 42, py::arg("count") = 10,
      py::arg("quadrature_depth") = 6, "Randomized property suites.");

  m.def(
      "gen_random",
      [](std::uint64_t seed, long index) {
        return pcrof::serialize_instance(pcrof::generated_instance(seed, index));
      },
      py::arg("seed"), py::arg("index") = 0L,
      "A generated instance as a JSON document.");

  m.def(
      "instance_digest",
      [](const std::string& instance) {
        return pcrof::instance_digest(parse(instance));
      },
      py::arg("instance"),
      "Digest of the canonical form of an instance.");

  m.def(
      "canonicalize",
      [](const std::string& instance) {
        return pcrof::serialize_instance(parse(instance));
      },
      py::arg("instance"), "Canonical serialized form of an instance.");
}
