#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "pcrof/io.hpp"

// Report assembly shared by the command line tool and the python module.
// Every report carries "pass" or "certified" flags the caller can map to
// exit codes.

namespace pcrof {

nlohmann::ordered_json solve_report(const InstanceDocument& doc,
                                    double alpha_override, double tol_gap,
                                    long max_iters);

nlohmann::ordered_json energy_report(const InstanceDocument& doc,
                                     double alpha_override);

nlohmann::ordered_json grid_report(const InstanceDocument& doc);

/// Refinement invariance on a single instance.
nlohmann::ordered_json verify_instance_report(const InstanceDocument& doc,
                                              double alpha_override, int splits,
                                              double tol,
                                              const std::string& id);

/// Refinement invariance on a seeded batch of generated instances.
nlohmann::ordered_json verify_batch_report(std::uint64_t seed, int count,
                                           int splits, double tol);

nlohmann::ordered_json properties_report(std::uint64_t seed, int count,
                                         int quadrature_depth);

/// The generated instance with the given seed and index as a document.
InstanceDocument generated_instance(std::uint64_t seed, long index);

}  // namespace pcrof
