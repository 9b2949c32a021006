#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pcrof/api.hpp"

// Batch front end. The report goes to stdout as JSON; diagnostics and
// timings go to stderr so reports are byte-reproducible. Exit codes:
// 0 success/PASS, 1 FAIL, 2 usage or parse error.

namespace {

using nlohmann::ordered_json;
using namespace pcrof;

InstanceDocument load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void emit(const ordered_json& report) {
  std::cout << report.dump(2) << "\n";
}

class Stopwatch {
 public:
  ~Stopwatch() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    std::cerr << "elapsed: "
              << std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
                     .count()
              << " ms\n";
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCR denoising via the l1-anisotropic ROF model"};
  app.require_subcommand(1);

  std::string instance_path;
  double alpha = 0.0;    // 0: take the instance's alpha
  double tol_gap = 0.0;  // 0: solver default
  long max_iters = 200000;
  int splits = 2;
  std::uint64_t seed = 7;
  int count = 20;
  int vp_count = 10;
  int gen_count = 1;
  double tol = 1e-5;
  int quadrature_depth = 6;

  CLI::App* solve_cmd = app.add_subcommand("solve", "minimize the ROF energy");
  solve_cmd->add_option("instance", instance_path, "instance file")->required();
  solve_cmd->add_option("--alpha", alpha, "override the instance alpha");
  solve_cmd->add_option("--tol-gap", tol_gap, "duality gap tolerance");
  solve_cmd->add_option("--max-iters", max_iters, "iteration budget");

  CLI::App* energy_cmd =
      app.add_subcommand("energy", "data norms and total variation");
  energy_cmd->add_option("instance", instance_path, "instance file")->required();
  energy_cmd->add_option("--alpha", alpha, "override the instance alpha");

  CLI::App* grid_cmd =
      app.add_subcommand("grid", "minimal grid and partition size");
  grid_cmd->add_option("instance", instance_path, "instance file")->required();

  CLI::App* vt_cmd = app.add_subcommand(
      "verify-theorem", "refinement invariance of the minimizer");
  vt_cmd->add_option("instance", instance_path,
                     "instance file (omit for a seeded batch)");
  vt_cmd->add_option("--alpha", alpha, "override the instance alpha");
  vt_cmd->add_option("--seed", seed, "batch seed");
  vt_cmd->add_option("--count", count, "batch size");
  vt_cmd->add_option("--splits", splits, "subdivisions per cell side")
      ->check(CLI::PositiveNumber);
  vt_cmd->add_option("--tol", tol, "residual tolerance");

  CLI::App* vp_cmd =
      app.add_subcommand("verify-properties", "randomized property suites");
  vp_cmd->add_option("--seed", seed, "suite seed");
  vp_cmd->add_option("--count", vp_count, "cases per suite");
  vp_cmd->add_option("--quadrature-depth", quadrature_depth,
                     "midpoint quadrature depth for test fields")
      ->check(CLI::Range(1, 10));

  CLI::App* gen_cmd =
      app.add_subcommand("gen-random", "emit randomized instances");
  gen_cmd->add_option("--seed", seed, "generator seed");
  gen_cmd->add_option("--count", gen_count, "number of instances")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve_cmd->parsed()) {
      Stopwatch watch;
      const ordered_json rep =
          solve_report(load_instance(instance_path), alpha, tol_gap, max_iters);
      emit(rep);
      return rep["certified"].get<bool>() ? 0 : 1;
    }
    if (energy_cmd->parsed()) {
      emit(energy_report(load_instance(instance_path), alpha));
      return 0;
    }
    if (grid_cmd->parsed()) {
      emit(grid_report(load_instance(instance_path)));
      return 0;
    }
    if (vt_cmd->parsed()) {
      Stopwatch watch;
      const ordered_json rep =
          instance_path.empty()
              ? verify_batch_report(seed, count, splits, tol)
              : verify_instance_report(load_instance(instance_path), alpha,
                                       splits, tol, instance_path);
      emit(rep);
      return rep["pass"].get<bool>() ? 0 : 1;
    }
    if (vp_cmd->parsed()) {
      Stopwatch watch;
      const ordered_json rep =
          properties_report(seed, std::max(vp_count, 0), quadrature_depth);
      emit(rep);
      return rep["pass"].get<bool>() ? 0 : 1;
    }
    if (gen_cmd->parsed()) {
      if (gen_count == 1) {
        std::cout << serialize_instance(generated_instance(seed, 0));
      } else {
        ordered_json batch = ordered_json::array();
        for (int i = 0; i < gen_count; ++i) {
          batch.push_back(ordered_json::parse(
              serialize_instance(generated_instance(seed, i))));
        }
        std::cout << batch.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const pcrof::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
