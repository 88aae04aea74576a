#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cjsr/lowrank.hpp"
#include "cjsr/pipeline.hpp"
#include "cjsr/pradius.hpp"
#include "cjsr/sysdoc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitComputationError = 2;

int cmd_bounds(const std::string& input, const cjsr::BoundsOptions& opts,
               const std::string& csv_path) {
  cjsr::ConstrainedSystem sys = cjsr::load_system_document(input);
  const cjsr::BoundsReport report = cjsr::run_bounds(sys, opts);
  cjsr::write_report(report, sys, std::cout);
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) {
      std::cerr << "error: cannot write " << csv_path << "\n";
      return kExitComputationError;
    }
    cjsr::write_csv(report, csv);
  }
  return kExitOk;
}

int cmd_reduce(const std::string& input, std::size_t rank, double tol,
               const std::string& output) {
  cjsr::ConstrainedSystem sys = cjsr::load_system_document(input);
  const cjsr::LowRankFactorization f = cjsr::factorize(sys, rank, tol);
  const cjsr::ReducedSystem reduced = cjsr::reduce(sys, f);
  if (reduced.restricted_to_component)
    std::cerr << "warning: reduced automaton restricted to its dominant strongly "
                 "connected component\n";
  const std::string doc = cjsr::emit_system_document(reduced.system);
  if (output.empty()) {
    std::cout << doc;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return kExitComputationError;
    }
    out << doc;
  }
  return kExitOk;
}

int cmd_pradius(const std::string& input, std::size_t p, const std::string& mode,
                std::size_t k) {
  cjsr::ConstrainedSystem sys = cjsr::load_system_document(input);
  cjsr::PRadiusResult result;
  if (mode == "lift") {
    if (p % 2 != 0) {
      std::cerr << "warning: the lift route needs even p; falling back to brute force at k="
                << k << "\n";
      result = cjsr::p_radius_bruteforce(sys, p, k);
    } else {
      result = cjsr::p_radius_even(sys, p);
    }
  } else {
    result = cjsr::p_radius_bruteforce(sys, p, k);
  }
  std::cout.precision(12);
  std::cout << "p-radius (p = " << result.p << ", "
            << (result.method == cjsr::PRadiusMethod::lift_spectral
                    ? "lift-spectral"
                    : "brute-force-k, k = " + std::to_string(result.k))
            << "): " << result.value << "\n";
  if (result.method == cjsr::PRadiusMethod::brute_force_k)
    std::cout << "max-form variant: " << result.max_form << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds on the constrained joint spectral radius"};
  app.require_subcommand(1);

  std::string input, csv_path, output, mode = "lift";
  cjsr::BoundsOptions opts;
  std::vector<std::size_t> prodl;
  std::size_t rank = 1, p = 2, brute_k = 8;
  double reduce_tol = 1e-9;

  CLI::App* bounds = app.add_subcommand("bounds", "upper/lower CJSR bounds per degree");
  bounds->add_option("input", input, "system document")->required();
  bounds->add_option("--degree-max", opts.degree_max, "largest Gram degree d");
  bounds->add_option("--tol", opts.tol, "bisection tolerance");
  bounds->add_option("--cycle-kmax", opts.cycle_kmax, "brute-force cycle length cap");
  bounds->add_option("--prodl-l", prodl, "path length for the high-growth generator")
      ->take_all();
  bounds->add_option("--seed", opts.seed, "seed for eigenvector iteration starts");
  bounds->add_option("--csv", csv_path, "write per-degree bounds as CSV");

  CLI::App* reduce = app.add_subcommand("reduce", "low-rank reduction to dimension r");
  reduce->add_option("input", input, "system document")->required();
  reduce->add_option("--rank", rank, "target rank r")->required();
  reduce->add_option("--tol", reduce_tol, "relative rank-acceptance tolerance");
  reduce->add_option("-o,--output", output, "output document path (stdout when absent)");

  CLI::App* pradius = app.add_subcommand("pradius", "constrained p-radius");
  pradius->add_option("input", input, "system document")->required();
  pradius->add_option("--p", p, "the exponent p")->required();
  pradius->add_option("--mode", mode, "lift | brute")
      ->check(CLI::IsMember({"lift", "brute"}));
  pradius->add_option("--k", brute_k, "truncation length for brute mode");

  CLI11_PARSE(app, argc, argv);
  if (!prodl.empty()) opts.prodl_l = prodl;

  try {
    if (bounds->parsed()) return cmd_bounds(input, opts, csv_path);
    if (reduce->parsed()) return cmd_reduce(input, rank, reduce_tol, output);
    if (pradius->parsed()) return cmd_pradius(input, p, mode, brute_k);
  } catch (const cjsr::DocumentError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const cjsr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputationError;
  }
  return kExitOk;
}
