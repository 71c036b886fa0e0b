// conclab: command-line front end for the concurrence-lab shared library.
// Talks to the core exclusively through the C API. stdout carries data,
// stderr carries diagnostics.
//
// Exit codes: 0 ok, 1 runtime/IO failure, 2 invalid spec or parse error,
// 3 dimension mismatch, 4 violation witness found.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conclab/conclab.h"

namespace {

int exit_code_for(conclab_status status) {
  switch (status) {
    case CONCLAB_OK:
      return 0;
    case CONCLAB_ERR_PARSE:
    case CONCLAB_ERR_INVALID_SPEC:
    case CONCLAB_ERR_NOT_POSITIVE:
    case CONCLAB_ERR_ZERO_SPEC:
    case CONCLAB_ERR_NOT_PSD:
    case CONCLAB_ERR_SPEC_NOT_SUFFICIENT:
      return 2;
    case CONCLAB_ERR_DIMENSION_MISMATCH:
      return 3;
    default:
      return 1;
  }
}

[[noreturn]] void die(conclab_status status) {
  std::fprintf(stderr, "error: %s\n", conclab_last_error());
  std::exit(exit_code_for(status));
}

void check_ok(conclab_status status) {
  if (status != CONCLAB_OK) die(status);
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", path.c_str());
    std::exit(1);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& out_path, const std::string& data) {
  if (out_path.empty()) {
    std::fwrite(data.data(), 1, data.size(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write '%s'\n", out_path.c_str());
    std::exit(1);
  }
  out << data;
}

// RAII for C API handles and strings.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using SpecHandle = Handle<conclab_spec, conclab_spec_free>;
using StateHandle = Handle<conclab_state, conclab_state_free>;
using MixedHandle = Handle<conclab_mixed, conclab_mixed_free>;
using WitnessHandle = Handle<conclab_witness, conclab_witness_free>;

struct CString {
  char* ptr = nullptr;
  ~CString() { conclab_string_free(ptr); }
  char** out() { return &ptr; }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct SearchFlags {
  conclab_search_config config;
  std::vector<int> dims;

  void attach(CLI::App* cmd, bool with_dims) {
    conclab_search_config_init(&config);
    cmd->add_option("--seed", config.seed, "master RNG seed");
    cmd->add_option("--restarts", config.restarts, "random starts per flag party");
    cmd->add_option("--iters", config.max_iters,
                    "objective evaluation budget per start (0 = automatic)");
    cmd->add_option("--tol", config.tol, "violation acceptance threshold on -gap");
    cmd->add_option("--flag-party", config.flag_party_1based,
                    "1-based flag party (0 = automatic)");
    cmd->add_option("--threads", config.threads,
                    "worker threads (0 = CONCURRENCE_LAB_THREADS, then hardware)");
    cmd->add_flag("--no-structured-starts",
                  [this](std::int64_t) { config.structured_candidates = 0; },
                  "disable the analytic candidate seeds");
    if (with_dims)
      cmd->add_option("--dims", dims, "local dimensions, e.g. --dims 2,2,2")
          ->delimiter(',');
  }
};

struct RoofFlags {
  conclab_roof_config config;

  void attach(CLI::App* cmd) {
    conclab_roof_config_init(&config);
    cmd->add_option("--seed", config.seed, "master RNG seed");
    cmd->add_option("--restarts", config.restarts, "independent optimizer starts");
    cmd->add_option("--iters", config.iters, "perturbation steps per start");
    cmd->add_option("--ensemble-size", config.ensemble_size,
                    "decomposition size (0 = twice the rank)");
    cmd->add_option("--threads", config.threads, "worker threads");
  }
};

SpecHandle load_spec(const std::string& path) {
  SpecHandle spec;
  check_ok(conclab_spec_from_json(read_file(path).c_str(), spec.out()));
  return spec;
}

void print_witness(const conclab_witness* witness, const std::string& out_path) {
  double gap = 0.0;
  int party = 0;
  check_ok(conclab_witness_gap(witness, &gap));
  check_ok(conclab_witness_flag_party(witness, &party));
  CString json;
  check_ok(conclab_witness_to_json(witness, json.out()));
  std::printf("violation witness found: gap = %.12f (flag party %d)\n", gap, party);
  if (out_path.empty())
    std::printf("%s\n", json.ptr);
  else
    write_output(out_path, json.str() + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized multipartite concurrence toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(conclab_version()));

  // --- eval ----------------------------------------------------------------
  std::string eval_spec_path;
  std::string eval_state_path;
  CLI::App* eval = app.add_subcommand("eval", "concurrence of a pure state");
  eval->add_option("spec", eval_spec_path, "spec JSON file ('-' = stdin)")->required();
  eval->add_option("state", eval_state_path, "state JSON file")->required();

  // --- convert ----------------------------------------------------------------
  std::string convert_spec_path;
  std::string convert_to;
  std::string convert_out;
  CLI::App* convert =
      app.add_subcommand("convert", "rewrite a spec between alpha and p form");
  convert->add_option("spec", convert_spec_path, "spec JSON file")->required();
  convert->add_option("--to", convert_to, "target form")
      ->required()
      ->check(CLI::IsMember({"alpha", "p"}));
  convert->add_option("--out", convert_out, "output file (default stdout)");

  // --- validate ---------------------------------------------------------------
  std::string validate_spec_path;
  CLI::App* validate =
      app.add_subcommand("validate", "admissibility report for a spec");
  validate->add_option("spec", validate_spec_path, "spec JSON file")->required();

  // --- check ------------------------------------------------------------------
  std::string check_spec_path;
  std::string check_out;
  bool check_search = false;
  SearchFlags check_flags;
  CLI::App* check =
      app.add_subcommand("check", "monotonicity check with optional violation search");
  check->add_option("spec", check_spec_path, "spec JSON file")->required();
  check->add_flag("--search", check_search, "run the numerical violation search");
  check->add_option("--out", check_out, "write a found witness to this file");
  check_flags.attach(check, /*with_dims=*/true);

  // --- scan-kappa ---------------------------------------------------------------
  double kappa_min = -7.0;
  double kappa_max = 0.0;
  int kappa_grid = 15;
  std::string kappa_out;
  SearchFlags kappa_flags;
  CLI::App* scan =
      app.add_subcommand("scan-kappa", "four-qubit kappa-family violation scan");
  scan->add_option("--kappa-min", kappa_min, "lower end of the kappa1 grid");
  scan->add_option("--kappa-max", kappa_max, "upper end of the kappa1 grid");
  scan->add_option("--grid", kappa_grid, "number of grid points")
      ->check(CLI::Range(2, 100000));
  scan->add_option("--out", kappa_out, "CSV output file (default stdout)");
  kappa_flags.attach(scan, /*with_dims=*/false);

  // --- region ---------------------------------------------------------------------
  int region_resolution = 30;
  std::string region_out;
  CLI::App* region =
      app.add_subcommand("region", "tripartite weight-simplex classification");
  region->add_option("--resolution", region_resolution, "simplex grid resolution")
      ->check(CLI::Range(2, 100000));
  region->add_option("--out", region_out, "CSV output file (default stdout)");

  // --- roof --------------------------------------------------------------------------
  std::string roof_spec_path;
  std::string roof_mixed_path;
  RoofFlags roof_flags;
  CLI::App* roof =
      app.add_subcommand("roof", "convex-roof upper bound for a density matrix");
  roof->add_option("spec", roof_spec_path, "spec JSON file")->required();
  roof->add_option("mixed", roof_mixed_path, "density-matrix JSON file")->required();
  roof_flags.attach(roof);

  // --- flags-check ------------------------------------------------------------------
  std::string fc_spec_path;
  std::string fc_mixed1_path;
  std::string fc_mixed2_path;
  double fc_p1 = 0.5;
  double fc_p2 = 0.5;
  int fc_flag_party = 1;
  RoofFlags fc_flags;
  CLI::App* fc = app.add_subcommand(
      "flags-check", "flagged-mixture equality check for a monotone spec");
  fc->add_option("spec", fc_spec_path, "spec JSON file")->required();
  fc->add_option("mixed1", fc_mixed1_path, "first density-matrix JSON file")->required();
  fc->add_option("mixed2", fc_mixed2_path, "second density-matrix JSON file")
      ->required();
  fc->add_option("--p1", fc_p1, "weight of the first component");
  fc->add_option("--p2", fc_p2, "weight of the second component");
  fc->add_option("--flag-party", fc_flag_party, "1-based party carrying the flag");
  fc_flags.attach(fc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (eval->parsed()) {
    SpecHandle spec = load_spec(eval_spec_path);
    StateHandle state;
    check_ok(conclab_state_from_json(read_file(eval_state_path).c_str(), state.out()));
    double value = 0.0;
    check_ok(conclab_concurrence_pure(spec.get(), state.get(), &value));
    std::printf("%.12f\n", value);
    return 0;
  }

  if (convert->parsed()) {
    SpecHandle spec = load_spec(convert_spec_path);
    // Materialize the sign-pattern weights regardless of the target form, so
    // inadmissible tables are rejected in both directions.
    CString p_form;
    check_ok(conclab_spec_to_json(spec.get(), 1, p_form.out()));
    if (convert_to == "p") {
      write_output(convert_out, p_form.str() + "\n");
    } else {
      CString alpha_form;
      check_ok(conclab_spec_to_json(spec.get(), 0, alpha_form.out()));
      write_output(convert_out, alpha_form.str() + "\n");
    }
    return 0;
  }

  if (validate->parsed()) {
    CString report;
    int admissible = 0;
    check_ok(conclab_validate_spec_json(read_file(validate_spec_path).c_str(),
                                        report.out(), &admissible));
    std::printf("%s\n", report.ptr);
    return admissible ? 0 : 2;
  }

  if (check->parsed()) {
    SpecHandle spec = load_spec(check_spec_path);
    int holds = 0;
    check_ok(conclab_sufficient_criterion(spec.get(), &holds));
    if (holds) {
      std::printf("monotone (sufficient criterion)\n");
      return 0;
    }
    std::fprintf(stderr,
                 "sufficient criterion fails; trying to construct a violation\n");

    // Analytic route first: free and exact when some single-party alpha > 0.
    WitnessHandle analytic;
    const conclab_status s = conclab_single_element_counterexample(
        spec.get(), check_flags.config.flag_party_1based, analytic.out());
    if (s == CONCLAB_OK) {
      print_witness(analytic.get(), check_out);
      return 4;
    }
    if (s != CONCLAB_ERR_INAPPLICABLE && s != CONCLAB_ERR_INVALID_ARGUMENT) die(s);

    if (check_search) {
      std::vector<int> dims = check_flags.dims;
      if (dims.empty()) {
        int n = 0;
        check_ok(conclab_spec_parties(spec.get(), &n));
        dims.assign(static_cast<std::size_t>(n), 2);
      }
      WitnessHandle found;
      check_ok(conclab_search_violation(spec.get(), dims.data(),
                                        static_cast<int>(dims.size()),
                                        &check_flags.config, found.out()));
      if (found.get() != nullptr) {
        print_witness(found.get(), check_out);
        return 4;
      }
    }
    std::printf("no violation found (evidence only)\n");
    return 0;
  }

  if (scan->parsed()) {
    CString csv;
    double boundary = 0.0;
    check_ok(conclab_kappa_scan_csv(kappa_min, kappa_max, kappa_grid,
                                    &kappa_flags.config, csv.out(), &boundary));
    if (boundary == boundary)  // not NaN
      std::fprintf(stderr, "boundary estimate: kappa1 = %.6g\n", boundary);
    else
      std::fprintf(stderr, "boundary estimate: none in the scanned range\n");
    write_output(kappa_out, csv.str());
    return 0;
  }

  if (region->parsed()) {
    CString csv;
    check_ok(conclab_region_csv(region_resolution, csv.out()));
    write_output(region_out, csv.str());
    return 0;
  }

  if (roof->parsed()) {
    SpecHandle spec = load_spec(roof_spec_path);
    MixedHandle rho;
    check_ok(conclab_mixed_from_json(read_file(roof_mixed_path).c_str(), rho.out()));
    double value = 0.0;
    check_ok(conclab_roof_upper(spec.get(), rho.get(), &roof_flags.config, &value));
    std::printf("%.12f\n", value);
    return 0;
  }

  if (fc->parsed()) {
    SpecHandle spec = load_spec(fc_spec_path);
    MixedHandle rho1;
    MixedHandle rho2;
    check_ok(conclab_mixed_from_json(read_file(fc_mixed1_path).c_str(), rho1.out()));
    check_ok(conclab_mixed_from_json(read_file(fc_mixed2_path).c_str(), rho2.out()));
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    check_ok(conclab_flags_check(spec.get(), rho1.get(), rho2.get(), fc_p1, fc_p2,
                                 fc_flag_party, &fc_flags.config, &lhs, &rhs,
                                 &residual));
    std::printf("{\"lhs_estimate\":%.12g,\"rhs_value\":%.12g,\"residual\":%.12g}\n",
                lhs, rhs, residual);
    return 0;
  }

  return 0;
}
