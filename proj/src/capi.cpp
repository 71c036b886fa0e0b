#include "conclab/conclab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "concurrence.hpp"
#include "convexroof.hpp"
#include "errors.hpp"
#include "monotonicity.hpp"
#include "qstate.hpp"
#include "serialize.hpp"

struct conclab_state {
  conclab::PureState value;
};
struct conclab_spec {
  conclab::ConcurrenceSpec value;
};
struct conclab_mixed {
  conclab::MixedState value;
};
struct conclab_witness {
  conclab::ViolationWitness value;
};

namespace {

thread_local std::string t_last_error;

conclab_status map_code(conclab::ErrorCode code) {
  using conclab::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return CONCLAB_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return CONCLAB_ERR_DIMENSION_MISMATCH;
    case ErrorCode::parse: return CONCLAB_ERR_PARSE;
    case ErrorCode::invalid_spec: return CONCLAB_ERR_INVALID_SPEC;
    case ErrorCode::not_positive: return CONCLAB_ERR_NOT_POSITIVE;
    case ErrorCode::not_psd: return CONCLAB_ERR_NOT_PSD;
    case ErrorCode::not_isometry: return CONCLAB_ERR_NOT_ISOMETRY;
    case ErrorCode::inapplicable: return CONCLAB_ERR_INAPPLICABLE;
    case ErrorCode::negative_radicand: return CONCLAB_ERR_NEGATIVE_RADICAND;
    case ErrorCode::zero_spec: return CONCLAB_ERR_ZERO_SPEC;
    case ErrorCode::spec_not_sufficient: return CONCLAB_ERR_SPEC_NOT_SUFFICIENT;
    case ErrorCode::io: return CONCLAB_ERR_IO;
    case ErrorCode::internal: return CONCLAB_ERR_INTERNAL;
  }
  return CONCLAB_ERR_INTERNAL;
}

template <typename F>
conclab_status guarded(F&& body) noexcept {
  try {
    body();
    t_last_error.clear();
    return CONCLAB_OK;
  } catch (const conclab::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return CONCLAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return CONCLAB_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return CONCLAB_ERR_INTERNAL;
  }
}

void need(bool condition, const char* message) {
  if (!condition) conclab::fail(conclab::ErrorCode::invalid_argument, message);
}

char* dup_cstr(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<int> dims_vector(const int* dims, int n_parties) {
  need(dims != nullptr && n_parties >= 1, "dims array must be non-NULL and nonempty");
  return std::vector<int>(dims, dims + n_parties);
}

conclab::SearchConfig to_search_config(const conclab_search_config* c) {
  need(c != nullptr, "search config must not be NULL");
  need(c->flag_party_1based >= 0, "flag party is 1-based; 0 selects automatically");
  conclab::SearchConfig out;
  out.seed = c->seed;
  out.restarts = c->restarts;
  out.max_iters = c->max_iters;
  out.tol = c->tol;
  out.flag_party = c->flag_party_1based == 0 ? -1 : c->flag_party_1based - 1;
  out.structured_candidates = c->structured_candidates != 0;
  out.threads = c->threads;
  return out;
}

conclab::RoofConfig to_roof_config(const conclab_roof_config* c) {
  need(c != nullptr, "roof config must not be NULL");
  conclab::RoofConfig out;
  out.seed = c->seed;
  out.restarts = c->restarts;
  out.iters = c->iters;
  out.ensemble_size = c->ensemble_size;
  out.threads = c->threads;
  return out;
}

}  // namespace

extern "C" {

const char* conclab_version(void) { return "0.1.0"; }

const char* conclab_last_error(void) { return t_last_error.c_str(); }

void conclab_string_free(char* text) { std::free(text); }

/* --- Pure states ---------------------------------------------------------- */

conclab_status conclab_state_from_json(const char* json, conclab_state** out) {
  return guarded([&] {
    need(json != nullptr && out != nullptr, "NULL argument");
    *out = new conclab_state{conclab::state_from_json(json)};
  });
}

conclab_status conclab_state_to_json(const conclab_state* state, char** out_json) {
  return guarded([&] {
    need(state != nullptr && out_json != nullptr, "NULL argument");
    *out_json = dup_cstr(conclab::state_to_json(state->value));
  });
}

conclab_status conclab_state_bell_phi_plus(conclab_state** out) {
  return guarded([&] {
    need(out != nullptr, "NULL argument");
    *out = new conclab_state{conclab::bell_phi_plus()};
  });
}

conclab_status conclab_state_bell_phi_minus(conclab_state** out) {
  return guarded([&] {
    need(out != nullptr, "NULL argument");
    *out = new conclab_state{conclab::bell_phi_minus()};
  });
}

conclab_status conclab_state_ghz(int n_parties, conclab_state** out) {
  return guarded([&] {
    need(out != nullptr, "NULL argument");
    *out = new conclab_state{conclab::ghz(n_parties)};
  });
}

conclab_status conclab_state_w(int n_parties, conclab_state** out) {
  return guarded([&] {
    need(out != nullptr, "NULL argument");
    *out = new conclab_state{conclab::w(n_parties)};
  });
}

conclab_status conclab_state_random(const int* dims, int n_parties, uint64_t seed,
                                    conclab_state** out) {
  return guarded([&] {
    need(out != nullptr, "NULL argument");
    *out = new conclab_state{conclab::random_state(dims_vector(dims, n_parties), seed)};
  });
}

conclab_status conclab_state_tensor(const conclab_state* left,
                                    const conclab_state* right, conclab_state** out) {
  return guarded([&] {
    need(left != nullptr && right != nullptr && out != nullptr, "NULL argument");
    *out = new conclab_state{left->value.tensor(right->value)};
  });
}

conclab_status conclab_state_norm(const conclab_state* state, double* out_norm) {
  return guarded([&] {
    need(state != nullptr && out_norm != nullptr, "NULL argument");
    *out_norm = state->value.norm();
  });
}

void conclab_state_free(conclab_state* state) { delete state; }

/* --- Specs ----------------------------------------------------------------- */

conclab_status conclab_spec_from_json(const char* json, conclab_spec** out) {
  return guarded([&] {
    need(json != nullptr && out != nullptr, "NULL argument");
    *out = new conclab_spec{conclab::spec_from_json(json, /*enforce=*/true)};
  });
}

conclab_status conclab_spec_to_json(const conclab_spec* spec, int as_p_form,
                                    char** out_json) {
  return guarded([&] {
    need(spec != nullptr && out_json != nullptr, "NULL argument");
    *out_json = dup_cstr(conclab::spec_to_json(
        spec->value, as_p_form ? conclab::SpecForm::p : conclab::SpecForm::alpha));
  });
}

conclab_status conclab_spec_symmetric(int n_parties, conclab_spec** out) {
  return guarded([&] {
    need(out != nullptr, "NULL argument");
    *out = new conclab_spec{conclab::symmetric_spec(n_parties)};
  });
}

conclab_status conclab_spec_kappa(double kappa1, conclab_spec** out) {
  return guarded([&] {
    need(out != nullptr, "NULL argument");
    *out = new conclab_spec{conclab::kappa_spec(kappa1)};
  });
}

conclab_status conclab_spec_normalize(const conclab_spec* spec, conclab_spec** out) {
  return guarded([&] {
    need(spec != nullptr && out != nullptr, "NULL argument");
    *out = new conclab_spec{conclab::normalize(spec->value)};
  });
}

conclab_status conclab_spec_parties(const conclab_spec* spec, int* out_n) {
  return guarded([&] {
    need(spec != nullptr && out_n != nullptr, "NULL argument");
    *out_n = spec->value.parties();
  });
}

void conclab_spec_free(conclab_spec* spec) { delete spec; }

conclab_status conclab_validate_spec_json(const char* spec_json,
                                          char** out_report_json,
                                          int* out_admissible) {
  return guarded([&] {
    need(spec_json != nullptr && out_report_json != nullptr, "NULL argument");
    const conclab::ConcurrenceSpec spec =
        conclab::spec_from_json(spec_json, /*enforce=*/false);
    const conclab::ValidationReport report = conclab::validate(spec);
    *out_report_json = dup_cstr(conclab::report_to_json(report));
    if (out_admissible != nullptr) *out_admissible = report.admissible() ? 1 : 0;
  });
}

/* --- Pure-state evaluation -------------------------------------------------- */

conclab_status conclab_concurrence_pure(const conclab_spec* spec,
                                        const conclab_state* state,
                                        double* out_value) {
  return guarded([&] {
    need(spec != nullptr && state != nullptr && out_value != nullptr, "NULL argument");
    *out_value = conclab::concurrence_pure(spec->value, state->value);
  });
}

conclab_status conclab_sufficient_criterion(const conclab_spec* spec, int* out_holds) {
  return guarded([&] {
    need(spec != nullptr && out_holds != nullptr, "NULL argument");
    *out_holds = conclab::sufficient_criterion(spec->value) ? 1 : 0;
  });
}

conclab_status conclab_gap(const conclab_spec* spec, const conclab_state* psi,
                           const conclab_state* phi, double a_re, double a_im,
                           double b_re, double b_im, int flag_party_1based,
                           int expanded, double* out_gap) {
  return guarded([&] {
    need(spec != nullptr && psi != nullptr && phi != nullptr && out_gap != nullptr,
         "NULL argument");
    need(flag_party_1based >= 1, "flag party is 1-based");
    const conclab::cdouble a(a_re, a_im);
    const conclab::cdouble b(b_re, b_im);
    const conclab::GapEvaluation eval =
        expanded ? conclab::gap_expanded(spec->value, psi->value, phi->value, a, b,
                                         flag_party_1based - 1)
                 : conclab::gap_direct(spec->value, psi->value, phi->value, a, b,
                                       flag_party_1based - 1);
    *out_gap = eval.gap;
  });
}

/* --- Violation search -------------------------------------------------------- */

void conclab_search_config_init(conclab_search_config* config) {
  if (config == nullptr) return;
  const conclab::SearchConfig defaults;
  config->seed = defaults.seed;
  config->restarts = defaults.restarts;
  config->max_iters = defaults.max_iters;
  config->tol = defaults.tol;
  config->flag_party_1based = 0;
  config->structured_candidates = defaults.structured_candidates ? 1 : 0;
  config->threads = defaults.threads;
}

conclab_status conclab_single_element_counterexample(const conclab_spec* spec,
                                                     int party_1based,
                                                     conclab_witness** out) {
  return guarded([&] {
    need(spec != nullptr && out != nullptr, "NULL argument");
    need(party_1based >= 0, "party is 1-based; 0 selects automatically");
    *out = new conclab_witness{
        conclab::single_element_counterexample(spec->value, party_1based - 1)};
  });
}

conclab_status conclab_search_violation(const conclab_spec* spec, const int* dims,
                                        int n_parties,
                                        const conclab_search_config* config,
                                        conclab_witness** out) {
  return guarded([&] {
    need(spec != nullptr && out != nullptr, "NULL argument");
    std::optional<conclab::ViolationWitness> witness = conclab::search_violation(
        spec->value, dims_vector(dims, n_parties), to_search_config(config));
    *out = witness ? new conclab_witness{std::move(*witness)} : nullptr;
  });
}

conclab_status conclab_search_min_gap(const conclab_spec* spec, const int* dims,
                                      int n_parties,
                                      const conclab_search_config* config,
                                      double* out_min_gap) {
  return guarded([&] {
    need(spec != nullptr && out_min_gap != nullptr, "NULL argument");
    *out_min_gap = conclab::search_min_gap(spec->value, dims_vector(dims, n_parties),
                                           to_search_config(config))
                       .best_gap;
  });
}

conclab_status conclab_witness_gap(const conclab_witness* witness, double* out_gap) {
  return guarded([&] {
    need(witness != nullptr && out_gap != nullptr, "NULL argument");
    *out_gap = witness->value.gap;
  });
}

conclab_status conclab_witness_flag_party(const conclab_witness* witness,
                                          int* out_party_1based) {
  return guarded([&] {
    need(witness != nullptr && out_party_1based != nullptr, "NULL argument");
    *out_party_1based = witness->value.flag_party + 1;
  });
}

conclab_status conclab_witness_to_json(const conclab_witness* witness,
                                       char** out_json) {
  return guarded([&] {
    need(witness != nullptr && out_json != nullptr, "NULL argument");
    *out_json = dup_cstr(conclab::witness_to_json(witness->value));
  });
}

void conclab_witness_free(conclab_witness* witness) { delete witness; }

/* --- Parameter scans ---------------------------------------------------------- */

conclab_status conclab_kappa_scan_csv(double kappa1_lo, double kappa1_hi,
                                      int grid_points,
                                      const conclab_search_config* config,
                                      char** out_csv, double* out_boundary) {
  return guarded([&] {
    need(out_csv != nullptr, "NULL argument");
    need(grid_points >= 2, "grid needs at least two points");
    need(kappa1_lo <= kappa1_hi, "grid bounds out of order");
    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i)
      grid[static_cast<std::size_t>(i)] =
          kappa1_lo + (kappa1_hi - kappa1_lo) * i / (grid_points - 1);
    const conclab::KappaScanResult result =
        conclab::kappa_scan(std::move(grid), to_search_config(config));
    *out_csv = dup_cstr(conclab::kappa_scan_to_csv(result));
    if (out_boundary != nullptr) *out_boundary = result.boundary_estimate;
  });
}

conclab_status conclab_region_csv(int resolution, char** out_csv) {
  return guarded([&] {
    need(out_csv != nullptr, "NULL argument");
    *out_csv = dup_cstr(conclab::region_to_csv(conclab::tripartite_region(resolution)));
  });
}

/* --- Mixed states and the convex roof ------------------------------------------ */

conclab_status conclab_mixed_from_json(const char* json, conclab_mixed** out) {
  return guarded([&] {
    need(json != nullptr && out != nullptr, "NULL argument");
    *out = new conclab_mixed{conclab::mixed_from_json(json)};
  });
}

conclab_status conclab_mixed_to_json(const conclab_mixed* rho, char** out_json) {
  return guarded([&] {
    need(rho != nullptr && out_json != nullptr, "NULL argument");
    *out_json = dup_cstr(conclab::mixed_to_json(rho->value));
  });
}

conclab_status conclab_mixed_from_state(const conclab_state* state,
                                        conclab_mixed** out) {
  return guarded([&] {
    need(state != nullptr && out != nullptr, "NULL argument");
    *out = new conclab_mixed{conclab::MixedState::from_pure(state->value)};
  });
}

void conclab_mixed_free(conclab_mixed* rho) { delete rho; }

void conclab_roof_config_init(conclab_roof_config* config) {
  if (config == nullptr) return;
  const conclab::RoofConfig defaults;
  config->seed = defaults.seed;
  config->restarts = defaults.restarts;
  config->iters = defaults.iters;
  config->ensemble_size = defaults.ensemble_size;
  config->threads = defaults.threads;
}

conclab_status conclab_roof_upper(const conclab_spec* spec, const conclab_mixed* rho,
                                  const conclab_roof_config* config,
                                  double* out_value) {
  return guarded([&] {
    need(spec != nullptr && rho != nullptr && out_value != nullptr, "NULL argument");
    *out_value =
        conclab::convex_roof_upper(spec->value, rho->value, to_roof_config(config))
            .value;
  });
}

conclab_status conclab_flags_check(const conclab_spec* spec, const conclab_mixed* rho1,
                                   const conclab_mixed* rho2, double p1, double p2,
                                   int flag_party_1based,
                                   const conclab_roof_config* config, double* out_lhs,
                                   double* out_rhs, double* out_residual) {
  return guarded([&] {
    need(spec != nullptr && rho1 != nullptr && rho2 != nullptr && out_lhs != nullptr &&
             out_rhs != nullptr && out_residual != nullptr,
         "NULL argument");
    need(flag_party_1based >= 1, "flag party is 1-based");
    const conclab::FlagsCheckResult result =
        conclab::flags_equality_check(spec->value, rho1->value, rho2->value, p1, p2,
                                      flag_party_1based - 1, to_roof_config(config));
    *out_lhs = result.lhs_estimate;
    *out_rhs = result.rhs_value;
    *out_residual = result.residual;
  });
}

}  // extern "C"
