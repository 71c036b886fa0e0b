#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "concurrence.hpp"

namespace conclab {

enum class GapMethod { direct, expanded };

// One evaluation of the split inequality: gap = lhs - rhs_psi_term -
// rhs_phi_term where lhs = C(Xi) for the flagged superposition Xi and the rhs
// terms are |a|^2 C(psi) and |b|^2 C(phi). Negative gap = violation.
struct GapEvaluation {
  double gap;
  double lhs;
  double rhs_psi_term;
  double rhs_phi_term;
  GapMethod method;
};

// Certificate of a monotonicity violation: every field needed to re-evaluate
// the gap independently.
struct ViolationWitness {
  ConcurrenceSpec spec;
  PureState psi;
  PureState phi;
  cdouble a;
  cdouble b;
  int flag_party;  // 0-based
  double gap;      // < 0
};

struct SearchConfig {
  std::uint64_t seed = 42;
  int restarts = 24;        // Haar random starts per flag party
  int max_iters = 0;        // simplex evaluation budget; 0 = scaled from the parameter count
  double tol = 1e-7;        // witness acceptance: gap < -tol
  int flag_party = -1;      // -1: party 0 if permutation-symmetric, else all parties
  bool structured_candidates = true;  // seed with analytic candidate families
  int threads = 0;          // 0: CONCURRENCE_LAB_THREADS env var, then hardware
};

// Best configuration found by a search, populated whether or not it violates.
struct SearchOutcome {
  double best_gap;
  PureState psi;
  PureState phi;
  cdouble a;
  cdouble b;
  int flag_party;
};

// True iff every nontrivial alpha_V <= 1e-14: the sufficient condition for
// monotonicity. False only means "not decided by this criterion".
bool sufficient_criterion(const ConcurrenceSpec& spec);

// Builds Xi = flag_superposition(psi, phi, a, b, flag_party) and evaluates all
// three concurrences directly.
GapEvaluation gap_direct(const ConcurrenceSpec& spec, const PureState& psi,
                         const PureState& phi, cdouble a, cdouble b, int flag_party);

// Same gap through the squared expansion: Tr([Tr_V Xi]^2) = |a|^4 P^psi_V +
// |b|^4 P^phi_V + 2|a|^2|b|^2 Y_V with Y_V the cross purity on the flag-free
// side of the cut. Never constructs Xi; must agree with gap_direct to 1e-10.
GapEvaluation gap_expanded(const ConcurrenceSpec& spec, const PureState& psi,
                           const PureState& phi, cdouble a, cdouble b, int flag_party);

// Analytic violation for N = 3 with some single-element alpha_{k} > 0:
// psi = |0>_k (x) Phi+, phi = |0>_k (x) Phi-, balanced weights, flags on k.
ViolationWitness tripartite_counterexample(const ConcurrenceSpec& spec);

// N-party generalization of the same construction (party = -1 picks the first
// positive single-element coefficient). Inapplicable when none is positive.
ViolationWitness single_element_counterexample(const ConcurrenceSpec& spec, int party);

// Minimizes gap_direct over (psi, phi, theta) with a = cos(theta),
// b = sin(theta); real weights suffice since weight phases absorb into the
// states. Deterministic for a fixed seed, also when restarts run in parallel
// (per-task seeds derive from the master seed; ties break by task index).
SearchOutcome search_min_gap(const ConcurrenceSpec& spec, const std::vector<int>& dims,
                             const SearchConfig& config);

// Witness wrapper around search_min_gap: a witness iff best gap < -tol.
// Absence of a witness is numerical evidence only, never a proof.
std::optional<ViolationWitness> search_violation(const ConcurrenceSpec& spec,
                                                 const std::vector<int>& dims,
                                                 const SearchConfig& config);

struct KappaScanResult {
  std::vector<double> kappa1_grid;
  std::vector<double> kappa2_grid;        // always (-14 - 8 k1)/6
  std::vector<double> min_gap_per_point;  // NaN on inadmissible points
  std::vector<bool> admissible;
  std::vector<bool> violated;
  double boundary_estimate;  // kappa1 where the min gap crosses 0; NaN if no crossing
};

// Scans the four-qubit kappa family over the given kappa1 grid (within
// [-7, 0]), searching for violations at each point, then refines the
// violated/monotone boundary by bisection to a +-0.05 bracket.
KappaScanResult kappa_scan(std::vector<double> kappa1_grid, const SearchConfig& config);

struct RegionPoint {
  double p[3];      // weights on the three even sign patterns, sum 3
  bool admissible;  // p >= 0 (true on the sampled simplex)
  bool monotone;    // all three triangle conditions hold
};

// Uniform triangular grid on the tripartite weight simplex p1+p2+p3 = 3,
// classified by the triangle conditions p_i <= p_j + p_k. Exactly
// (resolution+1)(resolution+2)/2 rows.
std::vector<RegionPoint> tripartite_region(int resolution);

}  // namespace conclab
