#include "monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

#include "errors.hpp"
#include "optim.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace conclab {

namespace {

constexpr double kPositiveTol = 1e-14;

Eigen::Index product_dim(const std::vector<int>& dims) {
  Eigen::Index d = 1;
  for (int x : dims) d *= x;
  return d;
}

void check_gap_inputs(const ConcurrenceSpec& spec, const PureState& psi,
                      const PureState& phi, int flag_party) {
  require(psi.dims() == phi.dims(), ErrorCode::dimension_mismatch,
          "gap evaluation needs branches with identical party dimensions");
  require(spec.parties() == psi.parties(), ErrorCode::dimension_mismatch,
          "spec party count does not match the states");
  require(flag_party >= 0 && flag_party < psi.parties(), ErrorCode::invalid_argument,
          "flag party out of range");
}

// (|0...0> + sign |1 on block>)/sqrt(2), using levels 0/1 of each local
// space; works for any local dimensions >= 2.
PureState ghz_block(const std::vector<int>& dims, std::uint32_t block_bits, double sign) {
  const int n = static_cast<int>(dims.size());
  Eigen::Index idx1 = 0;
  Eigen::Index stride = 1;
  for (int p = n - 1; p >= 0; --p) {
    if ((block_bits >> p) & 1u) idx1 += stride;
    stride *= dims[static_cast<std::size_t>(p)];
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(product_dim(dims));
  const double c = 1.0 / std::sqrt(2.0);
  amps[0] = c;
  amps[idx1] += sign * c;
  return PureState(dims, std::move(amps));
}

// Product of block GHZ states: for blocks (B_1, s_1), ..., (B_m, s_m) the
// state prod_b (|0...0>_{B_b} + s_b |1...1>_{B_b})/sqrt(2), parties outside
// all blocks pinned to |0>.
PureState bell_blocks(const std::vector<int>& dims,
                      const std::vector<std::pair<std::uint32_t, double>>& blocks) {
  const int n = static_cast<int>(dims.size());
  std::vector<Eigen::Index> block_idx(blocks.size(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Eigen::Index stride = 1;
    for (int p = n - 1; p >= 0; --p) {
      if ((blocks[b].first >> p) & 1u) block_idx[b] += stride;
      stride *= dims[static_cast<std::size_t>(p)];
    }
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(product_dim(dims));
  const double c = std::pow(0.5, 0.5 * static_cast<double>(blocks.size()));
  for (std::uint32_t choice = 0; choice < (1u << blocks.size()); ++choice) {
    Eigen::Index idx = 0;
    double weight = c;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if ((choice >> b) & 1u) {
        idx += block_idx[b];
        weight *= blocks[b].second;
      }
    amps[idx] += weight;
  }
  return PureState(dims, std::move(amps));
}

std::vector<int> positive_single_elements(const ConcurrenceSpec& spec) {
  std::vector<int> out;
  for (int k = 0; k < spec.parties(); ++k)
    if (spec.alpha().at(1u << k) > kPositiveTol) out.push_back(k);
  return out;
}

}  // namespace

// --- Criterion and gap evaluations -------------------------------------------

bool sufficient_criterion(const ConcurrenceSpec& spec) {
  const std::uint32_t full = (1u << spec.parties()) - 1u;
  for (std::uint32_t v = 1; v < full; ++v)
    if (spec.alpha().at(v) > kPositiveTol) return false;
  return true;
}

GapEvaluation gap_direct(const ConcurrenceSpec& spec, const PureState& psi,
                         const PureState& phi, cdouble a, cdouble b, int flag_party) {
  check_gap_inputs(spec, psi, phi, flag_party);
  const PureState xi = flag_superposition(psi, phi, a, b, flag_party);
  const double lhs = concurrence_pure(spec, xi);
  const double rhs_psi = std::norm(a) * concurrence_pure(spec, psi);
  const double rhs_phi = std::norm(b) * concurrence_pure(spec, phi);
  return GapEvaluation{lhs - rhs_psi - rhs_phi, lhs, rhs_psi, rhs_phi, GapMethod::direct};
}

GapEvaluation gap_expanded(const ConcurrenceSpec& spec, const PureState& psi,
                           const PureState& phi, cdouble a, cdouble b, int flag_party) {
  check_gap_inputs(spec, psi, phi, flag_party);
  const int n = spec.parties();
  const std::uint32_t full = (1u << n) - 1u;
  const double aa = std::norm(a);
  const double bb = std::norm(b);

  // Each cut splits into the side with the flag and the side without. The
  // cross term of the squared reduction collapses onto the flag-free side:
  // the flags are orthogonal, so either the traced flag kills it or it
  // becomes Tr[M M^dagger] = Tr[rho^psi rho^phi] on the remaining side. Both
  // members of a complement pair share that side, so sum over pairs.
  double radicand = 0.0;
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    if ((v >> flag_party) & 1u) continue;  // enumerate flag-free traced sets
    const double weight = spec.alpha().at(v) + spec.alpha().at(full ^ v);
    if (weight == 0.0) continue;
    const SubsetMask cut{v, n};
    const double p_psi = purity(psi, cut);
    const double p_phi = purity(phi, cut);
    const double y = cross_purity(psi, phi, cut);
    radicand += weight * (aa * aa * p_psi + bb * bb * p_phi + 2.0 * aa * bb * y);
  }

  const double lhs = concurrence_from_radicand(n, radicand);
  const double rhs_psi = aa * concurrence_pure(spec, psi);
  const double rhs_phi = bb * concurrence_pure(spec, phi);
  return GapEvaluation{lhs - rhs_psi - rhs_phi, lhs, rhs_psi, rhs_phi,
                       GapMethod::expanded};
}

// --- Analytic counterexamples -------------------------------------------------

ViolationWitness single_element_counterexample(const ConcurrenceSpec& spec, int party) {
  const int n = spec.parties();
  require(n >= 3, ErrorCode::invalid_argument,
          "single-element construction needs at least 3 parties");
  if (party < 0) {
    const auto positives = positive_single_elements(spec);
    require(!positives.empty(), ErrorCode::inapplicable,
            "no single-element subset has positive weight");
    party = positives.front();
  }
  require(party < n, ErrorCode::invalid_argument, "party index out of range");
  require(spec.alpha().at(1u << party) > kPositiveTol, ErrorCode::inapplicable,
          "alpha{" + CoefficientsAlpha::subset_name(1u << party) +
              "} is not positive; construction does not apply");

  // |0>_party (x) (|0..0> +- |1..1>) on the remaining parties: the branches
  // agree on every reduction except across the party|rest cut, where their
  // cross purity vanishes. That single surviving term has the positive
  // weight, so the flagged superposition strictly loses concurrence.
  const std::vector<int> dims(static_cast<std::size_t>(n), 2);
  const std::uint32_t rest = ((1u << n) - 1u) ^ (1u << party);
  PureState psi = ghz_block(dims, rest, +1.0);
  PureState phi = ghz_block(dims, rest, -1.0);
  const cdouble w = 1.0 / std::sqrt(2.0);
  const double gap = gap_direct(spec, psi, phi, w, w, party).gap;
  return ViolationWitness{spec, std::move(psi), std::move(phi), w, w, party, gap};
}

ViolationWitness tripartite_counterexample(const ConcurrenceSpec& spec) {
  require(spec.parties() == 3, ErrorCode::invalid_argument,
          "tripartite construction needs exactly 3 parties");
  return single_element_counterexample(spec, -1);
}

// --- Violation search -----------------------------------------------------------

namespace {

struct SearchTask {
  int flag_party;
  // Fixed starting pair for structured candidates; empty = Haar draw.
  std::optional<std::pair<PureState, PureState>> start;
  std::uint64_t seed = 0;
};

struct TaskResult {
  double gap = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd psi;
  Eigen::VectorXcd phi;
  double theta = 0.0;
};

// Parameter layout: [Re psi | Im psi | Re phi | Im phi | theta].
Eigen::VectorXd pack(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi,
                     double theta) {
  const Eigen::Index d = psi.size();
  Eigen::VectorXd x(4 * d + 1);
  x.segment(0, d) = psi.real();
  x.segment(d, d) = psi.imag();
  x.segment(2 * d, d) = phi.real();
  x.segment(3 * d, d) = phi.imag();
  x[4 * d] = theta;
  return x;
}

void unpack(const Eigen::VectorXd& x, Eigen::VectorXcd& psi, Eigen::VectorXcd& phi,
            double& theta) {
  const Eigen::Index d = (x.size() - 1) / 4;
  psi.resize(d);
  phi.resize(d);
  psi.real() = x.segment(0, d);
  psi.imag() = x.segment(d, d);
  phi.real() = x.segment(2 * d, d);
  phi.imag() = x.segment(3 * d, d);
  theta = x[4 * d];
}

std::vector<std::pair<PureState, PureState>> structured_starts(
    const ConcurrenceSpec& spec, const std::vector<int>& dims) {
  std::vector<std::pair<PureState, PureState>> out;
  for (int d : dims)
    if (d < 2) return out;  // level-1 constructions need qubit-or-larger parties

  const int n = static_cast<int>(dims.size());
  const std::uint32_t full = (1u << n) - 1u;

  // Orthogonal GHZ pair on the full party set.
  out.emplace_back(ghz_block(dims, full, +1.0), ghz_block(dims, full, -1.0));

  // The single-element family (drives the analytic counterexample).
  for (int k : positive_single_elements(spec)) {
    const std::uint32_t rest = full ^ (1u << k);
    out.emplace_back(ghz_block(dims, rest, +1.0), ghz_block(dims, rest, -1.0));
  }

  // Products of two orthogonal block pairs, both sign assignments. These
  // reach the violations driven by positive pair coefficients, which the
  // single-element family cannot.
  for (std::uint32_t b1 = 1; b1 < full; ++b1) {
    if (!(b1 & 1u)) continue;  // party 0 in the first block: each split once
    const std::uint32_t b2 = full ^ b1;
    if (std::popcount(b1) < 2 || std::popcount(b2) < 2) continue;
    out.emplace_back(bell_blocks(dims, {{b1, +1.0}, {b2, +1.0}}),
                     bell_blocks(dims, {{b1, -1.0}, {b2, -1.0}}));
    out.emplace_back(bell_blocks(dims, {{b1, +1.0}, {b2, -1.0}}),
                     bell_blocks(dims, {{b1, -1.0}, {b2, +1.0}}));
  }
  return out;
}

TaskResult run_task(const ConcurrenceSpec& spec, const std::vector<int>& dims,
                    const SearchTask& task, int max_evals) {
  PureState psi0 = task.start ? task.start->first
                              : random_state(dims, mix_seed(task.seed, 1));
  PureState phi0 = task.start ? task.start->second
                              : random_state(dims, mix_seed(task.seed, 2));

  auto objective = [&spec, &dims, &task](const Eigen::VectorXd& x) {
    Eigen::VectorXcd vpsi, vphi;
    double theta = 0.0;
    unpack(x, vpsi, vphi, theta);
    const double npsi = vpsi.norm();
    const double nphi = vphi.norm();
    if (npsi < 1e-8 || nphi < 1e-8) return 1e3;  // repel the collapsed region
    const PureState psi(dims, vpsi / npsi);
    const PureState phi(dims, vphi / nphi);
    const cdouble a = std::cos(theta);
    const cdouble b = std::sin(theta);
    return gap_direct(spec, psi, phi, a, b, task.flag_party).gap;
  };

  SimplexOptions options;
  options.max_evals = max_evals;
  options.initial_step = 0.25;
  const SimplexResult res = nelder_mead(
      objective, pack(psi0.amplitudes(), phi0.amplitudes(), std::numbers::pi / 4.0),
      options);

  TaskResult out;
  Eigen::VectorXcd vpsi, vphi;
  double theta = 0.0;
  unpack(res.x, vpsi, vphi, theta);
  if (vpsi.norm() < 1e-8 || vphi.norm() < 1e-8) return out;  // degenerate: keep +inf
  out.gap = res.fx;
  out.psi = vpsi / vpsi.norm();
  out.phi = vphi / vphi.norm();
  out.theta = theta;
  return out;
}

}  // namespace

SearchOutcome search_min_gap(const ConcurrenceSpec& spec, const std::vector<int>& dims,
                             const SearchConfig& config) {
  require(static_cast<int>(dims.size()) == spec.parties(), ErrorCode::dimension_mismatch,
          "search dims must match the spec party count");
  require(config.restarts >= 0, ErrorCode::invalid_argument, "negative restart count");
  require(config.tol > 0.0, ErrorCode::invalid_argument, "tolerance must be positive");

  const int n = spec.parties();
  std::vector<int> flag_parties;
  if (config.flag_party >= 0) {
    require(config.flag_party < n, ErrorCode::invalid_argument, "flag party out of range");
    flag_parties = {config.flag_party};
  } else if (spec.permutation_symmetric()) {
    flag_parties = {0};  // relabeling symmetry: one flag slot represents all
  } else {
    flag_parties.resize(static_cast<std::size_t>(n));
    std::iota(flag_parties.begin(), flag_parties.end(), 0);
  }

  const Eigen::Index d = product_dim(dims);
  const int param_dim = static_cast<int>(4 * d + 1);
  const int max_evals =
      config.max_iters > 0 ? config.max_iters : 140 * param_dim + 2000;

  std::vector<SearchTask> tasks;
  for (int flag : flag_parties)
    for (int r = 0; r < config.restarts; ++r)
      tasks.push_back(SearchTask{flag, std::nullopt,
                                 mix_seed(config.seed, tasks.size())});
  if (config.structured_candidates) {
    const auto starts = structured_starts(spec, dims);
    for (int flag : flag_parties)
      for (const auto& s : starts) tasks.push_back(SearchTask{flag, s, 0});
  }
  if (tasks.empty())
    tasks.push_back(SearchTask{flag_parties.front(), std::nullopt,
                               mix_seed(config.seed, 0)});

  std::vector<TaskResult> results(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), resolve_thread_count(config.threads),
               [&](int t) {
                 results[static_cast<std::size_t>(t)] =
                     run_task(spec, dims, tasks[static_cast<std::size_t>(t)], max_evals);
               });

  // Lexicographic (gap, task index): parallel runs reproduce sequential picks.
  std::size_t best = 0;
  for (std::size_t t = 1; t < results.size(); ++t)
    if (results[t].gap < results[best].gap) best = t;
  require(std::isfinite(results[best].gap), ErrorCode::internal,
          "search produced no usable evaluation");

  const TaskResult& win = results[best];
  return SearchOutcome{win.gap,
                       PureState(dims, win.psi),
                       PureState(dims, win.phi),
                       std::abs(std::cos(win.theta)),
                       std::abs(std::sin(win.theta)),
                       tasks[best].flag_party};
}

std::optional<ViolationWitness> search_violation(const ConcurrenceSpec& spec,
                                                 const std::vector<int>& dims,
                                                 const SearchConfig& config) {
  SearchOutcome outcome = search_min_gap(spec, dims, config);
  if (outcome.best_gap >= -config.tol) return std::nullopt;
  // Store the gap re-evaluated from the stored fields so the witness is
  // self-certifying under independent re-evaluation.
  const double gap =
      gap_direct(spec, outcome.psi, outcome.phi, outcome.a, outcome.b,
                 outcome.flag_party)
          .gap;
  return ViolationWitness{spec,
                          std::move(outcome.psi),
                          std::move(outcome.phi),
                          outcome.a,
                          outcome.b,
                          outcome.flag_party,
                          gap};
}

// --- Kappa scan -------------------------------------------------------------------

KappaScanResult kappa_scan(std::vector<double> kappa1_grid, const SearchConfig& config) {
  require(!kappa1_grid.empty(), ErrorCode::invalid_argument, "empty scan grid");
  std::sort(kappa1_grid.begin(), kappa1_grid.end());
  for (double k1 : kappa1_grid)
    require(k1 >= -7.0 - 1e-9 && k1 <= 1e-9, ErrorCode::invalid_argument,
            "kappa1 grid must stay within the admissible range [-7, 0]");

  const std::vector<int> dims{2, 2, 2, 2};
  KappaScanResult result;
  result.boundary_estimate = std::numeric_limits<double>::quiet_NaN();

  int eval_counter = 0;
  auto evaluate_point = [&](double k1) -> std::pair<double, bool> {
    const ConcurrenceSpec spec = kappa_spec(k1);
    const std::vector<double> p = p_values_from_alpha(spec.alpha());
    const bool admissible =
        *std::min_element(p.begin(), p.end()) >= -1e-12 * 16.0;

    double min_gap = std::numeric_limits<double>::quiet_NaN();
    bool violated = false;
    if (admissible) {
      SearchConfig point_config = config;
      point_config.seed = mix_seed(config.seed, 0x5ca1ab1eull + eval_counter);
      min_gap = search_min_gap(spec, dims, point_config).best_gap;
      violated = min_gap < -config.tol;
    }
    ++eval_counter;
    result.kappa1_grid.push_back(k1);
    result.kappa2_grid.push_back((-14.0 - 8.0 * k1) / 6.0);
    result.min_gap_per_point.push_back(min_gap);
    result.admissible.push_back(admissible);
    result.violated.push_back(violated);
    return {min_gap, violated};
  };

  for (double k1 : kappa1_grid) evaluate_point(k1);

  // Rightmost violated -> monotone transition, refined by bisection until the
  // bracket is narrower than 0.1 (estimate good to +-0.05).
  int transition = -1;
  for (std::size_t i = 0; i + 1 < result.violated.size(); ++i)
    if (result.violated[i] && !result.violated[i + 1]) transition = static_cast<int>(i);
  if (transition >= 0) {
    double lo = result.kappa1_grid[static_cast<std::size_t>(transition)];
    double hi = result.kappa1_grid[static_cast<std::size_t>(transition) + 1];
    while (hi - lo > 0.1) {
      const double mid = 0.5 * (lo + hi);
      const auto [gap, violated] = evaluate_point(mid);
      (void)gap;
      (violated ? lo : hi) = mid;
    }
    result.boundary_estimate = 0.5 * (lo + hi);
  }

  // Bisection appends out of order; restore ascending kappa1 for consumers.
  std::vector<std::size_t> order(result.kappa1_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.kappa1_grid[a] < result.kappa1_grid[b];
  });
  KappaScanResult sorted;
  sorted.boundary_estimate = result.boundary_estimate;
  for (std::size_t i : order) {
    sorted.kappa1_grid.push_back(result.kappa1_grid[i]);
    sorted.kappa2_grid.push_back(result.kappa2_grid[i]);
    sorted.min_gap_per_point.push_back(result.min_gap_per_point[i]);
    sorted.admissible.push_back(result.admissible[i]);
    sorted.violated.push_back(result.violated[i]);
  }
  return sorted;
}

// --- Tripartite region ---------------------------------------------------------

std::vector<RegionPoint> tripartite_region(int resolution) {
  require(resolution >= 2, ErrorCode::invalid_argument, "resolution must be >= 2");
  std::vector<RegionPoint> out;
  out.reserve(static_cast<std::size_t>((resolution + 1) * (resolution + 2) / 2));
  for (int i = 0; i <= resolution; ++i)
    for (int j = 0; i + j <= resolution; ++j) {
      const int k = resolution - i - j;
      RegionPoint pt;
      pt.p[0] = 3.0 * i / resolution;
      pt.p[1] = 3.0 * j / resolution;
      pt.p[2] = 3.0 * k / resolution;
      pt.admissible = true;  // the grid lives on the simplex by construction
      // Integer triangle conditions: exact classification, no fp boundary fuzz.
      pt.monotone = i <= j + k && j <= i + k && k <= i + j;
      out.push_back(pt);
    }
  return out;
}

}  // namespace conclab
