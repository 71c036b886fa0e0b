#include "convexroof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "errors.hpp"
#include "monotonicity.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace conclab {

namespace {

Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
}

Eigen::MatrixXcd random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXcd g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = rng.complex_gaussian();
  return orthonormal_columns(g);
}

}  // namespace

// --- MixedState -----------------------------------------------------------------

MixedState::MixedState(std::vector<int> dims, Eigen::MatrixXcd matrix) {
  // DensityMatrix handles the dims/shape/Hermiticity contract.
  DensityMatrix dm(std::move(dims), std::move(matrix));
  require(dm.min_eigenvalue() >= -1e-10, ErrorCode::not_psd,
          "density matrix has a negative eigenvalue beyond tolerance");
  require(std::abs(dm.trace() - 1.0) <= 1e-10, ErrorCode::invalid_argument,
          "density matrix trace must be 1");
  dims_ = dm.dims();
  mat_ = dm.matrix();
}

MixedState MixedState::from_pure(const PureState& psi) {
  return MixedState(psi.dims(), psi.amplitudes() * psi.amplitudes().adjoint());
}

// --- Decompositions ---------------------------------------------------------------

Eigen::MatrixXcd reconstruct(const Decomposition& dec) {
  require(!dec.vectors.empty(), ErrorCode::invalid_argument, "empty decomposition");
  const Eigen::Index d = dec.vectors.front().dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const PureState& v : dec.vectors)
    sum += v.amplitudes() * v.amplitudes().adjoint();
  return sum;
}

Decomposition eigendecomposition_ensemble(const MixedState& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
  require(solver.info() == Eigen::Success, ErrorCode::internal,
          "eigendecomposition failed to converge");
  Decomposition dec;
  dec.dims = rho.dims();
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()[i];
    require(lambda >= -1e-10, ErrorCode::not_psd,
            "negative eigenvalue in density matrix");
    if (lambda > 1e-12)
      dec.vectors.emplace_back(rho.dims(),
                               std::sqrt(lambda) * solver.eigenvectors().col(i));
  }
  require(!dec.vectors.empty(), ErrorCode::internal, "rank-0 density matrix");
  return dec;
}

Decomposition mix_decomposition(const Decomposition& dec,
                                const Eigen::MatrixXcd& isometry) {
  const auto r = static_cast<Eigen::Index>(dec.vectors.size());
  require(r >= 1, ErrorCode::invalid_argument, "empty decomposition");
  require(isometry.cols() == r && isometry.rows() >= r, ErrorCode::invalid_argument,
          "isometry must be m x r with m >= r = decomposition size");
  const Eigen::MatrixXcd gram = isometry.adjoint() * isometry;
  require((gram - Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff() <= 1e-10,
          ErrorCode::not_isometry, "columns are not orthonormal");

  const Eigen::Index d = dec.vectors.front().dim();
  Eigen::MatrixXcd a(d, r);
  for (Eigen::Index i = 0; i < r; ++i) a.col(i) = dec.vectors[i].amplitudes();
  // column j of a * U^dagger is sum_i conj(U_{ji}) psi_i
  const Eigen::MatrixXcd b = a * isometry.adjoint();

  Decomposition out;
  out.dims = dec.dims;
  out.vectors.reserve(static_cast<std::size_t>(b.cols()));
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    out.vectors.emplace_back(dec.dims, b.col(j));
  return out;
}

double average_concurrence(const ConcurrenceSpec& spec, const Decomposition& dec) {
  double sum = 0.0;
  for (const PureState& v : dec.vectors) sum += concurrence_pure(spec, v);
  return sum;
}

// --- Roof estimator ------------------------------------------------------------------

namespace {

struct RoofTask {
  enum class Kind { eigen_start, random_start, seeded } kind;
  std::uint64_t seed = 0;
  const Decomposition* seed_dec = nullptr;
};

struct RoofTaskResult {
  double value = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd isometry;
  std::vector<double> trace;
};

// Coefficients of a given decomposition in the eigen-ensemble basis:
// psi'_j = sum_i conj(U_{ji}) psi_i with U_{ji} = <psi'_j|psi_i>/lambda_i.
Eigen::MatrixXcd isometry_from_decomposition(const Decomposition& ens,
                                             const Decomposition& target) {
  require(target.dims == ens.dims, ErrorCode::dimension_mismatch,
          "seed decomposition dims do not match the density matrix");
  const auto r = static_cast<Eigen::Index>(ens.vectors.size());
  const auto m = static_cast<Eigen::Index>(target.vectors.size());
  require(m >= r, ErrorCode::invalid_argument,
          "seed decomposition smaller than the rank");
  Eigen::MatrixXcd u(m, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double lambda = ens.vectors[static_cast<std::size_t>(i)].norm_sq();
    for (Eigen::Index j = 0; j < m; ++j)
      u(j, i) = target.vectors[static_cast<std::size_t>(j)].inner(
                    ens.vectors[static_cast<std::size_t>(i)]) /
                lambda;
  }
  return u;
}

RoofTaskResult run_roof_task(const ConcurrenceSpec& spec, const Decomposition& ens,
                             Eigen::Index m, const RoofTask& task, int iters) {
  const auto r = static_cast<Eigen::Index>(ens.vectors.size());
  Rng rng(task.seed);

  Eigen::MatrixXcd u;
  switch (task.kind) {
    case RoofTask::Kind::eigen_start:
      u = Eigen::MatrixXcd::Identity(m, r);
      break;
    case RoofTask::Kind::random_start:
      u = random_isometry(m, r, rng);
      break;
    case RoofTask::Kind::seeded:
      u = isometry_from_decomposition(ens, *task.seed_dec);
      break;
  }

  RoofTaskResult out;
  out.value = average_concurrence(spec, mix_decomposition(ens, u));
  out.isometry = u;
  out.trace.push_back(out.value);

  // Adaptive random perturbation with re-orthonormalization: widen the step
  // after a hit, shrink slowly after a miss. Accept-only-improvement keeps
  // the trace non-increasing by construction.
  double sigma = 0.3;
  const Eigen::Index rows = u.rows();
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXcd g(rows, r);
    for (Eigen::Index c = 0; c < r; ++c)
      for (Eigen::Index row = 0; row < rows; ++row) g(row, c) = rng.complex_gaussian();
    const Eigen::MatrixXcd candidate = orthonormal_columns(out.isometry + sigma * g);
    const double value = average_concurrence(spec, mix_decomposition(ens, candidate));
    if (value < out.value) {
      out.value = value;
      out.isometry = candidate;
      sigma = std::min(sigma * 1.4, 1.0);
    } else {
      sigma = std::max(sigma * 0.985, 1e-7);
    }
    out.trace.push_back(out.value);
  }
  return out;
}

}  // namespace

RoofResult convex_roof_upper(const ConcurrenceSpec& spec, const MixedState& rho,
                             const RoofConfig& config) {
  require(spec.parties() == rho.parties(), ErrorCode::dimension_mismatch,
          "spec party count does not match the density matrix");
  require(config.iters >= 0 && config.restarts >= 0, ErrorCode::invalid_argument,
          "negative roof budget");

  const Decomposition ens = eigendecomposition_ensemble(rho);
  const auto r = static_cast<Eigen::Index>(ens.vectors.size());
  const Eigen::Index m = config.ensemble_size > 0 ? config.ensemble_size : 2 * r;
  require(m >= r, ErrorCode::invalid_argument,
          "ensemble_size below the density-matrix rank");

  // The eigen-ensemble start is always present: the estimate can then never
  // exceed the eigen-ensemble average.
  std::vector<RoofTask> tasks;
  tasks.push_back({RoofTask::Kind::eigen_start, mix_seed(config.seed, 0), nullptr});
  for (int t = 1; t < config.restarts; ++t)
    tasks.push_back({RoofTask::Kind::random_start,
                     mix_seed(config.seed, static_cast<std::uint64_t>(t)), nullptr});
  for (const Decomposition& dec : config.seed_decompositions)
    tasks.push_back({RoofTask::Kind::seeded,
                     mix_seed(config.seed, 1000 + tasks.size()), &dec});

  std::vector<RoofTaskResult> results(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), resolve_thread_count(config.threads),
               [&](int t) {
                 results[static_cast<std::size_t>(t)] = run_roof_task(
                     spec, ens, tasks[static_cast<std::size_t>(t)].kind ==
                                        RoofTask::Kind::seeded
                                    ? static_cast<Eigen::Index>(
                                          tasks[static_cast<std::size_t>(t)]
                                              .seed_dec->vectors.size())
                                    : m,
                     tasks[static_cast<std::size_t>(t)], config.iters);
               });

  std::size_t best = 0;
  for (std::size_t t = 1; t < results.size(); ++t)
    if (results[t].value < results[best].value) best = t;

  RoofResult out;
  out.value = results[best].value;
  out.decomposition = mix_decomposition(ens, results[best].isometry);
  out.trace = std::move(results[best].trace);
  return out;
}

// --- Flags check -----------------------------------------------------------------------

MixedState attach_flag_mixed(const MixedState& rho, int party, int flag_dim,
                             int flag_index) {
  // Reuse the pure-state index wiring to build the embedding permutation.
  require(party >= 0 && party < rho.parties(), ErrorCode::invalid_argument,
          "flag party out of range");
  require(flag_dim >= 1 && flag_index >= 0 && flag_index < flag_dim,
          ErrorCode::invalid_argument, "bad flag dimensions");

  const Eigen::Index d = rho.dim();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(d));
  {
    Eigen::VectorXcd probe = Eigen::VectorXcd::Zero(d);
    // attach_flag is linear, so mapping each basis vector gives the embedding.
    for (Eigen::Index i = 0; i < d; ++i) {
      probe[i] = 1.0;
      const PureState embedded =
          attach_flag(PureState(rho.dims(), probe), party, flag_dim, flag_index);
      Eigen::Index hit = -1;
      for (Eigen::Index x = 0; x < embedded.dim(); ++x)
        if (embedded.amplitude(x) != cdouble(0.0, 0.0)) {
          hit = x;
          break;
        }
      map[static_cast<std::size_t>(i)] = hit;
      probe[i] = 0.0;
    }
  }

  std::vector<int> new_dims = rho.dims();
  new_dims[static_cast<std::size_t>(party)] *= flag_dim;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d * flag_dim, d * flag_dim);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r)
      out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) =
          rho.matrix()(r, c);
  return MixedState(std::move(new_dims), std::move(out));
}

FlagsCheckResult flags_equality_check(const ConcurrenceSpec& spec, const MixedState& rho1,
                                      const MixedState& rho2, double p1, double p2,
                                      int flag_party, const RoofConfig& config) {
  require(sufficient_criterion(spec), ErrorCode::spec_not_sufficient,
          "the mixture identity is only guaranteed for specs passing the "
          "nonpositivity criterion");
  require(rho1.dims() == rho2.dims(), ErrorCode::dimension_mismatch,
          "mixture components need identical dimensions");
  require(spec.parties() == rho1.parties(), ErrorCode::dimension_mismatch,
          "spec party count does not match the states");
  require(p1 >= 0.0 && p2 >= 0.0 && std::abs(p1 + p2 - 1.0) <= 1e-9,
          ErrorCode::invalid_argument, "weights must be a two-point distribution");
  require(flag_party >= 0 && flag_party < rho1.parties(), ErrorCode::invalid_argument,
          "flag party out of range");

  RoofConfig c1 = config;
  c1.seed = mix_seed(config.seed, 11);
  c1.seed_decompositions.clear();
  RoofConfig c2 = config;
  c2.seed = mix_seed(config.seed, 12);
  c2.seed_decompositions.clear();
  const RoofResult roof1 = convex_roof_upper(spec, rho1, c1);
  const RoofResult roof2 = convex_roof_upper(spec, rho2, c2);
  const double rhs = p1 * roof1.value + p2 * roof2.value;

  const MixedState lifted1 = attach_flag_mixed(rho1, flag_party, 2, 0);
  const MixedState lifted2 = attach_flag_mixed(rho2, flag_party, 2, 1);
  const MixedState mixture(lifted1.dims(),
                           p1 * lifted1.matrix() + p2 * lifted2.matrix());

  // Concatenated candidate: the flag embeddings of the two marginal
  // ensembles, scaled by sqrt(p). Reconstructs the mixture exactly and its
  // average equals rhs, which pins lhs_estimate <= rhs + fp noise.
  Decomposition injected;
  injected.dims = mixture.dims();
  for (const PureState& v : roof1.decomposition.vectors)
    injected.vectors.push_back(
        attach_flag(v, flag_party, 2, 0).scaled(std::sqrt(p1)));
  for (const PureState& v : roof2.decomposition.vectors)
    injected.vectors.push_back(
        attach_flag(v, flag_party, 2, 1).scaled(std::sqrt(p2)));

  RoofConfig ct = config;
  ct.seed = mix_seed(config.seed, 13);
  ct.seed_decompositions = {std::move(injected)};
  const double lhs = convex_roof_upper(spec, mixture, ct).value;

  return FlagsCheckResult{lhs, rhs, lhs - rhs};
}

}  // namespace conclab
