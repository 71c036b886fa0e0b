#pragma once

#include <cstdint>
#include <vector>

#include "concurrence.hpp"

namespace conclab {

// Validated density operator: Hermitian (1e-12), PSD (eigenvalues >= -1e-10),
// unit trace (1e-10). Shares the row-major basis convention of PureState.
class MixedState {
 public:
  MixedState(std::vector<int> dims, Eigen::MatrixXcd matrix);
  static MixedState from_pure(const PureState& psi);  // |psi><psi|, psi normalized

  int parties() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

 private:
  std::vector<int> dims_;
  Eigen::MatrixXcd mat_;
};

// Ensemble of sub-normalized vectors with sum_j |psi_j><psi_j| equal to the
// source density matrix; ensemble weights live in the vector norms.
struct Decomposition {
  std::vector<int> dims;
  std::vector<PureState> vectors;
};

// Sum_j |psi_j><psi_j| for reconstruction checks.
Eigen::MatrixXcd reconstruct(const Decomposition& dec);

// Canonical starting decomposition: sqrt(lambda_i)|e_i> over eigenpairs with
// lambda_i > 1e-12.
Decomposition eigendecomposition_ensemble(const MixedState& rho);

// psi'_j = sum_i conj(U_{ji}) psi_i for an m x r matrix U with orthonormal
// columns (m >= r). Every size-m decomposition of the source arises this way
// from the eigen-ensemble, which is what the roof estimator exploits.
Decomposition mix_decomposition(const Decomposition& dec, const Eigen::MatrixXcd& isometry);

// Sum_j C(psi_j): the quantity the convex roof minimizes (homogeneity folds
// the ensemble weights into the sub-normalized vectors).
double average_concurrence(const ConcurrenceSpec& spec, const Decomposition& dec);

struct RoofConfig {
  std::uint64_t seed = 42;
  int restarts = 4;
  int iters = 1500;       // perturbation steps per restart
  int ensemble_size = 0;  // decomposition size m; 0 = twice the rank
  int threads = 0;        // as in SearchConfig
  // Extra starting decompositions (must reconstruct rho); used by the flags
  // check to inject the concatenated candidate.
  std::vector<Decomposition> seed_decompositions;
};

struct RoofResult {
  double value;                 // best average found: an upper bound on C(rho)
  Decomposition decomposition;  // the ensemble attaining it
  std::vector<double> trace;    // winning restart's best-so-far per iteration
};

// Convex-roof upper bound: random-perturbation descent over the isometry
// parameterization, accepting only improvements (the trace is therefore
// non-increasing). Exact on rank-1 input by construction.
RoofResult convex_roof_upper(const ConcurrenceSpec& spec, const MixedState& rho,
                             const RoofConfig& config);

struct FlagsCheckResult {
  double lhs_estimate;  // roof estimate of C(rho-tilde)
  double rhs_value;     // p1 * roof(rho1) + p2 * roof(rho2)
  double residual;      // lhs_estimate - rhs_value; <= ~0 by injection
};

// Numerical probe of the two-term mixture identity: rho-tilde mixes rho1 and
// rho2 with orthogonal flags on flag_party; for specs passing the sufficient
// criterion the roof of the mixture equals the weighted average. The
// concatenated decomposition sqrt(p1) psi_j (x) flag0, sqrt(p2) phi_j (x)
// flag1 is always injected, forcing lhs_estimate <= rhs_value + fp noise.
FlagsCheckResult flags_equality_check(const ConcurrenceSpec& spec, const MixedState& rho1,
                                      const MixedState& rho2, double p1, double p2,
                                      int flag_party, const RoofConfig& config);

// attach_flag lifted to density matrices (same index convention).
MixedState attach_flag_mixed(const MixedState& rho, int party, int flag_dim,
                             int flag_index);

}  // namespace conclab
