#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace conclab {

using cdouble = std::complex<double>;

// Subset of parties, stored as a bit mask: bit i set <=> party i is in the
// subset. Party indices are 0-based everywhere in the C++ core; the JSON/CLI
// layer translates to the 1-based labels used in documentation.
struct SubsetMask {
  std::uint32_t bits = 0;
  int n_parties = 0;

  static SubsetMask empty_set(int n) { return {0u, n}; }
  static SubsetMask full_set(int n) {
    return {static_cast<std::uint32_t>((1u << n) - 1u), n};
  }
  static SubsetMask single(int party, int n) { return {1u << party, n}; }

  SubsetMask complement() const {
    return {static_cast<std::uint32_t>(~bits & ((1u << n_parties) - 1u)), n_parties};
  }
  bool contains(int party) const { return (bits >> party) & 1u; }
  int count() const { return std::popcount(bits); }
  bool is_empty() const { return bits == 0u; }
  bool is_full() const { return bits == ((1u << n_parties) - 1u); }

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
};

// Pure state of N parties with local dimensions dims[0..N-1]. Amplitudes are
// stored row-major over the party indices: party 0 varies slowest, so basis
// index = sum_i i_p * stride(p) with stride(p) = prod_{q>p} dims[q].
class PureState {
 public:
  PureState(std::vector<int> dims, Eigen::VectorXcd amplitudes);

  // |index> in the row-major basis described above.
  static PureState basis_state(std::vector<int> dims, Eigen::Index index);

  int parties() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  cdouble amplitude(Eigen::Index i) const { return amps_[i]; }

  double norm() const { return amps_.norm(); }
  double norm_sq() const { return amps_.squaredNorm(); }

  PureState normalized() const;           // errors on (near-)zero vectors
  PureState scaled(cdouble factor) const;
  cdouble inner(const PureState& other) const;  // <this|other>, conjugate-linear on the left
  PureState tensor(const PureState& other) const;

 private:
  std::vector<int> dims_;
  Eigen::VectorXcd amps_;
};

// Density matrix on a party list; rows/columns use the same row-major basis
// as PureState. Hermiticity is checked at construction. Positivity is NOT
// (partial traces are PSD by construction; mixed-state inputs are validated
// where they enter, in the convex-roof module).
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, Eigen::MatrixXcd matrix);

  int parties() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

  double trace() const { return mat_.trace().real(); }
  double purity() const { return mat_.squaredNorm(); }  // Tr rho^2, rho Hermitian
  double min_eigenvalue() const;

 private:
  std::vector<int> dims_;
  Eigen::MatrixXcd mat_;
};

// --- Reductions ------------------------------------------------------------

// Tr_traced |psi><phi|, a matrix on the complement of `traced` (ascending
// party order). With psi == phi this is the reduced density matrix.
Eigen::MatrixXcd cross_reduction(const PureState& psi, const PureState& phi,
                                 SubsetMask traced);

// Reduced state Tr_traced |psi><psi| as a DensityMatrix on the kept parties.
DensityMatrix partial_trace(const PureState& psi, SubsetMask traced);

// Tr[(Tr_traced |psi><psi|)^2]. For pure inputs the two sides of a cut have
// equal reduction spectra (even sub-normalized), so the kernel runs on
// whichever side is cheaper.
double purity(const PureState& psi, SubsetMask traced);

// Tr[rho^psi_kept rho^phi_kept] where rho^._kept = Tr_{complement}|.><.|.
// Evaluated either directly or through Tr[M M^dagger] with
// M = Tr_kept |psi><phi|, whichever side is cheaper.
double cross_purity(const PureState& psi, const PureState& phi, SubsetMask kept);

// --- Flag wiring -----------------------------------------------------------

// Extends `party` by a dimension-`flag_dim` register set to |flag_index>.
// The flag is the fast (minor) index within the enlarged party, so
// new local index = old_index * flag_dim + flag_index.
PureState attach_flag(const PureState& psi, int party, int flag_dim, int flag_index);

// a * psi(x)|0>_flag + b * phi(x)|1>_flag on `party`, flag dimension 2.
// Requires matching dims and |a|^2 + |b|^2 <= 1 (+1e-12 slack).
PureState flag_superposition(const PureState& psi, const PureState& phi,
                             cdouble a, cdouble b, int party);

// --- Constructors ----------------------------------------------------------

PureState bell_phi_plus();   // (|00> + |11>)/sqrt(2)
PureState bell_phi_minus();  // (|00> - |11>)/sqrt(2)
PureState ghz(int n_parties);  // n >= 2 qubits
PureState w(int n_parties);    // n >= 2 qubits
PureState product_state(const std::vector<Eigen::VectorXcd>& locals);

// Haar-random state: i.i.d. standard complex Gaussian amplitudes,
// normalized. Deterministic for a fixed seed.
PureState random_state(const std::vector<int>& dims, std::uint64_t seed);

}  // namespace conclab
