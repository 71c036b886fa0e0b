#include "qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace conclab {

namespace {

constexpr int kMaxParties = 16;
constexpr Eigen::Index kMaxDim = Eigen::Index(1) << 24;

void check_dims(const std::vector<int>& dims) {
  require(!dims.empty(), ErrorCode::invalid_argument, "state needs at least one party");
  require(static_cast<int>(dims.size()) <= kMaxParties, ErrorCode::invalid_argument,
          "too many parties (max " + std::to_string(kMaxParties) + ")");
  Eigen::Index total = 1;
  for (int d : dims) {
    require(d >= 1, ErrorCode::invalid_argument, "local dimensions must be >= 1");
    total *= d;
    require(total <= kMaxDim, ErrorCode::invalid_argument, "total dimension too large");
  }
}

Eigen::Index total_dim(const std::vector<int>& dims) {
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  return total;
}

// stride(p) = prod_{q > p} dims[q]  (party 0 slowest)
std::vector<Eigen::Index> strides_of(const std::vector<int>& dims) {
  std::vector<Eigen::Index> s(dims.size());
  Eigen::Index acc = 1;
  for (int p = static_cast<int>(dims.size()) - 1; p >= 0; --p) {
    s[static_cast<std::size_t>(p)] = acc;
    acc *= dims[static_cast<std::size_t>(p)];
  }
  return s;
}

// Flat offsets of all joint values of the parties in `mask`, enumerated
// row-major in ascending party order. The empty mask yields {0}.
std::vector<Eigen::Index> subset_offsets(const std::vector<int>& dims,
                                         const std::vector<Eigen::Index>& strides,
                                         SubsetMask mask) {
  std::vector<Eigen::Index> offsets{0};
  for (int p = 0; p < static_cast<int>(dims.size()); ++p) {
    if (!mask.contains(p)) continue;
    const int d = dims[static_cast<std::size_t>(p)];
    const Eigen::Index stride = strides[static_cast<std::size_t>(p)];
    std::vector<Eigen::Index> grown;
    grown.reserve(offsets.size() * static_cast<std::size_t>(d));
    for (Eigen::Index base : offsets)
      for (int i = 0; i < d; ++i) grown.push_back(base + i * stride);
    offsets = std::move(grown);
  }
  return offsets;
}

std::vector<int> subset_dims(const std::vector<int>& dims, SubsetMask mask) {
  std::vector<int> out;
  for (int p = 0; p < static_cast<int>(dims.size()); ++p)
    if (mask.contains(p)) out.push_back(dims[static_cast<std::size_t>(p)]);
  if (out.empty()) out.push_back(1);  // scalar sector, kept as a 1-dim "party"
  return out;
}

void check_mask(SubsetMask mask, int n_parties, const char* what) {
  require(mask.n_parties == n_parties, ErrorCode::invalid_argument,
          std::string(what) + ": mask is for a different party count");
}

}  // namespace

// --- PureState ---------------------------------------------------------------

PureState::PureState(std::vector<int> dims, Eigen::VectorXcd amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  check_dims(dims_);
  require(amps_.size() == total_dim(dims_), ErrorCode::dimension_mismatch,
          "amplitude count " + std::to_string(amps_.size()) +
              " does not match dimension product " + std::to_string(total_dim(dims_)));
}

PureState PureState::basis_state(std::vector<int> dims, Eigen::Index index) {
  check_dims(dims);
  const Eigen::Index total = total_dim(dims);
  require(index >= 0 && index < total, ErrorCode::invalid_argument,
          "basis index out of range");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(total);
  amps[index] = 1.0;
  return PureState(std::move(dims), std::move(amps));
}

PureState PureState::normalized() const {
  const double n = norm();
  require(n > 1e-300, ErrorCode::invalid_argument, "cannot normalize the zero vector");
  return PureState(dims_, amps_ / n);
}

PureState PureState::scaled(cdouble factor) const {
  return PureState(dims_, factor * amps_);
}

cdouble PureState::inner(const PureState& other) const {
  require(dims_ == other.dims_, ErrorCode::dimension_mismatch,
          "inner product needs identical party dimensions");
  return amps_.dot(other.amps_);  // Eigen's dot conjugates the left argument
}

PureState PureState::tensor(const PureState& other) const {
  std::vector<int> dims = dims_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  check_dims(dims);
  Eigen::VectorXcd amps(amps_.size() * other.amps_.size());
  for (Eigen::Index i = 0; i < amps_.size(); ++i)
    amps.segment(i * other.amps_.size(), other.amps_.size()) = amps_[i] * other.amps_;
  return PureState(std::move(dims), std::move(amps));
}

// --- DensityMatrix -----------------------------------------------------------

DensityMatrix::DensityMatrix(std::vector<int> dims, Eigen::MatrixXcd matrix)
    : dims_(std::move(dims)), mat_(std::move(matrix)) {
  check_dims(dims_);
  require(mat_.rows() == mat_.cols(), ErrorCode::dimension_mismatch,
          "density matrix must be square");
  require(mat_.rows() == total_dim(dims_), ErrorCode::dimension_mismatch,
          "matrix size does not match dimension product");
  const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
  require((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          ErrorCode::not_psd, "density matrix is not Hermitian");
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat_,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// --- Reductions ----------------------------------------------------------------

Eigen::MatrixXcd cross_reduction(const PureState& psi, const PureState& phi,
                                 SubsetMask traced) {
  require(psi.dims() == phi.dims(), ErrorCode::dimension_mismatch,
          "cross reduction needs identical party dimensions");
  check_mask(traced, psi.parties(), "cross_reduction");

  const auto strides = strides_of(psi.dims());
  const auto kept_off = subset_offsets(psi.dims(), strides, traced.complement());
  const auto traced_off = subset_offsets(psi.dims(), strides, traced);
  const Eigen::Index k = static_cast<Eigen::Index>(kept_off.size());

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
  const cdouble* a = psi.amplitudes().data();
  const cdouble* b = phi.amplitudes().data();
  for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(traced_off.size()); ++t) {
    const Eigen::Index toff = traced_off[static_cast<std::size_t>(t)];
    for (Eigen::Index c = 0; c < k; ++c) {
      const cdouble bc = std::conj(b[kept_off[static_cast<std::size_t>(c)] + toff]);
      cdouble* col = m.col(c).data();
      for (Eigen::Index r = 0; r < k; ++r)
        col[r] += a[kept_off[static_cast<std::size_t>(r)] + toff] * bc;
    }
  }
  return m;
}

DensityMatrix partial_trace(const PureState& psi, SubsetMask traced) {
  check_mask(traced, psi.parties(), "partial_trace");
  return DensityMatrix(subset_dims(psi.dims(), traced.complement()),
                       cross_reduction(psi, psi, traced));
}

double purity(const PureState& psi, SubsetMask traced) {
  check_mask(traced, psi.parties(), "purity");
  // Both sides of a pure-state cut share the reduction spectrum (the Schmidt
  // coefficients survive sub-normalization), so reduce onto the smaller side.
  const auto strides = strides_of(psi.dims());
  Eigen::Index dim_traced = 1;
  for (int p = 0; p < psi.parties(); ++p)
    if (traced.contains(p)) dim_traced *= psi.dims()[static_cast<std::size_t>(p)];
  const Eigen::Index dim_kept = psi.dim() / dim_traced;

  const SubsetMask reduce_away = dim_kept <= dim_traced ? traced : traced.complement();
  return cross_reduction(psi, psi, reduce_away).squaredNorm();
}

double cross_purity(const PureState& psi, const PureState& phi, SubsetMask kept) {
  require(psi.dims() == phi.dims(), ErrorCode::dimension_mismatch,
          "cross purity needs identical party dimensions");
  check_mask(kept, psi.parties(), "cross_purity");

  Eigen::Index dim_kept = 1;
  for (int p = 0; p < psi.parties(); ++p)
    if (kept.contains(p)) dim_kept *= psi.dims()[static_cast<std::size_t>(p)];
  const Eigen::Index dim_other = psi.dim() / dim_kept;

  // Direct route: two reductions onto the kept side, cost ~ 2 k^2 t.
  // Transition route: Tr[M M^dagger] with M = Tr_kept |psi><phi| living on
  // the other side, cost ~ t^2 k. Pick the cheaper.
  const double direct_cost = 2.0 * static_cast<double>(dim_kept) * dim_kept * dim_other;
  const double transition_cost = static_cast<double>(dim_other) * dim_other * dim_kept;
  if (direct_cost <= transition_cost) {
    const Eigen::MatrixXcd a = cross_reduction(psi, psi, kept.complement());
    const Eigen::MatrixXcd b = cross_reduction(phi, phi, kept.complement());
    return (a.array() * b.array().conjugate()).sum().real();
  }
  return cross_reduction(psi, phi, kept).squaredNorm();
}

// --- Flag wiring -----------------------------------------------------------------

PureState attach_flag(const PureState& psi, int party, int flag_dim, int flag_index) {
  require(party >= 0 && party < psi.parties(), ErrorCode::invalid_argument,
          "flag party out of range");
  require(flag_dim >= 1, ErrorCode::invalid_argument, "flag dimension must be >= 1");
  require(flag_index >= 0 && flag_index < flag_dim, ErrorCode::invalid_argument,
          "flag index out of range");

  const auto& dims = psi.dims();
  const auto strides = strides_of(dims);
  const Eigen::Index stride = strides[static_cast<std::size_t>(party)];
  const int d = dims[static_cast<std::size_t>(party)];

  std::vector<int> new_dims = dims;
  new_dims[static_cast<std::size_t>(party)] = d * flag_dim;
  check_dims(new_dims);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.dim() * flag_dim);
  for (Eigen::Index idx = 0; idx < psi.dim(); ++idx) {
    const Eigen::Index prefix = idx / (d * stride);
    const Eigen::Index local = (idx / stride) % d;
    const Eigen::Index suffix = idx % stride;
    const Eigen::Index new_idx =
        prefix * (static_cast<Eigen::Index>(d) * flag_dim * stride) +
        (local * flag_dim + flag_index) * stride + suffix;
    out[new_idx] = psi.amplitude(idx);
  }
  return PureState(std::move(new_dims), std::move(out));
}

PureState flag_superposition(const PureState& psi, const PureState& phi,
                             cdouble a, cdouble b, int party) {
  require(psi.dims() == phi.dims(), ErrorCode::dimension_mismatch,
          "superposed branches need identical party dimensions");
  const double weight = std::norm(a) + std::norm(b);
  require(weight <= 1.0 + 1e-12, ErrorCode::invalid_argument,
          "branch weights exceed 1: |a|^2 + |b|^2 = " + std::to_string(weight));
  const PureState lhs = attach_flag(psi, party, 2, 0);
  const PureState rhs = attach_flag(phi, party, 2, 1);
  return PureState(lhs.dims(), a * lhs.amplitudes() + b * rhs.amplitudes());
}

// --- Constructors ---------------------------------------------------------------

PureState bell_phi_plus() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps[0] = amps[3] = 1.0 / std::sqrt(2.0);
  return PureState({2, 2}, std::move(amps));
}

PureState bell_phi_minus() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps[0] = 1.0 / std::sqrt(2.0);
  amps[3] = -amps[0];
  return PureState({2, 2}, std::move(amps));
}

PureState ghz(int n_parties) {
  require(n_parties >= 2, ErrorCode::invalid_argument, "ghz needs at least 2 parties");
  const std::vector<int> dims(static_cast<std::size_t>(n_parties), 2);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(1) << n_parties);
  amps[0] = amps[amps.size() - 1] = 1.0 / std::sqrt(2.0);
  return PureState(dims, std::move(amps));
}

PureState w(int n_parties) {
  require(n_parties >= 2, ErrorCode::invalid_argument, "w needs at least 2 parties");
  const std::vector<int> dims(static_cast<std::size_t>(n_parties), 2);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(1) << n_parties);
  const double c = 1.0 / std::sqrt(static_cast<double>(n_parties));
  for (int p = 0; p < n_parties; ++p)
    amps[Eigen::Index(1) << (n_parties - 1 - p)] = c;
  return PureState(dims, std::move(amps));
}

PureState product_state(const std::vector<Eigen::VectorXcd>& locals) {
  require(!locals.empty(), ErrorCode::invalid_argument,
          "product state needs at least one factor");
  std::vector<int> dims;
  dims.reserve(locals.size());
  for (const auto& v : locals) {
    require(v.size() >= 1, ErrorCode::invalid_argument, "empty local factor");
    dims.push_back(static_cast<int>(v.size()));
  }
  check_dims(dims);
  Eigen::VectorXcd amps = locals[0];
  for (std::size_t i = 1; i < locals.size(); ++i) {
    Eigen::VectorXcd next(amps.size() * locals[i].size());
    for (Eigen::Index j = 0; j < amps.size(); ++j)
      next.segment(j * locals[i].size(), locals[i].size()) = amps[j] * locals[i];
    amps = std::move(next);
  }
  return PureState(std::move(dims), std::move(amps));
}

PureState random_state(const std::vector<int>& dims, std::uint64_t seed) {
  check_dims(dims);
  Rng rng(seed);
  Eigen::VectorXcd amps(total_dim(dims));
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] = rng.complex_gaussian();
  const double n = amps.norm();
  require(n > 1e-300, ErrorCode::internal, "degenerate random draw");
  return PureState(dims, amps / n);
}

}  // namespace conclab
