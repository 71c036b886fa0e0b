#pragma once

// Test-only reference implementations, deliberately written along different
// routes than the library kernels:
//   - reductions by explicit per-party digit bookkeeping over the full outer
//     product (no stride tricks, no side selection);
//   - concurrence through the projector form: the quadratic form of the
//     doubled vector |psi> (x) |psi> under the sign-pattern mixture of
//     per-party pair (anti)symmetrizers, C = 2 sqrt(<v|A|v>).

#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "concurrence.hpp"
#include "qstate.hpp"

namespace conclab::oracle {

// Row-major digits of a basis index (party 0 slowest).
inline std::vector<int> digits_of(Eigen::Index index, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (int p = static_cast<int>(dims.size()) - 1; p >= 0; --p) {
    out[static_cast<std::size_t>(p)] = static_cast<int>(index % dims[static_cast<std::size_t>(p)]);
    index /= dims[static_cast<std::size_t>(p)];
  }
  return out;
}

// Tr_traced |psi><phi| assembled entry by entry.
inline Eigen::MatrixXcd cross_reduction_dense(const PureState& psi,
                                              const PureState& phi,
                                              SubsetMask traced) {
  const std::vector<int>& dims = psi.dims();
  const int n = psi.parties();
  Eigen::Index kept_dim = 1;
  for (int p = 0; p < n; ++p)
    if (!traced.contains(p)) kept_dim *= dims[static_cast<std::size_t>(p)];

  const auto kept_index = [&](const std::vector<int>& digits) {
    Eigen::Index acc = 0;
    for (int p = 0; p < n; ++p)
      if (!traced.contains(p))
        acc = acc * dims[static_cast<std::size_t>(p)] + digits[static_cast<std::size_t>(p)];
    return acc;
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kept_dim, kept_dim);
  for (Eigen::Index x = 0; x < psi.dim(); ++x) {
    const std::vector<int> dx = digits_of(x, dims);
    for (Eigen::Index y = 0; y < phi.dim(); ++y) {
      const std::vector<int> dy = digits_of(y, dims);
      bool same_traced = true;
      for (int p = 0; p < n; ++p)
        if (traced.contains(p) &&
            dx[static_cast<std::size_t>(p)] != dy[static_cast<std::size_t>(p)]) {
          same_traced = false;
          break;
        }
      if (!same_traced) continue;
      out(kept_index(dx), kept_index(dy)) +=
          psi.amplitude(x) * std::conj(phi.amplitude(y));
    }
  }
  return out;
}

inline double purity_dense(const PureState& psi, SubsetMask traced) {
  const Eigen::MatrixXcd r = cross_reduction_dense(psi, psi, traced);
  return (r * r).trace().real();
}

inline double cross_purity_dense(const PureState& psi, const PureState& phi,
                                 SubsetMask kept) {
  const Eigen::MatrixXcd a = cross_reduction_dense(psi, psi, kept.complement());
  const Eigen::MatrixXcd b = cross_reduction_dense(phi, phi, kept.complement());
  return (a * b).trace().real();
}

// C(psi) = 2 sqrt(<v|A|v>) with v = psi (x) psi and A the p-weighted mixture
// of per-party (anti)symmetrizers. Each P_+/- acts as the pair swap
// (v_{jk} +/- v_{kj})/2 on that party's two copies.
inline double concurrence_projector_dense(const ConcurrenceSpec& spec,
                                          const PureState& psi) {
  const std::vector<int>& dims = psi.dims();
  const int n = psi.parties();
  const Eigen::Index d = psi.dim();

  Eigen::VectorXcd v(d * d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y)
      v[x * d + y] = psi.amplitude(x) * psi.amplitude(y);

  // Minor-index stride of a party within one copy.
  const auto stride = [&](int party) {
    Eigen::Index s = 1;
    for (int q = party + 1; q < n; ++q) s *= dims[static_cast<std::size_t>(q)];
    return s;
  };

  const CoefficientsP p = spec.p();
  long double total = 0.0L;
  const std::uint32_t patterns = 1u << n;
  for (std::uint32_t s = 0; s < patterns; ++s) {
    if (p.at(s) == 0.0) continue;
    Eigen::VectorXcd w = v;
    for (int party = 0; party < n; ++party) {
      const double sign = (s >> party) & 1u ? -1.0 : 1.0;
      const Eigen::Index str = stride(party);
      const int local_dim = dims[static_cast<std::size_t>(party)];
      Eigen::VectorXcd next(d * d);
      for (Eigen::Index x = 0; x < d; ++x) {
        const int j = static_cast<int>((x / str) % local_dim);
        for (Eigen::Index y = 0; y < d; ++y) {
          const int k = static_cast<int>((y / str) % local_dim);
          const Eigen::Index x_swapped = x + (k - j) * str;
          const Eigen::Index y_swapped = y + (j - k) * str;
          next[x * d + y] =
              0.5 * (w[x * d + y] + sign * w[x_swapped * d + y_swapped]);
        }
      }
      w.swap(next);
    }
    total += static_cast<long double>(p.at(s)) * v.dot(w).real();
  }
  const double quad = static_cast<double>(total);
  return 2.0 * std::sqrt(std::max(0.0, quad));
}

}  // namespace conclab::oracle
