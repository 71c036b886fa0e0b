#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qstate.hpp"

namespace conclab {

// Sign-pattern weights p_s >= 0 over s in {+,-}^N. Pattern index: bit i set
// <=> party i carries '-'. Valid tables vanish on patterns with an odd number
// of '-' signs and on the all-plus pattern; the constructor enforces this
// (tiny residue is clamped to exact zero).
class CoefficientsP {
 public:
  CoefficientsP(int n_parties, std::vector<double> values);

  int parties() const { return n_; }
  const std::vector<double>& values() const { return p_; }
  double at(std::uint32_t pattern) const { return p_[pattern]; }
  double sum() const;

  static std::string pattern_name(std::uint32_t pattern, int n_parties);  // e.g. "+--"
  static std::uint32_t pattern_from_name(const std::string& name);

 private:
  int n_;
  std::vector<double> p_;
};

// Subset weights alpha_V over all V subseteq {parties}, indexed by SubsetMask
// bits. checked() enforces the structural identities (complement symmetry,
// zero sum); raw() skips them so loaders can defer to validate().
class CoefficientsAlpha {
 public:
  static CoefficientsAlpha checked(int n_parties, std::vector<double> values);
  static CoefficientsAlpha raw(int n_parties, std::vector<double> values);

  int parties() const { return n_; }
  const std::vector<double>& values() const { return a_; }
  double at(std::uint32_t subset_bits) const { return a_[subset_bits]; }
  double at(SubsetMask v) const { return a_[v.bits]; }

  static std::string subset_name(std::uint32_t subset_bits);  // 1-based digits: "", "1", "23"
  static std::uint32_t subset_from_name(const std::string& name, int n_parties);

 private:
  CoefficientsAlpha(int n, std::vector<double> values);
  int n_;
  std::vector<double> a_;
};

// alpha_V = sum_s p_s prod_{i in V} s_i. Complement-symmetric and zero-sum by
// construction (term-by-term identical sums).
CoefficientsAlpha alpha_from_p(const CoefficientsP& p);

// p_s = 2^{-N} sum_V alpha_V prod_{i in V} s_i, returned raw (no cone checks);
// used by validation. Summation pairs V with its complement so that odd
// patterns cancel exactly for symmetric input.
std::vector<double> p_values_from_alpha(const CoefficientsAlpha& alpha);

// Checked inverse transform; errors if the induced p leave the admissible
// cone (negative entries) or the input was not a valid alpha table.
CoefficientsP p_from_alpha(const CoefficientsAlpha& alpha);

struct ValidationReport {
  bool complement_symmetry = false;
  bool sum_zero = false;
  bool p_nonnegative = false;
  bool normalized = false;  // convention check, not a validity requirement
  std::vector<std::string> issues;

  bool admissible() const { return complement_symmetry && sum_zero && p_nonnegative; }
};

// A concrete concurrence functional: the alpha table plus the normalization
// convention flag (max bipartite-qubit value 1 <=> alpha_empty = 2^{N-1}-1).
// Specs are dimension-agnostic: the same alpha_V applies to any local dims.
class ConcurrenceSpec {
 public:
  static ConcurrenceSpec from_alpha(CoefficientsAlpha alpha);  // structural checks on
  static ConcurrenceSpec from_p(const CoefficientsP& p);
  // Loader path: accepts structurally broken tables so validate() can report
  // on them. Everything else should use from_alpha/from_p.
  static ConcurrenceSpec from_raw_alpha(CoefficientsAlpha alpha);

  int parties() const { return alpha_.parties(); }
  const CoefficientsAlpha& alpha() const { return alpha_; }
  CoefficientsP p() const { return p_from_alpha(alpha_); }
  bool normalized() const { return normalized_; }
  bool permutation_symmetric() const;  // alpha depends on |V| only

 private:
  explicit ConcurrenceSpec(CoefficientsAlpha alpha);
  CoefficientsAlpha alpha_;
  bool normalized_;
};

// Reports which of {complement symmetry, zero sum, p >= 0, normalization}
// hold, with offending entries named in issues. Never throws.
ValidationReport validate(const ConcurrenceSpec& spec);

// Uniform rescaling so sum_s p_s = 2^{N-1}-1 (equivalently alpha_empty).
ConcurrenceSpec normalize(const ConcurrenceSpec& spec);

// alpha_V = -1 for nontrivial V, alpha_empty = alpha_full = 2^{N-1}-1.
ConcurrenceSpec symmetric_spec(int n_parties);

// Four-party one-parameter family: alpha = kappa1 on 1- and 3-element
// subsets, kappa2 = (-14 - 8*kappa1)/6 on pairs, alpha_empty = alpha_full = 7.
// Admissible (p >= 0) exactly for kappa1 in [-7, 0].
ConcurrenceSpec kappa_spec(double kappa1);

// 2^{1-N/2}, the prefactor that normalizes the bipartite qubit maximum to 1.
double concurrence_prefactor(int n_parties);

// Applies the radicand guard shared by all evaluation routes: tiny negative
// values (>= -1e-8) clamp to zero, anything lower is a hard error because it
// signals an inadmissible spec rather than roundoff.
double concurrence_from_radicand(int n_parties, double radicand);

// C(psi) = 2^{1-N/2} sqrt(sum_V alpha_V * purity(psi, V)). Purities are
// evaluated once per complement pair {V, V-bar} (equal for pure states).
double concurrence_pure(const ConcurrenceSpec& spec, const PureState& psi);

}  // namespace conclab
