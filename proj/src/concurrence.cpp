#include "concurrence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace conclab {

namespace {

constexpr int kMinParties = 2;
constexpr int kMaxParties = 16;

void check_party_count(int n) {
  require(n >= kMinParties && n <= kMaxParties, ErrorCode::invalid_argument,
          "spec party count must be in [" + std::to_string(kMinParties) + ", " +
              std::to_string(kMaxParties) + "], got " + std::to_string(n));
}

std::size_t table_size(int n) { return std::size_t(1) << n; }

double abs_scale(const std::vector<double>& v) {
  double m = 1.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

// --- CoefficientsP -----------------------------------------------------------

CoefficientsP::CoefficientsP(int n_parties, std::vector<double> values)
    : n_(n_parties), p_(std::move(values)) {
  check_party_count(n_);
  require(p_.size() == table_size(n_), ErrorCode::invalid_argument,
          "sign-pattern table needs 2^N entries");
  const double tol = 1e-12 * abs_scale(p_);
  for (std::uint32_t s = 0; s < p_.size(); ++s) {
    double& v = p_[s];
    const bool forced_zero = (std::popcount(s) % 2 == 1) || s == 0;
    if (forced_zero) {
      require(std::abs(v) <= tol, ErrorCode::invalid_spec,
              "weight must vanish on pattern " + pattern_name(s, n_) +
                  " (odd '-' count or all-plus), got " + fmt(v));
      v = 0.0;
      continue;
    }
    require(v >= -tol, ErrorCode::not_positive,
            "negative weight p(" + pattern_name(s, n_) + ") = " + fmt(v));
    if (v < 0.0) v = 0.0;
  }
}

double CoefficientsP::sum() const {
  long double acc = 0.0L;
  for (double v : p_) acc += v;
  return static_cast<double>(acc);
}

std::string CoefficientsP::pattern_name(std::uint32_t pattern, int n_parties) {
  std::string s(static_cast<std::size_t>(n_parties), '+');
  for (int i = 0; i < n_parties; ++i)
    if ((pattern >> i) & 1u) s[static_cast<std::size_t>(i)] = '-';
  return s;
}

std::uint32_t CoefficientsP::pattern_from_name(const std::string& name) {
  require(!name.empty() && name.size() <= kMaxParties, ErrorCode::parse,
          "bad sign pattern '" + name + "'");
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name[i] == '-')
      bits |= 1u << i;
    else
      require(name[i] == '+', ErrorCode::parse,
              "bad sign pattern '" + name + "': expected '+'/'-'");
  }
  return bits;
}

// --- CoefficientsAlpha -------------------------------------------------------

CoefficientsAlpha::CoefficientsAlpha(int n, std::vector<double> values)
    : n_(n), a_(std::move(values)) {
  check_party_count(n_);
  require(a_.size() == table_size(n_), ErrorCode::invalid_argument,
          "subset table needs 2^N entries");
}

CoefficientsAlpha CoefficientsAlpha::raw(int n_parties, std::vector<double> values) {
  return CoefficientsAlpha(n_parties, std::move(values));
}

CoefficientsAlpha CoefficientsAlpha::checked(int n_parties, std::vector<double> values) {
  CoefficientsAlpha a(n_parties, std::move(values));
  const double scale = abs_scale(a.a_);
  const std::uint32_t full = (1u << n_parties) - 1u;
  for (std::uint32_t v = 0; v < a.a_.size(); ++v) {
    const std::uint32_t vbar = full ^ v;
    require(std::abs(a.a_[v] - a.a_[vbar]) <= 1e-12 * scale, ErrorCode::invalid_spec,
            "complement symmetry broken: alpha{" + subset_name(v) + "} = " +
                fmt(a.a_[v]) + " vs alpha{" + subset_name(vbar) + "} = " + fmt(a.a_[vbar]));
  }
  long double acc = 0.0L;
  for (double x : a.a_) acc += x;
  require(std::abs(static_cast<double>(acc)) <= 1e-9 * scale, ErrorCode::invalid_spec,
          "subset weights must sum to zero, got " + fmt(static_cast<double>(acc)));
  return a;
}

std::string CoefficientsAlpha::subset_name(std::uint32_t subset_bits) {
  std::string s;
  for (int i = 0; i < kMaxParties; ++i)
    if ((subset_bits >> i) & 1u) {
      // Digit labels keep keys compact and sortable; callers cap N at 9 when
      // serializing, so single characters always suffice here.
      s += static_cast<char>('1' + i);
    }
  return s;
}

std::uint32_t CoefficientsAlpha::subset_from_name(const std::string& name, int n_parties) {
  std::uint32_t bits = 0;
  int prev = 0;
  for (char c : name) {
    require(c >= '1' && c <= '9', ErrorCode::parse,
            "bad subset key '" + name + "': expected digits 1..9");
    const int party = c - '0';
    require(party > prev, ErrorCode::parse,
            "bad subset key '" + name + "': parties must be strictly increasing");
    require(party <= n_parties, ErrorCode::parse,
            "subset key '" + name + "' names party beyond N=" + std::to_string(n_parties));
    bits |= 1u << (party - 1);
    prev = party;
  }
  return bits;
}

// --- Transforms --------------------------------------------------------------

CoefficientsAlpha alpha_from_p(const CoefficientsP& p) {
  const int n = p.parties();
  const std::uint32_t size = 1u << n;
  std::vector<double> a(size);
  for (std::uint32_t v = 0; v < size; ++v) {
    long double acc = 0.0L;
    for (std::uint32_t s = 0; s < size; ++s) {
      const double w = p.at(s);
      if (w == 0.0) continue;
      // prod_{i in V} s_i = (-1)^{|V ∩ minus-set|}
      acc += (std::popcount(v & s) % 2 == 0) ? w : -static_cast<long double>(w);
    }
    a[v] = static_cast<double>(acc);
  }
  return CoefficientsAlpha::checked(n, std::move(a));
}

std::vector<double> p_values_from_alpha(const CoefficientsAlpha& alpha) {
  const int n = alpha.parties();
  const std::uint32_t size = 1u << n;
  const std::uint32_t full = size - 1u;
  const double norm = std::ldexp(1.0, -n);  // 2^{-N}
  std::vector<double> p(size);
  for (std::uint32_t s = 0; s < size; ++s) {
    long double acc = 0.0L;
    // Pair V with its complement: the two carry equal signs on even patterns
    // and opposite signs on odd ones, so odd-pattern values cancel exactly
    // for symmetric tables instead of leaving floating-point residue.
    for (std::uint32_t v = 0; v < size; ++v) {
      if (v & 1u) continue;  // enumerate only subsets without party 0
      const std::uint32_t vbar = full ^ v;
      const long double sv = (std::popcount(v & s) % 2 == 0) ? 1.0L : -1.0L;
      const long double svbar = (std::popcount(vbar & s) % 2 == 0) ? 1.0L : -1.0L;
      acc += sv * alpha.at(v) + svbar * alpha.at(vbar);
    }
    p[s] = static_cast<double>(acc) * norm;
  }
  return p;
}

CoefficientsP p_from_alpha(const CoefficientsAlpha& alpha) {
  return CoefficientsP(alpha.parties(), p_values_from_alpha(alpha));
}

// --- ConcurrenceSpec ---------------------------------------------------------

namespace {
bool normalization_holds(const CoefficientsAlpha& a) {
  const double target = std::ldexp(1.0, a.parties() - 1) - 1.0;
  const double tol = 1e-9 * std::max(1.0, target);
  const std::uint32_t full = (1u << a.parties()) - 1u;
  return std::abs(a.at(0u) - target) <= tol && std::abs(a.at(full) - target) <= tol;
}
}  // namespace

ConcurrenceSpec::ConcurrenceSpec(CoefficientsAlpha alpha)
    : alpha_(std::move(alpha)), normalized_(normalization_holds(alpha_)) {}

ConcurrenceSpec ConcurrenceSpec::from_alpha(CoefficientsAlpha alpha) {
  return ConcurrenceSpec(
      CoefficientsAlpha::checked(alpha.parties(), alpha.values()));
}

ConcurrenceSpec ConcurrenceSpec::from_raw_alpha(CoefficientsAlpha alpha) {
  return ConcurrenceSpec(std::move(alpha));
}

ConcurrenceSpec ConcurrenceSpec::from_p(const CoefficientsP& p) {
  return ConcurrenceSpec(alpha_from_p(p));
}

bool ConcurrenceSpec::permutation_symmetric() const {
  const double tol = 1e-12 * abs_scale(alpha_.values());
  std::vector<double> first_of_size(static_cast<std::size_t>(parties()) + 1);
  std::vector<bool> seen(static_cast<std::size_t>(parties()) + 1, false);
  for (std::uint32_t v = 0; v < alpha_.values().size(); ++v) {
    const auto k = static_cast<std::size_t>(std::popcount(v));
    if (!seen[k]) {
      seen[k] = true;
      first_of_size[k] = alpha_.at(v);
    } else if (std::abs(alpha_.at(v) - first_of_size[k]) > tol) {
      return false;
    }
  }
  return true;
}

// --- Spec operations -----------------------------------------------------------

ValidationReport validate(const ConcurrenceSpec& spec) {
  const auto& a = spec.alpha();
  const int n = a.parties();
  const std::uint32_t size = 1u << n;
  const std::uint32_t full = size - 1u;
  const double scale = abs_scale(a.values());

  ValidationReport report;

  report.complement_symmetry = true;
  for (std::uint32_t v = 0; v < size; ++v) {
    const std::uint32_t vbar = full ^ v;
    if (v > vbar) continue;
    if (std::abs(a.at(v) - a.at(vbar)) > 1e-12 * scale) {
      report.complement_symmetry = false;
      report.issues.push_back("complement symmetry: alpha{" +
                              CoefficientsAlpha::subset_name(v) + "} = " + fmt(a.at(v)) +
                              " but alpha{" + CoefficientsAlpha::subset_name(vbar) +
                              "} = " + fmt(a.at(vbar)));
    }
  }

  long double acc = 0.0L;
  for (double x : a.values()) acc += x;
  const double total = static_cast<double>(acc);
  report.sum_zero = std::abs(total) <= 1e-9 * scale;
  if (!report.sum_zero)
    report.issues.push_back("subset weights sum to " + fmt(total) + ", expected 0");

  report.p_nonnegative = true;
  const std::vector<double> p = p_values_from_alpha(a);
  for (std::uint32_t s = 0; s < size; ++s) {
    if (std::popcount(s) % 2 == 1 || s == 0) continue;  // covered by the checks above
    if (p[s] < -1e-12 * scale) {
      report.p_nonnegative = false;
      report.issues.push_back("induced weight p(" + CoefficientsP::pattern_name(s, n) +
                              ") = " + fmt(p[s]) + " < 0");
    }
  }

  report.normalized = normalization_holds(a);
  if (!report.normalized) {
    const double target = std::ldexp(1.0, n - 1) - 1.0;
    report.issues.push_back("not normalized: alpha{} = " + fmt(a.at(0u)) +
                            ", convention expects " + fmt(target));
  }
  return report;
}

ConcurrenceSpec normalize(const ConcurrenceSpec& spec) {
  const auto& a = spec.alpha();
  double max_abs = 0.0;
  for (double x : a.values()) max_abs = std::max(max_abs, std::abs(x));
  require(max_abs > 0.0, ErrorCode::zero_spec, "cannot normalize the all-zero spec");

  const double total = a.at(0u);  // alpha_empty = sum_s p_s
  require(total > 0.0, ErrorCode::invalid_spec,
          "normalization needs a positive total weight, got alpha{} = " + fmt(total));
  const double target = std::ldexp(1.0, a.parties() - 1) - 1.0;
  const double factor = target / total;

  std::vector<double> scaled = a.values();
  for (double& x : scaled) x *= factor;
  return ConcurrenceSpec::from_raw_alpha(
      CoefficientsAlpha::raw(a.parties(), std::move(scaled)));
}

ConcurrenceSpec symmetric_spec(int n_parties) {
  check_party_count(n_parties);
  const std::uint32_t size = 1u << n_parties;
  std::vector<double> a(size, -1.0);
  a[0] = a[size - 1u] = std::ldexp(1.0, n_parties - 1) - 1.0;
  return ConcurrenceSpec::from_alpha(CoefficientsAlpha::checked(n_parties, std::move(a)));
}

ConcurrenceSpec kappa_spec(double kappa1) {
  const double kappa2 = (-14.0 - 8.0 * kappa1) / 6.0;
  std::vector<double> a(16);
  for (std::uint32_t v = 0; v < 16; ++v) {
    switch (std::popcount(v)) {
      case 0:
      case 4: a[v] = 7.0; break;
      case 1:
      case 3: a[v] = kappa1; break;
      default: a[v] = kappa2; break;
    }
  }
  return ConcurrenceSpec::from_alpha(CoefficientsAlpha::checked(4, std::move(a)));
}

// --- Evaluation ------------------------------------------------------------------

double concurrence_prefactor(int n_parties) {
  return std::pow(2.0, 1.0 - 0.5 * n_parties);
}

double concurrence_from_radicand(int n_parties, double radicand) {
  require(radicand >= -1e-8, ErrorCode::negative_radicand,
          "quadratic form is negative (" + fmt(radicand) +
              "): spec is outside the admissible cone");
  if (radicand < 0.0) radicand = 0.0;
  return concurrence_prefactor(n_parties) * std::sqrt(radicand);
}

double concurrence_pure(const ConcurrenceSpec& spec, const PureState& psi) {
  const int n = spec.parties();
  require(n == psi.parties(), ErrorCode::dimension_mismatch,
          "spec is for " + std::to_string(n) + " parties, state has " +
              std::to_string(psi.parties()));
  const auto& a = spec.alpha();
  const std::uint32_t size = 1u << n;
  const std::uint32_t full = size - 1u;

  // One reduction per complement pair: purity(V) = purity(V-bar) for pure
  // states, and the evaluation must treat the pair identically anyway.
  double radicand = 0.0;
  for (std::uint32_t v = 0; v < size; ++v) {
    if (v & 1u) continue;  // party 0 always sits in the complement half
    const double weight = a.at(v) + a.at(full ^ v);
    if (weight == 0.0) continue;
    radicand += weight * purity(psi, SubsetMask{v, n});
  }
  return concurrence_from_radicand(n, radicand);
}

}  // namespace conclab
