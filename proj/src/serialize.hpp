#pragma once

#include <string>
#include <vector>

#include "concurrence.hpp"
#include "convexroof.hpp"
#include "monotonicity.hpp"

namespace conclab {

// JSON wire formats. Doubles are emitted in shortest round-trip form, so a
// serialize/parse cycle is bit-exact.
//
//   state:   {"dims":[2,2], "re":[...], "im":[...]}
//   mixed:   {"dims":[2,2], "re":[[...],...], "im":[[...],...]}
//   spec:    {"N":3, "alpha":{"":3.0,"1":-1.0,...}}  and/or  {"p":{"+--":3.0,...}}
//   report:  {"complement_symmetry":true, ..., "admissible":true, "issues":[...]}
//   witness: {"spec":..., "psi":..., "phi":..., "a":{"re":..,"im":..}, "b":...,
//             "flag_party":1, "gap":-0.146...}   (flag_party is 1-based here)

std::string state_to_json(const PureState& psi);
PureState state_from_json(const std::string& text);

std::string mixed_to_json(const MixedState& rho);
MixedState mixed_from_json(const std::string& text);

enum class SpecForm { alpha, p };

// Alpha form lists every subset key; p form lists only nonzero patterns.
// Subset keys use 1-based party digits, so alpha-form output requires N <= 9.
std::string spec_to_json(const ConcurrenceSpec& spec, SpecForm form);

// Accepts an alpha table, a p table, or both (cross-validated to 1e-9
// relative). Missing keys default to zero. enforce=true runs the structural
// constructors; enforce=false defers every check to validate().
ConcurrenceSpec spec_from_json(const std::string& text, bool enforce = true);

std::string report_to_json(const ValidationReport& report);
std::string witness_to_json(const ViolationWitness& witness);

// CSV tables used by the CLI. Values use %.12g; NaN prints as "nan"; booleans
// as 0/1.
std::string kappa_scan_to_csv(const KappaScanResult& result);   // kappa1,kappa2,min_gap,violated
std::string region_to_csv(const std::vector<RegionPoint>& points);  // p1,p2,p3,admissible,monotone

}  // namespace conclab
