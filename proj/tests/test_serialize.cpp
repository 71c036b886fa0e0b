// Wire-format tests: bit-exact state round trips, spec tables in both forms
// with cross-validation, report/witness JSON shapes, and the CSV emitters.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include "errors.hpp"
#include "monotonicity.hpp"
#include "serialize.hpp"
#include "test_util.hpp"

using namespace conclab;
using nlohmann::json;

namespace {

ConcurrenceSpec lopsided_tripartite_spec() {
  std::vector<double> p(8, 0.0);
  p[CoefficientsP::pattern_from_name("+--")] = 3.0;
  return ConcurrenceSpec::from_p(CoefficientsP(3, std::move(p)));
}

}  // namespace

TEST_CASE("pure states round trip bit-exactly") {
  const PureState original = random_state({2, 3, 2}, 2024);
  const PureState back = state_from_json(state_to_json(original));
  CHECK(back.dims() == original.dims());
  CHECK((back.amplitudes() - original.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

  const PureState g = state_from_json(state_to_json(ghz(3)));
  CHECK(g.dims() == std::vector<int>{2, 2, 2});
  CHECK(std::abs(g.amplitude(0) - cdouble(1.0 / std::sqrt(2.0), 0.0)) == 0.0);
}

TEST_CASE("state parsing rejects malformed input") {
  CHECK(testutil::thrown_code([] { state_from_json("{nope"); }) == ErrorCode::parse);
  CHECK(testutil::thrown_code([] { state_from_json("[1,2]"); }) == ErrorCode::parse);
  CHECK(testutil::thrown_code([] { state_from_json(R"({"dims":[2],"re":[1.0]})"); }) ==
        ErrorCode::parse);
  CHECK(testutil::thrown_code([] {
          state_from_json(R"({"dims":[2],"re":[1.0],"im":[0.0,1.0]})");
        }) == ErrorCode::parse);
  CHECK(testutil::thrown_code([] {
          state_from_json(R"({"dims":[2,2],"re":[1.0,0.0],"im":[0.0,0.0]})");
        }) == ErrorCode::dimension_mismatch);
  CHECK(testutil::thrown_code([] {
          state_from_json(R"({"dims":[2,"x"],"re":[1.0],"im":[0.0]})");
        }) == ErrorCode::parse);
}

TEST_CASE("mixed states round trip bit-exactly") {
  const MixedState rho = MixedState::from_pure(random_state({2, 3}, 8));
  const MixedState back = mixed_from_json(mixed_to_json(rho));
  CHECK(back.dims() == rho.dims());
  CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mixed-state parsing rejects malformed input") {
  CHECK(testutil::thrown_code([] {
          mixed_from_json(R"({"dims":[2],"re":[[1.0,0.0],[0.0]],"im":[[0.0,0.0],[0.0,0.0]]})");
        }) == ErrorCode::parse);
  CHECK(testutil::thrown_code([] {
          mixed_from_json(R"({"dims":[2],"re":[[1.5,0.0],[0.0,-0.5]],"im":[[0.0,0.0],[0.0,0.0]]})");
        }) == ErrorCode::not_psd);
  CHECK(testutil::thrown_code([] { mixed_from_json(R"({"dims":[2]})"); }) ==
        ErrorCode::parse);
}

TEST_CASE("spec tables serialize in both alpha and p form") {
  const ConcurrenceSpec spec = lopsided_tripartite_spec();

  const std::string alpha_text = spec_to_json(spec, SpecForm::alpha);
  const json aj = json::parse(alpha_text);
  CHECK(aj["N"] == 3);
  CHECK(aj["alpha"].size() == 8u);
  const ConcurrenceSpec from_alpha_form = spec_from_json(alpha_text);
  for (std::uint32_t v = 0; v < 8; ++v)
    CHECK(from_alpha_form.alpha().at(v) == spec.alpha().at(v));

  const std::string p_text = spec_to_json(spec, SpecForm::p);
  const json pj = json::parse(p_text);
  CHECK(pj["p"].size() == 1u);
  CHECK(pj["p"]["+--"] == 3.0);
  const ConcurrenceSpec from_p_form = spec_from_json(p_text);
  for (std::uint32_t v = 0; v < 8; ++v)
    CHECK(std::abs(from_p_form.alpha().at(v) - spec.alpha().at(v)) < 1e-14);
}

TEST_CASE("spec parsing cross-validates dual tables") {
  const ConcurrenceSpec spec = symmetric_spec(3);
  json merged = json::parse(spec_to_json(spec, SpecForm::alpha));
  const json pj = json::parse(spec_to_json(spec, SpecForm::p));
  merged["p"] = pj["p"];

  const ConcurrenceSpec both = spec_from_json(merged.dump());
  CHECK(both.parties() == 3);
  for (std::uint32_t v = 0; v < 8; ++v)
    CHECK(std::abs(both.alpha().at(v) - spec.alpha().at(v)) < 1e-14);

  json skewed = merged;
  for (auto& item : skewed["p"].items()) {
    skewed["p"][item.key()] = item.value().get<double>() + 0.5;
    break;
  }
  CHECK(testutil::thrown_code([&] { spec_from_json(skewed.dump()); }) ==
        ErrorCode::parse);
}

TEST_CASE("spec parsing rejects malformed tables") {
  CHECK(testutil::thrown_code([] { spec_from_json("{oops"); }) == ErrorCode::parse);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"alpha":{"":1.0}})"); }) ==
        ErrorCode::parse);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":0,"p":{}})"); }) ==
        ErrorCode::parse);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":17,"p":{}})"); }) ==
        ErrorCode::parse);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":2})"); }) == ErrorCode::parse);
  CHECK(testutil::thrown_code(
            [] { spec_from_json(R"({"N":2,"alpha":{"":1.0,"3":1.0}})"); }) ==
        ErrorCode::parse);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":3,"p":{"+-":1.0}})"); }) ==
        ErrorCode::parse);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":2,"p":{"+?":1.0}})"); }) ==
        ErrorCode::parse);
}

TEST_CASE("spec parsing enforces the admissibility cone when asked") {
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":2,"p":{"--":-1.0}})"); }) ==
        ErrorCode::not_positive);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":2,"p":{"-+":1.0}})"); }) ==
        ErrorCode::invalid_spec);
  CHECK(testutil::thrown_code([] { spec_from_json(R"({"N":2,"p":{"++":1.0}})"); }) ==
        ErrorCode::invalid_spec);

  const std::string asymmetric =
      R"({"N":2,"alpha":{"":1.0,"1":0.5,"2":-0.5,"12":1.0}})";
  CHECK(testutil::thrown_code([&] { spec_from_json(asymmetric); }) ==
        ErrorCode::invalid_spec);

  const ConcurrenceSpec raw = spec_from_json(asymmetric, false);
  const ValidationReport report = validate(raw);
  CHECK_FALSE(report.complement_symmetry);
  CHECK_FALSE(report.sum_zero);
  CHECK_FALSE(report.admissible());
  CHECK(!report.issues.empty());
}

TEST_CASE("wide tables only fit the p form") {
  std::vector<double> p(1u << 10, 0.0);
  p[CoefficientsP::pattern_from_name("--++++++++")] = 1.0;
  const ConcurrenceSpec spec = ConcurrenceSpec::from_p(CoefficientsP(10, std::move(p)));

  CHECK(testutil::thrown_code([&] { spec_to_json(spec, SpecForm::alpha); }) ==
        ErrorCode::invalid_argument);

  const std::string text = spec_to_json(spec, SpecForm::p);
  const ConcurrenceSpec back = spec_from_json(text);
  CHECK(back.parties() == 10);
  CHECK(std::abs(back.alpha().at(0u) - spec.alpha().at(0u)) < 1e-12);
}

TEST_CASE("validation reports carry every flag and the issue list") {
  ValidationReport report;
  report.complement_symmetry = true;
  report.sum_zero = true;
  report.p_nonnegative = false;
  report.normalized = false;
  report.issues = {"p[--] negative"};

  const json j = json::parse(report_to_json(report));
  CHECK(j["complement_symmetry"] == true);
  CHECK(j["sum_zero"] == true);
  CHECK(j["p_nonnegative"] == false);
  CHECK(j["normalized"] == false);
  CHECK(j["admissible"] == false);
  REQUIRE(j["issues"].size() == 1u);
  CHECK(j["issues"][0] == "p[--] negative");
}

TEST_CASE("violation witnesses serialize with 1-based flag labels") {
  const ViolationWitness w = tripartite_counterexample(lopsided_tripartite_spec());
  const json j = json::parse(witness_to_json(w));
  CHECK(j["flag_party"] == w.flag_party + 1);
  CHECK(j["gap"].get<double>() == w.gap);
  CHECK(std::abs(j["a"]["re"].get<double>() - w.a.real()) == 0.0);
  CHECK(j["spec"]["N"] == 3);
  CHECK(j["spec"].contains("alpha"));
  CHECK(j["psi"]["dims"] == json::array({2, 2, 2}));
  const PureState psi = state_from_json(j["psi"].dump());
  CHECK((psi.amplitudes() - w.psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scan and region tables print compact CSV") {
  KappaScanResult sc;
  sc.kappa1_grid = {-1.0, -3.5};
  sc.kappa2_grid = {-1.0, 2.5};
  sc.min_gap_per_point = {std::numeric_limits<double>::quiet_NaN(), -0.25};
  sc.admissible = {false, true};
  sc.violated = {false, true};
  sc.boundary_estimate = std::numeric_limits<double>::quiet_NaN();
  CHECK(kappa_scan_to_csv(sc) ==
        "kappa1,kappa2,min_gap,violated\n-1,-1,nan,0\n-3.5,2.5,-0.25,1\n");

  std::vector<RegionPoint> pts(2);
  pts[0] = RegionPoint{{1.0, 1.0, 1.0}, true, true};
  pts[1] = RegionPoint{{3.0, 0.0, 0.0}, true, false};
  CHECK(region_to_csv(pts) ==
        "p1,p2,p3,admissible,monotone\n1,1,1,1,1\n3,0,0,1,0\n");
}
