#include "serialize.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "errors.hpp"

namespace conclab {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* name) {
  require(j.is_object() && j.contains(name), ErrorCode::parse,
          std::string("missing field '") + name + "'");
  return j.at(name);
}

std::vector<int> dims_from(const json& j) {
  const json& d = field(j, "dims");
  require(d.is_array() && !d.empty(), ErrorCode::parse, "'dims' must be a nonempty array");
  std::vector<int> dims;
  for (const json& v : d) {
    require(v.is_number_integer(), ErrorCode::parse, "'dims' entries must be integers");
    dims.push_back(v.get<int>());
  }
  return dims;
}

std::vector<double> doubles_from(const json& j, const char* name) {
  const json& a = field(j, name);
  require(a.is_array(), ErrorCode::parse, std::string("'") + name + "' must be an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const json& v : a) {
    require(v.is_number(), ErrorCode::parse,
            std::string("'") + name + "' entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json state_obj(const PureState& psi) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    re.push_back(psi.amplitude(i).real());
    im.push_back(psi.amplitude(i).imag());
  }
  return json{{"dims", psi.dims()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

PureState state_from_obj(const json& j) {
  const std::vector<int> dims = dims_from(j);
  const std::vector<double> re = doubles_from(j, "re");
  const std::vector<double> im = doubles_from(j, "im");
  require(re.size() == im.size(), ErrorCode::parse, "'re' and 'im' lengths differ");
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i)
    amps[static_cast<Eigen::Index>(i)] = cdouble(re[i], im[i]);
  return PureState(dims, std::move(amps));
}

json complex_obj(cdouble z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// alpha_v = sum_s p_s * prod_{i in v} s_i without any cone checks, for the
// raw-loading path.
std::vector<double> raw_alpha_from_p_values(int n, const std::vector<double>& p) {
  const std::uint32_t size = 1u << n;
  std::vector<double> alpha(size);
  for (std::uint32_t v = 0; v < size; ++v) {
    long double acc = 0.0L;
    for (std::uint32_t s = 0; s < size; ++s) {
      const long double term = p[s];
      acc += (std::popcount(v & s) & 1) ? -term : term;
    }
    alpha[v] = static_cast<double>(acc);
  }
  return alpha;
}

json spec_obj(const ConcurrenceSpec& spec, SpecForm form) {
  const int n = spec.parties();
  json out;
  out["N"] = n;
  if (form == SpecForm::alpha) {
    require(n <= 9, ErrorCode::invalid_argument,
            "subset keys use 1-based digits; alpha form supports N <= 9");
    json table = json::object();
    const std::uint32_t size = 1u << n;
    for (std::uint32_t v = 0; v < size; ++v)
      table[CoefficientsAlpha::subset_name(v)] = spec.alpha().at(v);
    out["alpha"] = std::move(table);
  } else {
    const CoefficientsP p = spec.p();
    json table = json::object();
    const std::uint32_t size = 1u << n;
    for (std::uint32_t s = 0; s < size; ++s)
      if (p.at(s) != 0.0) table[CoefficientsP::pattern_name(s, n)] = p.at(s);
    out["p"] = std::move(table);
  }
  return out;
}

ConcurrenceSpec spec_from_obj(const json& j, bool enforce) {
  const json& nj = field(j, "N");
  require(nj.is_number_integer(), ErrorCode::parse, "'N' must be an integer");
  const int n = nj.get<int>();
  require(n >= 1 && n <= 16, ErrorCode::parse, "'N' must be in 1..16");
  const std::uint32_t size = 1u << n;

  const bool has_alpha = j.contains("alpha");
  const bool has_p = j.contains("p");
  require(has_alpha || has_p, ErrorCode::parse, "spec needs an 'alpha' or 'p' table");

  std::vector<double> alpha_vals;
  if (has_alpha) {
    const json& table = j.at("alpha");
    require(table.is_object(), ErrorCode::parse, "'alpha' must be an object");
    alpha_vals.assign(size, 0.0);
    for (const auto& item : table.items()) {
      const std::uint32_t bits = CoefficientsAlpha::subset_from_name(item.key(), n);
      require(item.value().is_number(), ErrorCode::parse,
              "alpha['" + item.key() + "'] must be a number");
      alpha_vals[bits] = item.value().get<double>();
    }
  }

  std::vector<double> p_vals;
  if (has_p) {
    const json& table = j.at("p");
    require(table.is_object(), ErrorCode::parse, "'p' must be an object");
    p_vals.assign(size, 0.0);
    for (const auto& item : table.items()) {
      require(item.key().size() == static_cast<std::size_t>(n), ErrorCode::parse,
              "sign pattern '" + item.key() + "' has wrong length for N=" +
                  std::to_string(n));
      const std::uint32_t bits = CoefficientsP::pattern_from_name(item.key());
      require(item.value().is_number(), ErrorCode::parse,
              "p['" + item.key() + "'] must be a number");
      p_vals[bits] = item.value().get<double>();
    }
  }

  if (has_alpha && has_p) {
    const std::vector<double> from_p = raw_alpha_from_p_values(n, p_vals);
    double scale = 1.0;
    for (double a : alpha_vals) scale = std::max(scale, std::abs(a));
    for (std::uint32_t v = 0; v < size; ++v)
      require(std::abs(alpha_vals[v] - from_p[v]) <= 1e-9 * scale, ErrorCode::parse,
              "'alpha' and 'p' tables disagree on subset '" +
                  CoefficientsAlpha::subset_name(v) + "'");
  }

  if (enforce) {
    if (has_alpha) {
      ConcurrenceSpec spec =
          ConcurrenceSpec::from_alpha(CoefficientsAlpha::checked(n, std::move(alpha_vals)));
      (void)spec.p();  // derived weights must lie in the cone, not just be symmetric
      return spec;
    }
    return ConcurrenceSpec::from_p(CoefficientsP(n, std::move(p_vals)));
  }
  if (!has_alpha) alpha_vals = raw_alpha_from_p_values(n, p_vals);
  return ConcurrenceSpec::from_raw_alpha(CoefficientsAlpha::raw(n, std::move(alpha_vals)));
}

std::string format_g(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

// --- States ------------------------------------------------------------------

std::string state_to_json(const PureState& psi) { return state_obj(psi).dump(); }

PureState state_from_json(const std::string& text) {
  return state_from_obj(parse_text(text));
}

std::string mixed_to_json(const MixedState& rho) {
  const Eigen::Index d = rho.dim();
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < d; ++r) {
    json re_row = json::array();
    json im_row = json::array();
    for (Eigen::Index c = 0; c < d; ++c) {
      re_row.push_back(rho.matrix()(r, c).real());
      im_row.push_back(rho.matrix()(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"dims", rho.dims()}, {"re", std::move(re)}, {"im", std::move(im)}}.dump();
}

MixedState mixed_from_json(const std::string& text) {
  const json j = parse_text(text);
  const std::vector<int> dims = dims_from(j);
  const json& re = field(j, "re");
  const json& im = field(j, "im");
  require(re.is_array() && im.is_array() && re.size() == im.size(), ErrorCode::parse,
          "'re' and 'im' must be arrays of matching shape");
  const auto d = static_cast<Eigen::Index>(re.size());
  Eigen::MatrixXcd mat(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& re_row = re.at(static_cast<std::size_t>(r));
    const json& im_row = im.at(static_cast<std::size_t>(r));
    require(re_row.is_array() && im_row.is_array() &&
                re_row.size() == static_cast<std::size_t>(d) &&
                im_row.size() == static_cast<std::size_t>(d),
            ErrorCode::parse, "matrix rows must all have the matrix dimension");
    for (Eigen::Index c = 0; c < d; ++c) {
      const json& rv = re_row.at(static_cast<std::size_t>(c));
      const json& iv = im_row.at(static_cast<std::size_t>(c));
      require(rv.is_number() && iv.is_number(), ErrorCode::parse,
              "matrix entries must be numbers");
      mat(r, c) = cdouble(rv.get<double>(), iv.get<double>());
    }
  }
  return MixedState(dims, std::move(mat));
}

// --- Specs ---------------------------------------------------------------------

std::string spec_to_json(const ConcurrenceSpec& spec, SpecForm form) {
  return spec_obj(spec, form).dump();
}

ConcurrenceSpec spec_from_json(const std::string& text, bool enforce) {
  return spec_from_obj(parse_text(text), enforce);
}

std::string report_to_json(const ValidationReport& report) {
  return json{{"complement_symmetry", report.complement_symmetry},
              {"sum_zero", report.sum_zero},
              {"p_nonnegative", report.p_nonnegative},
              {"normalized", report.normalized},
              {"admissible", report.admissible()},
              {"issues", report.issues}}
      .dump();
}

std::string witness_to_json(const ViolationWitness& witness) {
  json j;
  j["spec"] = spec_obj(witness.spec, SpecForm::alpha);
  j["psi"] = state_obj(witness.psi);
  j["phi"] = state_obj(witness.phi);
  j["a"] = complex_obj(witness.a);
  j["b"] = complex_obj(witness.b);
  j["flag_party"] = witness.flag_party + 1;  // 1-based on the wire
  j["gap"] = witness.gap;
  return j.dump();
}

// --- CSV ------------------------------------------------------------------------

std::string kappa_scan_to_csv(const KappaScanResult& result) {
  std::ostringstream out;
  out << "kappa1,kappa2,min_gap,violated\n";
  for (std::size_t i = 0; i < result.kappa1_grid.size(); ++i)
    out << format_g(result.kappa1_grid[i]) << ',' << format_g(result.kappa2_grid[i])
        << ',' << format_g(result.min_gap_per_point[i]) << ','
        << (result.violated[i] ? 1 : 0) << '\n';
  return out.str();
}

std::string region_to_csv(const std::vector<RegionPoint>& points) {
  std::ostringstream out;
  out << "p1,p2,p3,admissible,monotone\n";
  for (const RegionPoint& pt : points)
    out << format_g(pt.p[0]) << ',' << format_g(pt.p[1]) << ',' << format_g(pt.p[2])
        << ',' << (pt.admissible ? 1 : 0) << ',' << (pt.monotone ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace conclab
