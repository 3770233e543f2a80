#include "spectral_bvp/serialization.hpp"

#include "spectral_bvp/errors.hpp"

#include <fstream>
#include <sstream>

namespace sbvp {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ValidationError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

Eigen::VectorXd vec(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::VectorXd opt_vec(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? Eigen::VectorXd() : vec(*it, where + "." + key);
}

Json arr(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

std::string type_of(const Json& j, const std::string& where) {
  const Json& t = field(j, "type", where);
  if (!t.is_string()) fail(where + ".type", "expected a string");
  return t.get<std::string>();
}

// Construction errors from the core are reported at the record's location.
template <typename F>
auto located(const std::string& where, F&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    fail(where, e.what());
  }
}

}  // namespace

Json to_json(const RationalBC& f) {
  if (f.is_dirichlet()) return {{"type", "dirichlet"}};
  Json poles = Json::array();
  for (const auto& p : f.poles()) poles.push_back({{"location", p.location}, {"residue", p.residue}});
  return {{"type", "rational"}, {"h0", f.h0()}, {"h", f.h()}, {"poles", poles}};
}

Json to_json(const Potential& s) {
  return std::visit(
      [](const auto& b) -> Json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Potential::Fourier>) {
          return {{"type", "fourier"}, {"cos", arr(b.cos_coeffs)}, {"sin", arr(b.sin_coeffs)}};
        } else if constexpr (std::is_same_v<T, Potential::PiecewiseLinear>) {
          return {{"type", "piecewise_linear"}, {"x", arr(b.x)}, {"v", arr(b.v)}};
        } else if constexpr (std::is_same_v<T, Potential::Hermite>) {
          Json j = {{"type", "hermite"}, {"x", arr(b.x)}, {"v", arr(b.v)}, {"dv", arr(b.dv)}};
          if (b.d2v.size() > 0) j["d2v"] = arr(b.d2v);
          return j;
        } else {
          return {{"type", "legendre"}, {"coeffs", arr(b.coeffs)}};
        }
      },
      s.basis());
}

Json to_json(const Problem& p) { return {{"s", to_json(p.s)}, {"f", to_json(p.f)}, {"F", to_json(p.F)}}; }

Json to_json(const SpectralData& d) {
  return {{"ind_f", d.ind_f}, {"ind_F", d.ind_F}, {"eigenvalues", arr(d.eigenvalues)},
          {"norming_constants", arr(d.norming_constants)}};
}

Json to_json(const TransformRecord& r) {
  return {{"Lambda", r.Lambda},
          {"I", r.I},
          {"J", r.J},
          {"v0", r.v0},
          {"v_pi", r.v_pi},
          {"v1_0", r.v1_0},
          {"v1_pi", r.v1_pi},
          {"direction", r.direction == Direction::Forward ? "forward" : "inverse"}};
}

Json to_json(const ChainReduction& c) {
  Json j;
  j["problems"] = Json::array();
  for (const auto& p : c.problems) j["problems"].push_back(to_json(p));
  j["records"] = Json::array();
  for (const auto& r : c.records) j["records"].push_back(to_json(r));
  j["removed_pairs"] = Json::array();
  for (const auto& [l, g] : c.removed_pairs) j["removed_pairs"].push_back({{"lambda", l}, {"gamma", g}});
  return j;
}

Json to_json(const FitReport& r) {
  return {{"problem", to_json(r.problem)},
          {"max_eig_error", r.max_eig_error},
          {"max_gamma_error", r.max_gamma_error},
          {"basis_size", r.basis_size},
          {"evaluations", r.evaluations},
          {"converged", r.converged}};
}

Json to_json(const InverseReport& r) {
  Json j = {{"problem", to_json(r.problem)},
            {"base_fit", to_json(r.base)},
            {"max_eig_error", r.max_eig_error},
            {"max_gamma_error", r.max_gamma_error}};
  j["records"] = Json::array();
  for (const auto& rec : r.records) j["records"].push_back(to_json(rec));
  j["level_indices"] = Json::array();
  for (const auto& l : r.levels) j["level_indices"].push_back({l.ind_f, l.ind_F});
  return j;
}

Json to_json(const TwoSpectraInput& in) {
  return {{"lambdas", arr(in.lambdas)}, {"mus", arr(in.mus)}, {"L", in.L.value()},
          {"r", in.r},                  {"nu", in.nu},         {"pole_indices", in.pole_indices}};
}

Json to_json(const TwoSpectraResult& r) {
  return {{"problem", to_json(r.problem)}, {"alpha", r.alpha},           {"tau", r.tau},
          {"swapped", r.swapped},          {"data", to_json(r.data)},    {"max_eig_error", r.report.max_eig_error},
          {"max_gamma_error", r.report.max_gamma_error}};
}

Json to_json(const TwoProblemDiagnostics& d) {
  return {{"interlacing", d.interlacing},
          {"identity_residual", d.identity_residual},
          {"gamma_formula_error", d.gamma_formula_error},
          {"nu_sequence", d.nu_sequence},
          {"nu_limit", d.nu_limit},
          {"nu_relative_error", d.nu_relative_error},
          {"nu_extrapolated", d.nu_extrapolated},
          {"herglotz_points", d.herglotz_points},
          {"herglotz_failures", d.herglotz_failures},
          {"lambdas", arr(d.lambdas)},
          {"mus", arr(d.mus)}};
}

Json to_json(const HalfInverseReport& r) {
  return {{"spectrum_gap", r.spectrum_gap}, {"l2_left", r.l2_left}, {"l2_right", r.l2_right}, {"F_distance", r.F_distance}};
}

RationalBC rational_bc_from_json(const Json& j, const std::string& where) {
  const std::string t = type_of(j, where);
  if (t == "dirichlet") return RationalBC::dirichlet();
  if (t != "rational") fail(where + ".type", "expected \"dirichlet\" or \"rational\", got \"" + t + "\"");
  const double h0 = j.contains("h0") ? number(j["h0"], where + ".h0") : 0.0;
  const double h = number(field(j, "h", where), where + ".h");
  std::vector<Pole> poles;
  if (j.contains("poles")) {
    const Json& ps = j["poles"];
    if (!ps.is_array()) fail(where + ".poles", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string w = where + ".poles[" + std::to_string(i) + "]";
      poles.push_back({number(field(ps[i], "location", w), w + ".location"), number(field(ps[i], "residue", w), w + ".residue")});
    }
  }
  return located(where, [&] { return RationalBC::rational(h0, h, poles); });
}

Potential potential_from_json(const Json& j, const std::string& where) {
  const std::string t = type_of(j, where);
  if (t == "fourier") {
    const Eigen::VectorXd c = opt_vec(j, "cos", where), s = opt_vec(j, "sin", where);
    return located(where, [&] { return Potential::fourier(c, s); });
  }
  if (t == "piecewise_linear") {
    const Eigen::VectorXd x = vec(field(j, "x", where), where + ".x"), v = vec(field(j, "v", where), where + ".v");
    return located(where, [&] { return Potential::piecewise_linear(x, v); });
  }
  if (t == "hermite") {
    const Eigen::VectorXd x = vec(field(j, "x", where), where + ".x"), v = vec(field(j, "v", where), where + ".v");
    const Eigen::VectorXd dv = vec(field(j, "dv", where), where + ".dv"), d2v = opt_vec(j, "d2v", where);
    return located(where, [&] { return Potential::hermite(x, v, dv, d2v); });
  }
  if (t == "legendre") {
    const Eigen::VectorXd c = vec(field(j, "coeffs", where), where + ".coeffs");
    return located(where, [&] { return Potential::legendre(c); });
  }
  fail(where + ".type", "unknown potential type \"" + t + "\"");
}

Problem problem_from_json(const Json& j, const std::string& where) {
  Problem p;
  p.s = j.contains("s") ? potential_from_json(j["s"], where + ".s") : Potential::zero();
  p.f = rational_bc_from_json(field(j, "f", where), where + ".f");
  p.F = rational_bc_from_json(field(j, "F", where), where + ".F");
  return p;
}

SpectralData spectral_data_from_json(const Json& j, const std::string& where) {
  SpectralData d;
  d.ind_f = integer(field(j, "ind_f", where), where + ".ind_f");
  d.ind_F = integer(field(j, "ind_F", where), where + ".ind_F");
  d.eigenvalues = vec(field(j, "eigenvalues", where), where + ".eigenvalues");
  d.norming_constants = vec(field(j, "norming_constants", where), where + ".norming_constants");
  if (d.eigenvalues.size() != d.norming_constants.size()) fail(where, "eigenvalues and norming_constants differ in length");
  located(where, [&] {
    validate(d);
    return 0;
  });
  return d;
}

TwoSpectraInput two_spectra_input_from_json(const Json& j, const std::string& where) {
  TwoSpectraInput in;
  in.lambdas = vec(field(j, "lambdas", where), where + ".lambdas");
  in.mus = vec(field(j, "mus", where), where + ".mus");
  in.L = HalfInteger::from_double(number(field(j, "L", where), where + ".L"));
  if (j.contains("r")) in.r = integer(j["r"], where + ".r");
  if (j.contains("nu")) in.nu = number(j["nu"], where + ".nu");
  if (j.contains("pole_indices")) {
    const Json& p = j["pole_indices"];
    if (!p.is_array()) fail(where + ".pole_indices", "expected an array");
    for (std::size_t i = 0; i < p.size(); ++i) in.pole_indices.push_back(integer(p[i], where + ".pole_indices[" + std::to_string(i) + "]"));
  }
  return in;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot write file");
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sbvp
