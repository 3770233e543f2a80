#include "spectral_bvp/acceptance.hpp"
#include "spectral_bvp/errors.hpp"
#include "spectral_bvp/inverse.hpp"
#include "spectral_bvp/serialization.hpp"
#include "spectral_bvp/transforms.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace sbvp;

namespace {

struct Config {
  std::string input;
  std::string out;
  int count = 10;
  double tol_eig = 0.0;
  double tol_fit = 0.0;
  unsigned seed = AcceptanceOptions{}.seed;
  bool json = false;
  std::string plot = "table";
  double lo = NAN, hi = NAN;
  int points = 200;
  double mu = NAN, nu = NAN;
  std::string branch = "auto";
  std::string suite = "all";
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row_strings(header); }
  template <typename... T>
  void row(const T&... v) {
    std::vector<std::string> cells{cell(v)...};
    row_strings(cells);
  }
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s_ << (i ? "," : "") << cells[i];
    s_ << '\n';
  }
  std::string str() const { return s_.str(); }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  std::ostringstream s_;
};

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) std::cout << text;
  else write_text_file(c.out, text);
}

SpectrumOptions spectrum_options(const Config& c) {
  SpectrumOptions o;
  o.max_count = std::max(o.max_count, c.count);
  if (c.tol_eig > 0.0) o.eig_tol = c.tol_eig;
  return o;
}

FitOptions fit_options(const Config& c) {
  FitOptions o;
  if (c.tol_fit > 0.0) {
    o.tol_eig = c.tol_fit;
    o.tol_gamma = 10.0 * c.tol_fit;
  }
  if (c.tol_eig > 0.0) o.spectrum.eig_tol = c.tol_eig;
  return o;
}

Problem load_problem(const Config& c) { return problem_from_json(read_json_file(c.input), "problem"); }

void check_count(const Config& c) {
  if (c.count < 1) throw ValidationError("--count must be at least 1");
}

int cmd_spectrum(const Config& c) {
  check_count(c);
  const Problem p = load_problem(c);
  const auto opt = spectrum_options(c);
  if (c.plot == "chi" || c.plot == "traces") {
    const auto eig = eigenvalues(p, c.count, opt);
    if (c.plot == "chi") {
      const double lo = std::isnan(c.lo) ? eig.front() - 5.0 : c.lo;
      const double hi = std::isnan(c.hi) ? eig.back() + 1.0 : c.hi;
      if (!(hi > lo) || c.points < 2) throw ValidationError("chi grid needs hi > lo and at least 2 points");
      Csv csv({"lambda", "chi"});
      for (int i = 0; i < c.points; ++i) {
        const double x = lo + (hi - lo) * i / (c.points - 1);
        csv.row(x, char_function(p, x, opt.integrator));
      }
      emit(c, csv.str());
    } else {
      std::vector<SolutionTrace> tr;
      std::vector<std::string> header{"x"};
      for (int n = 0; n < c.count; ++n) {
        tr.push_back(phi(p, eig[n], opt.integrator));
        header.push_back("phi_" + std::to_string(n));
      }
      Csv csv(header);
      for (Eigen::Index i = 0; i < tr[0].grid.size(); ++i) {
        std::vector<std::string> cells{num(tr[0].grid[i])};
        for (const auto& t : tr) cells.push_back(num(t.y[i]));
        csv.row_strings(cells);
      }
      emit(c, csv.str());
    }
    return 0;
  }
  const auto data = spectral_data(p, c.count, opt);
  if (c.json) {
    emit(c, dump(to_json(data)));
    return 0;
  }
  const auto res = asymptotic_residuals(data);
  if (c.plot == "residuals") {
    Csv csv({"n", "sqrt_residual"});
    for (int n = 0; n < c.count; ++n) csv.row(n, res.a[n]);
    emit(c, csv.str());
  } else if (c.plot == "table") {
    Csv csv({"n", "lambda", "gamma"});
    for (int n = 0; n < c.count; ++n) csv.row(n, data.eigenvalues[n], data.norming_constants[n]);
    emit(c, csv.str());
  } else {
    throw ValidationError("--plot must be table, residuals, chi or traces");
  }
  return 0;
}

int cmd_oscillation(const Config& c) {
  check_count(c);
  const Problem p = load_problem(c);
  const auto opt = spectrum_options(c);
  const auto eig = eigenvalues(p, c.count, opt);
  Csv csv({"n", "lambda", "zeros", "expected"});
  for (int n = 0; n < c.count; ++n)
    csv.row(n, eig[n], oscillation_count(p, eig[n], opt.integrator), n - pole_count(p.f, eig[n]) - pole_count(p.F, eig[n]));
  emit(c, csv.str());
  return 0;
}

int cmd_transform_hat(const Config& c) {
  const auto h = t_hat(load_problem(c));
  emit(c, dump({{"problem", to_json(h.problem)}, {"record", to_json(h.record)}, {"lambda0", h.lambda0}, {"gamma0", h.gamma0}}));
  return 0;
}

int cmd_transform_tilde(const Config& c) {
  if (std::isnan(c.mu) || std::isnan(c.nu)) throw ValidationError("transform-tilde needs --mu and --nu");
  const std::pair<const char*, TildeBranch> names[] = {{"auto", TildeBranch::Auto},
                                                       {"below", TildeBranch::Below},
                                                       {"constant-left", TildeBranch::ConstantLeft},
                                                       {"constant-right", TildeBranch::ConstantRight}};
  TildeBranch b = TildeBranch::Auto;
  bool known = false;
  for (const auto& [n, v] : names)
    if (c.branch == n) b = v, known = true;
  if (!known) throw ValidationError("--branch must be auto, below, constant-left or constant-right");
  const auto t = t_tilde(c.mu, c.nu, load_problem(c), b);
  const char* branch = t.branch == TildeBranch::Below ? "below" : t.branch == TildeBranch::ConstantLeft ? "constant-left" : "constant-right";
  emit(c, dump({{"problem", to_json(t.problem)}, {"record", to_json(t.record)}, {"branch", branch}}));
  return 0;
}

int cmd_chain(const Config& c) {
  emit(c, dump(to_json(reduce_chain(load_problem(c)))));
  return 0;
}

int cmd_inverse_data(const Config& c) {
  const auto data = spectral_data_from_json(read_json_file(c.input), "data");
  emit(c, dump(to_json(inverse_spectral_data_report(data, fit_options(c)))));
  return 0;
}

int cmd_inverse_two_spectra(const Config& c) {
  const auto in = two_spectra_input_from_json(read_json_file(c.input), "input");
  emit(c, dump(to_json(two_spectra_inverse(in, fit_options(c)))));
  return 0;
}

int cmd_inverse_symmetric(const Config& c) {
  const Json j = read_json_file(c.input);
  if (!j.is_object() || !j.contains("eigenvalues") || !j.contains("L"))
    throw ValidationError("input: expected an object with \"eigenvalues\" and \"L\"");
  if (!j["L"].is_number_integer()) throw ValidationError("input.L: expected an integer");
  std::vector<double> l;
  for (std::size_t i = 0; i < j["eigenvalues"].size(); ++i) {
    if (!j["eigenvalues"][i].is_number()) throw ValidationError("input.eigenvalues[" + std::to_string(i) + "]: expected a number");
    l.push_back(j["eigenvalues"][i].get<double>());
  }
  const Eigen::VectorXd lv = Eigen::Map<const Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size()));
  const Problem p = symmetric_inverse(lv, HalfInteger{2 * j["L"].get<int>()}, fit_options(c));
  emit(c, dump({{"problem", to_json(p)}, {"symmetry_defect", symmetry_defect(p.s)}}));
  return 0;
}

int cmd_diagnose(const Config& c) {
  const Json j = read_json_file(c.input);
  if (!j.is_object() || !j.contains("problem")) throw ValidationError("input: expected an object with \"problem\"");
  const Problem p = problem_from_json(j["problem"], "input.problem");
  double alpha = 1.0;
  if (j.contains("alpha")) {
    if (!j["alpha"].is_number()) throw ValidationError("input.alpha: expected a number");
    alpha = j["alpha"].get<double>();
  }
  emit(c, dump(to_json(two_problem_diagnostics(p, alpha, std::max(c.count, 5), spectrum_options(c)))));
  return 0;
}

int cmd_verify(const Config& c) {
  AcceptanceOptions opt;
  opt.seed = c.seed;
  if (c.suite != "all") {
    std::stringstream s(c.suite);
    std::string part;
    while (std::getline(s, part, ',')) {
      try {
        std::size_t used = 0;
        const int id = std::stoi(part, &used);
        if (used != part.size() || id < 1 || id > acceptance_count()) throw std::invalid_argument(part);
        opt.only.push_back(id);
      } catch (const std::exception&) {
        throw ValidationError("--suite: expected \"all\" or a comma list of criterion numbers, got \"" + part + "\"");
      }
    }
  }
  std::string table;
  std::vector<std::string> failing;
  run_acceptance(opt, [&](const CriterionResult& r) {
    const std::string line = format_result(r) + "\n";
    table += line;
    if (c.out.empty()) std::cout << line << std::flush;
    if (r.counted && !r.pass) failing.push_back(std::to_string(r.id) + " " + r.name);
  });
  if (!c.out.empty()) write_text_file(c.out, table);
  if (failing.empty()) return 0;
  std::cerr << "failing properties:\n";
  for (const auto& f : failing) std::cerr << "  " << f << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral tools for Schrödinger problems with distributional potentials and rational boundary conditions"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--count", c.count, "Number of eigenvalues / pairs");
  app.add_option("--tol-eig", c.tol_eig, "Relative eigenvalue bracket width");
  app.add_option("--tol-fit", c.tol_fit, "Eigenvalue residual target of inverse fits (norming constants get 10x)");
  app.add_option("--seed", c.seed, "Seed for randomized verification problems");
  app.add_option("--out", c.out, "Output file (default stdout)");

  auto with_input = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("input", c.input, "Input JSON file")->required();
    return s;
  };
  auto* spectrum = with_input("spectrum", "Eigenvalues and norming constants (CSV), or plot data");
  spectrum->add_flag("--json", c.json, "Write spectral data as JSON instead of CSV");
  spectrum->add_option("--plot", c.plot, "table | residuals | chi | traces");
  spectrum->add_option("--lo", c.lo, "Lower end of the chi grid");
  spectrum->add_option("--hi", c.hi, "Upper end of the chi grid");
  spectrum->add_option("--points", c.points, "Points on the chi grid");
  with_input("oscillation", "Zero counts of eigenfunctions against the pole-corrected index");
  with_input("transform-hat", "Forward transform of a problem");
  auto* tilde = with_input("transform-tilde", "Inverse transform inserting the pair (mu, nu)");
  tilde->add_option("--mu", c.mu, "Inserted eigenvalue")->required();
  tilde->add_option("--nu", c.nu, "Inserted norming constant")->required();
  tilde->add_option("--branch", c.branch, "auto | below | constant-left | constant-right");
  with_input("chain", "Reduce a problem to constant boundary conditions");
  with_input("inverse-data", "Reconstruct a problem from spectral data JSON");
  with_input("inverse-two-spectra", "Reconstruct a problem from two spectra");
  with_input("inverse-symmetric", "Reconstruct a symmetric problem from one spectrum");
  with_input("diagnose-two-problems", "Identities linking the spectra of (s, f, F) and (s, f + alpha, F)");
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--suite", c.suite, "all, or a comma list of criterion numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "spectrum") return cmd_spectrum(c);
    if (cmd == "oscillation") return cmd_oscillation(c);
    if (cmd == "transform-hat") return cmd_transform_hat(c);
    if (cmd == "transform-tilde") return cmd_transform_tilde(c);
    if (cmd == "chain") return cmd_chain(c);
    if (cmd == "inverse-data") return cmd_inverse_data(c);
    if (cmd == "inverse-two-spectra") return cmd_inverse_two_spectra(c);
    if (cmd == "inverse-symmetric") return cmd_inverse_symmetric(c);
    if (cmd == "diagnose-two-problems") return cmd_diagnose(c);
    return cmd_verify(c);
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
