// permlab: exact permanents of rectangular matrices, their mean-product
// approximants, identity verification over exact rationals, and the
// approximation-error bound report.
//
// Exit codes: 0 ok, 1 mathematical check failed, 2 input error,
// 3 resource budget exceeded.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "permlab/harness.hpp"

namespace {

using namespace permlab;

std::uint64_t term_budget_from_env() {
  const char* env = std::getenv("PERMLAB_BUDGET_TERMS");
  if (env == nullptr || *env == '\0') return kDefaultTermBudget;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) {
    throw parse_error("PERMLAB_BUDGET_TERMS must be a positive integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::string format_complex_pair(const Complex& z) {
  return format_double17(z.real()) + " " + format_double17(z.imag());
}

template <class S>
S run_engine(const RectMatrix<S>& z, const std::string& method, std::uint64_t budget) {
  if (method == "naive") return permanent_naive(z, budget);
  if (method == "ryser") return permanent_ryser(z, budget);
  return permanent(z, budget);
}

int cmd_compute(const std::string& input, const std::string& method, bool normalized) {
  std::uint64_t budget = term_budget_from_env();
  MatrixDocument doc = read_matrix_file(input);
  if (doc.kind == ScalarKind::rational) {
    const auto& z = std::get<RectMatrix<Rational>>(doc.matrix);
    Rational per = run_engine(z, method, budget);
    if (normalized) {
      per = scale_ratio(per, factorial_mpz(z.rows() - z.cols()), factorial_mpz(z.rows()));
    }
    std::cout << format_rational(per) << "\n";
  } else {
    const auto& z = std::get<RectMatrix<Complex>>(doc.matrix);
    Complex per = run_engine(z, method, budget);
    if (normalized) {
      per = Complex(per * scalar_traits<Complex>::from_ratio(
                              factorial_mpz(z.rows() - z.cols()), factorial_mpz(z.rows())));
    }
    std::cout << format_complex_pair(per) << "\n";
  }
  return 0;
}

std::string opt_text(const std::optional<ExtReal>& v) {
  return v ? format_ext(*v) : std::string("inapplicable");
}

void print_bounds_text(const BoundReport& rep) {
  const MatrixStats& st = rep.stats;
  std::cout << "shape            " << st.rows << " x " << st.cols << "\n";
  std::cout << "alpha            " << format_ext(st.alpha) << "\n";
  std::cout << "beta             " << format_ext(st.beta) << "\n";
  std::cout << "gamma(1)         " << format_ext(st.gamma(1.0)) << "\n";
  std::cout << "theta2           " << format_ext(st.theta2) << "\n";
  std::cout << "theta3           " << format_ext(st.theta3) << "\n";
  std::cout << "theta4           " << format_ext(st.theta4) << "\n";
  std::cout << "kappa2           " << format_ext(st.kappa2) << "\n";
  std::cout << "kappa3           " << format_ext(st.kappa3) << "\n";
  std::cout << "kappa4           " << format_ext(st.kappa4) << "\n";
  std::cout << "kappa_tilde      " << opt_text(st.kappa_tilde) << "\n";
  if (rep.norm_perm) {
    std::cout << "norm_perm        " << format_complex_pair(*rep.norm_perm) << "\n";
  }
  if (rep.h1_abs) std::cout << "h1_abs           " << format_double17(*rep.h1_abs) << "\n";
  if (rep.h2_abs) std::cout << "h2_abs           " << format_double17(*rep.h2_abs) << "\n";
  if (rep.actual_error_first) {
    std::cout << "err_first        " << format_ext(*rep.actual_error_first) << "\n";
  }
  if (rep.actual_error_second) {
    std::cout << "err_second       " << format_ext(*rep.actual_error_second) << "\n";
  }
  if (rep.first) {
    const auto& b = *rep.first;
    std::cout << "bound_7465283    " << format_ext(b.bound_7465283) << "\n";
    std::cout << "bound_7465284    " << opt_text(b.bound_7465284) << "\n";
    std::cout << "bound_739065     " << opt_text(b.bound_739065) << "\n";
    std::cout << "bound_514385     " << opt_text(b.bound_514385) << "\n";
    std::cout << "bound_627867     " << opt_text(b.bound_627867) << "\n";
    std::cout << "bound_bobkov16   " << opt_text(b.bound_bobkov16) << "\n";
    std::cout << "bound_roos357    " << opt_text(b.bound_roos357) << "\n";
    std::cout << "bound_halfgamma  " << opt_text(b.bound_roos_halfgamma) << "\n";
  }
  if (rep.second) {
    const auto& b = *rep.second;
    std::cout << "bound_5196573    " << format_ext(b.bound_5196573) << "\n";
    std::cout << "bound_4176439    " << opt_text(b.bound_4176439) << "\n";
    std::cout << "bound_general_l2 " << opt_text(b.bound_roos_general) << "\n";
  }
}

nlohmann::json ext_json(const ExtReal& v) {
  if (v.is_inf()) return "inf";
  return v.value();
}

nlohmann::json opt_json(const std::optional<ExtReal>& v) {
  if (!v) return nullptr;
  return ext_json(*v);
}

void print_bounds_json(const BoundReport& rep) {
  nlohmann::json out;
  const MatrixStats& st = rep.stats;
  out["rows"] = st.rows;
  out["cols"] = st.cols;
  out["stats"] = {
      {"alpha", ext_json(st.alpha)},       {"beta", ext_json(st.beta)},
      {"gamma1", ext_json(st.gamma(1.0))}, {"theta2", ext_json(st.theta2)},
      {"theta3", ext_json(st.theta3)},     {"theta4", ext_json(st.theta4)},
      {"kappa2", ext_json(st.kappa2)},     {"kappa3", ext_json(st.kappa3)},
      {"kappa4", ext_json(st.kappa4)},     {"kappa_tilde", opt_json(st.kappa_tilde)},
  };
  if (rep.norm_perm) {
    out["norm_perm"] = {rep.norm_perm->real(), rep.norm_perm->imag()};
  }
  if (rep.h1_abs) out["h1_abs"] = *rep.h1_abs;
  if (rep.h2_abs) out["h2_abs"] = *rep.h2_abs;
  out["err_first"] = opt_json(rep.actual_error_first);
  out["err_second"] = opt_json(rep.actual_error_second);
  if (rep.first) {
    const auto& b = *rep.first;
    out["first_order"] = {
        {"bound_7465283", ext_json(b.bound_7465283)},
        {"bound_7465284", opt_json(b.bound_7465284)},
        {"bound_739065", opt_json(b.bound_739065)},
        {"bound_514385", opt_json(b.bound_514385)},
        {"bound_627867", opt_json(b.bound_627867)},
        {"bound_bobkov16", opt_json(b.bound_bobkov16)},
        {"bound_roos357", opt_json(b.bound_roos357)},
        {"bound_roos_halfgamma", opt_json(b.bound_roos_halfgamma)},
    };
  }
  if (rep.second) {
    const auto& b = *rep.second;
    out["second_order"] = {
        {"bound_5196573", ext_json(b.bound_5196573)},
        {"bound_4176439", opt_json(b.bound_4176439)},
        {"bound_roos_general", opt_json(b.bound_roos_general)},
    };
  }
  std::cout << out.dump(1) << "\n";
}

int cmd_bounds(const std::string& input, const std::string& order,
               const std::string& format) {
  std::uint64_t budget = term_budget_from_env();
  MatrixDocument doc = read_matrix_file(input);
  bool first = order == "1" || order == "both";
  bool second = order == "2" || order == "both";
  BoundReport rep;
  if (doc.kind == ScalarKind::rational) {
    rep = bound_report(std::get<RectMatrix<Rational>>(doc.matrix), first, second, budget);
  } else {
    rep = bound_report(std::get<RectMatrix<Complex>>(doc.matrix), first, second, budget);
  }
  if (format == "csv") {
    std::cout << kCsvVersionLine << "\n" << sweep_csv_header() << "\n"
              << sweep_csv_row("input", rep) << "\n";
  } else if (format == "json") {
    print_bounds_json(rep);
  } else {
    print_bounds_text(rep);
  }
  return 0;
}

int cmd_check_identities(int rows, int cols, int trials, std::uint64_t seed,
                         const std::string& domain) {
  SuiteOptions opt;
  opt.rows = rows;
  opt.cols = cols;
  opt.trials = trials;
  opt.seed = seed;
  opt.domain = domain == "complex" ? ScalarKind::complex_f64 : ScalarKind::rational;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  SuiteResult res = run_identity_suite(opt);
  std::cout << "# permlab identity suite: N=" << rows << " n=" << cols
            << " trials=" << trials << " seed=" << seed << " domain=" << domain << "\n";
  for (const auto& t : res.tallies) {
    std::cout << t.id;
    for (std::size_t i = t.id.size(); i < 24; ++i) std::cout << ' ';
    std::cout << t.passed << "/" << t.total << (t.passed == t.total ? " ok" : " FAIL")
              << "\n";
  }
  if (!res.all_passed()) {
    for (const auto& f : res.failures) std::cout << f << "\n";
    std::cout << "identity suite FAILED\n";
    return 1;
  }
  std::cout << "all identities passed (" << res.tallies.size() << " checkers, " << trials
            << " trials)\n";
  return 0;
}

int cmd_sweep(const std::string& family, int n_min, int n_max, const std::string& out_path,
              int rows, int trials, std::uint64_t seed) {
  std::uint64_t budget = term_budget_from_env();
  if (n_min < 2 || n_max < n_min) {
    throw std::invalid_argument("sweep: need 2 <= n-min <= n-max");
  }
  std::ostringstream csv;
  csv << kCsvVersionLine << "\n" << sweep_csv_header() << "\n";
  std::uint64_t index = 0;
  for (int n = n_min; n <= n_max; ++n) {
    if (family == "derangement") {
      BoundReport rep = bound_report(derangement_matrix(n), true, true, budget);
      csv << sweep_csv_row("derangement", rep) << "\n";
    } else if (family == "menage") {
      if (n < 3) throw std::invalid_argument("sweep: menage needs n >= 3");
      BoundReport rep = bound_report(menage_matrix(n), true, true, budget);
      csv << sweep_csv_row("menage", rep) << "\n";
    } else if (family == "random") {
      if (rows < n) throw std::invalid_argument("sweep: need --N >= n-max");
      for (int t = 0; t < trials; ++t) {
        auto z = random_unit_disc_matrix(rows, n, derive_seed(seed, index++));
        BoundReport rep = bound_report(z, true, true, budget);
        csv << sweep_csv_row("random", rep) << "\n";
      }
    } else {
      throw std::invalid_argument("sweep: unknown family " + family);
    }
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw parse_error("cannot write " + out_path);
  out << csv.str();
  return 0;
}

int cmd_family(const std::string& name, int n, const std::string& emit_path) {
  RectMatrix<Rational> z(1, 1);
  mpz_class closed;
  FamilyKind kind;
  if (name == "derangement") {
    kind = FamilyKind::derangement;
    z = derangement_matrix(n);
    closed = derangement_number(n);
  } else if (name == "menage") {
    kind = FamilyKind::menage;
    z = menage_matrix(n);
    closed = menage_number_touchard(n);
  } else {
    throw std::invalid_argument("family: name must be derangement or menage");
  }
  Rational per = permanent_ryser(z, term_budget_from_env());
  auto ref = family_reference_stats(kind, n);
  double theta = std::sqrt(ref.theta_sq.get_d());
  double kappa_tilde;
  if (ref.kappa_tilde) {
    kappa_tilde = *ref.kappa_tilde;
  } else {
    kappa_tilde = stats(z).kappa_tilde->value();  // definition, below the closed form's range
  }
  std::cout << format_rational(per) << " " << closed.get_str()
            << " theta=" << format_double17(theta)
            << " beta=" << format_double17(ref.beta.get_d())
            << " gamma=" << format_double17(ref.gamma1.get_d())
            << " kappa_tilde=" << format_double17(kappa_tilde) << "\n";
  if (!emit_path.empty()) {
    MatrixDocument doc;
    doc.kind = ScalarKind::rational;
    doc.matrix = z;
    write_matrix_file(emit_path, doc);
  }
  if (per != Rational(closed)) {
    std::cerr << "self-check failed: permanent disagrees with the closed form\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permanent approximation laboratory"};
  app.require_subcommand(1);

  std::string input, method = "auto", order = "both", format = "text";
  bool normalized = false;
  auto* compute = app.add_subcommand("compute", "exact permanent of a matrix file");
  compute->add_option("--input", input, "matrix JSON file")->required();
  compute->add_option("--method", method, "naive|ryser|auto")
      ->check(CLI::IsMember({"naive", "ryser", "auto"}));
  compute->add_flag("--normalized", normalized, "divide by the number of summands");

  auto* bounds = app.add_subcommand("bounds", "statistics, bounds and exact errors");
  bounds->add_option("--input", input, "matrix JSON file")->required();
  bounds->add_option("--order", order, "1|2|both")
      ->check(CLI::IsMember({"1", "2", "both"}));
  bounds->add_option("--format", format, "text|csv|json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  int rows = 4, cols = 3, trials = 50;
  std::uint64_t seed = 0;
  std::string domain = "rational";
  auto* check = app.add_subcommand("check-identities",
                                   "verify every identity on seeded random matrices");
  check->add_option("--N", rows, "row count")->required()->check(CLI::Range(1, 7));
  check->add_option("--n", cols, "column count")->required()->check(CLI::Range(1, 7));
  check->add_option("--trials", trials, "matrices per shape")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "master seed");
  check->add_option("--domain", domain, "rational|complex")
      ->check(CLI::IsMember({"rational", "complex"}));

  std::string family, out_path;
  int n_min = 2, n_max = 6, sweep_rows = 0;
  int sweep_trials = 1;
  std::uint64_t sweep_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "bound/error table over a family, as CSV");
  sweep->add_option("--family", family, "derangement|menage|random")->required();
  sweep->add_option("--n-min", n_min, "smallest column count")->required();
  sweep->add_option("--n-max", n_max, "largest column count")->required();
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_option("--N", sweep_rows, "row count (random family)");
  sweep->add_option("--trials", sweep_trials, "matrices per size (random family)");
  sweep->add_option("--seed", sweep_seed, "master seed (random family)");

  std::string fam_name, emit_path;
  int fam_n = 4;
  auto* fam = app.add_subcommand("family", "worked-family counts and reference stats");
  fam->add_option("--name", fam_name, "derangement|menage")->required();
  fam->add_option("--n", fam_n, "size")->required();
  fam->add_option("--emit-matrix", emit_path, "write the matrix as a JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (compute->parsed()) return cmd_compute(input, method, normalized);
    if (bounds->parsed()) return cmd_bounds(input, order, format);
    if (check->parsed()) return cmd_check_identities(rows, cols, trials, seed, domain);
    if (sweep->parsed()) {
      return cmd_sweep(family, n_min, n_max, out_path, sweep_rows, sweep_trials,
                       sweep_seed);
    }
    if (fam->parsed()) return cmd_family(fam_name, fam_n, emit_path);
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
