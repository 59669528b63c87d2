#pragma once

// File formats and corpus drivers behind the command-line tool: the JSON
// matrix document, the versioned sweep CSV, and the randomized identity
// suite. This is the only layer that touches serialization.

#include <json.hpp>

#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permlab/bounds.hpp"
#include "permlab/errors.hpp"
#include "permlab/families.hpp"
#include "permlab/identities.hpp"

namespace permlab {

// ---------------------------------------------------------------------------
// scalar formatting

/// Exact lowest-terms rational, "p" or "p/q" with q > 0.
inline std::string format_rational(const Rational& q) { return q.get_str(); }

/// Decimal with 17 significant digits ('.' separator, no locale).
inline std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

/// Extended real: "inf" for infinity, otherwise 17 significant digits.
inline std::string format_ext(const ExtReal& v) {
  return v.is_inf() ? "inf" : format_double17(v.value());
}

/// Optional extended real: inapplicable serializes as the empty cell.
inline std::string format_opt_ext(const std::optional<ExtReal>& v) {
  return v ? format_ext(*v) : std::string();
}

// ---------------------------------------------------------------------------
// matrix files

struct MatrixDocument {
  ScalarKind kind = ScalarKind::rational;
  MatrixVariant matrix{RectMatrix<Rational>(1, 1)};
};

namespace detail {

inline Rational parse_rational_entry(const std::string& text, int row, int col) {
  auto fail = [&](const char* why) -> Rational {
    std::ostringstream os;
    os << "entry at row " << (row + 1) << ", col " << (col + 1) << ": " << why
       << " (got \"" << text << "\")";
    throw parse_error(os.str());
  };
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) return fail("empty rational");
  std::size_t slash = s.find('/');
  mpz_class num, den(1);
  std::string num_part = slash == std::string::npos ? s : s.substr(0, slash);
  if (!num_part.empty() && num_part.front() == '+') num_part.erase(0, 1);
  if (num.set_str(num_part, 10) != 0) return fail("bad numerator");
  if (slash != std::string::npos) {
    std::string den_part = s.substr(slash + 1);
    if (den.set_str(den_part, 10) != 0 || den_part.empty() ||
        den_part.front() == '-' || den_part.front() == '+') {
      return fail("denominator must be a positive integer");
    }
    if (den == 0) return fail("denominator must be nonzero");
  }
  return make_ratio(num, den);
}

}  // namespace detail

inline MatrixDocument parse_matrix_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw parse_error("matrix file must be a JSON object");
  for (const char* key : {"scalar", "rows", "cols", "entries"}) {
    if (!doc.contains(key)) {
      throw parse_error(std::string("missing field \"") + key + "\"");
    }
  }
  std::string scalar = doc["scalar"].get<std::string>();
  if (scalar != "rational" && scalar != "complex") {
    throw parse_error("scalar must be \"rational\" or \"complex\"");
  }
  if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer()) {
    throw parse_error("rows/cols must be integers");
  }
  int rows = doc["rows"].get<int>();
  int cols = doc["cols"].get<int>();
  if (cols < 1 || rows < cols) {
    throw parse_error("need 1 <= cols <= rows");
  }
  const auto& entries = doc["entries"];
  if (!entries.is_array() || static_cast<int>(entries.size()) != rows) {
    throw parse_error("entries must be an array with one row per matrix row");
  }

  MatrixDocument out;
  if (scalar == "rational") {
    out.kind = ScalarKind::rational;
    RectMatrix<Rational> z(rows, cols);
    for (int j = 0; j < rows; ++j) {
      const auto& row = entries[static_cast<std::size_t>(j)];
      if (!row.is_array() || static_cast<int>(row.size()) != cols) {
        std::ostringstream os;
        os << "row " << (j + 1) << ": expected " << cols << " entries";
        throw parse_error(os.str());
      }
      for (int r = 0; r < cols; ++r) {
        const auto& cell = row[static_cast<std::size_t>(r)];
        if (!cell.is_string()) {
          std::ostringstream os;
          os << "entry at row " << (j + 1) << ", col " << (r + 1)
             << ": rational entries are strings \"p/q\"";
          throw parse_error(os.str());
        }
        z(j, r) = detail::parse_rational_entry(cell.get<std::string>(), j, r);
      }
    }
    out.matrix = std::move(z);
  } else {
    out.kind = ScalarKind::complex_f64;
    RectMatrix<Complex> z(rows, cols);
    for (int j = 0; j < rows; ++j) {
      const auto& row = entries[static_cast<std::size_t>(j)];
      if (!row.is_array() || static_cast<int>(row.size()) != cols) {
        std::ostringstream os;
        os << "row " << (j + 1) << ": expected " << cols << " entries";
        throw parse_error(os.str());
      }
      for (int r = 0; r < cols; ++r) {
        const auto& cell = row[static_cast<std::size_t>(r)];
        if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
            !cell[1].is_number()) {
          std::ostringstream os;
          os << "entry at row " << (j + 1) << ", col " << (r + 1)
             << ": complex entries are [re, im] number pairs";
          throw parse_error(os.str());
        }
        z(j, r) = Complex(cell[0].get<double>(), cell[1].get<double>());
      }
    }
    out.matrix = std::move(z);
  }
  return out;
}

inline MatrixDocument read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_json(buf.str());
}

inline std::string matrix_to_json(const MatrixDocument& doc) {
  nlohmann::json out;
  if (doc.kind == ScalarKind::rational) {
    const auto& z = std::get<RectMatrix<Rational>>(doc.matrix);
    out["scalar"] = "rational";
    out["rows"] = z.rows();
    out["cols"] = z.cols();
    nlohmann::json rows = nlohmann::json::array();
    for (int j = 0; j < z.rows(); ++j) {
      nlohmann::json row = nlohmann::json::array();
      for (int r = 0; r < z.cols(); ++r) row.push_back(format_rational(z(j, r)));
      rows.push_back(std::move(row));
    }
    out["entries"] = std::move(rows);
  } else {
    const auto& z = std::get<RectMatrix<Complex>>(doc.matrix);
    out["scalar"] = "complex";
    out["rows"] = z.rows();
    out["cols"] = z.cols();
    nlohmann::json rows = nlohmann::json::array();
    for (int j = 0; j < z.rows(); ++j) {
      nlohmann::json row = nlohmann::json::array();
      for (int r = 0; r < z.cols(); ++r) {
        row.push_back(nlohmann::json::array({z(j, r).real(), z(j, r).imag()}));
      }
      rows.push_back(std::move(row));
    }
    out["entries"] = std::move(rows);
  }
  return out.dump(1) + "\n";
}

inline void write_matrix_file(const std::string& path, const MatrixDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot write " + path);
  out << matrix_to_json(doc);
}

// ---------------------------------------------------------------------------
// sweep CSV

inline constexpr const char* kCsvVersionLine = "# permlab-csv-v1";

inline const std::vector<std::string>& sweep_csv_fields() {
  static const std::vector<std::string> fields = {
      "family", "n", "N", "norm_perm_re", "norm_perm_im", "h1", "h2", "err1",
      "err2", "bound_7465283", "bound_7465284", "bound_739065", "bound_514385",
      "bound_627867", "bound_bobkov16", "bound_roos357", "bound_roos_halfgamma",
      "bound_5196573", "bound_4176439", "theta2", "theta3", "theta4", "alpha",
      "beta", "gamma1", "kappa2", "kappa_tilde"};
  return fields;
}

inline std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

inline std::string sweep_csv_header() { return csv_join(sweep_csv_fields()); }

/// One CSV row from a bound report. The approximants of complex matrices are
/// serialized by modulus (the normalized permanent keeps both components).
inline std::string sweep_csv_row(const std::string& family, const BoundReport& rep) {
  auto opt_double = [](const std::optional<double>& v) {
    return v ? format_double17(*v) : std::string();
  };
  std::vector<std::string> cells;
  cells.push_back(family);
  cells.push_back(std::to_string(rep.stats.cols));
  cells.push_back(std::to_string(rep.stats.rows));
  cells.push_back(rep.norm_perm ? format_double17(rep.norm_perm->real()) : std::string());
  cells.push_back(rep.norm_perm ? format_double17(rep.norm_perm->imag()) : std::string());
  cells.push_back(opt_double(rep.h1_abs));
  cells.push_back(opt_double(rep.h2_abs));
  cells.push_back(format_opt_ext(rep.actual_error_first));
  cells.push_back(format_opt_ext(rep.actual_error_second));
  if (rep.first) {
    cells.push_back(format_ext(rep.first->bound_7465283));
    cells.push_back(format_opt_ext(rep.first->bound_7465284));
    cells.push_back(format_opt_ext(rep.first->bound_739065));
    cells.push_back(format_opt_ext(rep.first->bound_514385));
    cells.push_back(format_opt_ext(rep.first->bound_627867));
    cells.push_back(format_opt_ext(rep.first->bound_bobkov16));
    cells.push_back(format_opt_ext(rep.first->bound_roos357));
    cells.push_back(format_opt_ext(rep.first->bound_roos_halfgamma));
  } else {
    for (int i = 0; i < 8; ++i) cells.emplace_back();
  }
  if (rep.second) {
    cells.push_back(format_ext(rep.second->bound_5196573));
    cells.push_back(format_opt_ext(rep.second->bound_4176439));
  } else {
    for (int i = 0; i < 2; ++i) cells.emplace_back();
  }
  cells.push_back(format_ext(rep.stats.theta2));
  cells.push_back(format_ext(rep.stats.theta3));
  cells.push_back(format_ext(rep.stats.theta4));
  cells.push_back(format_ext(rep.stats.alpha));
  cells.push_back(format_ext(rep.stats.beta));
  cells.push_back(format_ext(rep.stats.gamma(1.0)));
  cells.push_back(format_ext(rep.stats.kappa2));
  cells.push_back(format_opt_ext(rep.stats.kappa_tilde));
  return csv_join(cells);
}

// ---------------------------------------------------------------------------
// identity suite

struct SuiteOptions {
  int rows = 4;
  int cols = 3;
  int trials = 50;
  std::uint64_t seed = 0;
  ScalarKind domain = ScalarKind::rational;
  double rel_tol = 1e-9;
  long den_bound = 10;
  int chain_orders = 3;  // random chain permutations beyond the identity
  int threads = 1;
};

struct CheckerTally {
  std::string id;
  int passed = 0;
  int total = 0;
};

struct SuiteResult {
  std::vector<CheckerTally> tallies;  // fixed checker order
  std::vector<std::string> failures;  // one line per failed check
  bool all_passed() const { return failures.empty(); }
};

namespace detail {

inline std::vector<int> sample_subset(SplitMix& rng, std::span<const int> pool, int size) {
  std::vector<int> scratch(pool.begin(), pool.end());
  for (int i = 0; i < size; ++i) {
    std::size_t pick = static_cast<std::size_t>(
        rng.next_range(static_cast<long>(i), static_cast<long>(scratch.size()) - 1));
    std::swap(scratch[static_cast<std::size_t>(i)], scratch[pick]);
  }
  std::vector<int> out(scratch.begin(), scratch.begin() + size);
  std::sort(out.begin(), out.end());
  return out;
}

struct TrialOutcome {
  std::vector<std::pair<std::string, bool>> checks;
  std::uint64_t seed = 0;
};

template <class S>
RectMatrix<S> suite_matrix(int rows, int cols, std::uint64_t seed, long den_bound);

template <>
inline RectMatrix<Rational> suite_matrix<Rational>(int rows, int cols,
                                                   std::uint64_t seed, long den_bound) {
  return random_rational_matrix(rows, cols, seed, den_bound);
}

template <>
inline RectMatrix<Complex> suite_matrix<Complex>(int rows, int cols,
                                                 std::uint64_t seed, long /*den*/) {
  return random_unit_disc_matrix(rows, cols, seed);
}

template <class S>
TrialOutcome run_trial(const SuiteOptions& opt, int trial) {
  TrialOutcome out;
  out.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(trial));
  RectMatrix<S> z = suite_matrix<S>(opt.rows, opt.cols, out.seed, opt.den_bound);
  SplitMix rng(derive_seed(out.seed, 0x9A7A));
  const int N = opt.rows;
  const int n = opt.cols;
  double tol = opt.rel_tol;
  auto record = [&](const IdentityReport<S>& rep) {
    out.checks.emplace_back(rep.id, rep.equal);
  };

  std::vector<int> all_cols;
  for (int r = 0; r < n; ++r) all_cols.push_back(r);

  // product transfer: random r and disjoint-from-r subsets (size capped so
  // the doubly constrained sums stay affordable at the largest shapes)
  {
    int r = static_cast<int>(rng.next_range(0, n - 1));
    std::vector<int> pool;
    for (int c = 0; c < n; ++c) {
      if (c != r) pool.push_back(c);
    }
    int cap = std::min<int>(3, static_cast<int>(pool.size()));
    auto setR = sample_subset(rng, pool, static_cast<int>(rng.next_range(0, cap)));
    auto setS = sample_subset(rng, pool, static_cast<int>(rng.next_range(0, cap)));
    record(check_product_transfer<S>(z, setR, setS, r, tol));
  }

  // value-list identities on column 0
  {
    std::vector<S> values;
    for (int j = 0; j < N; ++j) values.push_back(z(j, 0));
    int a = static_cast<int>(rng.next_range(0, N));
    int b = static_cast<int>(rng.next_range(0, N));
    record(check_dougall_esp<S>(values, a, b, tol));
    record(check_esp_expansion<S>(values, n, tol));
    if (n >= 2) record(check_esp_second_order<S>(values, n, tol));
  }

  // chain step with a random base subset
  {
    int r = static_cast<int>(rng.next_range(0, n - 1));
    std::vector<int> pool;
    for (int c = 0; c < n; ++c) {
      if (c != r) pool.push_back(c);
    }
    auto setR = sample_subset(
        rng, pool, static_cast<int>(rng.next_range(0, static_cast<long>(pool.size()))));
    record(check_chain_step<S>(z, setR, r, tol));
  }

  // first-order expansion: identity chain, random chains, both other forms
  record(check_first_order<S>(z, FirstOrderVariant::chain, {}, tol));
  for (int c = 0; c < opt.chain_orders; ++c) {
    std::vector<int> perm(all_cols);
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::size_t pick = static_cast<std::size_t>(rng.next_range(0, static_cast<long>(i) - 1));
      std::swap(perm[i - 1], perm[pick]);
    }
    record(check_first_order<S>(z, FirstOrderVariant::chain, perm, tol));
  }
  record(check_first_order<S>(z, FirstOrderVariant::symmetric, {}, tol));
  record(check_first_order<S>(z, FirstOrderVariant::grouped, {}, tol));

  if (n >= 3) {
    auto rst = sample_subset(rng, all_cols, 3);
    std::vector<int> pool;
    for (int c = 0; c < n; ++c) {
      if (std::find(rst.begin(), rst.end(), c) == rst.end()) pool.push_back(c);
    }
    int cap = std::min<int>({2, n - 3, static_cast<int>(pool.size())});
    auto setR = sample_subset(rng, pool, static_cast<int>(rng.next_range(0, cap)));
    record(check_difference_lemma<S>(z, setR, rst[0], rst[1], rst[2], tol));
  }

  if (n >= 2) record(check_second_order<S>(z, tol));
  record(check_ryser_rectangular<S>(z, tol));

  if constexpr (scalar_traits<S>::is_exact) {
    auto dec = decreasing_columns_matrix(N, n, derive_seed(out.seed, 0xDEC),
                                         opt.den_bound);
    record(check_monotone_column_signs(dec));
  }
  return out;
}

}  // namespace detail

/// Runs every applicable checker on `trials` seeded random matrices of the
/// given shape. Deterministic for a fixed seed, also across thread counts:
/// per-trial seeds depend only on the trial index and results are merged in
/// trial order.
inline SuiteResult run_identity_suite(const SuiteOptions& opt) {
  if (opt.cols < 1 || opt.cols > opt.rows) {
    throw std::invalid_argument("run_identity_suite: need 1 <= cols <= rows");
  }
  std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(opt.trials));
  auto work = [&](int trial) {
    if (opt.domain == ScalarKind::rational) {
      return detail::run_trial<Rational>(opt, trial);
    }
    return detail::run_trial<Complex>(opt, trial);
  };
  int threads = std::max(1, opt.threads);
  if (threads == 1 || opt.trials <= 1) {
    for (int t = 0; t < opt.trials; ++t) outcomes[static_cast<std::size_t>(t)] = work(t);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w) {
      futs.push_back(std::async(std::launch::async, [&]() {
        while (true) {
          int t = next.fetch_add(1);
          if (t >= opt.trials) break;
          outcomes[static_cast<std::size_t>(t)] = work(t);
        }
      }));
    }
    for (auto& f : futs) f.get();
  }

  SuiteResult res;
  auto tally_of = [&](const std::string& id) -> CheckerTally& {
    for (auto& t : res.tallies) {
      if (t.id == id) return t;
    }
    res.tallies.push_back(CheckerTally{id, 0, 0});
    return res.tallies.back();
  };
  for (int t = 0; t < opt.trials; ++t) {
    const auto& oc = outcomes[static_cast<std::size_t>(t)];
    for (const auto& [id, ok] : oc.checks) {
      CheckerTally& tl = tally_of(id);
      ++tl.total;
      if (ok) {
        ++tl.passed;
      } else {
        std::ostringstream os;
        os << "FAIL " << id << " trial=" << t << " seed=" << oc.seed;
        res.failures.push_back(os.str());
      }
    }
  }
  return res;
}

}  // namespace permlab
