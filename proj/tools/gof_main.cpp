// Command-line front end: run tests on data files, compute exact
// p-values and thresholds, emit confidence-band tables and simulation
// CSVs.
//
// Exit codes: 0 success; 2 input error (unreadable file, bad rows,
// bad arguments); 3 numerical failure inside the engine.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gof/bands.hpp"
#include "gof/csv.hpp"
#include "gof/engine.hpp"
#include "gof/sim.hpp"
#include "gof/special.hpp"
#include "gof/stats.hpp"

namespace {

using namespace gof;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One numeric column; '#' starts a comment line; blank lines skipped;
// commas treated as whitespace so simple CSVs pass through.
std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  std::vector<double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::exception&) {
        throw InputError("line " + std::to_string(lineno) +
                         ": not a number: '" + tok + "'");
      }
    }
  }
  if (out.empty()) throw InputError("no data in " + path);
  return out;
}

NullModel parse_null(const std::string& spec) {
  if (spec == "standard-normal" || spec == "normal")
    return NullModel::standard_normal();
  if (spec == "uniform") return NullModel::uniform();
  if (spec.rfind("table:", 0) == 0) {
    const std::string path = spec.substr(6);
    std::ifstream in(path);
    if (!in) throw InputError("cannot open null table: " + path);
    std::vector<double> xs, Fs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
      for (char& ch : line)
        if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
      std::istringstream ss(line);
      double x, F;
      if (ss >> x >> F) {
        xs.push_back(x);
        Fs.push_back(F);
      } else if (!line.empty() && line.find_first_not_of(" \r") != std::string::npos) {
        throw InputError("null table line " + std::to_string(lineno) +
                         ": need two numeric columns");
      }
    }
    return NullModel::user_table(std::move(xs), std::move(Fs));
  }
  throw InputError("unknown --null '" + spec +
                   "' (use standard-normal | uniform | table:<path>)");
}

// --output paths are resolved against GOF_OUTPUT_DIR when set.
std::string resolve_output(const std::string& path) {
  const char* dir = std::getenv("GOF_OUTPUT_DIR");
  if (!dir || !*dir || path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

std::ofstream open_output(const std::string& path) {
  const std::string full = resolve_output(path);
  std::ofstream out(full);
  if (!out) throw InputError("cannot open output file: " + full);
  return out;
}

std::vector<sim::TestSpec> parse_tests(const std::vector<std::string>& names,
                                       double alpha0) {
  std::vector<sim::TestSpec> tests;
  for (const auto& n : names) {
    if (n == "lr")
      tests.push_back(sim::TestSpec::lr());
    else if (n == "sum")
      tests.push_back(sim::TestSpec::sum());
    else if (n == "max")
      tests.push_back(sim::TestSpec::max());
    else
      tests.push_back(sim::TestSpec::statistic({parse_statistic(n), alpha0}));
  }
  return tests;
}

int cmd_test(const std::string& input, const std::string& null_spec,
             const std::string& stat_name, double alpha0, double alpha,
             const std::string& output) {
  const auto raw = read_column(input);
  const auto model = parse_null(null_spec);
  const auto sample = transform(raw, model);
  const StatisticKind kind{parse_statistic(stat_name), alpha0};
  const int n = sample.n();

  const double value = evaluate_statistic(sample, kind);
  std::cout << "statistic " << statistic_name(kind.tag) << "\n";
  std::cout << "n " << n << "\n";
  std::cout << "value " << fmt_num(value) << "\n";
  if (sample.has_ties)
    std::cout << "warning ties present in the transformed sample\n";

  std::optional<PValueResult> pv;
  if (is_one_sided(kind.tag)) {
    PValueResult r;
    r.exact_one_sided = one_sided_pvalue(kind, n, value);
    r.method = PValueResult::Method::exact;
    pv = r;
    std::cout << "p_exact_one_sided " << fmt_num(*r.exact_one_sided) << "\n";
  } else if (kind.tag == Statistic::mn) {
    pv = two_sided_pvalue(n, value);
    std::cout << "p_two_sided_lower " << fmt_num(pv->two_sided_lower) << "\n";
    std::cout << "p_two_sided_upper " << fmt_num(pv->two_sided_upper) << "\n";
    std::cout << "p_two_sided_asymptotic " << fmt_num(pv->two_sided_asymptotic)
              << "\n";
  } else {
    std::cout << "p_exact none (no engine path for this statistic)\n";
  }
  if (alpha > 0.0 && pv) {
    const double p = pv->exact_one_sided ? *pv->exact_one_sided
                                         : pv->two_sided_asymptotic;
    std::cout << "reject_at_alpha " << (p <= alpha ? "yes" : "no") << "\n";
  }

  if (!output.empty()) {
    auto out = open_output(output);
    out << "statistic,n,value,p_one_sided,p_two_lower,p_two_upper,p_two_asymptotic,ties\n";
    out << statistic_name(kind.tag) << "," << n << "," << fmt_num(value) << ",";
    out << (pv && pv->exact_one_sided ? fmt_num(*pv->exact_one_sided) : "") << ",";
    if (pv && kind.tag == Statistic::mn) {
      out << fmt_num(pv->two_sided_lower) << "," << fmt_num(pv->two_sided_upper)
          << "," << fmt_num(pv->two_sided_asymptotic) << ",";
    } else {
      out << ",,,";
    }
    out << (sample.has_ties ? 1 : 0) << "\n";
  }
  return 0;
}

int cmd_pvalue(const std::string& stat_name, double alpha0, int n, double value) {
  const StatisticKind kind{parse_statistic(stat_name), alpha0};
  if (kind.tag == Statistic::mn) {
    const auto r = two_sided_pvalue(n, value);
    std::cout << "p_two_sided_lower " << fmt_num(r.two_sided_lower) << "\n";
    std::cout << "p_two_sided_upper " << fmt_num(r.two_sided_upper) << "\n";
    std::cout << "p_two_sided_asymptotic " << fmt_num(r.two_sided_asymptotic)
              << "\n";
  } else {
    std::cout << "p_exact_one_sided "
              << fmt_num(one_sided_pvalue(kind, n, value)) << "\n";
  }
  return 0;
}

int cmd_threshold(const std::string& stat_name, double alpha0, int n, double alpha) {
  const StatisticKind kind{parse_statistic(stat_name), alpha0};
  std::cout << "c_alpha " << fmt_num(find_threshold(kind, n, alpha)) << "\n";
  return 0;
}

int cmd_bands(int n, double alpha, const std::string& null_spec,
              const std::string& output) {
  const auto model = parse_null(null_spec);
  const auto table = confidence_bands(n, alpha, model);
  auto out = open_output(output.empty() ? "bands.csv" : output);
  out << "i,expected,b_i,B_i,x_lower,x_upper\n";
  for (const auto& r : table.rows) {
    out << r.i << "," << fmt_num(r.expected_x) << "," << fmt_num(r.b) << ","
        << fmt_num(r.B) << "," << fmt_num(r.x_lower) << "," << fmt_num(r.x_upper)
        << "\n";
  }
  std::cout << "c_alpha " << fmt_num(table.c_alpha) << "\n";
  std::cout << "coverage_lower " << fmt_num(table.coverage_lower) << "\n";
  std::cout << "coverage_upper " << fmt_num(table.coverage_upper) << "\n";
  return 0;
}

int cmd_sim_power(const std::string& family, const std::vector<double>& grid,
                  double eps, double mu, int n, double alpha, int reps,
                  std::uint64_t seed, const std::vector<std::string>& test_names,
                  double alpha0, const std::string& output) {
  const auto tests = parse_tests(test_names, alpha0);
  auto out = open_output(output.empty() ? "power.csv" : output);
  out << "param,test,power,se\n";
  for (double p : grid) {
    sim::Alternative alt;
    if (family == "mean")
      alt = sim::Alternative::mixture({1.0, p, n});
    else if (family == "variance")
      alt = sim::Alternative::variance(n, p);
    else if (family == "mixture-mu")
      alt = sim::Alternative::mixture({eps, p, n});
    else if (family == "mixture-eps")
      alt = sim::Alternative::mixture({p, mu, n});
    else
      throw InputError("unknown --family '" + family + "'");
    for (size_t j = 0; j < tests.size(); ++j) {
      const auto r = sim::power_estimate(tests[j], alt, alpha, reps,
                                         seed + 1000003 * j);
      out << fmt_num(p) << "," << tests[j].label() << "," << fmt_num(r.power)
          << "," << fmt_num(r.se) << "\n";
    }
  }
  return 0;
}

int cmd_sim_roc(double eps, double mu, int n, int reps, std::uint64_t seed,
                const std::vector<std::string>& test_names, double alpha0,
                const std::string& output) {
  const auto tests = parse_tests(test_names, alpha0);
  const auto curves = sim::roc_curves(tests, {eps, mu, n}, reps, seed);
  auto out = open_output(output.empty() ? "roc.csv" : output);
  out << "test,fpr,tpr\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out << c.test << "," << fmt_num(p.fpr) << "," << fmt_num(p.tpr) << "\n";
  return 0;
}

int cmd_sim_winner(const std::vector<double>& mu_grid,
                   const std::vector<double>& eps_grid, bool scaled, int n,
                   double alpha, int reps, std::uint64_t seed,
                   const std::vector<std::string>& test_names, double alpha0,
                   const std::string& output) {
  sim::SweepGrid grid;
  grid.mu = mu_grid;
  grid.eps = eps_grid;
  grid.scaled = scaled;
  grid.alpha = alpha;
  grid.reps = reps;
  grid.seed = seed;
  const auto tests = parse_tests(test_names, alpha0);
  const auto map = sim::winner_map(grid, n, tests);
  auto out = open_output(output.empty() ? "winner_map.csv" : output);
  out << "mu,eps";
  for (const auto& t : map.tests) out << ",miss_" << t;
  out << ",winner,strong,band_flag\n";
  for (const auto& c : map.cells) {
    out << fmt_num(c.mu) << "," << fmt_num(c.eps);
    for (double m : c.misdetection) out << "," << fmt_num(m);
    out << "," << (c.winner >= 0 ? map.tests[c.winner] : "none") << ","
        << (c.strong ? 1 : 0) << "," << (c.in_band ? 1 : 0) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goodness-of-fit tests with exact p-values for supremum-based "
               "one-sided statistics"};
  app.require_subcommand(1);

  std::string input, output, null_spec = "standard-normal";
  std::string stat_name = "mn";
  double alpha = 0.05, alpha0 = 1.0, value = 0.0, eps = 0.01, mu = 2.0;
  int n = 100, reps = 10000;
  std::uint64_t seed = 1;
  bool full = false;

  auto* t = app.add_subcommand("test", "run a statistic on a data file");
  t->add_option("--input", input, "one numeric column; '#' comments")->required();
  t->add_option("--statistic", stat_name, "statistic name (default mn)");
  t->add_option("--null", null_spec, "standard-normal | uniform | table:<path>");
  t->add_option("--alpha", alpha, "report reject/accept at this level");
  t->add_option("--alpha0", alpha0, "HC truncation fraction");
  t->add_option("--output", output, "also write a one-row CSV");

  auto* p = app.add_subcommand("pvalue", "p-value for an observed value");
  p->add_option("--statistic", stat_name)->required();
  p->add_option("--n", n)->required();
  p->add_option("--value", value)->required();
  p->add_option("--alpha0", alpha0);

  auto* th = app.add_subcommand("threshold", "threshold c with p-value alpha");
  th->add_option("--statistic", stat_name)->required();
  th->add_option("--n", n)->required();
  th->add_option("--alpha", alpha)->required();
  th->add_option("--alpha0", alpha0);

  auto* b = app.add_subcommand("bands", "Q-Q confidence band table (CSV)");
  b->add_option("--n", n)->required();
  b->add_option("--alpha", alpha)->required();
  b->add_option("--null", null_spec);
  b->add_option("--output", output);

  auto* s = app.add_subcommand("simulate", "Monte-Carlo studies");
  s->require_subcommand(1);
  std::vector<std::string> tests{"mn_plus", "hc2004", "sum", "max"};
  std::vector<double> grid, mu_grid, eps_grid;
  std::string family = "mixture-mu";
  bool scaled = false;

  auto* sp = s->add_subcommand("power", "power along a parameter grid");
  sp->add_option("--family", family, "mean | variance | mixture-mu | mixture-eps");
  sp->add_option("--grid", grid, "parameter values")->required()->delimiter(',');
  sp->add_option("--eps", eps, "mixture eps (for mixture-mu)");
  sp->add_option("--mu", mu, "mixture mu (for mixture-eps)");
  sp->add_option("--n", n);
  sp->add_option("--alpha", alpha);
  sp->add_option("--reps", reps);
  sp->add_option("--seed", seed)->required();
  sp->add_option("--tests", tests)->delimiter(',');
  sp->add_option("--alpha0", alpha0);
  sp->add_option("--output", output);

  auto* sr = s->add_subcommand("roc", "ROC curves for a mixture");
  sr->add_option("--eps", eps)->required();
  sr->add_option("--mu", mu)->required();
  sr->add_option("--n", n);
  sr->add_option("--reps", reps);
  sr->add_option("--seed", seed)->required();
  sr->add_option("--tests", tests)->delimiter(',');
  sr->add_option("--alpha0", alpha0);
  sr->add_option("--output", output);
  sr->add_flag("--full", full, "full-scale defaults (n = 10000)");

  auto* sw = s->add_subcommand("winner-map", "winner regions over (mu, eps)");
  sw->add_option("--mu-grid", mu_grid)->required()->delimiter(',');
  sw->add_option("--eps-grid", eps_grid)->required()->delimiter(',');
  sw->add_flag("--scaled", scaled, "grids are (r, beta) instead of (mu, eps)");
  sw->add_option("--n", n);
  sw->add_option("--alpha", alpha);
  sw->add_option("--reps", reps);
  sw->add_option("--seed", seed)->required();
  sw->add_option("--tests", tests)->delimiter(',');
  sw->add_option("--alpha0", alpha0);
  sw->add_option("--output", output);
  sw->add_flag("--full", full, "full-scale defaults (n = 10000)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed())
      return cmd_test(input, null_spec, stat_name, alpha0, alpha, output);
    if (p->parsed()) return cmd_pvalue(stat_name, alpha0, n, value);
    if (th->parsed()) return cmd_threshold(stat_name, alpha0, n, alpha);
    if (b->parsed()) return cmd_bands(n, alpha, null_spec, output);
    if (sp->parsed())
      return cmd_sim_power(family, grid, eps, mu, n, alpha, reps, seed, tests,
                           alpha0, output);
    if (sr->parsed()) {
      if (full && n == 100) n = 10000;
      return cmd_sim_roc(eps, mu, n, reps, seed, tests, alpha0, output);
    }
    if (sw->parsed()) {
      if (full && n == 100) n = 10000;
      return cmd_sim_winner(mu_grid, eps_grid, scaled, n, alpha, reps, seed,
                            tests, alpha0, output);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
