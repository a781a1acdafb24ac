#include "ungar/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ungar/chain.hpp"
#include "ungar/errors.hpp"
#include "ungar/lattices.hpp"
#include "ungar/percolation.hpp"
#include "ungar/skyline.hpp"

namespace ungar::cli {

namespace {

struct Config {
  std::string lattice = "sn";
  std::size_t n = 3;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double p = 0.5;
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
  std::size_t cap_states = default_state_cap;
  std::size_t cap_chains = default_chain_cap;
  double c1 = 10.0;
  std::string poset_path;
  unsigned threads = 1;
  std::size_t max_steps = 0;
  bool per_element = false;
  std::string survival_path;
  std::string trace_path;
  double window_coefficient = 201.0;
  std::string values;
  bool tail = false;
  std::size_t k = 0;
  double t = 0.0;
};

std::string format_number(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12) << x;
  return s.str();
}

std::string format_cell(const nlohmann::json& cell) {
  if (cell.is_null()) return "";
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_number_float()) return format_number(cell.get<double>());
  return cell.dump();
}

/// Rows of typed cells, written as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<nlohmann::json>> rows;

  void write(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      nlohmann::json doc = nlohmann::json::array();
      for (const auto& row : rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = row[c];
        doc.push_back(obj);
      }
      out << doc.dump(2) << '\n';
      return;
    }
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
      out << '\n';
    }
  }
};

using AnyLattice =
    std::variant<SymmetricGroupLattice, TamariForestLattice, TamariPermutationLattice, IdealLattice, ExplicitLattice>;

FinitePoset load_poset(const std::string& path) {
  if (path.empty()) throw invalid_input("--poset FILE is required for this lattice");
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot read poset file " + path);
  try {
    return poset_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("malformed poset file: ") + e.what());
  }
}

std::size_t grid_rows(const Config& c) { return c.rows ? c.rows : c.n; }
std::size_t grid_cols(const Config& c) { return c.cols ? c.cols : c.n; }

AnyLattice make_lattice(const Config& c) {
  if (c.lattice == "sn") return SymmetricGroupLattice(c.n);
  if (c.lattice == "tamari") return TamariForestLattice(c.n);
  if (c.lattice == "tamari312") return TamariPermutationLattice(c.n);
  if (c.lattice == "grid") return IdealLattice(make_grid(grid_rows(c), grid_cols(c)).poset);
  if (c.lattice == "ideal") return IdealLattice(load_poset(c.poset_path));
  if (c.lattice == "chain") return ExplicitLattice::chain(c.n);
  throw invalid_input("unknown lattice " + c.lattice);
}

std::string backend_label(const Config& c) {
  if (c.lattice == "grid") return "grid-" + std::to_string(grid_rows(c)) + "x" + std::to_string(grid_cols(c));
  return c.lattice;
}

/// Size column: n for sn/tamari/chain, element count of P for ideal lattices.
std::size_t size_label(const Config& c, const AnyLattice& lattice) {
  if (const auto* ideal = std::get_if<IdealLattice>(&lattice)) return ideal->poset().size();
  return c.n;
}

double sn_coefficient(double p) { return (1.0 + std::sqrt(1.0 - p)) / p; }

double tamari_coefficient(double p) {
  const double z = zeta_limits(p).plus;
  return 2.0 / p * (std::sqrt(z * (1.0 + z)) - z);
}

void validate(const Config& c) {
  require_probability(c.p);
  if (c.reps == 0) throw invalid_input("--reps must be at least 1");
  if (c.cap_states == 0 || c.cap_chains == 0) throw invalid_input("caps must be positive");
  if (c.format != "csv" && c.format != "json") throw invalid_input("--format must be csv or json");
}

void run_exact(const Config& c, std::ostream& out) {
  const auto lattice = make_lattice(c);
  Table table;
  std::visit(
      [&](const auto& lat) {
        const auto result = exact_expected_absorption(lat, c.p, c.cap_states);
        if (c.per_element) {
          table.header = {"state", "expected"};
          for (std::size_t k = 0; k < result.states.size(); ++k) {
            table.rows.push_back({lat.to_json(result.states[k]).dump(), result.expected[k]});
          }
        } else {
          table.header = {"backend", "n", "p", "states", "expected"};
          table.rows.push_back(
              {backend_label(c), size_label(c, lattice), c.p, result.states.size(), result.start_value});
        }
      },
      lattice);
  table.write(out, c.format);
}

void write_survival(const std::string& path, const std::vector<double>& samples) {
  std::ofstream file(path);
  if (!file) throw invalid_input("cannot write " + path);
  file << "t,survival\n";
  const auto curve = survival_function(samples);
  for (std::size_t t = 0; t < curve.size(); ++t) file << t << ',' << format_number(curve[t]) << '\n';
}

Table summary_table(const Config& c, const std::string& backend, std::size_t size, const MonteCarloResult& mc) {
  Table table;
  table.header = {"backend", "n", "p", "seed", "reps", "mean", "stderr", "min", "max"};
  const auto& s = mc.stats;
  table.rows.push_back({backend, size, c.p, c.seed, c.reps, s.mean(), s.stderr_mean(), s.min(), s.max()});
  return table;
}

MonteCarloOptions mc_options(const Config& c) {
  MonteCarloOptions options;
  options.reps = c.reps;
  options.seed = c.seed;
  options.threads = c.threads;
  options.max_steps = c.max_steps;
  return options;
}

void run_simulate(const Config& c, std::ostream& out) {
  const auto lattice = make_lattice(c);
  const auto mc = std::visit([&](const auto& lat) { return monte_carlo_expectation(lat, c.p, mc_options(c)); }, lattice);
  auto table = summary_table(c, backend_label(c), size_label(c, lattice), mc);
  // Asymptotic coefficients are reported next to the observed mean / n, never asserted.
  nlohmann::json coefficient;
  if (c.lattice == "sn") coefficient = sn_coefficient(c.p);
  if ((c.lattice == "tamari" || c.lattice == "tamari312") && c.p < 1.0) coefficient = tamari_coefficient(c.p);
  const double per_n = mc.stats.mean() / static_cast<double>(c.n);
  table.header.insert(table.header.end(), {"censored", "mean_over_n", "coefficient", "ratio"});
  table.rows[0].push_back(mc.censored);
  table.rows[0].push_back(per_n);
  table.rows[0].push_back(coefficient);
  table.rows[0].push_back(coefficient.is_null() ? nlohmann::json() : nlohmann::json(per_n / coefficient.get<double>()));
  table.write(out, c.format);
  if (!c.survival_path.empty()) write_survival(c.survival_path, mc.samples);
}

void run_lpp(const Config& c, std::ostream& out) {
  FinitePoset poset;
  std::string backend;
  if (c.lattice == "grid") {
    poset = make_grid(grid_rows(c), grid_cols(c)).poset;
    backend = "lpp-" + backend_label(c);
  } else if (c.lattice == "ideal") {
    poset = load_poset(c.poset_path);
    backend = "lpp-poset";
  } else {
    throw invalid_input("lpp needs --lattice grid or --lattice ideal");
  }
  const auto mc = monte_carlo(
      [&](Rng& rng) -> std::optional<double> { return static_cast<double>(lpp_sample(poset, c.p, rng).total); },
      mc_options(c));
  summary_table(c, backend, poset.size(), mc).write(out, c.format);
  if (!c.survival_path.empty()) write_survival(c.survival_path, mc.samples);
}

void run_tasep(const Config& c, std::ostream& out) {
  const std::size_t rows = grid_rows(c);
  const std::size_t cols = grid_cols(c);
  const auto mc = monte_carlo(
      [&](Rng& rng) -> std::optional<double> { return static_cast<double>(tasep_run(rows, cols, c.p, rng)); },
      mc_options(c));
  summary_table(c, "tasep-" + std::to_string(rows) + "x" + std::to_string(cols), rows * cols, mc).write(out, c.format);
  if (!c.trace_path.empty()) {
    std::ofstream trace(c.trace_path);
    if (!trace) throw invalid_input("cannot write " + c.trace_path);
    for (const auto& diagram : tasep_window_trajectory(rows, cols, c.p, c.seed, rows, cols)) {
      trace << young_diagram_to_json(diagram).dump() << '\n';
    }
  }
}

void run_fluctuation(const Config& c, std::ostream& out) {
  const auto row = fluctuation_study(grid_rows(c), grid_cols(c), c.p, c.reps, c.seed, c.threads);
  Table table;
  table.header = {"n", "m", "p", "reps", "mean_T", "Phi", "eta", "mean_rescaled", "sd_rescaled"};
  table.rows.push_back({row.n, row.m, row.p, row.reps, row.mean_t, row.phi, row.eta, row.mean_rescaled, row.sd_rescaled});
  if (c.tail) {
    table.header.insert(table.header.end(), {"tail_t", "empirical_tail", "asymptotic_tail"});
    table.rows[0].insert(table.rows[0].end(), {row.tail_t, row.empirical_tail, row.asymptotic_tail});
  }
  table.write(out, c.format);
}

std::vector<std::uint64_t> parse_values(const std::string& text) {
  std::vector<std::uint64_t> values;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(token, &used);
      if (used != token.size() || v < 1) throw invalid_input("--values entries must be positive integers");
      values.push_back(static_cast<std::uint64_t>(v));
    } catch (const std::logic_error&) {
      throw invalid_input("--values entries must be positive integers");
    }
  }
  return values;
}

void run_skyline(const Config& c, std::ostream& out) {
  if (!c.values.empty()) {
    const auto values = parse_values(c.values);
    const std::size_t n = c.n > values.size() ? c.n : values.size();
    const auto sky = skyline(values);
    nlohmann::json doc{{"n", n}, {"skyline", two_rowed_to_json(sky)}, {"childlike", is_childlike(sky, n)}};
    if (is_childlike(sky, n)) {
      doc["summary"] = two_rowed_to_json(summarize(sky, n).array);
      doc["good"] = is_good(sky, n);
    }
    out << doc.dump() << '\n';
    return;
  }
  Table table;
  table.header = {"seed", "n", "p", "childlike", "good", "degenerate", "skyline_length", "summary_length", "absorption"};
  for (std::size_t r = 0; r < c.reps; ++r) {
    Algorithm1Config config;
    config.n = c.n;
    config.p = c.p;
    config.seed = derive_seed(c.seed, {r});
    config.window_coefficient = c.window_coefficient;
    const auto result = algorithm1_run(config);
    if (c.format == "json") {
      out << algorithm1_to_json(result).dump() << '\n';
    } else {
      table.rows.push_back({result.seed, result.n, result.p, result.childlike, result.good, result.degenerate,
                            result.skyline.size(), result.summary.size() ? result.summary.size() - 1 : 0,
                            result.absorption});
    }
  }
  if (c.format != "json") table.write(out, c.format);
}

void run_zeta(const Config& c, std::ostream& out) {
  const auto estimate = zeta_estimate(c.p, c.n, c.reps, c.seed);
  const auto limits = zeta_limits(c.p);
  Table table;
  table.header = {"p", "n", "trials", "zeta_hat", "stderr", "upsilon", "zeta_minus", "zeta_plus", "lower_bound"};
  table.rows.push_back({c.p, c.n, c.reps, estimate.mean(), estimate.stderr_mean(),
                        upsilon(c.p, static_cast<double>(c.n)), limits.minus, limits.plus, zeta_lower_bound(c.p)});
  table.write(out, c.format);
}

void run_bounds(const Config& c, std::ostream& out) {
  const double n = static_cast<double>(c.n);
  const auto limits = zeta_limits(c.p);
  Table table;
  table.header = {"p", "n", "c1", "f", "tamari_lower_bound", "sn_coefficient", "tamari_coefficient", "zeta_minus",
                  "zeta_plus"};
  table.rows.push_back({c.p, c.n, c.c1, lower_bound_f(n, c.p, c.c1), tamari_lower_bound(n, c.p, limits.minus, c.c1),
                        sn_coefficient(c.p), c.p < 1.0 ? nlohmann::json(tamari_coefficient(c.p)) : nlohmann::json(),
                        limits.minus, limits.plus});
  if (c.k > 0 && c.t > 0.0) {
    table.header.insert(table.header.end(), {"k", "t", "upper_tail_bound", "lower_tail_bound"});
    nlohmann::json lower;
    try {
      lower = geometric_tail_bound(c.k, c.p, c.t, TailSide::lower);
    } catch (const domain_error&) {
      // Outside the lower bound's range; left empty.
    }
    table.rows[0].insert(table.rows[0].end(), {c.k, c.t, geometric_tail_bound(c.k, c.p, c.t, TailSide::upper), lower});
  }
  table.write(out, c.format);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  if (const char* env = std::getenv("UNGAR_LAB_SEED")) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::logic_error&) {
      err << "error: UNGAR_LAB_SEED must be an unsigned integer\n";
      return exit_config_error;
    }
  }

  CLI::App app{"Ungarian Markov chains: exact solves, simulation, percolation couplings, skyline analysis"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", c.p, "selection probability in (0, 1]");
    sub->add_option("--seed", c.seed, "RNG seed (default: UNGAR_LAB_SEED or 0)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out_path, "write results to this file");
  };
  auto lattice_opts = [&](CLI::App* sub) {
    sub->add_option("--lattice", c.lattice, "sn, tamari, tamari312, grid, ideal, or chain")
        ->check(CLI::IsMember({"sn", "tamari", "tamari312", "grid", "ideal", "chain"}));
    sub->add_option("--n", c.n, "size (permutation length, forest size, chain length)");
    sub->add_option("--rows", c.rows, "grid rows");
    sub->add_option("--cols", c.cols, "grid columns");
    sub->add_option("--poset", c.poset_path, "poset JSON file for --lattice ideal");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--reps", c.reps, "number of replicas");
    sub->add_option("--threads", c.threads, "worker threads (results do not depend on it)");
  };

  auto* exact = app.add_subcommand("exact", "exact expected absorption time");
  common(exact);
  lattice_opts(exact);
  exact->add_option("--cap-states", c.cap_states, "state enumeration cap");
  exact->add_option("--cap-chains", c.cap_chains, "maximal chain enumeration cap");
  exact->add_flag("--per-element", c.per_element, "print E(x) for every reachable state");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo absorption times");
  common(simulate);
  lattice_opts(simulate);
  sampling(simulate);
  simulate->add_option("--max-steps", c.max_steps, "per-replica step limit (0: none)");
  simulate->add_option("--survival", c.survival_path, "write the empirical survival curve as CSV");

  auto* lpp = app.add_subcommand("lpp", "last-passage percolation times with geometric weights");
  common(lpp);
  lattice_opts(lpp);
  sampling(lpp);
  lpp->add_option("--survival", c.survival_path, "write the empirical survival curve as CSV");

  auto* tasep = app.add_subcommand("tasep", "multicorner growth absorption times");
  common(tasep);
  sampling(tasep);
  tasep->add_option("--n", c.n, "window size when --rows/--cols are absent");
  tasep->add_option("--rows", c.rows, "window rows");
  tasep->add_option("--cols", c.cols, "window columns");
  tasep->add_option("--trace", c.trace_path, "write one trajectory of Young diagrams as JSONL");

  auto* fluctuation = app.add_subcommand("fluctuation", "rescaled last-passage statistics on R_{n,m}");
  common(fluctuation);
  sampling(fluctuation);
  fluctuation->add_option("--n", c.n, "grid size when --rows/--cols are absent");
  fluctuation->add_option("--rows", c.rows, "grid rows");
  fluctuation->add_option("--cols", c.cols, "grid columns");
  fluctuation->add_flag("--tail", c.tail, "add the upper-tail diagnostic columns");

  auto* sky = app.add_subcommand("skyline", "skyline arrays and multi-stream Tamari runs");
  common(sky);
  sampling(sky);
  sky->add_option("--n", c.n, "number of vertices");
  sky->add_option("--values", c.values, "comma-separated first-operation times; prints their skyline");
  sky->add_option("--window-coefficient", c.window_coefficient, "constant in the window indices");
  sky->add_option("--c1", c.c1, "constant C1 of the lower-bound function");

  auto* zeta = app.add_subcommand("zeta", "unique-maximum probability and its limit function");
  common(zeta);
  sampling(zeta);
  zeta->add_option("--n", c.n, "number of geometric variables");

  auto* bounds = app.add_subcommand("bounds", "closed-form bounds and coefficients");
  common(bounds);
  bounds->add_option("--n", c.n, "size");
  bounds->add_option("--c1", c.c1, "constant C1 of the lower-bound function");
  bounds->add_option("--k", c.k, "number of geometric summands for the tail bounds");
  bounds->add_option("--t", c.t, "deviation parameter for the tail bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config_error;
  }

  try {
    validate(c);
    std::ofstream file;
    if (!c.out_path.empty()) {
      file.open(c.out_path);
      if (!file) throw invalid_input("cannot write " + c.out_path);
    }
    std::ostream& sink = c.out_path.empty() ? out : file;
    if (exact->parsed()) run_exact(c, sink);
    if (simulate->parsed()) run_simulate(c, sink);
    if (lpp->parsed()) run_lpp(c, sink);
    if (tasep->parsed()) run_tasep(c, sink);
    if (fluctuation->parsed()) run_fluctuation(c, sink);
    if (sky->parsed()) run_skyline(c, sink);
    if (zeta->parsed()) run_zeta(c, sink);
    if (bounds->parsed()) run_bounds(c, sink);
  } catch (const cap_exceeded& e) {
    err << "error: " << e.what() << '\n';
    return exit_cap_exceeded;
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return exit_invariant_violation;
  }
  return exit_ok;
}

}  // namespace ungar::cli
