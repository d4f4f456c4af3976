#include "balload/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "balload/allocator.hpp"
#include "balload/bounds.hpp"
#include "balload/densest.hpp"
#include "balload/json_io.hpp"

#ifndef BALLOAD_VERSION
#define BALLOAD_VERSION "unknown"
#endif

namespace balload::cli {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Writes to `path`, or to `fallback` when path is empty or "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

json with_provenance(json body, const json& config) {
  body["config"] = config;
  body["version"] = version();
  return body;
}

void write_csv_header(std::ostream& out, const json& config) {
  out << "# version=" << version() << "\n# config=" << config.dump() << "\n";
}

MultiEdgePolicy parse_policy(const std::string& text) {
  if (text == "remove-all") return MultiEdgePolicy::RemoveAll;
  if (text == "keep-one") return MultiEdgePolicy::KeepOne;
  if (text == "reject") return MultiEdgePolicy::Reject;
  throw UsageError("unknown multi-edge policy '" + text + "'");
}

RdeOptions rde_options(int pool, int samples, double tol, int max_sweeps, int workers) {
  RdeOptions o;
  o.pool_size = pool;
  o.objective_samples = samples;
  o.tol = tol;
  o.max_sweeps = max_sweeps;
  o.workers = workers;
  return o;
}

json rde_config(const RdeOptions& o) {
  return {{"pool", o.pool_size},
          {"samples", o.objective_samples},
          {"batches", o.batches},
          {"rde_tol", o.tol},
          {"max_sweeps", o.max_sweeps},
          {"common_random_numbers", o.common_random_numbers},
          {"workers", o.workers}};
}

DegreeSequence read_degree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  DegreeSequence d;
  std::string token;
  while (in >> token) {
    if (token.front() == '#') {
      std::getline(in, token);
      continue;
    }
    try {
      std::size_t used = 0;
      const int x = std::stoi(token, &used);
      if (used != token.size() || x < 0) throw std::invalid_argument(token);
      d.push_back(x);
    } catch (const std::exception&) {
      throw UsageError("bad degree '" + token + "' in " + path);
    }
  }
  return d;
}

struct Options {
  std::uint64_t seed = 1;
  int workers = 1;

  std::string model;
  int n = 0;
  std::int64_t m = -1;
  std::string out;
  std::string policy = "remove-all";
  std::string graph_model = "pairing";

  std::string graph;
  std::string mode = "exact";
  double eps = 0.0;
  double tol = 1e-8;
  int max_degree = -1;
  int max_sweeps = kDefaultMaxSweeps;
  std::string csv;

  bool brute = false;

  std::string t_grid = "0:3:0.05";
  int pool = 100000;
  int samples = 1000000;
  double rde_tol = 1e-6;
  int rde_max_sweeps = 2000;
  double tol_t = 0.005;
  std::string json_out;
  bool skip_rho = false;

  std::string n_grid = "500,2000,5000";
  int replicates = 10;

  std::string degrees;
  double t = 2.0;
  double theta = 1.0;
  int k_max = 0;
  int mc_samples = 0;
};

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.n < 1) throw UsageError("--n must be >= 1");
  json config = {{"command", "gen"}, {"model", o.model}, {"n", o.n}, {"seed", o.seed},
                 {"policy", o.policy}, {"graph_model", o.graph_model}};
  Graph g;
  if (o.model == "er") {
    if (o.m < 0) throw UsageError("model er needs --m");
    config["m"] = o.m;
    g = erdos_renyi_nm(o.n, o.m, o.seed);
  } else {
    const auto pi = DegreeDistribution::parse(o.model);
    g = generate_graph(pi, o.n, o.seed, parse_graph_model(o.graph_model), parse_policy(o.policy));
  }
  Output dst(o.out, out);
  *dst << "# version=" << version() << "\n# config=" << config.dump() << "\n";
  write_edge_list(*dst, g);
  return kExitOk;
}

int cmd_balance(const Options& o, std::ostream& out) {
  const Graph g = load_edge_list_file(o.graph);
  json config = {{"command", "balance"}, {"graph", o.graph}, {"mode", o.mode}, {"tol", o.tol}};
  LoadVector loads;
  Allocation allocation;
  json extra;
  if (o.mode == "eps") {
    if (!(o.eps > 0.0)) throw UsageError("--eps must be positive in eps mode");
    config["eps"] = o.eps;
    std::optional<int> cap;
    if (o.max_degree >= 0) {
      cap = o.max_degree;
      config["max_degree"] = o.max_degree;
    }
    auto r = epsilon_balance(g, o.eps, cap, o.tol, o.max_sweeps);
    loads = std::move(r.loads);
    allocation = std::move(r.allocation);
    extra = {{"iterations", r.iterations}, {"residual", r.residual}};
  } else if (o.mode == "exact") {
    ExactLoadOptions opts;
    opts.tol = o.tol;
    opts.max_sweeps = o.max_sweeps;
    auto r = exact_loads(g, opts);
    loads = std::move(r.loads);
    allocation = std::move(r.allocation);
    extra = {{"levels", r.levels}, {"final_eps", r.final_eps}};
  } else {
    throw UsageError("--mode must be eps or exact");
  }
  json body = loads_to_json(g, loads, allocation);
  body["diagnostics"] = extra;
  Output dst(o.out, out);
  *dst << with_provenance(body, config).dump(2) << "\n";
  if (!o.csv.empty()) {
    Output csv(o.csv, out);
    write_csv_header(*csv, config);
    write_loads_csv(*csv, loads);
  }
  return kExitOk;
}

int cmd_density(const Options& o, std::ostream& out) {
  const Graph g = load_edge_list_file(o.graph);
  const json config = {{"command", "density"}, {"graph", o.graph}, {"brute", o.brute}};
  const DensityResult densest = o.brute ? rho_bruteforce(g) : rho_maxflow(g);
  const DensityDecomposition blocks = density_decomposition(g);
  Output dst(o.out, out);
  *dst << with_provenance(density_to_json(densest, &blocks), config).dump(2) << "\n";
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  const auto pi = DegreeDistribution::parse(o.model);
  const auto grid = parse_grid(o.t_grid);
  const RdeOptions rde = rde_options(o.pool, o.samples, o.rde_tol, o.rde_max_sweeps, o.workers);
  json config = {{"command", "predict"}, {"model", pi.label()}, {"t_grid", grid},
                 {"seed", o.seed}, {"tol_t", o.tol_t}, {"rde", rde_config(rde)}};
  const auto curve = predicted_load_cdf(pi, grid, rde, o.seed);
  json body = {{"points", json::array()}};
  for (const auto& p : curve) {
    body["points"].push_back({{"t", p.t}, {"phi", p.phi}, {"stderr", p.phi_stderr},
                              {"tail", p.tail}, {"raw_tail", p.raw_tail},
                              {"tail_stderr", p.tail_stderr}});
  }
  if (!o.skip_rho) {
    const auto rho = rho_of_mu(pi, o.tol_t, rde, o.seed);
    body["rho"] = rho.rho;
    body["rho_bracket"] = {rho.lower, rho.upper};
    body["rho_lower_bracket_held"] = rho.lower_bracket_held;
    body["rho_converged"] = rho.all_converged;
  }
  {
    Output dst(o.out, out);
    write_csv_header(*dst, config);
    *dst << "t,phi,phi_stderr,tail,raw_tail,tail_stderr\n";
    for (const auto& p : curve) {
      *dst << format_double(p.t) << ',' << format_double(p.phi) << ','
           << format_double(p.phi_stderr) << ',' << format_double(p.tail) << ','
           << format_double(p.raw_tail) << ',' << format_double(p.tail_stderr) << '\n';
    }
  }
  if (!o.json_out.empty()) {
    Output dst(o.json_out, out);
    *dst << with_provenance(body, config).dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  CompareConfig c;
  c.model = o.model;
  c.graph_model = parse_graph_model(o.graph_model);
  c.n_grid = parse_int_list(o.n_grid);
  c.replicates = o.replicates;
  c.seed = o.seed;
  c.t_grid = parse_grid(o.t_grid);
  c.rde = rde_options(o.pool, o.samples, o.rde_tol, o.rde_max_sweeps, o.workers);
  c.tol_t = o.tol_t;
  c.workers = o.workers;
  if (c.replicates < 1) throw UsageError("--replicates must be >= 1");
  const json config = {{"command", "compare"}, {"model", o.model}, {"graph_model", o.graph_model},
                       {"n_grid", c.n_grid}, {"replicates", c.replicates}, {"seed", c.seed},
                       {"t_grid", c.t_grid}, {"tol_t", c.tol_t}, {"rde", rde_config(c.rde)}};
  const CompareResult r = run_compare(c);
  Output dst(o.out, out);
  write_csv_header(*dst, config);
  if (r.rho_mu) *dst << "# rho_mu=" << format_double(r.rho_mu->rho) << "\n";
  *dst << "n,replicate,seed,edges,rho_graph,kolmogorov,wasserstein1\n";
  for (const auto& row : r.rows) {
    *dst << row.n << ',' << row.replicate << ',' << row.seed << ',' << row.edges << ','
         << format_double(row.rho_graph) << ',' << format_double(row.kolmogorov) << ','
         << format_double(row.wasserstein1) << '\n';
  }
  for (const auto& s : r.summary) {
    *dst << "# median n=" << s.n << " rho=" << format_double(s.median_rho)
         << " kolmogorov=" << format_double(s.median_kolmogorov)
         << " wasserstein1=" << format_double(s.median_wasserstein1) << "\n";
  }
  if (!r.kolmogorov_non_increasing) {
    err << "warning: median Kolmogorov distance is not non-increasing in n\n";
  }
  return kExitOk;
}

int cmd_bound(const Options& o, std::ostream& out) {
  DegreeSequence d;
  json config = {{"command", "bound"}, {"t", o.t}, {"theta", o.theta}};
  if (!o.degrees.empty()) {
    d = read_degree_file(o.degrees);
    config["degrees"] = o.degrees;
  } else {
    if (o.model.empty() || o.n < 1) throw UsageError("bound needs --degrees or --model with --n");
    d = sample_degree_sequence(DegreeDistribution::parse(o.model), o.n, o.seed);
    config["model"] = o.model;
    config["n"] = o.n;
    config["seed"] = o.seed;
  }
  const auto n = static_cast<std::int64_t>(d.size());
  const ZBound z = z_delta_t_bound(d, o.t, o.theta, n);
  json body = {{"alpha", z.params.alpha}, {"lambda", z.params.lambda}, {"delta", z.delta},
               {"f_delta", z.f_delta}, {"c", z.c}, {"kappa", z.kappa}, {"bound", z.bound},
               {"direct_sum", z.direct_sum}, {"max_set_size", z.max_set_size}};
  if (o.k_max > 0) {
    json rows = json::array();
    if (o.mc_samples > 0) {
      config["k_max"] = o.k_max;
      config["mc_samples"] = o.mc_samples;
      for (const auto& row : validate_dense_count_bound(d, o.k_max, o.theta, o.mc_samples, o.seed)) {
        rows.push_back({{"k", row.k}, {"r", row.r}, {"bound", row.bound},
                        {"mc_mean", row.empirical.mean}, {"mc_stderr", row.empirical.stderr_},
                        {"pass", row.pass}});
      }
    } else {
      config["k_max"] = o.k_max;
      for (int k = 1; k <= o.k_max; ++k) {
        for (int r = 1; r <= std::max(1, k * (k - 1) / 2); ++r) {
          const auto b = expected_dense_count_bound(d, k, r, o.theta);
          rows.push_back({{"k", k}, {"r", r}, {"bound", b.value}, {"log_bound", b.log_value}});
        }
      }
    }
    body["dense_counts"] = rows;
  }
  Output dst(o.out, out);
  *dst << with_provenance(body, config).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

std::string version() { return BALLOAD_VERSION; }

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(x)) throw std::invalid_argument(s);
      return x;
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in grid '" + text + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("grid range must be a:b:step");
    const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || b < a) throw UsageError("grid range needs a <= b and step > 0");
    const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    if (count > 1000000) throw UsageError("grid too large");
    // rounding keeps 0.1-style steps from printing as 0.30000000000000004
    for (long long k = 0; k <= count; ++k) grid.push_back(std::round((a + static_cast<double>(k) * step) * 1e12) / 1e12);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  if (grid.empty()) throw UsageError("empty grid");
  std::sort(grid.begin(), grid.end());
  return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    try {
      std::size_t used = 0;
      const int x = std::stoi(p, &used);
      if (used != p.size() || x < 1) throw std::invalid_argument(p);
      out.push_back(x);
    } catch (const std::exception&) {
      throw UsageError("bad entry '" + p + "' in list '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

GraphModel parse_graph_model(const std::string& text) {
  if (text == "pairing") return GraphModel::Pairing;
  if (text == "er") return GraphModel::ErdosRenyi;
  throw UsageError("graph model must be pairing or er");
}

Graph generate_graph(const DegreeDistribution& pi, int n, std::uint64_t seed, GraphModel model,
                     MultiEdgePolicy policy) {
  if (model == GraphModel::ErdosRenyi) {
    const auto m = static_cast<std::int64_t>(std::floor(pi.mean() * n / 2.0 + 1e-9));
    return erdos_renyi_nm(n, m, seed);
  }
  const DegreeSequence d = sample_degree_sequence(pi, n, derive_seed(seed, 0));
  return pairing_model(d, derive_seed(seed, 1), policy);
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size() / 2;
  return xs.size() % 2 ? xs[k] : 0.5 * (xs[k - 1] + xs[k]);
}

double grid_kolmogorov(const std::vector<double>& loads, const std::vector<LoadTailPoint>& pred) {
  const EmpiricalDistribution emp(loads);
  double worst = 0.0;
  for (const auto& p : pred) worst = std::max(worst, std::abs(emp.cdf(p.t) - (1.0 - p.tail)));
  return worst;
}

double grid_wasserstein1(const std::vector<double>& loads, const std::vector<LoadTailPoint>& pred) {
  const EmpiricalDistribution emp(loads);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pred.size(); ++k) {
    total += std::abs(emp.cdf(pred[k].t) - (1.0 - pred[k].tail)) * (pred[k + 1].t - pred[k].t);
  }
  return total;
}

CompareResult run_compare(const CompareConfig& config) {
  const auto pi = DegreeDistribution::parse(config.model);
  CompareResult result;
  result.prediction = predicted_load_cdf(pi, config.t_grid, config.rde, config.seed);
  if (pi.has_mass_above_one()) result.rho_mu = rho_of_mu(pi, config.tol_t, config.rde, config.seed);

  struct Job {
    int n;
    int replicate;
  };
  std::vector<Job> jobs;
  for (int n : config.n_grid) {
    for (int r = 0; r < config.replicates; ++r) jobs.push_back({n, r});
  }
  result.rows.resize(jobs.size());
  std::mutex failure_lock;
  std::exception_ptr failure;
  auto work = [&](std::size_t j) {
    try {
      const auto [n, rep] = jobs[j];
      CompareRow row;
      row.n = n;
      row.replicate = rep;
      row.seed = derive_seed(config.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep));
      const Graph g = generate_graph(pi, n, row.seed, config.graph_model);
      row.edges = g.num_edges();
      const auto loads = density_decomposition(g).loads();
      row.rho_graph = loads.empty() ? 0.0 : *std::max_element(loads.begin(), loads.end());
      row.kolmogorov = grid_kolmogorov(loads, result.prediction);
      row.wasserstein1 = grid_wasserstein1(loads, result.prediction);
      result.rows[j] = row;
    } catch (...) {
      std::lock_guard lock(failure_lock);
      if (!failure) failure = std::current_exception();
    }
  };
  const int workers = std::clamp(config.workers, 1, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) work(j);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t j = static_cast<std::size_t>(w); j < jobs.size(); j += static_cast<std::size_t>(workers)) work(j);
      });
    }
    for (auto& th : threads) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  double previous = std::numeric_limits<double>::infinity();
  for (int n : config.n_grid) {
    std::vector<double> rho, ks, w1;
    for (const auto& row : result.rows) {
      if (row.n != n) continue;
      rho.push_back(row.rho_graph);
      ks.push_back(row.kolmogorov);
      w1.push_back(row.wasserstein1);
    }
    CompareSummary s{n, median(rho), median(ks), median(w1)};
    if (s.median_kolmogorov > previous) result.kolmogorov_non_increasing = false;
    previous = s.median_kolmogorov;
    result.summary.push_back(s);
  }
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  o.workers = default_workers();
  CLI::App app{"Balanced loads, densest subgraphs and their random-graph limits"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--workers", o.workers, "worker threads (default from BALANCED_LOADS_WORKERS)")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "sample a random graph as an edge list");
  gen->add_option("--model", o.model, "poisson:L | regular:D | explicit:p0,p1,... | er")->required();
  gen->add_option("--n", o.n, "number of vertices")->required();
  gen->add_option("--m", o.m, "number of edges for model er");
  gen->add_option("--graph-model", o.graph_model, "pairing | er (for degree distributions)");
  gen->add_option("--policy", o.policy, "remove-all | keep-one | reject");
  gen->add_option("--out", o.out, "edge-list path (default stdout)");

  auto* balance = app.add_subcommand("balance", "balanced or eps-balanced loads");
  balance->add_option("--graph", o.graph, "edge-list file")->required();
  balance->add_option("--mode", o.mode, "exact | eps");
  balance->add_option("--eps", o.eps, "eps for mode eps");
  balance->add_option("--tol", o.tol, "load tolerance");
  balance->add_option("--max-degree", o.max_degree, "truncation degree for mode eps");
  balance->add_option("--max-sweeps", o.max_sweeps, "Newton iteration cap per eps level");
  balance->add_option("--out", o.out, "JSON path (default stdout)");
  balance->add_option("--csv", o.csv, "CSV path for vertex,load");

  auto* density = app.add_subcommand("density", "maximum subgraph density and decomposition");
  density->add_option("--graph", o.graph, "edge-list file")->required();
  density->add_flag("--brute", o.brute, "subset enumeration (n <= 22)");
  density->add_option("--out", o.out, "JSON path (default stdout)");

  auto add_rde = [&](CLI::App* sub) {
    sub->add_option("--t-grid", o.t_grid, "a:b:step or comma list");
    sub->add_option("--pool", o.pool, "population size N");
    sub->add_option("--samples", o.samples, "objective Monte Carlo samples");
    sub->add_option("--rde-tol", o.rde_tol, "W1 tolerance between sweeps");
    sub->add_option("--rde-max-sweeps", o.rde_max_sweeps, "sweep cap per fixed point");
    sub->add_option("--tol-t", o.tol_t, "bisection width for rho");
  };
  auto* predict = app.add_subcommand("predict", "limit curve Phi(t), rho(mu) and P(load > t)");
  predict->add_option("--model", o.model, "degree distribution spec")->required();
  add_rde(predict);
  predict->add_flag("--skip-rho", o.skip_rho, "do not bisect for rho(mu)");
  predict->add_option("--out", o.out, "CSV path (default stdout)");
  predict->add_option("--json", o.json_out, "JSON path");

  auto* compare = app.add_subcommand("compare", "finite graphs against the limit prediction");
  compare->add_option("--model", o.model, "degree distribution spec")->required();
  compare->add_option("--graph-model", o.graph_model, "pairing | er");
  compare->add_option("--n-grid", o.n_grid, "comma list of sizes");
  compare->add_option("--replicates", o.replicates, "graphs per size");
  add_rde(compare);
  compare->add_option("--out", o.out, "CSV path (default stdout)");

  auto* bound = app.add_subcommand("bound", "first-moment bounds on small dense sets");
  bound->add_option("--degrees", o.degrees, "file of degrees");
  bound->add_option("--model", o.model, "degree distribution spec (with --n)");
  bound->add_option("--n", o.n, "sequence length for --model");
  bound->add_option("--t", o.t, "density threshold t > 1");
  bound->add_option("--theta", o.theta, "exponential moment parameter");
  bound->add_option("--k-max", o.k_max, "tabulate dense-count bounds up to k");
  bound->add_option("--mc-samples", o.mc_samples, "pairing samples for Monte Carlo columns");
  bound->add_option("--out", o.out, "JSON path (default stdout)");

  std::vector<std::string> args;
  for (int k = argc - 1; k > 0; --k) args.emplace_back(argv[k]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (balance->parsed()) return cmd_balance(o, out);
    if (density->parsed()) return cmd_density(o, out);
    if (predict->parsed()) return cmd_predict(o, out);
    if (compare->parsed()) return cmd_compare(o, out, err);
    if (bound->parsed()) return cmd_bound(o, out);
    err << "error: no command\n";
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace balload::cli
