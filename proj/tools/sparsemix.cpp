// sparsemix command-line front end. Exit status: 0 success, 1 operation
// error, 2 usage error. Failures print a JSON error document on stderr.

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "sparsemix/commands.hpp"

namespace sm = sparsemix;

namespace {

struct SourceFlags {
  std::string builtin;
  std::string csv;
  bool header = true;
  std::string label_column;
  std::string design;
  std::uint64_t data_seed = 1;

  void add(CLI::App* app, bool required) {
    auto* g = app->add_option_group("dataset", "dataset source (exactly one)");
    g->add_option("--builtin", builtin, "built-in dataset")->check(CLI::IsMember({"iris", "crabs"}));
    g->add_option("--csv", csv, "CSV file of observations");
    g->add_option("--design", design, "simulation design")->check(CLI::IsMember({"equal", "unequal"}));
    if (required) {
      g->require_option(1);
    } else {
      g->require_option(0, 1);
    }
    app->add_flag("--header,!--no-header", header, "CSV has a header row (default on)");
    app->add_option("--label-column", label_column, "CSV label column (header name or 1-based position)");
    app->add_option("--data-seed", data_seed, "seed for --design data");
  }

  sm::DataSource get() const {
    sm::DataSource s;
    if (!builtin.empty()) {
      s = sm::DataSource::builtin_set(builtin);
    } else if (!csv.empty()) {
      s.kind = sm::DataSource::Kind::Csv;
      s.name = csv;
      s.header = header;
      s.label_column = label_column;
    } else if (!design.empty()) {
      s = sm::DataSource::design(design, data_seed);
    }
    return s;
  }
};

void print_error(const std::string& code, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"code", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

std::string out_or_default(const std::string& out, const char* sub) {
  return out.empty() ? (sm::default_out_root() / sub).string() : out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse finite Gaussian mixtures: Gibbs sampling, K0 estimation and identification"};
  app.set_config("--config", "", "config file (key = value, [section] or dotted keys per subcommand)");
  app.require_subcommand(1);

  // simulate
  std::string sim_design;
  int sim_reps = 10;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "generate replication datasets from a simulation design");
  sim->add_option("--design", sim_design, "design name")->required()->check(CLI::IsMember({"equal", "unequal"}));
  sim->add_option("--reps", sim_reps, "number of replications")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "data seed of the first replication");
  sim->add_option("--out", sim_out, "output directory");

  // fit
  SourceFlags fit_src;
  int fit_k = 15;
  std::string fit_prior = "standard";
  std::string fit_e0 = "gamma:10";
  double fit_nu1 = 0.5, fit_nu2 = 0.5, fit_step = 0.5;
  sm::ChainConfig fit_chain;
  bool fit_store_sigma = true, fit_store_alloc = true;
  std::string fit_out;
  auto* fit = app.add_subcommand("fit", "run the Gibbs sampler and write a chain archive");
  fit_src.add(fit, true);
  fit->add_option("--k", fit_k, "number of components K")->check(CLI::PositiveNumber);
  fit->add_option("--prior", fit_prior, "mean prior")->check(CLI::IsMember({"standard", "ng"}));
  fit->add_option("--e0", fit_e0, "Dirichlet parameter: fixed:<v> or gamma:<a>");
  fit->add_option("--nu1", fit_nu1, "normal-gamma shape nu1");
  fit->add_option("--nu2", fit_nu2, "normal-gamma rate nu2");
  fit->add_option("--mh-step", fit_step, "log-scale random-walk step for e0");
  fit->add_option("--iters", fit_chain.iterations, "retained iterations M");
  fit->add_option("--burnin", fit_chain.burn_in, "burn-in iterations");
  fit->add_option("--seed", fit_chain.seed, "chain seed");
  fit->add_flag("--store-sigma,!--no-store-sigma", fit_store_sigma, "keep covariance draws (default on)");
  fit->add_flag("--store-allocations,!--no-store-allocations", fit_store_alloc, "keep allocation draws (default on)");
  fit->add_option("--out", fit_out, "output directory");

  // identify
  std::string id_archive, id_distance = "mahalanobis", id_out;
  std::uint64_t id_seed = 1;
  auto* ident = app.add_subcommand("identify", "estimate K0 and relabel draws by K-centroids clustering");
  ident->add_option("--archive", id_archive, "chain archive directory")->required()->check(CLI::ExistingDirectory);
  ident->add_option("--distance", id_distance, "clustering distance")->check(CLI::IsMember({"mahalanobis", "euclidean"}));
  ident->add_option("--seed", id_seed, "clustering seed");
  ident->add_option("--out", id_out, "output directory");

  // evaluate
  SourceFlags ev_src;
  std::string ev_identified, ev_reference = "auto", ev_out;
  sm::ChainConfig ev_chain;
  auto* ev = app.add_subcommand("evaluate", "score identified draws against a truth source");
  ev->add_option("--identified", ev_identified, "identified draws directory")->required()->check(CLI::ExistingDirectory);
  ev_src.add(ev, false);
  ev->add_option("--reference", ev_reference, "MSE reference")->check(CLI::IsMember({"auto", "design", "bayes", "none"}));
  ev->add_option("--iters", ev_chain.iterations, "iterations of the Bayes reference fit");
  ev->add_option("--burnin", ev_chain.burn_in, "burn-in of the Bayes reference fit");
  ev->add_option("--seed", ev_chain.seed, "seed of the Bayes reference fit");
  ev->add_option("--out", ev_out, "output directory");

  // bench
  sm::BenchOptions bench_opt;
  bench_opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "reproduce a results table over replications");
  bench->add_option("--table", bench_opt.table, "table number")->required()->check(CLI::Range(1, 4));
  bench->add_option("--reps", bench_opt.reps, "replications")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_opt.seed, "base seed");
  bench->add_option("--iters", bench_opt.iterations, "retained iterations M");
  bench->add_option("--burnin", bench_opt.burn_in, "burn-in iterations");
  bench->add_option("--jobs", bench_opt.jobs, "worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("UsageError", e.what());
    return 2;
  }

  try {
    if (*sim) {
      sm::cmd_simulate(sim_design, sim_reps, sim_seed, out_or_default(sim_out, "simulate"), std::cout);
    } else if (*fit) {
      sm::RunConfig cfg;
      cfg.source = fit_src.get();
      cfg.spec.K = fit_k;
      cfg.spec.mean_prior = sm::parse_mean_prior(fit_prior, fit_nu1, fit_nu2);
      cfg.spec.e0_policy = sm::parse_e0_policy(fit_e0);
      cfg.spec.mh_step = fit_step;
      cfg.chain = fit_chain;
      cfg.chain.store_sigma = fit_store_sigma;
      cfg.chain.store_allocations = fit_store_alloc;
      cfg.out = out_or_default(fit_out, "fit");
      sm::cmd_fit(cfg, std::cout);
    } else if (*ident) {
      sm::cmd_identify(id_archive, sm::distance_from_string(id_distance), id_seed, out_or_default(id_out, "identify"),
                       std::cout);
    } else if (*ev) {
      sm::cmd_evaluate(ev_identified, ev_src.get(), sm::parse_reference_mode(ev_reference), ev_chain,
                       out_or_default(ev_out, "evaluate"), std::cout);
    } else if (*bench) {
      sm::cmd_bench(bench_opt, out_or_default(bench_out, "bench"), std::cout);
    }
  } catch (const sm::Error& e) {
    std::cerr << sm::error_document(e) << '\n';
    return 1;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return 1;
  }
  return 0;
}
