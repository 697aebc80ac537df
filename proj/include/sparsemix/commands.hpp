#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sparsemix/archive_io.hpp"
#include "sparsemix/datasets.hpp"
#include "sparsemix/eval.hpp"

// Command implementations behind tools/sparsemix. Each writes its files under
// an output directory and logs progress to a caller-supplied stream. File
// contents depend only on inputs and seeds; wall times go to the log only.

namespace sparsemix {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct DataSource {
  enum class Kind { None, Builtin, Csv, Design };
  Kind kind = Kind::None;
  std::string name;          // builtin name, CSV path, or design name
  bool header = true;        // CSV only
  std::string label_column;  // CSV only; empty for none
  std::uint64_t data_seed = 1;

  static DataSource builtin_set(std::string n) { return {Kind::Builtin, std::move(n), true, "", 1}; }
  static DataSource design(std::string n, std::uint64_t seed) { return {Kind::Design, std::move(n), true, "", seed}; }
};

inline Dataset load_source(const DataSource& src) {
  switch (src.kind) {
    case DataSource::Kind::Builtin: return builtin(src.name);
    case DataSource::Kind::Csv: {
      if (!fs::exists(src.name)) fail(ErrorCode::Io, "CSV file '" + src.name + "' does not exist");
      std::optional<LabelColumn> label;
      if (!src.label_column.empty()) {
        int idx = 0;
        const auto res = std::from_chars(src.label_column.data(), src.label_column.data() + src.label_column.size(), idx);
        const bool numeric = res.ec == std::errc() && res.ptr == src.label_column.data() + src.label_column.size();
        label = numeric ? LabelColumn{"", idx} : LabelColumn{src.label_column, 0};
      }
      return load_csv(src.name, src.header, label);
    }
    case DataSource::Kind::Design: return generate(design_by_name(src.name), src.data_seed);
    case DataSource::Kind::None: break;
  }
  fail(ErrorCode::InvalidArgument, "no dataset source given (use --builtin, --csv or --design)");
}

/// True generating parameters, available only for simulated designs.
inline std::optional<ReferenceParams> design_reference(const DataSource& src) {
  if (src.kind != DataSource::Kind::Design) return std::nullopt;
  return reference_from_design(design_by_name(src.name));
}

inline MeanPrior parse_mean_prior(const std::string& s, double nu1 = 0.5, double nu2 = 0.5) {
  if (s == "standard" || s == "sta") return StandardPrior{};
  if (s == "ng" || s == "normal-gamma" || s == "normal_gamma") return NormalGammaPrior{nu1, nu2};
  fail(ErrorCode::InvalidArgument, "unknown prior '" + s + "' (expected standard|ng)");
}

/// "fixed:<value>" or "gamma:<a>".
inline E0Policy parse_e0_policy(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  double v = 0.0;
  if (colon == std::string::npos || !detail::parse_double(s.substr(colon + 1), v)) {
    fail(ErrorCode::InvalidArgument, "e0 policy must be fixed:<value> or gamma:<a>, got '" + s + "'");
  }
  if (kind == "fixed") return FixedE0{v};
  if (kind == "gamma") return GammaE0{v};
  fail(ErrorCode::InvalidArgument, "e0 policy must be fixed:<value> or gamma:<a>, got '" + s + "'");
}

inline std::string describe(const PriorSpec& spec) {
  std::string s = spec.normal_gamma() ? "ng" : "standard";
  if (const auto* f = std::get_if<FixedE0>(&spec.e0_policy)) {
    s += " e0=fixed:" + format_double(f->value);
  } else {
    s += " e0=gamma:" + format_double(std::get<GammaE0>(spec.e0_policy).a);
  }
  return s + " K=" + std::to_string(spec.K);
}

/// Output root: the SPARSEMIX_OUT environment variable, else ./sparsemix-out.
inline fs::path default_out_root() {
  const char* env = std::getenv("SPARSEMIX_OUT");
  return env && *env ? fs::path(env) : fs::path("sparsemix-out");
}

struct RunConfig {
  DataSource source;
  PriorSpec spec;
  ChainConfig chain;
  fs::path out;

  void validate() const {
    spec.validate();
    chain.validate();
    if (source.kind == DataSource::Kind::None) fail(ErrorCode::InvalidArgument, "no dataset source given");
    if (source.kind == DataSource::Kind::Csv && !fs::exists(source.name)) {
      fail(ErrorCode::Io, "CSV file '" + source.name + "' does not exist");
    }
    if (out.empty()) fail(ErrorCode::InvalidArgument, "no output directory");
  }
};

/// Machine-readable error document written on failure.
inline std::string error_document(const Error& e) {
  nlohmann::json j;
  j["error"] = {{"code", to_string(e.code())}, {"message", e.detail()}};
  return j.dump();
}

inline std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) fail(ErrorCode::Io, "cannot write '" + p.string() + "'");
  return out;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Writes `reps` datasets <design>_<rep>.csv (features then label) and
/// manifest.tsv. Replication i uses data seed seed + i.
inline std::vector<fs::path> cmd_simulate(const std::string& design_name, int reps, std::uint64_t seed,
                                          const fs::path& out, std::ostream& log) {
  const SimDesign design = design_by_name(design_name);
  if (reps < 1) fail(ErrorCode::InvalidArgument, "reps must be >= 1");
  io::ensure_dir(out);
  std::vector<fs::path> files;
  std::ofstream manifest = open_out(out / "manifest.tsv");
  manifest << "replication\tdata_seed\tfile\trows\tcols\n";
  for (int i = 0; i < reps; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const Dataset data = generate(design, s);
    char name[64];
    std::snprintf(name, sizeof name, "%s_%02d.csv", design_name.c_str(), i + 1);
    write_csv((out / name).string(), data);
    manifest << i + 1 << '\t' << s << '\t' << name << '\t' << data.n() << '\t' << data.r() + 1 << '\n';
    log << name << '\t' << data.n() << " rows\n";
    files.push_back(out / name);
  }
  return files;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

inline void write_counts_trace(const ChainArchive& ar, std::ostream& out) {
  out << "iteration";
  for (int k = 0; k < ar.K; ++k) out << "\tN" << k + 1;
  out << "\tK0\n";
  for (int m = 0; m < ar.M(); ++m) {
    out << m + 1;
    for (int k = 0; k < ar.K; ++k) out << '\t' << ar.counts(m, k);
    out << '\t' << ar.k0(m) << '\n';
  }
}

inline void write_fit_summary(const ChainArchive& ar, std::ostream& out) {
  const KPosterior kp = estimate_K0(ar);
  out << "dataset=" << ar.dataset_name << '\n'
      << "N=" << ar.N << '\n'
      << "r=" << ar.r << '\n'
      << "prior=" << describe(ar.spec) << '\n'
      << "burn_in=" << ar.config.burn_in << '\n'
      << "iterations=" << ar.config.iterations << '\n'
      << "seed=" << ar.config.seed << '\n'
      << "k0_hat=" << kp.k0_hat << '\n'
      << "m0=" << kp.m0 << '\n';
  if (!std::isnan(ar.e0_acceptance)) out << "e0_acceptance=" << format_double(ar.e0_acceptance) << '\n';
  out << "k0_histogram:\n";
  for (int h = 1; h <= ar.K; ++h) {
    if (kp.histogram[static_cast<std::size_t>(h)] > 0) out << "  " << h << '\t' << kp.histogram[static_cast<std::size_t>(h)] << '\n';
  }
}

/// Runs the sampler and writes <out>/archive, summary.txt and counts_trace.tsv.
inline ChainArchive cmd_fit(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Dataset data = load_source(cfg.source);
  io::ensure_dir(cfg.out);
  const auto t0 = std::chrono::steady_clock::now();
  ChainArchive ar = run_chain(data, cfg.spec, cfg.chain);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  save_archive(ar, cfg.out / "archive");
  {
    std::ofstream s = open_out(cfg.out / "summary.txt");
    write_fit_summary(ar, s);
  }
  {
    std::ofstream t = open_out(cfg.out / "counts_trace.tsv");
    write_counts_trace(ar, t);
  }
  write_fit_summary(ar, log);
  log << "wall_seconds=" << secs << '\n';
  return ar;
}

// ---------------------------------------------------------------------------
// identify
// ---------------------------------------------------------------------------

inline void write_point_process(const PointProcess& pp, const CentroidSet& cs, std::ostream& out) {
  out << "iteration\tcomponent\tcluster";
  for (Eigen::Index j = 0; j < pp.points.cols(); ++j) out << "\tmu" << j + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < pp.points.rows(); ++i) {
    const DrawRef& p = pp.provenance[static_cast<std::size_t>(i)];
    out << p.iteration + 1 << '\t' << p.component + 1 << '\t' << cs.assignment[static_cast<std::size_t>(i)] + 1;
    for (Eigen::Index j = 0; j < pp.points.cols(); ++j) out << '\t' << format_double(pp.points(i, j));
    out << '\n';
  }
}

inline void write_summaries(const std::vector<ParameterSummary>& rows, std::ostream& out) {
  out << "parameter\tcomponent\tmean\tq2.5\tq50\tq97.5\n";
  for (const auto& s : rows) {
    out << s.name << '\t' << s.component << '\t' << format_double(s.mean) << '\t' << format_double(s.q025) << '\t'
        << format_double(s.q50) << '\t' << format_double(s.q975) << '\n';
  }
}

/// Writes <out>/identified, points.tsv, summaries.tsv and identify.txt.
inline IdentifyResult cmd_identify(const fs::path& archive_dir, Distance distance, std::uint64_t seed,
                                   const fs::path& out, std::ostream& log) {
  const ChainArchive ar = load_archive(archive_dir);
  IdentifyResult res;
  try {
    res = identify(ar, distance, seed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoRetainedIterations) throw;
    fail(e.code(), e.detail() + "; rerun fit with more iterations or inspect counts_trace.tsv");
  }
  io::ensure_dir(out);
  save_identified(res.draws, out / "identified");
  {
    std::ofstream p = open_out(out / "points.tsv");
    write_point_process(res.points, res.centroids, p);
  }
  if (res.draws.retained() > 0) {
    std::ofstream s = open_out(out / "summaries.tsv");
    write_summaries(identified_summaries(res.draws), s);
  }
  std::ofstream f = open_out(out / "identify.txt");
  for (std::ostream* o : {static_cast<std::ostream*>(&f), &log}) {
    *o << "k0_hat=" << res.kpost.k0_hat << '\n'
       << "m0=" << res.kpost.m0 << '\n'
       << "m0_rho=" << format_double(res.draws.m0_rho) << '\n'
       << "retained=" << res.draws.retained() << '\n'
       << "distance=" << to_string(distance) << '\n'
       << "kcentroids_objective=" << format_double(res.centroids.objective) << '\n';
  }
  return res;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

enum class ReferenceMode { Auto, Design, Bayes, None };

inline ReferenceMode parse_reference_mode(const std::string& s) {
  if (s == "auto") return ReferenceMode::Auto;
  if (s == "design") return ReferenceMode::Design;
  if (s == "bayes") return ReferenceMode::Bayes;
  if (s == "none") return ReferenceMode::None;
  fail(ErrorCode::InvalidArgument, "unknown reference '" + s + "' (expected auto|design|bayes|none)");
}

/// Writes <out>/report.txt and, under the normal-gamma prior, lambda.tsv.
/// With no truth source the report holds K̂₀, M₀, M₀ρ, e0 and λ only. The
/// MSE reference is the generator for simulated designs and a Bayes-estimate
/// fit (same prior, `ref_chain` settings) otherwise.
inline EvalReport cmd_evaluate(const fs::path& identified_dir, const DataSource& truth, ReferenceMode mode,
                               const ChainConfig& ref_chain, const fs::path& out, std::ostream& log) {
  const IdentifiedDraws id = load_identified(identified_dir);
  std::optional<std::vector<int>> labels;
  std::optional<ReferenceParams> ref;
  if (truth.kind != DataSource::Kind::None) {
    const Dataset data = load_source(truth);
    if (data.n() != id.N) fail(ErrorCode::InvalidArgument, "truth dataset size differs from the fitted data");
    labels = data.labels;
    if (mode == ReferenceMode::Auto) mode = truth.kind == DataSource::Kind::Design ? ReferenceMode::Design : ReferenceMode::Bayes;
    if (mode == ReferenceMode::Design) {
      ref = design_reference(truth);
      if (!ref) fail(ErrorCode::InvalidArgument, "design reference needs --design");
    } else if (mode == ReferenceMode::Bayes && labels) {
      ref = bayes_reference(data, id.spec, ref_chain);
    }
  }
  const EvalReport rep = evaluate(id, labels, ref);
  io::ensure_dir(out);
  {
    std::ofstream f = open_out(out / "report.txt");
    rep.write(f);
  }
  if (rep.lambda_table) {
    std::ofstream f = open_out(out / "lambda.tsv");
    write_lambda_table(f, *rep.lambda_table);
  }
  rep.write(log);
  return rep;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchRow {
  std::string prior;
  int K;
  std::string e0;
};

struct BenchCell {
  bool ok = false;
  std::string error;
  int k0_hat = 0;
  int m0 = 0;
  double m0_rho = 0.0;
  double e0_hat = 0.0;
  std::optional<double> mcr, mse;
  std::optional<double> m0_rho_e, mcr_e, mse_e;  // Euclidean K-means identification
};

struct BenchOptions {
  int table = 1;
  int reps = 10;
  std::uint64_t seed = 1;
  int iterations = 10000;
  int burn_in = 2000;
  int jobs = 1;
};

inline std::vector<BenchRow> bench_rows(int table) {
  const std::vector<int> ks = {4, 15, 30};
  std::vector<BenchRow> rows;
  switch (table) {
    case 1:
      for (int k : ks) rows.push_back({"standard", k, "gamma:10"});
      for (int k : ks) rows.push_back({"ng", k, "fixed:0.01"});
      for (int k : ks) rows.push_back({"ng", k, "gamma:10"});
      break;
    case 2:
      for (int k : ks) rows.push_back({"standard", k, "gamma:10"});
      for (int k : ks) rows.push_back({"ng", k, "fixed:0.001"});
      break;
    case 3:
    case 4:
      for (int k : {4 - (table == 4), 15, 30}) rows.push_back({"standard", k, "gamma:10"});
      for (int k : {4 - (table == 4), 15, 30}) rows.push_back({"ng", k, "fixed:0.01"});
      break;
    default: fail(ErrorCode::InvalidArgument, "table must be 1, 2, 3 or 4");
  }
  return rows;
}

inline std::uint64_t cell_seed(std::uint64_t seed, std::size_t row, int rep) {
  return detail::splitmix64(seed ^ detail::splitmix64((static_cast<std::uint64_t>(row) << 32) | static_cast<std::uint64_t>(rep)));
}

/// Runs the full pipeline per (row, replication) cell. Tables 1–2 simulate
/// replication data sets (data seed = seed + rep); tables 3–4 refit the Crabs
/// or Iris data with a different chain seed per replication.
inline std::vector<std::vector<BenchCell>> run_bench(const BenchOptions& opt, std::ostream& log) {
  const std::vector<BenchRow> rows = bench_rows(opt.table);
  if (opt.reps < 1) fail(ErrorCode::InvalidArgument, "reps must be >= 1");
  const bool simulated = opt.table <= 2;
  const std::string design = opt.table == 1 ? "equal" : "unequal";
  const std::string dataset = opt.table == 3 ? "crabs" : "iris";

  // Bayes references for the real data sets, one per row.
  std::vector<std::optional<ReferenceParams>> refs(rows.size());
  ChainConfig chain;
  chain.iterations = opt.iterations;
  chain.burn_in = opt.burn_in;
  chain.store_allocations = true;

  std::vector<std::vector<BenchCell>> cells(rows.size(), std::vector<BenchCell>(static_cast<std::size_t>(opt.reps)));
  std::vector<std::pair<std::size_t, int>> work;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int i = 0; i < opt.reps; ++i) work.emplace_back(r, i);
  }
  std::mutex mu;
  std::size_t next = 0;
  auto spec_of = [&](const BenchRow& row) {
    PriorSpec spec;
    spec.K = row.K;
    spec.mean_prior = parse_mean_prior(row.prior);
    spec.e0_policy = parse_e0_policy(row.e0);
    return spec;
  };
  auto worker = [&]() {
    for (;;) {
      std::size_t w;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= work.size()) return;
        w = next++;
      }
      const auto [r, i] = work[w];
      BenchCell& cell = cells[r][static_cast<std::size_t>(i)];
      try {
        const PriorSpec spec = spec_of(rows[r]);
        const DataSource src = simulated ? DataSource::design(design, opt.seed + static_cast<std::uint64_t>(i))
                                         : DataSource::builtin_set(dataset);
        const Dataset data = load_source(src);
        ChainConfig cc = chain;
        cc.seed = cell_seed(opt.seed, r, i);
        const ChainArchive ar = run_chain(data, spec, cc);
        std::optional<ReferenceParams> ref = design_reference(src);
        if (!simulated) {
          std::lock_guard<std::mutex> lock(mu);
          if (!refs[r]) {
            ChainConfig rc = chain;
            rc.seed = opt.seed;
            refs[r] = bayes_reference(data, spec, rc);
          }
          ref = refs[r];
        }
        const IdentifyResult res = identify(ar, Distance::Mahalanobis, cc.seed);
        const EvalReport rep = evaluate(res.draws, data.labels, ref);
        cell.k0_hat = rep.k0_hat;
        cell.m0 = rep.m0;
        cell.m0_rho = rep.m0_rho;
        cell.e0_hat = rep.e0_hat;
        cell.mcr = rep.mcr;
        cell.mse = rep.mse_mu;
        if (opt.table == 3) {
          const IdentifyResult eu = identify(ar, Distance::Euclidean, cc.seed);
          const EvalReport re = evaluate(eu.draws, data.labels, ref);
          cell.m0_rho_e = re.m0_rho;
          cell.mcr_e = re.mcr;
          cell.mse_e = re.mse_mu;
        }
        cell.ok = true;
      } catch (const Error& e) {
        cell.error = e.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      log << rows[r].prior << " K=" << rows[r].K << " e0=" << rows[r].e0 << " rep " << i + 1 << ": "
          << (cell.ok ? "ok k0_hat=" + std::to_string(cell.k0_hat) : "FAILED " + cell.error) << '\n';
    }
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return cells;
}

namespace detail {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int n = 0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  MeanSe m;
  m.n = static_cast<int>(v.size());
  if (v.empty()) return m;
  m.mean = mean_of(v);
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return m;
}

inline std::string fmt(const MeanSe& m) { return m.n == 0 ? "NA\tNA" : format_double(m.mean) + "\t" + format_double(m.se); }

}  // namespace detail

/// Tab-separated table: one row per configuration, means over replications
/// with Monte Carlo standard errors. K0_hat is the most frequent per-replication
/// estimate; MSE averages only replications with K0_hat equal to the truth.
inline void write_bench_table(const BenchOptions& opt, const std::vector<std::vector<BenchCell>>& cells,
                              std::ostream& out) {
  const std::vector<BenchRow> rows = bench_rows(opt.table);
  out << "prior\tK\te0_policy\treps\tfailed\te0_hat\tK0_hat\tK0_hat_agree\tM0\tM0_rho\tM0_rho_se\tMCR\tMCR_se\tMSE_mu\tMSE_mu_se\tMSE_n";
  if (opt.table == 3) out << "\tM0_rho_eucl\tM0_rho_eucl_se\tMCR_eucl\tMCR_eucl_se\tMSE_mu_eucl\tMSE_mu_eucl_se";
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<double> e0, m0, rho, mcrv, msev, rho_e, mcr_e, mse_e;
    std::vector<int> khat;
    int failed = 0;
    for (const BenchCell& c : cells[r]) {
      if (!c.ok) {
        ++failed;
        continue;
      }
      e0.push_back(c.e0_hat);
      m0.push_back(c.m0);
      rho.push_back(c.m0_rho);
      khat.push_back(c.k0_hat);
      if (c.mcr) mcrv.push_back(*c.mcr);
      if (c.mse) msev.push_back(*c.mse);
      if (c.m0_rho_e) rho_e.push_back(*c.m0_rho_e);
      if (c.mcr_e) mcr_e.push_back(*c.mcr_e);
      if (c.mse_e) mse_e.push_back(*c.mse_e);
    }
    int mode = 0, agree = 0;
    if (!khat.empty()) {
      const KPosterior kp = estimate_K0(khat, *std::max_element(khat.begin(), khat.end()));
      mode = kp.k0_hat;
      agree = kp.m0;
    }
    out << rows[r].prior << '\t' << rows[r].K << '\t' << rows[r].e0 << '\t' << opt.reps << '\t' << failed << '\t'
        << (e0.empty() ? "NA" : format_double(detail::mean_se(e0).mean)) << '\t' << mode << '\t' << agree << '\t'
        << (m0.empty() ? "NA" : format_double(detail::mean_se(m0).mean)) << '\t' << detail::fmt(detail::mean_se(rho))
        << '\t' << detail::fmt(detail::mean_se(mcrv)) << '\t' << detail::fmt(detail::mean_se(msev)) << '\t'
        << msev.size();
    if (opt.table == 3) {
      out << '\t' << detail::fmt(detail::mean_se(rho_e)) << '\t' << detail::fmt(detail::mean_se(mcr_e)) << '\t'
          << detail::fmt(detail::mean_se(mse_e));
    }
    out << '\n';
  }
}

inline void cmd_bench(const BenchOptions& opt, const fs::path& out, std::ostream& log) {
  bench_rows(opt.table);  // validates the table number before any work
  io::ensure_dir(out);
  const auto cells = run_bench(opt, log);
  std::ofstream f = open_out(out / ("table" + std::to_string(opt.table) + ".tsv"));
  write_bench_table(opt, cells, f);
  write_bench_table(opt, cells, log);
}

}  // namespace sparsemix
