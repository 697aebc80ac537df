#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsemix/postid.hpp"

// On-disk layout (one directory per archive):
//   metadata.json   format tag, prior, hyperparameters, config, shapes, table index
//   <table>.bin     raw little-endian values in column-major order
// Element types: f64 (double), i32 (int32), u16 (uint16).

namespace sparsemix {

inline constexpr const char* kArchiveFormat = "sparsemix-archive/1";
inline constexpr const char* kIdentifiedFormat = "sparsemix-identified/1";

static_assert(std::endian::native == std::endian::little, "table files are written in host byte order");

namespace io {

using json = nlohmann::json;
namespace fs = std::filesystem;

template <typename Scalar>
constexpr const char* dtype_name() {
  if constexpr (std::is_same_v<Scalar, double>) return "f64";
  if constexpr (std::is_same_v<Scalar, int>) return "i32";
  if constexpr (std::is_same_v<Scalar, std::uint16_t>) return "u16";
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::Io, "cannot create directory '" + dir.string() + "'");
}

template <typename Derived>
void write_table(const fs::path& dir, const std::string& name, const Eigen::PlainObjectBase<Derived>& m,
                 json& index) {
  using Scalar = typename Derived::Scalar;
  static_assert(!Derived::IsRowMajor, "tables are column-major");
  const std::string file = name + ".bin";
  std::ofstream out(dir / file, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write '" + (dir / file).string() + "'");
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(Scalar) * m.size()));
  if (!out) fail(ErrorCode::Io, "write failed for '" + (dir / file).string() + "'");
  index[name] = {{"file", file}, {"dtype", dtype_name<Scalar>()}, {"rows", m.rows()}, {"cols", m.cols()}};
}

template <typename Derived>
void read_table(const fs::path& dir, const std::string& name, Eigen::PlainObjectBase<Derived>& m, const json& index) {
  using Scalar = typename Derived::Scalar;
  if (!index.contains(name)) fail(ErrorCode::ParseError, "table '" + name + "' missing from metadata");
  const json& t = index.at(name);
  if (t.at("dtype").get<std::string>() != dtype_name<Scalar>()) {
    fail(ErrorCode::ParseError, "table '" + name + "' has unexpected element type");
  }
  const auto rows = t.at("rows").get<Eigen::Index>();
  const auto cols = t.at("cols").get<Eigen::Index>();
  m.resize(rows, cols);
  const fs::path path = dir / t.at("file").get<std::string>();
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  const auto bytes = static_cast<std::streamsize>(sizeof(Scalar) * m.size());
  in.read(reinterpret_cast<char*>(m.data()), bytes);
  if (in.gcount() != bytes) fail(ErrorCode::ParseError, "table '" + name + "' is truncated");
}

inline json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
inline double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
inline Vector json_to_vector(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace io

inline nlohmann::json spec_to_json(const PriorSpec& spec) {
  nlohmann::json j;
  j["K"] = spec.K;
  j["mh_step"] = spec.mh_step;
  if (const auto* ng = std::get_if<NormalGammaPrior>(&spec.mean_prior)) {
    j["mean_prior"] = {{"type", "normal_gamma"}, {"nu1", ng->nu1}, {"nu2", ng->nu2}};
  } else {
    j["mean_prior"] = {{"type", "standard"}};
  }
  if (const auto* f = std::get_if<FixedE0>(&spec.e0_policy)) {
    j["e0"] = {{"type", "fixed"}, {"value", f->value}};
  } else {
    j["e0"] = {{"type", "gamma"}, {"a", std::get<GammaE0>(spec.e0_policy).a}};
  }
  return j;
}

inline PriorSpec spec_from_json(const nlohmann::json& j) {
  PriorSpec spec;
  spec.K = j.at("K").get<int>();
  spec.mh_step = j.at("mh_step").get<double>();
  const auto& mp = j.at("mean_prior");
  if (mp.at("type").get<std::string>() == "normal_gamma") {
    spec.mean_prior = NormalGammaPrior{mp.at("nu1").get<double>(), mp.at("nu2").get<double>()};
  } else {
    spec.mean_prior = StandardPrior{};
  }
  const auto& e0 = j.at("e0");
  if (e0.at("type").get<std::string>() == "fixed") {
    spec.e0_policy = FixedE0{e0.at("value").get<double>()};
  } else {
    spec.e0_policy = GammaE0{e0.at("a").get<double>()};
  }
  spec.validate();
  return spec;
}

inline void save_archive(const ChainArchive& ar, const std::filesystem::path& dir) {
  io::ensure_dir(dir);
  nlohmann::json meta;
  meta["format"] = kArchiveFormat;
  meta["dataset"] = ar.dataset_name;
  meta["K"] = ar.K;
  meta["r"] = ar.r;
  meta["N"] = ar.N;
  meta["M"] = ar.M();
  meta["spec"] = spec_to_json(ar.spec);
  meta["hyper"] = {{"median", io::vector_to_json(ar.hyper.median)},
                   {"range", io::vector_to_json(ar.hyper.range)},
                   {"c0", ar.hyper.c0},
                   {"g0", ar.hyper.g0}};
  meta["config"] = {{"burn_in", ar.config.burn_in},
                    {"iterations", ar.config.iterations},
                    {"store_sigma", ar.config.store_sigma},
                    {"store_allocations", ar.config.store_allocations},
                    {"seed", ar.config.seed}};
  meta["e0_acceptance"] = io::number_or_null(ar.e0_acceptance);
  nlohmann::json tables = nlohmann::json::object();
  io::write_table(dir, "eta", ar.eta, tables);
  io::write_table(dir, "mu", ar.mu, tables);
  io::write_table(dir, "lambda", ar.lambda, tables);
  io::write_table(dir, "e0", ar.e0, tables);
  io::write_table(dir, "counts", ar.counts, tables);
  io::write_table(dir, "k0", ar.k0, tables);
  if (ar.has_sigma()) io::write_table(dir, "sigma", ar.sigma, tables);
  if (ar.has_allocations()) io::write_table(dir, "allocations", ar.allocations, tables);
  meta["tables"] = tables;
  std::ofstream out(dir / "metadata.json");
  if (!out) fail(ErrorCode::Io, "cannot write metadata in '" + dir.string() + "'");
  out << meta.dump(2) << '\n';
}

inline nlohmann::json read_metadata(const std::filesystem::path& dir, const char* format) {
  std::ifstream in(dir / "metadata.json");
  if (!in) fail(ErrorCode::Io, "no metadata.json in '" + dir.string() + "'");
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("metadata.json: ") + e.what());
  }
  if (meta.value("format", "") != format) {
    fail(ErrorCode::ParseError, "'" + dir.string() + "' is not a " + format + " directory");
  }
  return meta;
}

inline ChainArchive load_archive(const std::filesystem::path& dir) {
  const nlohmann::json meta = read_metadata(dir, kArchiveFormat);
  ChainArchive ar;
  try {
    ar.dataset_name = meta.at("dataset").get<std::string>();
    ar.K = meta.at("K").get<int>();
    ar.r = meta.at("r").get<int>();
    ar.N = meta.at("N").get<int>();
    ar.spec = spec_from_json(meta.at("spec"));
    const auto& h = meta.at("hyper");
    ar.hyper.median = io::json_to_vector(h.at("median"));
    ar.hyper.range = io::json_to_vector(h.at("range"));
    ar.hyper.c0 = h.at("c0").get<double>();
    ar.hyper.g0 = h.at("g0").get<double>();
    ar.hyper.R0 = SpdMatrix::diagonal(ar.hyper.range.array().square().matrix());
    ar.hyper.G0 = SpdMatrix::diagonal(((100.0 * ar.hyper.g0 / ar.hyper.c0) / ar.hyper.range.array().square()).matrix());
    const auto& c = meta.at("config");
    ar.config.burn_in = c.at("burn_in").get<int>();
    ar.config.iterations = c.at("iterations").get<int>();
    ar.config.store_sigma = c.at("store_sigma").get<bool>();
    ar.config.store_allocations = c.at("store_allocations").get<bool>();
    ar.config.seed = c.at("seed").get<std::uint64_t>();
    ar.e0_acceptance = io::number_or_nan(meta.at("e0_acceptance"));
    const auto& t = meta.at("tables");
    io::read_table(dir, "eta", ar.eta, t);
    io::read_table(dir, "mu", ar.mu, t);
    io::read_table(dir, "lambda", ar.lambda, t);
    io::read_table(dir, "e0", ar.e0, t);
    io::read_table(dir, "counts", ar.counts, t);
    io::read_table(dir, "k0", ar.k0, t);
    if (t.contains("sigma")) io::read_table(dir, "sigma", ar.sigma, t);
    if (t.contains("allocations")) io::read_table(dir, "allocations", ar.allocations, t);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("metadata.json: ") + e.what());
  }
  if (ar.eta.rows() != meta.at("M").get<int>() || ar.eta.cols() != ar.K) {
    fail(ErrorCode::ParseError, "table shapes do not match metadata");
  }
  return ar;
}

/// Writes the identified draws plus permutation_log.tsv (iteration, kept or
/// dropped, 1-based ρ).
inline void save_identified(const IdentifiedDraws& id, const std::filesystem::path& dir) {
  io::ensure_dir(dir);
  nlohmann::json meta;
  meta["format"] = kIdentifiedFormat;
  meta["K"] = id.K;
  meta["r"] = id.r;
  meta["N"] = id.N;
  meta["k0_hat"] = id.k0_hat;
  meta["m0"] = id.m0;
  meta["m0_rho"] = id.m0_rho;
  meta["distance"] = id.distance;
  meta["spec"] = spec_to_json(id.spec);
  meta["e0_acceptance"] = io::number_or_null(id.e0_acceptance);
  nlohmann::json tables = nlohmann::json::object();
  Eigen::VectorXi iters = Eigen::Map<const Eigen::VectorXi>(id.iterations.data(), id.retained());
  io::write_table(dir, "iterations", iters, tables);
  io::write_table(dir, "origin", id.origin, tables);
  io::write_table(dir, "mu", id.mu, tables);
  io::write_table(dir, "eta", id.eta, tables);
  io::write_table(dir, "lambda", id.lambda, tables);
  io::write_table(dir, "e0", id.e0, tables);
  if (id.has_sigma()) io::write_table(dir, "sigma", id.sigma, tables);
  if (id.has_allocations()) io::write_table(dir, "allocations", id.allocations, tables);
  meta["tables"] = tables;
  {
    std::ofstream out(dir / "metadata.json");
    if (!out) fail(ErrorCode::Io, "cannot write metadata in '" + dir.string() + "'");
    out << meta.dump(2) << '\n';
  }
  std::ofstream log(dir / "permutation_log.tsv");
  if (!log) fail(ErrorCode::Io, "cannot write permutation log in '" + dir.string() + "'");
  log << "iteration\tstatus\trho\n";
  for (const auto& e : id.log) {
    log << e.iteration << '\t' << (e.kept ? "kept" : "dropped") << '\t';
    for (std::size_t p = 0; p < e.rho.size(); ++p) log << (p ? "," : "") << e.rho[p] + 1;
    log << '\n';
  }
}

inline IdentifiedDraws load_identified(const std::filesystem::path& dir) {
  const nlohmann::json meta = read_metadata(dir, kIdentifiedFormat);
  IdentifiedDraws id;
  try {
    id.K = meta.at("K").get<int>();
    id.r = meta.at("r").get<int>();
    id.N = meta.at("N").get<int>();
    id.k0_hat = meta.at("k0_hat").get<int>();
    id.m0 = meta.at("m0").get<int>();
    id.m0_rho = meta.at("m0_rho").get<double>();
    id.distance = meta.at("distance").get<std::string>();
    id.spec = spec_from_json(meta.at("spec"));
    id.e0_acceptance = io::number_or_nan(meta.at("e0_acceptance"));
    const auto& t = meta.at("tables");
    Eigen::VectorXi iters;
    io::read_table(dir, "iterations", iters, t);
    id.iterations.assign(iters.data(), iters.data() + iters.size());
    io::read_table(dir, "origin", id.origin, t);
    io::read_table(dir, "mu", id.mu, t);
    io::read_table(dir, "eta", id.eta, t);
    io::read_table(dir, "lambda", id.lambda, t);
    io::read_table(dir, "e0", id.e0, t);
    if (t.contains("sigma")) io::read_table(dir, "sigma", id.sigma, t);
    if (t.contains("allocations")) io::read_table(dir, "allocations", id.allocations, t);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("metadata.json: ") + e.what());
  }
  std::ifstream log(dir / "permutation_log.tsv");
  if (!log) fail(ErrorCode::Io, "no permutation_log.tsv in '" + dir.string() + "'");
  std::string line;
  std::getline(log, line);
  while (std::getline(log, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    PermutationLogEntry e;
    std::string status, rho;
    std::getline(ls, line, '\t');
    e.iteration = std::stoi(line);
    std::getline(ls, status, '\t');
    std::getline(ls, rho);
    e.kept = status == "kept";
    std::istringstream rs(rho);
    std::string cell;
    while (std::getline(rs, cell, ',')) e.rho.push_back(std::stoi(cell) - 1);
    id.log.push_back(std::move(e));
  }
  return id;
}

}  // namespace sparsemix
