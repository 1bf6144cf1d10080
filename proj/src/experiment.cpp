#include "mvsc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <cstdio>
#include <thread>

#include "mvsc/error.hpp"
#include "mvsc/metrics.hpp"
#include "mvsc/spectral.hpp"
#include "mvsc/trace.hpp"

namespace mvsc::experiment {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const ParameterPreset kPresets[] = {
    {"3sources", 1.0, 0.8, 0.5},     {"ORL", 0.2, 0.1, 0.5},
    {"MSRC-v1", 1e-5, 0.5, 0.5},     {"BBCsport", 0.2, 2.0, 0.5},
    {"COIL20", 0.5, 0.1, 0.5},       {"Caltech101-7", 5.0, 10.0, 0.5},
    {"HW", 0.8, 0.5, 0.5},
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, p};
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

std::vector<double> axis(const json& g, const char* key) {
  if (!g.contains(key)) return {};
  auto v = get_as<std::vector<double>>(g, key);
  if (v.empty()) throw ConfigError(std::string("grid axis '") + key + "' must not be empty");
  return v;
}

std::vector<double> dedupe(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

json stats_json(const MetricStats& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"values", s.values}};
}

MetricStats make_stats(std::vector<double> values) {
  MetricStats s;
  const double n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  for (double v : values) s.std += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(s.std / n);
  s.values = std::move(values);
  return s;
}

json solver_json(const solver::SolverConfig& c, solver::Variant variant) {
  return {{"alpha", c.alpha},     {"beta", c.beta},
          {"eta", c.eta},         {"mu0", c.mu0},
          {"mu_max", c.mu_max},   {"rho", c.rho},
          {"eps", c.eps},         {"residual_tol", c.residual_tol},
          {"max_iter", c.max_iter}, {"j_floor", c.j_floor},
          {"variant", solver::to_string(variant)}};
}

constexpr const char* kMetricNames[] = {"acc", "nmi", "ari", "f_score"};

}  // namespace

std::span<const ParameterPreset> parameter_presets() { return kPresets; }

const ParameterPreset& find_preset(const std::string& name) {
  for (const auto& p : kPresets)
    if (lower(p.name) == lower(name)) return p;
  throw ConfigError("unknown preset: " + name);
}

ParameterGrid default_grid() {
  const std::vector<double> ab{1e-5, 1e-4, 0.001, 0.01, 0.1, 0.2, 0.5, 0.8, 1, 2, 5, 8, 10};
  return {ab, ab, {-5, -2, -1, 0.1, 0.5, 1.5, 2, 5}};
}

void ExperimentConfig::validate() const {
  if (manifest.has_value() == synthetic.has_value())
    throw ConfigError("config needs exactly one dataset source: manifest or synthetic");
  try {
    solver.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (grid) {
    for (double a : grid->alpha)
      if (!(a > 0.0)) throw ConfigError("grid alpha values must be positive");
    for (double b : grid->beta)
      if (!(b > 0.0)) throw ConfigError("grid beta values must be positive");
    for (double e : grid->eta)
      if (e == 1.0 || !std::isfinite(e)) throw ConfigError("grid eta values must be finite and != 1");
  }
  if (k && *k < 1) throw ConfigError("k must be >= 1");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"dataset", "preset", "normalize", "solver", "grid", "k", "repetitions", "seed",
                  "variant", "output_dir", "restarts", "threads"},
                 "config");
  auto resolve = [&](const fs::path& p) { return p.is_absolute() || base_dir.empty() ? p : base_dir / p; };

  ExperimentConfig cfg;
  try {
    if (j.contains("dataset")) {
      const json& d = j["dataset"];
      if (d.is_string()) {
        cfg.manifest = resolve(d.get<std::string>());
      } else if (d.is_object()) {
        reject_unknown(d, {"manifest", "synthetic"}, "dataset");
        if (d.contains("manifest")) cfg.manifest = resolve(get_as<std::string>(d, "manifest"));
        if (d.contains("synthetic")) {
          const json& s = d["synthetic"];
          reject_unknown(s, {"k", "n_per_cluster", "subspace_dim", "view_dims", "noise_sigma", "seed"},
                         "dataset.synthetic");
          SyntheticSpec spec;
          spec.k = s.value("k", spec.k);
          spec.n_per_cluster = s.value("n_per_cluster", spec.n_per_cluster);
          spec.subspace_dim = s.value("subspace_dim", spec.subspace_dim);
          spec.view_dims = s.value("view_dims", spec.view_dims);
          spec.noise_sigma = s.value("noise_sigma", spec.noise_sigma);
          spec.seed = s.value("seed", spec.seed);
          cfg.synthetic = spec;
        }
      } else {
        throw ConfigError("dataset must be a manifest path or an object");
      }
    }

    if (j.contains("preset")) {
      const ParameterPreset& p = find_preset(get_as<std::string>(j, "preset"));
      cfg.solver.alpha = p.alpha;
      cfg.solver.beta = p.beta;
      cfg.solver.eta = p.eta;
    }
    if (j.contains("solver")) {
      const json& s = j["solver"];
      reject_unknown(s, {"alpha", "beta", "eta", "mu0", "mu_max", "rho", "eps", "residual_tol",
                         "max_iter", "j_floor"},
                     "solver");
      auto& c = cfg.solver;
      c.alpha = s.value("alpha", c.alpha);
      c.beta = s.value("beta", c.beta);
      c.eta = s.value("eta", c.eta);
      c.mu0 = s.value("mu0", c.mu0);
      c.mu_max = s.value("mu_max", c.mu_max);
      c.rho = s.value("rho", c.rho);
      c.eps = s.value("eps", c.eps);
      c.residual_tol = s.value("residual_tol", c.residual_tol);
      c.max_iter = s.value("max_iter", c.max_iter);
      c.j_floor = s.value("j_floor", c.j_floor);
    }
    if (j.contains("grid")) {
      const json& g = j["grid"];
      if (g.is_string()) {
        if (g.get<std::string>() != "default") throw ConfigError("grid must be 'default' or an object");
        cfg.grid = default_grid();
      } else if (g.is_object()) {
        reject_unknown(g, {"alpha", "beta", "eta"}, "grid");
        cfg.grid = ParameterGrid{axis(g, "alpha"), axis(g, "beta"), axis(g, "eta")};
      } else if (!g.is_null()) {
        throw ConfigError("grid must be 'default' or an object");
      }
    }
    if (j.contains("normalize")) cfg.normalization = parse_normalization(get_as<std::string>(j, "normalize"));
    if (j.contains("k") && !j["k"].is_null()) cfg.k = get_as<int>(j, "k");
    if (j.contains("repetitions")) cfg.repetitions = get_as<int>(j, "repetitions");
    if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("variant")) cfg.variant = solver::parse_variant(get_as<std::string>(j, "variant"));
    if (j.contains("output_dir")) cfg.output_dir = resolve(get_as<std::string>(j, "output_dir"));
    if (j.contains("restarts")) cfg.restarts = get_as<int>(j, "restarts");
    if (j.contains("threads")) cfg.threads = get_as<int>(j, "threads");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid config JSON: " + std::string(e.what()));
  }
  return parse_config(j, path.parent_path());
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg) {
  auto pick = [](const std::optional<ParameterGrid>& g, auto member, double fallback) {
    if (g && !((*g).*member).empty()) return dedupe((*g).*member);
    return std::vector<double>{fallback};
  };
  const auto as = pick(cfg.grid, &ParameterGrid::alpha, cfg.solver.alpha);
  const auto bs = pick(cfg.grid, &ParameterGrid::beta, cfg.solver.beta);
  const auto es = pick(cfg.grid, &ParameterGrid::eta, cfg.solver.eta);
  std::vector<GridPoint> pts;
  for (double a : as)
    for (double b : bs)
      for (double e : es) pts.push_back({a, b, e});
  return pts;
}

std::string grid_point_id(const GridPoint& p, const solver::SolverConfig& base,
                          solver::Variant variant) {
  const std::string key = "alpha=" + fmt(p.alpha) + ";beta=" + fmt(p.beta) + ";eta=" + fmt(p.eta) +
                          ";variant=" + solver::to_string(variant) + ";mu0=" + fmt(base.mu0) +
                          ";mu_max=" + fmt(base.mu_max) + ";rho=" + fmt(base.rho) +
                          ";eps=" + fmt(base.eps) + ";residual_tol=" + fmt(base.residual_tol) +
                          ";max_iter=" + std::to_string(base.max_iter) +
                          ";j_floor=" + fmt(base.j_floor);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MultiViewDataset prepare_dataset(const ExperimentConfig& cfg) {
  MultiViewDataset ds = cfg.manifest ? load_dataset(*cfg.manifest) : generate_synthetic(*cfg.synthetic);
  return normalize_views(ds, cfg.normalization);
}

json best_per_metric(const std::vector<json>& point_results) {
  json best = json::object();
  for (const char* m : kMetricNames) {
    const json* winner = nullptr;
    for (const json& r : point_results) {
      if (r.value("status", "") != "ok" || !r.contains("metrics") || !r["metrics"].contains(m)) continue;
      if (!winner || r["metrics"][m]["mean"].get<double>() > (*winner)["metrics"][m]["mean"].get<double>())
        winner = &r;
    }
    if (winner)
      best[m] = {{"id", (*winner)["id"]},
                 {"alpha", (*winner)["params"]["alpha"]},
                 {"beta", (*winner)["params"]["beta"]},
                 {"eta", (*winner)["params"]["eta"]},
                 {"mean", (*winner)["metrics"][m]["mean"]},
                 {"std", (*winner)["metrics"][m]["std"]}};
  }
  return best;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const MultiViewDataset ds = prepare_dataset(cfg);

  int k = 0;
  if (cfg.k) {
    k = *cfg.k;
  } else if (ds.has_labels()) {
    k = ds.num_classes();
  } else {
    throw ConfigError("k is required when the dataset has no labels");
  }
  if (k > ds.num_samples()) throw ConfigError("k exceeds the number of samples");

  const std::vector<GridPoint> points = expand_grid(cfg);
  fs::create_directories(cfg.output_dir);

  ExperimentResult result;
  result.points.resize(points.size());
  std::mutex log_mu;
  auto say = [&](const std::string& line) {
    if (!log) return;
    std::lock_guard lock(log_mu);
    *log << line << '\n' << std::flush;
  };

  auto run_point = [&](std::size_t idx) {
    const auto start = std::chrono::steady_clock::now();
    GridPointResult& r = result.points[idx];
    r.point = points[idx];
    solver::SolverConfig sc = cfg.solver;
    sc.alpha = r.point.alpha;
    sc.beta = r.point.beta;
    sc.eta = r.point.eta;
    r.id = grid_point_id(r.point, cfg.solver, cfg.variant);
    const fs::path dir = cfg.output_dir / r.id;
    fs::create_directories(dir);

    json j;
    j["id"] = r.id;
    j["grid_index"] = idx;
    j["params"] = solver_json(sc, cfg.variant);
    j["k"] = k;
    j["repetitions"] = cfg.repetitions;
    j["seed"] = cfg.seed;
    j["restarts"] = cfg.restarts;
    j["normalize"] = to_string(cfg.normalization);

    solver::Diagnostics diag;
    try {
      const solver::SolverOutput out = solver::solve(ds, sc, cfg.variant);
      diag = out.diagnostics;
      r.ok = true;
      r.converged = out.converged;
      r.iterations = out.iterations;
      write_csv_matrix(dir / "consensus.csv", out.consensus_C);

      const Matrix embedding = spectral::spectral_embedding(spectral::build_affinity(out.consensus_C), k);
      std::vector<double> acc, nmi, ari, fs_;
      json assignments = json::array();
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const auto a = spectral::kmeans(embedding, k, cfg.seed + static_cast<std::uint64_t>(rep), cfg.restarts);
        assignments.push_back({{"seed", cfg.seed + static_cast<std::uint64_t>(rep)},
                               {"inertia", a.inertia},
                               {"empty_clusters", a.empty_clusters}});
        if (ds.has_labels()) {
          const auto e = metrics::evaluate(a.labels, *ds.labels());
          acc.push_back(e.acc);
          nmi.push_back(e.nmi);
          ari.push_back(e.ari);
          fs_.push_back(e.f_score);
        }
      }
      j["status"] = "ok";
      j["converged"] = out.converged;
      j["iterations"] = out.iterations;
      j["gamma"] = std::vector<double>(out.gamma.data(), out.gamma.data() + out.gamma.size());
      j["clustering"] = assignments;
      const auto& last = out.diagnostics.back();
      j["final"] = {{"residual_C", last.residual_C}, {"residual_Z", last.residual_Z},
                    {"gap_Y", last.gaps.Y},           {"gap_CiZi", last.gaps.CiZi},
                    {"gap_Ci1", last.gaps.Ci1},       {"gap_CZ", last.gaps.CZ},
                    {"gap_C1", last.gaps.C1},         {"objective", last.objective}};
      if (ds.has_labels()) {
        r.acc = make_stats(acc);
        r.nmi = make_stats(nmi);
        r.ari = make_stats(ari);
        r.f_score = make_stats(fs_);
        j["metrics"] = {{"acc", stats_json(*r.acc)},
                        {"nmi", stats_json(*r.nmi)},
                        {"ari", stats_json(*r.ari)},
                        {"f_score", stats_json(*r.f_score)}};
      }
    } catch (const solver::SolverFailure& f) {
      diag = f.diagnostics();
      r.ok = false;
      r.error = f.what();
    } catch (const Error& e) {
      r.ok = false;
      r.error = e.what();
    }
    if (!r.ok) {
      j["status"] = "failed";
      j["error"] = r.error;
      j["iterations"] = diag.size();
      j["converged"] = false;
    }

    const auto rows = trace::to_rows(diag);
    trace::write_trace_csv(dir / "trace.csv", rows);
    if (!rows.empty()) {
      std::ofstream(dir / "plot.svg") << trace::convergence_svg(rows, r.id);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["run_metadata"] = {{"elapsed_seconds", secs}};
    std::ofstream(dir / "result.json") << j.dump(2) << '\n';
    r.json = std::move(j);

    std::string line = "[" + std::to_string(idx + 1) + "/" + std::to_string(points.size()) + "] " +
                       r.id + " alpha=" + fmt(r.point.alpha) + " beta=" + fmt(r.point.beta) +
                       " eta=" + fmt(r.point.eta);
    if (!r.ok) {
      line += " FAILED: " + r.error;
    } else {
      line += " iters=" + std::to_string(r.iterations) + (r.converged ? " converged" : " not-converged");
      if (r.nmi) line += " acc=" + fmt(r.acc->mean) + " nmi=" + fmt(r.nmi->mean);
    }
    say(line);
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) run_point(i);
  };
  const int nthreads = std::min<int>(cfg.threads, static_cast<int>(points.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<json> per_point;
  json brief = json::array();
  int failed = 0;
  for (const auto& r : result.points) {
    per_point.push_back(r.json);
    json b = {{"id", r.id}, {"alpha", r.point.alpha}, {"beta", r.point.beta}, {"eta", r.point.eta},
              {"status", r.ok ? "ok" : "failed"}, {"converged", r.converged}, {"iterations", r.iterations}};
    if (r.nmi) {
      b["acc"] = r.acc->mean;
      b["nmi"] = r.nmi->mean;
      b["ari"] = r.ari->mean;
      b["f_score"] = r.f_score->mean;
    }
    brief.push_back(b);
    failed += r.ok ? 0 : 1;
  }

  json& s = result.summary;
  s["dataset"] = {{"name", ds.name()},
                  {"n", ds.num_samples()},
                  {"views", ds.num_views()},
                  {"labels", ds.has_labels()}};
  s["variant"] = solver::to_string(cfg.variant);
  s["k"] = k;
  s["repetitions"] = cfg.repetitions;
  s["seed"] = cfg.seed;
  s["points"] = brief;
  s["failed"] = failed;
  s["succeeded"] = static_cast<int>(points.size()) - failed;
  s["best"] = best_per_metric(per_point);
  std::ofstream(cfg.output_dir / "summary.json") << s.dump(2) << '\n';

  result.exit_code = failed == static_cast<int>(points.size()) ? 2 : 0;
  return result;
}

}  // namespace mvsc::experiment
