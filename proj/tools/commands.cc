#include "commands.h"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "covdesign/analysis.h"
#include "covdesign/clustering.h"
#include "covdesign/correlation_root.h"
#include "covdesign/designs.h"
#include "covdesign/error.h"
#include "covdesign/graph.h"
#include "covdesign/kernels.h"
#include "covdesign/optimizer.h"
#include "covdesign/simulation.h"

namespace covdesign::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kValidDesigns = "ber, cr, ibr, ibr-p, ocd";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

fs::path absolute(const fs::path& p, const fs::path& base) {
  return (p.is_absolute() ? p : base / p).lexically_normal();
}

fs::path with_suffix(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + suffix;
}

EdgeListFormat parse_format(const std::string& s) {
  if (s == "auto") return EdgeListFormat::kAuto;
  if (s == "plain") return EdgeListFormat::kPlain;
  if (s == "mtx" || s == "matrix-market") return EdgeListFormat::kMatrixMarket;
  throw InvalidArgument("unknown graph format '" + s + "' (expected auto, plain or mtx)");
}

LoadedGraph load_graph(const json& cfg, RunRecord& record) {
  const fs::path path = cfg.at("graph").get<std::string>();
  LoadedGraph g = record.timed("load_graph", [&] {
    return load_edge_list(path, parse_format(cfg.value("graph_format", "auto")));
  });
  record.input("graph", path);
  record.note("graph", {{"nodes", g.graph.num_nodes()},
                        {"edges", g.graph.num_edges()},
                        {"dropped_self_loops", g.dropped.self_loops},
                        {"dropped_duplicates", g.dropped.duplicates}});
  return g;
}

Clustering load_clusters(const fs::path& path, int n, RunRecord& record) {
  bool remapped = false;
  Clustering c = read_clustering(path, n, &remapped);
  record.input("clusters", path);
  if (remapped) record.note("cluster_ids_remapped", true);
  return c;
}

OptimizerConfig optimizer_config(const json& j) {
  OptimizerConfig c;
  c.iterations = j.at("iterations").get<int>();
  c.step = j.at("step").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.moment_eps = j.at("moment_eps").get<double>();
  c.clamp = j.at("clamp").get<double>();
  c.omega = j.at("omega").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.init_jitter = j.at("init_jitter").get<double>();
  c.trace_stride = j.at("trace_stride").get<int>();
  return c;
}

json optimizer_defaults(const json& given) {
  const OptimizerConfig d;
  json j = {{"omega", d.omega},           {"iterations", d.iterations},
            {"step", d.step},             {"beta1", d.beta1},
            {"beta2", d.beta2},           {"moment_eps", d.moment_eps},
            {"clamp", d.clamp},           {"seed", d.seed},
            {"init_jitter", d.init_jitter}, {"trace_stride", d.trace_stride}};
  for (auto& [key, value] : given.items()) {
    if (!j.contains(key)) throw InvalidArgument("unknown optimizer option '" + key + "'");
    j[key] = value;
  }
  return j;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream out;
  out << "iteration,objective,bias_term,variance_term,max_row_norm_error,min_offdiag,"
         "max_offdiag,max_diag_error,clamped\n";
  for (const TracePoint& p : trace) {
    out << p.iteration << ',' << num(p.objective) << ',' << num(p.bias_term) << ','
        << num(p.variance_term) << ',' << num(p.max_row_norm_error) << ','
        << num(p.min_offdiag) << ',' << num(p.max_offdiag) << ',' << num(p.max_diag_error)
        << ',' << p.clamped << '\n';
  }
  return out.str();
}

// Normalises a design entry to an object with every field present.
json resolve_design(const json& entry, const fs::path& base) {
  json d = entry.is_string() ? json{{"kind", entry.get<std::string>()}} : entry;
  if (!d.is_object() || !d.contains("kind"))
    throw InvalidArgument(std::string("design entries need a kind; valid kinds: ") +
                          kValidDesigns);
  const std::string kind = d.at("kind").get<std::string>();
  if (kind == "ber" || kind == "cr") return {{"kind", kind}};
  if (kind == "ibr-p") return {{"kind", "ibr"}, {"block_size", 2}};
  if (kind == "ibr") return {{"kind", "ibr"}, {"block_size", d.value("block_size", 2)}};
  if (kind == "ocd") {
    if (d.contains("root"))
      return {{"kind", "ocd"}, {"root", absolute(d.at("root").get<std::string>(), base).string()}};
    return {{"kind", "ocd"}, {"optimize", optimizer_defaults(d.value("optimize", json::object()))}};
  }
  throw InvalidArgument("unknown design '" + kind + "'; valid kinds: " + kValidDesigns);
}

json resolve_model(const json& entry) {
  json m = entry.is_string() ? json{{"kind", entry.get<std::string>()}} : entry;
  const std::string kind = m.value("kind", "");
  if (kind == "linear" || kind == "multiplicative") {
    const SimModel d;
    return {{"kind", kind},
            {"alpha", m.value("alpha", d.alpha)},
            {"beta", m.value("beta", d.beta)},
            {"c", m.value("c", d.c)},
            {"sigma", m.value("sigma", d.sigma)}};
  }
  if (kind == "analysis")
    return {{"kind", kind}, {"alpha", m.value("alpha", 0.0)}, {"beta", m.value("beta", 1.0)}};
  throw InvalidArgument("unknown model '" + kind + "'; valid kinds: linear, multiplicative, analysis");
}

OutcomeModel build_model(const json& m, int n) {
  const std::string kind = m.at("kind").get<std::string>();
  if (kind == "analysis")
    return AnalysisModel::uniform(n, m.at("alpha").get<double>(), m.at("beta").get<double>(), 0.0);
  SimModel s;
  s.kind = kind == "linear" ? SimModelKind::kLinear : SimModelKind::kMultiplicative;
  s.alpha = m.at("alpha").get<double>();
  s.beta = m.at("beta").get<double>();
  s.c = m.at("c").get<double>();
  s.sigma = m.at("sigma").get<double>();
  return s;
}

Design build_design(const json& d, const Clustering& clustering, const ClusterSummary& summary,
                    RunRecord& record, const fs::path& out_dir, int index) {
  const std::string kind = d.at("kind").get<std::string>();
  const int k = clustering.num_clusters();
  if (kind == "ber") return Design::bernoulli(k);
  if (kind == "cr") return Design::complete(k);
  if (kind == "ibr") {
    const int b = d.at("block_size").get<int>();
    return Design::ibr(build_ibr_blocks(clustering.sizes(), b), k, b);
  }
  if (d.contains("root")) {
    const fs::path path = d.at("root").get<std::string>();
    Matrix root = read_matrix_csv(path);
    record.input("root_" + std::to_string(index), path);
    if (static_cast<int>(root.rows()) != k || static_cast<int>(root.cols()) != k) {
      throw InvalidArgument("root '" + path.string() + "' is " + std::to_string(root.rows()) +
                            "x" + std::to_string(root.cols()) + " but the clustering has K=" +
                            std::to_string(k));
    }
    return Design::ocd(project_rows(root));
  }
  OptimizerConfig oc = optimizer_config(d.at("optimize"));
  record.seed("optimizer_" + std::to_string(index), oc.seed);
  OptimizeResult r = record.timed("optimize_" + std::to_string(index),
                                  [&] { return optimize(summary, oc); });
  if (!out_dir.empty()) {
    const fs::path root_path = out_dir / ("ocd_" + std::to_string(index) + "_root.csv");
    write_matrix_csv(r.root, root_path);
    record.output("ocd_root_" + std::to_string(index), root_path);
  }
  record.note("ocd_" + std::to_string(index) + "_reduction",
              1.0 - r.final_objective / r.initial_objective);
  return Design::ocd(r.root);
}

Clustering simulate_clustering(const json& cfg, const Graph& graph, RunRecord& record) {
  if (cfg.contains("clustering"))
    return load_clusters(cfg.at("clustering").get<std::string>(), graph.num_nodes(), record);
  const json& lv = cfg.at("louvain");
  LouvainOptions opt;
  opt.resolution = lv.at("resolution").get<double>();
  opt.seed = lv.at("seed").get<std::uint64_t>();
  record.seed("louvain", opt.seed);
  return record.timed("louvain", [&] { return louvain(graph, opt).clustering; });
}

json cell_json(const CellStats& c) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"design", c.design},
          {"gamma", c.gamma},
          {"estimator", estimator_name(c.estimator)},
          {"tau", c.tau},
          {"mean", finite_or_null(c.mean)},
          {"bias", finite_or_null(c.bias)},
          {"sd", finite_or_null(c.sd)},
          {"mse", finite_or_null(c.mse)},
          {"se_bias", finite_or_null(c.se_bias)},
          {"se_sd", finite_or_null(c.se_sd)},
          {"se_mse", finite_or_null(c.se_mse)},
          {"used", c.used},
          {"degenerate", c.degenerate},
          {"degenerate_probability", c.degenerate_probability}};
}

SimReport report_from_json(const json& r) {
  SimReport out;
  out.model = r.at("model").get<std::string>();
  out.exact = r.at("exact").get<bool>();
  out.shared_noise = r.at("shared_noise").get<bool>();
  out.replications = r.at("replications").get<std::int64_t>();
  auto num_or_nan = [](const json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  for (const json& c : r.at("cells")) {
    CellStats s;
    s.design = c.at("design").get<std::string>();
    s.gamma = c.at("gamma").get<double>();
    auto est = parse_estimator(c.at("estimator").get<std::string>());
    if (!est) throw ParseError("report", 0, "unknown estimator in report");
    s.estimator = *est;
    s.tau = c.at("tau").get<double>();
    s.mean = num_or_nan(c.at("mean"));
    s.bias = num_or_nan(c.at("bias"));
    s.sd = num_or_nan(c.at("sd"));
    s.mse = num_or_nan(c.at("mse"));
    s.se_bias = num_or_nan(c.at("se_bias"));
    s.se_sd = num_or_nan(c.at("se_sd"));
    s.se_mse = num_or_nan(c.at("se_mse"));
    s.used = c.at("used").get<std::int64_t>();
    s.degenerate = c.at("degenerate").get<std::int64_t>();
    out.cells.push_back(s);
  }
  return out;
}

std::vector<EstimatorKind> estimators_of(const SimReport& r) {
  std::vector<EstimatorKind> out;
  for (const CellStats& c : r.cells)
    if (std::find(out.begin(), out.end(), c.estimator) == out.end()) out.push_back(c.estimator);
  return out;
}

}  // namespace

void run_cluster(const json& config, std::ostream& log) {
  RunRecord record("cluster", config);
  LoadedGraph g = load_graph(config, record);
  LouvainOptions opt;
  opt.resolution = config.at("resolution").get<double>();
  opt.seed = config.at("seed").get<std::uint64_t>();
  record.seed("louvain", opt.seed);
  LouvainResult r = record.timed("louvain", [&] { return louvain(g.graph, opt); });

  const fs::path out = config.at("out").get<std::string>();
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_clustering(r.clustering, out);
  record.output("clusters", out);
  bool identity = true;
  for (std::size_t i = 0; i < g.original_ids.size(); ++i)
    identity = identity && g.original_ids[i] == static_cast<std::int64_t>(i);
  if (!identity) {
    const fs::path ids = with_suffix(out, ".ids");
    write_id_map(g.original_ids, ids);
    record.output("id_map", ids);
  }
  record.note("clusters", r.clustering.num_clusters());
  record.note("modularity", r.level_modularity.empty() ? 0.0 : r.level_modularity.back());
  record.write(with_suffix(out, ".manifest.json"));
  log << "K=" << r.clustering.num_clusters() << " modularity="
      << (r.level_modularity.empty() ? 0.0 : r.level_modularity.back()) << "\n";
}

void run_optimize(const json& config, std::ostream& log) {
  RunRecord record("optimize", config);
  LoadedGraph g = load_graph(config, record);
  Clustering clusters =
      load_clusters(config.at("clusters").get<std::string>(), g.graph.num_nodes(), record);
  ClusterSummary summary = build_cluster_summary(g.graph, clusters);
  OptimizerConfig oc = optimizer_config(config.at("optimizer"));
  record.seed("optimizer", oc.seed);

  std::optional<Matrix> start;
  if (!config.at("init").is_null()) {
    const fs::path init = config.at("init").get<std::string>();
    start = read_matrix_csv(init);
    record.input("init", init);
  }

  const fs::path out = config.at("out").get<std::string>();
  const fs::path trace_path = with_suffix(out, ".trace.csv");
  OptimizeResult r;
  try {
    r = record.timed("optimize",
                     [&] { return optimize(summary, oc, start ? &*start : nullptr); });
  } catch (const OptimizationError& e) {
    write_file(trace_path, trace_csv(e.trace()));
    throw;
  }

  write_matrix_csv(r.root, out);
  write_file(trace_path, trace_csv(r.trace));
  const double reduction = r.initial_objective > 0.0
                               ? 1.0 - r.final_objective / r.initial_objective
                               : 0.0;
  const TracePoint& last = r.trace.back();
  json sidecar = {{"K", summary.num_clusters()},
                  {"seed", oc.seed},
                  {"omega", oc.omega},
                  {"optimizer", config.at("optimizer")},
                  {"optimizer_sha256", sha256_hex(config.at("optimizer").dump())},
                  {"initial_objective", r.initial_objective},
                  {"final_objective", r.final_objective},
                  {"reduction", reduction},
                  {"bias_term", last.bias_term},
                  {"variance_term", last.variance_term},
                  {"max_row_norm_error", last.max_row_norm_error},
                  {"clamped_total", r.clamped_total},
                  {"isa", kernels::isa_name(kernels::active_isa())}};
  const fs::path sidecar_path = with_suffix(out, ".json");
  write_file(sidecar_path, sidecar.dump(2) + "\n");
  record.output("root", out);
  record.output("sidecar", sidecar_path);
  record.output("trace", trace_path);
  record.note("omega", oc.omega);
  record.note("initial_objective", r.initial_objective);
  record.note("final_objective", r.final_objective);
  record.note("reduction", reduction);
  record.write(with_suffix(out, ".manifest.json"));
  log << "K=" << summary.num_clusters() << " f0=" << num(r.initial_objective)
      << " f=" << num(r.final_objective) << " reduction=" << reduction << "\n";
}

json resolve_simulate_config(const fs::path& path, const SimulateOverrides& overrides) {
  json raw;
  try {
    raw = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return resolve_simulate_config(std::move(raw), fs::absolute(path).parent_path(), overrides);
}

json resolve_simulate_config(json raw, const fs::path& base, const SimulateOverrides& o) {
  static const std::set<std::string> known{
      "graph",   "graph_format", "clustering",   "louvain", "designs",
      "models",  "estimators",   "gammas",       "replications", "seed",
      "shared_noise", "workers", "exact",        "output_dir"};
  for (auto& [key, value] : raw.items())
    if (!known.count(key)) throw InvalidArgument("unknown config key '" + key + "'");
  if (!raw.contains("graph")) throw InvalidArgument("config needs 'graph'");

  json c;
  c["graph"] = absolute(raw.at("graph").get<std::string>(), base).string();
  c["graph_format"] = raw.value("graph_format", "auto");
  if (raw.contains("clustering")) {
    c["clustering"] = absolute(raw.at("clustering").get<std::string>(), base).string();
  } else {
    json lv = raw.value("louvain", json::object());
    c["louvain"] = {{"resolution", lv.value("resolution", 1.0)},
                    {"seed", lv.value("seed", std::uint64_t{0})}};
  }
  json designs = json::array();
  for (const json& d : raw.value("designs", json::array({"ber", "cr", "ibr-p", "ocd"})))
    designs.push_back(resolve_design(d, base));
  c["designs"] = designs;
  json models = json::array();
  for (const json& m : raw.value("models", json::array({"linear", "multiplicative"})))
    models.push_back(resolve_model(m));
  c["models"] = models;
  json estimators = json::array();
  for (const json& e : raw.value("estimators", json::array({"ht"}))) {
    if (!parse_estimator(e.get<std::string>()))
      throw InvalidArgument("unknown estimator '" + e.get<std::string>() +
                            "'; valid: ht, ht_adjusted, dim");
    estimators.push_back(e);
  }
  c["estimators"] = estimators;
  c["gammas"] = raw.value("gammas", json::array({0.5, 1.0, 2.0}));
  c["replications"] = o.replications.value_or(raw.value("replications", std::int64_t{10000}));
  c["seed"] = o.seed.value_or(raw.value("seed", std::uint64_t{0}));
  c["shared_noise"] = raw.value("shared_noise", false);
  c["workers"] = o.workers.value_or(raw.value("workers", 0));
  c["exact"] = raw.value("exact", false);
  if (o.output_dir) {
    c["output_dir"] = fs::absolute(*o.output_dir).lexically_normal().string();
  } else if (raw.contains("output_dir")) {
    c["output_dir"] = absolute(raw.at("output_dir").get<std::string>(), base).string();
  } else {
    throw InvalidArgument("config needs 'output_dir' (or pass --out-dir)");
  }
  if (c["gammas"].empty()) throw InvalidArgument("gamma grid is empty");
  if (c["replications"].get<std::int64_t>() < 1)
    throw InvalidArgument("replications must be >= 1");
  return c;
}

void run_simulate(const json& config, std::ostream& log) {
  RunRecord record("simulate", config);
  const fs::path out_dir = config.at("output_dir").get<std::string>();
  fs::create_directories(out_dir);
  LoadedGraph g = load_graph(config, record);
  Clustering clusters = simulate_clustering(config, g.graph, record);
  ClusterSummary summary = build_cluster_summary(g.graph, clusters);

  std::vector<Design> designs;
  std::set<std::string> names;
  int index = 0;
  for (const json& d : config.at("designs")) {
    designs.push_back(build_design(d, clusters, summary, record, out_dir, index++));
    if (!names.insert(designs.back().name()).second)
      throw InvalidArgument("design '" + designs.back().name() + "' listed twice");
  }
  std::vector<EstimatorKind> estimators;
  for (const json& e : config.at("estimators"))
    estimators.push_back(*parse_estimator(e.get<std::string>()));
  const auto gammas = config.at("gammas").get<std::vector<double>>();
  const bool exact = config.at("exact").get<bool>();
  record.seed("simulation", config.at("seed").get<std::uint64_t>());

  json bundle;
  // Output location and worker count do not affect results, so they stay out
  // of the echo and reruns elsewhere produce the same bytes.
  bundle["config"] = config;
  bundle["config"].erase("output_dir");
  bundle["config"].erase("workers");
  bundle["num_clusters"] = clusters.num_clusters();
  bundle["designs"] = json::array();
  for (const Design& d : designs)
    bundle["designs"].push_back({{"name", d.name()}, {"block_size", d.block_size()}});
  bundle["reports"] = json::array();

  for (const json& m : config.at("models")) {
    OutcomeModel model = build_model(m, g.graph.num_nodes());
    SimReport report;
    const std::string stage = "simulate_" + m.at("kind").get<std::string>();
    if (exact) {
      const auto* analysis = std::get_if<AnalysisModel>(&model);
      if (!analysis)
        throw InvalidArgument("exact runs need the noise-free analysis model");
      report = record.timed(stage, [&] {
        return run_exact(g.graph, clusters, designs, *analysis, estimators, gammas);
      });
    } else {
      SimConfig sc;
      sc.designs = designs;
      sc.model = model;
      sc.estimators = estimators;
      sc.gammas = gammas;
      sc.replications = config.at("replications").get<std::int64_t>();
      sc.seed = config.at("seed").get<std::uint64_t>();
      sc.shared_noise = config.at("shared_noise").get<bool>();
      sc.workers = config.at("workers").get<int>();
      report = record.timed(stage, [&] { return run_mc(g.graph, clusters, sc); });
    }
    json rj = {{"model", report.model},
               {"exact", report.exact},
               {"shared_noise", report.shared_noise},
               {"replications", report.replications},
               {"cells", json::array()}};
    for (const CellStats& c : report.cells) rj["cells"].push_back(cell_json(c));
    bundle["reports"].push_back(rj);

    for (EstimatorKind e : estimators) {
      ComparisonTable table = compare_designs(report, e);
      const std::string base = report.model + "_" + std::string(estimator_name(e));
      const fs::path csv = out_dir / (base + ".csv");
      write_file(csv, to_csv(table));
      record.output(base, csv);
      log << "model: " << report.model << (report.shared_noise ? " (shared noise)" : "")
          << "\n" << to_text(table) << "\n";
    }
  }
  const fs::path bundle_path = out_dir / "report.json";
  write_file(bundle_path, bundle.dump(2) + "\n");
  record.output("report", bundle_path);
  record.note("num_clusters", clusters.num_clusters());
  record.write(out_dir / "manifest.json");
}

void run_analyze(const json& raw_config, std::ostream& out) {
  json config = raw_config;
  config["design"] = resolve_design(raw_config.at("design"), fs::current_path());
  RunRecord record("analyze", config);
  LoadedGraph g = load_graph(config, record);
  Clustering clusters =
      load_clusters(config.at("clusters").get<std::string>(), g.graph.num_nodes(), record);
  ClusterSummary summary = build_cluster_summary(g.graph, clusters);
  Design design = build_design(config.at("design"), clusters, summary, record, {}, 0);
  const int n = g.graph.num_nodes();
  const json& m = config.at("model");
  const double gamma = m.at("gamma").get<double>();
  AnalysisModel model =
      AnalysisModel::uniform(n, m.at("alpha").get<double>(), m.at("beta").get<double>(), gamma);
  const auto h = h_vector(model, g.graph, clusters);
  const Matrix cov = design.covariance();

  json result;
  result["design"] = design.name();
  result["K"] = summary.num_clusters();
  result["n"] = n;
  result["gamma"] = gamma;
  result["tau"] = gate_analysis(model, g.graph);
  const double bias = bias_closed_form(summary, cov, gamma);
  result["bias"] = bias;
  double variance = 0.0;
  if (design.enumerable()) {
    VarianceTerms v = record.timed("variance", [&] {
      return variance_exact(summary, h, gamma, design);
    });
    variance = v.variance;
    result["variance"] = v.variance;
    result["variance_method"] = "exact";
    result["variance_terms"] = {{"linear", v.linear},
                                {"cross", v.cross},
                                {"quadratic", v.quadratic},
                                {"three_term_sum", v.three_term_sum}};
  } else {
    const auto draws = config.at("mc_draws").get<std::int64_t>();
    const auto seed = config.at("seed").get<std::uint64_t>();
    record.seed("variance_mc", seed);
    McEstimate v = record.timed("variance", [&] {
      return variance_monte_carlo(summary, h, gamma, design, draws, seed);
    });
    variance = v.value;
    result["variance"] = v.value;
    result["variance_method"] = "monte_carlo";
    result["variance_se"] = v.standard_error;
    result["variance_draws"] = v.draws;
  }
  double omega_star = std::numeric_limits<double>::quiet_NaN();
  if (gamma != 0.0) omega_star = omega_from_model(summary, h, gamma);
  result["omega_star"] = std::isfinite(omega_star) ? json(omega_star) : json(nullptr);
  double omega = config.at("omega").is_null() ? omega_star : config.at("omega").get<double>();
  if (!std::isfinite(omega))
    throw InvalidArgument("omega_from_model is not finite here; pass --omega explicitly");
  result["omega"] = omega;
  const double bound = variance_bound(summary, cov, gamma, omega);
  result["variance_bound"] = bound;
  result["mse"] = bias * bias + variance;
  result["mse_bound"] = bias * bias + bound;
  Objective f = objective_f(summary, cov, omega);
  result["objective"] = {{"f", f.total()},
                         {"bias_term", f.bias_term},
                         {"variance_term", f.variance_term}};

  const std::string text = result.dump(2) + "\n";
  out << text;
  if (!config.at("out").is_null()) {
    const fs::path path = config.at("out").get<std::string>();
    write_file(path, text);
    record.output("analysis", path);
    record.write(with_suffix(path, ".manifest.json"));
  }
}

void run_report(const json& config, std::ostream& out) {
  RunRecord record("report", config);
  const fs::path input = config.at("input").get<std::string>();
  json bundle;
  try {
    bundle = json::parse(read_file(input));
  } catch (const json::parse_error& e) {
    throw ParseError(input.string(), 0, e.what());
  }
  record.input("report", input);
  const std::string format = config.at("format").get<std::string>();
  std::ostringstream text;
  for (const json& rj : bundle.at("reports")) {
    SimReport r = report_from_json(rj);
    for (EstimatorKind e : estimators_of(r)) {
      ComparisonTable t = compare_designs(r, e);
      if (format == "csv") {
        text << "# model=" << r.model << " estimator=" << estimator_name(e) << "\n"
             << to_csv(t);
      } else {
        text << "model: " << r.model << (r.exact ? " (exact)" : "")
             << (r.shared_noise ? " (shared noise)" : "") << "\n"
             << to_text(t) << "\n";
      }
    }
  }
  out << text.str();
  if (!config.at("out").is_null()) {
    const fs::path path = config.at("out").get<std::string>();
    write_file(path, text.str());
    record.output("report", path);
    record.write(with_suffix(path, ".manifest.json"));
  }
}

void rerun(const fs::path& manifest_path, const std::optional<fs::path>& out_dir,
           const std::optional<int>& workers, std::ostream& log) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw ParseError(manifest_path.string(), 0, e.what());
  }
  const std::string command = manifest.at("command").get<std::string>();
  json config = manifest.at("config");

  const std::string isa = manifest.value("isa", "scalar");
  for (kernels::Isa candidate : {kernels::Isa::kScalar, kernels::Isa::kAvx2}) {
    if (kernels::isa_name(candidate) == isa) {
      if (!kernels::isa_available(candidate))
        throw InvalidArgument("manifest was produced with ISA '" + isa +
                              "', which this machine lacks");
      kernels::force_isa(candidate);
    }
  }

  auto relocate = [&](const char* key) {
    if (out_dir && config.contains(key) && !config.at(key).is_null()) {
      fs::path p = config.at(key).get<std::string>();
      config[key] = (fs::absolute(*out_dir) / p.filename()).lexically_normal().string();
    }
  };
  if (command == "simulate") {
    if (out_dir) config["output_dir"] = fs::absolute(*out_dir).lexically_normal().string();
    if (workers) config["workers"] = *workers;
    run_simulate(config, log);
  } else if (command == "cluster") {
    relocate("out");
    run_cluster(config, log);
  } else if (command == "optimize") {
    relocate("out");
    run_optimize(config, log);
  } else if (command == "analyze") {
    relocate("out");
    run_analyze(config, log);
  } else if (command == "report") {
    relocate("out");
    run_report(config, log);
  } else {
    throw InvalidArgument("manifest names unknown command '" + command + "'");
  }
}

bool paper_repro(const fs::path& edges, const fs::path& out_dir, std::int64_t replications,
                 int workers, std::ostream& log) {
  if (!fs::exists(edges))
    throw IoError("dataset file '" + edges.string() + "' not found");
  json raw = {{"graph", fs::absolute(edges).string()},
              {"louvain", {{"resolution", 10.0}, {"seed", 0}}},
              {"designs", {"ber", "cr", "ibr-p", "ocd"}},
              {"models", {"linear", "multiplicative"}},
              {"estimators", {"ht"}},
              {"gammas", {0.5, 1.0, 2.0}},
              {"replications", replications},
              {"seed", 0},
              {"workers", workers},
              {"output_dir", fs::absolute(out_dir).string()}};
  json config = resolve_simulate_config(raw, fs::current_path(), {});
  run_simulate(config, log);
  json bundle = json::parse(read_file(out_dir / "report.json"));
  bool ok = true;
  for (const json& rj : bundle.at("reports")) {
    SimReport r = report_from_json(rj);
    const double ocd = r.cell("ocd", 2.0, EstimatorKind::kHt).mse;
    const double ber = r.cell("ber", 2.0, EstimatorKind::kHt).mse;
    const bool pass = ocd < ber;
    ok = ok && pass;
    log << (pass ? "PASS" : "FAIL") << " " << r.model << ": MSE(ocd)=" << ocd
        << " MSE(ber)=" << ber << " at gamma=2\n";
  }
  return ok;
}

}  // namespace covdesign::cli
