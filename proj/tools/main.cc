#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "covdesign/error.h"
#include "covdesign/optimizer.h"

namespace fs = std::filesystem;
using covdesign::cli::json;

namespace {

std::string abs_path(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

json optional_path(const std::string& p) { return p.empty() ? json(nullptr) : json(abs_path(p)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariance-optimized cluster randomized designs for network experiments"};
  app.set_version_flag("--version", std::string(covdesign::cli::kToolVersion));
  app.require_subcommand(1);

  // cluster
  struct {
    std::string graph, format = "auto", out;
    double resolution = 1.0;
    std::uint64_t seed = 0;
  } cl;
  auto* cluster = app.add_subcommand("cluster", "Louvain clustering of a graph");
  cluster->add_option("--graph", cl.graph, "edge list or Matrix Market file")->required();
  cluster->add_option("--format", cl.format, "auto, plain or mtx")->capture_default_str();
  cluster->add_option("--resolution", cl.resolution)->capture_default_str();
  cluster->add_option("--seed", cl.seed)->capture_default_str();
  cluster->add_option("--out", cl.out, "clustering file")->required();

  // optimize
  covdesign::OptimizerConfig oc;
  struct {
    std::string graph, format = "auto", clusters, init, out;
  } op;
  auto* optimize = app.add_subcommand("optimize", "optimize the OCD correlation root");
  optimize->add_option("--graph", op.graph)->required();
  optimize->add_option("--format", op.format)->capture_default_str();
  optimize->add_option("--clusters", op.clusters)->required();
  optimize->add_option("--omega", oc.omega)->capture_default_str();
  optimize->add_option("--iters", oc.iterations)->capture_default_str();
  optimize->add_option("--lr", oc.step)->capture_default_str();
  optimize->add_option("--beta1", oc.beta1)->capture_default_str();
  optimize->add_option("--beta2", oc.beta2)->capture_default_str();
  optimize->add_option("--moment-eps", oc.moment_eps)->capture_default_str();
  optimize->add_option("--clamp", oc.clamp)->capture_default_str();
  optimize->add_option("--seed", oc.seed)->capture_default_str();
  optimize->add_option("--init-jitter", oc.init_jitter)->capture_default_str();
  optimize->add_option("--trace-stride", oc.trace_stride)->capture_default_str();
  optimize->add_option("--init", op.init, "warm-start root CSV");
  optimize->add_option("--out", op.out, "root CSV; sidecar, trace and manifest sit beside it")
      ->required();

  // simulate
  std::string sim_config, repro_edges, sim_out;
  covdesign::cli::SimulateOverrides ov;
  std::int64_t reps = 0;
  std::uint64_t sim_seed = 0;
  int workers = 0;
  auto* simulate = app.add_subcommand("simulate", "compare designs by simulation");
  auto* config_opt = simulate->add_option("--config", sim_config, "JSON run config");
  auto* repro_opt = simulate->add_option("--paper-repro", repro_edges,
                                         "run the full pipeline on a real edge list");
  config_opt->excludes(repro_opt);
  auto* reps_opt = simulate->add_option("--reps", reps);
  auto* seed_opt = simulate->add_option("--seed", sim_seed);
  auto* workers_opt = simulate->add_option("--workers", workers, "0 uses every core");
  auto* out_opt = simulate->add_option("--out-dir", sim_out);

  // analyze
  struct {
    std::string graph, format = "auto", clusters, design = "ber", root, out;
    int block_size = 2;
    double alpha = 0.0, beta = 1.0, gamma = 1.0;
    std::optional<double> omega;
    std::int64_t mc_draws = 200000;
    std::uint64_t seed = 0;
  } an;
  auto* analyze = app.add_subcommand("analyze", "closed-form bias, variance and bound");
  analyze->add_option("--graph", an.graph)->required();
  analyze->add_option("--format", an.format)->capture_default_str();
  analyze->add_option("--clusters", an.clusters)->required();
  analyze->add_option("--design", an.design, "ber, cr, ibr, ibr-p or ocd")->capture_default_str();
  analyze->add_option("--root", an.root, "root CSV for ocd");
  analyze->add_option("--block-size", an.block_size, "ibr block size")->capture_default_str();
  analyze->add_option("--alpha", an.alpha)->capture_default_str();
  analyze->add_option("--beta", an.beta)->capture_default_str();
  analyze->add_option("--gamma", an.gamma)->capture_default_str();
  analyze->add_option("--omega", an.omega, "defaults to the model's omega*");
  analyze->add_option("--mc-draws", an.mc_draws, "draws when enumeration is infeasible")
      ->capture_default_str();
  analyze->add_option("--seed", an.seed)->capture_default_str();
  analyze->add_option("--out", an.out);

  // report
  std::string rep_input, rep_format = "text", rep_out;
  auto* report = app.add_subcommand("report", "render comparison tables from report.json");
  report->add_option("--input", rep_input)->required();
  report->add_option("--format", rep_format)
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  report->add_option("--out", rep_out);

  // rerun
  std::string manifest, rerun_out;
  std::optional<int> rerun_workers;
  auto* rerun = app.add_subcommand("rerun", "re-execute a command from its manifest");
  rerun->add_option("--manifest", manifest)->required();
  rerun->add_option("--out-dir", rerun_out);
  rerun->add_option("--workers", rerun_workers);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) {
      json cfg = {{"graph", abs_path(cl.graph)}, {"graph_format", cl.format},
                  {"resolution", cl.resolution}, {"seed", cl.seed},
                  {"out", abs_path(cl.out)}};
      covdesign::cli::run_cluster(cfg, std::cerr);
    } else if (optimize->parsed()) {
      json opt = {{"omega", oc.omega},           {"iterations", oc.iterations},
                  {"step", oc.step},             {"beta1", oc.beta1},
                  {"beta2", oc.beta2},           {"moment_eps", oc.moment_eps},
                  {"clamp", oc.clamp},           {"seed", oc.seed},
                  {"init_jitter", oc.init_jitter}, {"trace_stride", oc.trace_stride}};
      json cfg = {{"graph", abs_path(op.graph)}, {"graph_format", op.format},
                  {"clusters", abs_path(op.clusters)}, {"optimizer", opt},
                  {"init", optional_path(op.init)}, {"out", abs_path(op.out)}};
      covdesign::cli::run_optimize(cfg, std::cerr);
    } else if (simulate->parsed()) {
      if (*reps_opt) ov.replications = reps;
      if (*seed_opt) ov.seed = sim_seed;
      if (*workers_opt) ov.workers = workers;
      if (*out_opt) ov.output_dir = sim_out;
      if (*repro_opt) {
        const bool ok = covdesign::cli::paper_repro(
            repro_edges, ov.output_dir.value_or("paper_repro"), ov.replications.value_or(10000),
            ov.workers.value_or(0), std::cout);
        return ok ? 0 : 2;
      }
      if (!*config_opt) throw covdesign::InvalidArgument("simulate needs --config or --paper-repro");
      json cfg = covdesign::cli::resolve_simulate_config(sim_config, ov);
      covdesign::cli::run_simulate(cfg, std::cout);
    } else if (analyze->parsed()) {
      json design = {{"kind", an.design}};
      if (an.design == "ibr") design["block_size"] = an.block_size;
      if (!an.root.empty()) design["root"] = abs_path(an.root);
      json cfg = {{"graph", abs_path(an.graph)},
                  {"graph_format", an.format},
                  {"clusters", abs_path(an.clusters)},
                  {"design", design},
                  {"model", {{"alpha", an.alpha}, {"beta", an.beta}, {"gamma", an.gamma}}},
                  {"omega", an.omega ? json(*an.omega) : json(nullptr)},
                  {"mc_draws", an.mc_draws},
                  {"seed", an.seed},
                  {"out", optional_path(an.out)}};
      covdesign::cli::run_analyze(cfg, std::cout);
    } else if (report->parsed()) {
      json cfg = {{"input", abs_path(rep_input)}, {"format", rep_format},
                  {"out", optional_path(rep_out)}};
      covdesign::cli::run_report(cfg, std::cout);
    } else if (rerun->parsed()) {
      std::optional<fs::path> out;
      if (!rerun_out.empty()) out = rerun_out;
      covdesign::cli::rerun(manifest, out, rerun_workers, std::cout);
    }
  } catch (const covdesign::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
