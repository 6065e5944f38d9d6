#include "covdesign/simulation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "covdesign/error.h"
#include "covdesign/rng.h"

namespace covdesign {
namespace {

// Per unit, the clusters its neighbours fall in and how many of them each.
// Dense social graphs have far fewer neighbour clusters than neighbours.
struct ExposureIndex {
  std::vector<int> offsets;
  std::vector<int> cluster;
  std::vector<double> count;

  ExposureIndex(const Graph& graph, const Clustering& clustering) {
    const int n = graph.num_nodes();
    offsets.assign(n + 1, 0);
    std::vector<int> tally(clustering.num_clusters(), 0);
    std::vector<int> seen;
    for (int i = 0; i < n; ++i) {
      seen.clear();
      for (int j : graph.neighbors(i)) {
        const int c = clustering.cluster_of(j);
        if (tally[c]++ == 0) seen.push_back(c);
      }
      std::sort(seen.begin(), seen.end());
      for (int c : seen) {
        cluster.push_back(c);
        count.push_back(tally[c]);
        tally[c] = 0;
      }
      offsets[i + 1] = static_cast<int>(cluster.size());
    }
  }

  void exposure(std::span<const std::uint8_t> t, std::vector<double>& out) const {
    const std::size_t n = offsets.size() - 1;
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int e = offsets[i]; e < offsets[i + 1]; ++e)
        if (t[cluster[e]]) s += count[e];
      out[i] = s;
    }
  }
};

EstimateRecord apply(EstimatorKind kind, std::span<const std::uint8_t> z,
                     std::span<const double> y, std::span<const double> base) {
  switch (kind) {
    case EstimatorKind::kHt:
      return ht(z, y);
    case EstimatorKind::kHtAdjusted:
      return ht_adjusted(z, y, base);
    case EstimatorKind::kDim:
      return dim(z, y);
  }
  return {};
}

OutcomeModel with_gamma(const OutcomeModel& model, double gamma) {
  OutcomeModel m = model;
  std::visit([gamma](auto& x) { x.gamma = gamma; }, m);
  return m;
}

double oracle_gate(const OutcomeModel& model, const Graph& graph) {
  if (const auto* sim = std::get_if<SimModel>(&model)) return gate_sim(*sim);
  return gate_analysis(std::get<AnalysisModel>(model), graph);
}

std::vector<double> evaluate(const OutcomeModel& model, const Graph& graph,
                             std::span<const std::uint8_t> z,
                             std::span<const double> noise,
                             std::span<const double> exposure) {
  if (const auto* sim = std::get_if<SimModel>(&model))
    return eval_sim(*sim, graph, z, noise, exposure);
  return eval_analysis(std::get<AnalysisModel>(model), graph, z, exposure);
}

bool needs_noise(const OutcomeModel& model) {
  const auto* sim = std::get_if<SimModel>(&model);
  return sim != nullptr && sim->sigma != 0.0;
}

void check_designs(const std::vector<Design>& designs, const Clustering& clustering) {
  if (designs.empty()) throw InvalidArgument("no designs to simulate");
  for (const Design& d : designs) {
    if (d.num_clusters() != clustering.num_clusters()) {
      throw InvalidArgument("design '" + d.name() + "' has K=" +
                            std::to_string(d.num_clusters()) + " but the clustering has K=" +
                            std::to_string(clustering.num_clusters()));
    }
  }
}

CellStats summarise(std::vector<double>& values, double tau) {
  CellStats c;
  c.tau = tau;
  c.used = static_cast<std::int64_t>(values.size());
  if (values.empty()) {
    c.mean = c.bias = c.sd = c.mse = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  const double r = static_cast<double>(values.size());
  c.mean = pairwise_sum(values) / r;
  c.bias = c.mean - tau;
  std::vector<double> scratch(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - c.mean;
    scratch[i] = d * d;
  }
  const double ss = pairwise_sum(scratch);
  for (std::size_t i = 0; i < values.size(); ++i) scratch[i] = scratch[i] * scratch[i];
  const double m4 = pairwise_sum(scratch) / r;
  const double m2 = ss / r;
  c.sd = values.size() > 1 ? std::sqrt(ss / (r - 1.0)) : 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double e = values[i] - tau;
    scratch[i] = e * e;
  }
  c.mse = pairwise_sum(scratch) / r;
  double mse_ss = 0.0;
  {
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = scratch[i] - c.mse;
      dev[i] = d * d;
    }
    mse_ss = pairwise_sum(dev);
  }
  if (values.size() > 1) {
    c.se_bias = c.sd / std::sqrt(r);
    c.se_mse = std::sqrt(mse_ss / (r - 1.0)) / std::sqrt(r);
    // Delta method for the SD: Var[s] ~ (m4 - m2^2) / (4 m2 r).
    c.se_sd = m2 > 0.0 ? std::sqrt(std::max(0.0, m4 - m2 * m2) / (4.0 * m2 * r)) : 0.0;
  }
  return c;
}

}  // namespace

std::string model_name(const OutcomeModel& model) {
  if (const auto* sim = std::get_if<SimModel>(&model))
    return sim->kind == SimModelKind::kLinear ? "linear" : "multiplicative";
  return "analysis";
}

const CellStats& SimReport::cell(const std::string& design, double gamma,
                                 EstimatorKind estimator) const {
  for (const CellStats& c : cells)
    if (c.design == design && c.gamma == gamma && c.estimator == estimator) return c;
  throw InvalidArgument("no report cell for design '" + design + "', gamma " +
                        std::to_string(gamma) + ", estimator " +
                        std::string(estimator_name(estimator)));
}

std::vector<double> base_levels(const OutcomeModel& model, const Graph& graph) {
  if (const auto* a = std::get_if<AnalysisModel>(&model)) return a->alpha;
  const auto& sim = std::get<SimModel>(model);
  const double mean_degree = graph.mean_degree();
  std::vector<double> base(graph.num_nodes());
  for (int i = 0; i < graph.num_nodes(); ++i) {
    const double r = mean_degree > 0.0 ? graph.degree(i) / mean_degree : 0.0;
    base[i] = sim.kind == SimModelKind::kLinear ? sim.alpha + sim.c * r : sim.alpha * r;
  }
  return base;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SimReport run_mc(const Graph& graph, const Clustering& clustering, const SimConfig& config) {
  check_designs(config.designs, clustering);
  if (config.replications < 1) throw InvalidArgument("replications must be >= 1");
  if (config.gammas.empty()) throw InvalidArgument("gamma grid is empty");
  if (config.estimators.empty()) throw InvalidArgument("estimator list is empty");
  if (clustering.num_units() != graph.num_nodes())
    throw InvalidArgument("clustering does not cover the graph");

  const ExposureIndex index(graph, clustering);
  const std::size_t designs = config.designs.size();
  const std::size_t gammas = config.gammas.size();
  const std::size_t estimators = config.estimators.size();
  const std::size_t stride = designs * gammas * estimators;
  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<double> results(reps * stride);

  std::vector<OutcomeModel> models;
  for (double g : config.gammas) models.push_back(with_gamma(config.model, g));
  const std::vector<double> base = base_levels(config.model, graph);
  const bool noisy = needs_noise(config.model);
  const int n = graph.num_nodes();

  auto run_replication = [&](std::size_t r, std::vector<double>& noise,
                             std::vector<double>& exposure) {
    if (noisy && config.shared_noise) {
      Rng noise_rng(derive_seed(config.seed, {2, r}));
      for (double& e : noise) e = noise_rng.normal();
    }
    for (std::size_t j = 0; j < designs; ++j) {
      Rng treat_rng(derive_seed(config.seed, {1, j, r}));
      const ClusterTreatment t = config.designs[j].sample(treat_rng);
      const UnitTreatment z = expand_treatment(t, clustering);
      index.exposure(t, exposure);
      if (noisy && !config.shared_noise) {
        Rng noise_rng(derive_seed(config.seed, {2, r, j}));
        for (double& e : noise) e = noise_rng.normal();
      }
      for (std::size_t g = 0; g < gammas; ++g) {
        const std::vector<double> y = evaluate(models[g], graph, z, noise, exposure);
        for (std::size_t e = 0; e < estimators; ++e) {
          const EstimateRecord rec = apply(config.estimators[e], z, y, base);
          results[r * stride + (j * gammas + g) * estimators + e] =
              rec.degenerate ? std::numeric_limits<double>::quiet_NaN() : rec.value;
        }
      }
    }
  };

  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (reps + kChunk - 1) / kChunk;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<double> noise(n, 0.0);
    std::vector<double> exposure;
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      const std::size_t end = std::min(reps, (c + 1) * kChunk);
      for (std::size_t r = c * kChunk; r < end; ++r) run_replication(r, noise, exposure);
    }
  };
  int workers = config.workers > 0 ? config.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(chunks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  SimReport report;
  report.model = model_name(config.model);
  report.shared_noise = config.shared_noise;
  report.replications = config.replications;
  std::vector<double> column;
  column.reserve(reps);
  for (std::size_t j = 0; j < designs; ++j) {
    for (std::size_t g = 0; g < gammas; ++g) {
      const double tau = oracle_gate(models[g], graph);
      for (std::size_t e = 0; e < estimators; ++e) {
        column.clear();
        std::int64_t degenerate = 0;
        for (std::size_t r = 0; r < reps; ++r) {
          const double v = results[r * stride + (j * gammas + g) * estimators + e];
          if (std::isnan(v)) {
            ++degenerate;
          } else {
            column.push_back(v);
          }
        }
        CellStats c = summarise(column, tau);
        c.design = config.designs[j].name();
        c.gamma = config.gammas[g];
        c.estimator = config.estimators[e];
        c.degenerate = degenerate;
        report.cells.push_back(std::move(c));
      }
    }
  }
  return report;
}

SimReport run_exact(const Graph& graph, const Clustering& clustering,
                    const std::vector<Design>& designs, const AnalysisModel& model,
                    const std::vector<EstimatorKind>& estimators,
                    const std::vector<double>& gammas) {
  check_designs(designs, clustering);
  if (gammas.empty()) throw InvalidArgument("gamma grid is empty");
  const ExposureIndex index(graph, clustering);
  SimReport report;
  report.model = "analysis";
  report.exact = true;
  std::vector<double> exposure;
  for (const Design& design : designs) {
    const std::vector<Outcome> law = design.enumerate();
    for (double gamma : gammas) {
      AnalysisModel m = model;
      m.gamma = gamma;
      const double tau = gate_analysis(m, graph);
      // (probability, estimate) per outcome and estimator.
      std::vector<std::vector<std::pair<double, double>>> draws(estimators.size());
      for (const Outcome& o : law) {
        const ClusterTreatment t = mask_to_treatment(o.mask, design.num_clusters());
        const UnitTreatment z = expand_treatment(t, clustering);
        index.exposure(t, exposure);
        const std::vector<double> y = eval_analysis(m, graph, z, exposure);
        for (std::size_t e = 0; e < estimators.size(); ++e) {
          const EstimateRecord rec = apply(estimators[e], z, y, m.alpha);
          draws[e].emplace_back(o.probability,
                                rec.degenerate ? std::numeric_limits<double>::quiet_NaN()
                                               : rec.value);
        }
      }
      for (std::size_t e = 0; e < estimators.size(); ++e) {
        CellStats c;
        c.design = design.name();
        c.gamma = gamma;
        c.estimator = estimators[e];
        c.tau = tau;
        double mass = 0.0;
        double first = 0.0;
        for (auto [p, v] : draws[e]) {
          if (std::isnan(v)) {
            c.degenerate_probability += p;
            ++c.degenerate;
            continue;
          }
          mass += p;
          first += p * v;
          ++c.used;
        }
        c.mean = first / mass;
        c.bias = c.mean - tau;
        double var = 0.0;
        double mse = 0.0;
        for (auto [p, v] : draws[e]) {
          if (std::isnan(v)) continue;
          var += p * (v - c.mean) * (v - c.mean);
          mse += p * (v - tau) * (v - tau);
        }
        c.sd = std::sqrt(var / mass);
        c.mse = mse / mass;
        report.cells.push_back(std::move(c));
      }
    }
  }
  return report;
}

ComparisonTable compare_designs(const SimReport& report, EstimatorKind estimator) {
  ComparisonTable table;
  table.estimator = estimator;
  for (const CellStats& c : report.cells) {
    if (c.estimator != estimator) continue;
    if (std::find(table.designs.begin(), table.designs.end(), c.design) == table.designs.end())
      table.designs.push_back(c.design);
    if (std::find(table.gammas.begin(), table.gammas.end(), c.gamma) == table.gammas.end())
      table.gammas.push_back(c.gamma);
  }
  table.cells.assign(table.designs.size(), std::vector<CellStats>(table.gammas.size()));
  for (std::size_t d = 0; d < table.designs.size(); ++d)
    for (std::size_t g = 0; g < table.gammas.size(); ++g)
      table.cells[d][g] = report.cell(table.designs[d], table.gammas[g], estimator);
  table.best_design.assign(table.gammas.size(), 0);
  for (std::size_t g = 0; g < table.gammas.size(); ++g) {
    for (std::size_t d = 1; d < table.designs.size(); ++d) {
      if (table.cells[d][g].mse < table.cells[table.best_design[g]][g].mse)
        table.best_design[g] = static_cast<int>(d);
    }
  }
  return table;
}

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string to_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "method";
  for (double g : table.gammas) {
    const std::string p = "gamma=" + fmt(g, "%g") + ":";
    out << ',' << p << "bias," << p << "sd," << p << "mse," << p << "min_mse";
  }
  out << '\n';
  for (std::size_t d = 0; d < table.designs.size(); ++d) {
    out << table.designs[d];
    for (std::size_t g = 0; g < table.gammas.size(); ++g) {
      const CellStats& c = table.cells[d][g];
      out << ',' << fmt(c.bias) << ',' << fmt(c.sd) << ',' << fmt(c.mse) << ','
          << (table.best_design[g] == static_cast<int>(d) ? 1 : 0);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_text(const ComparisonTable& table) {
  std::ostringstream out;
  out << "estimator: " << estimator_name(table.estimator) << '\n';
  out << "gamma   ";
  for (double g : table.gammas) out << "| " << fmt(g, "%-26g");
  out << "\nmethod  ";
  for (std::size_t g = 0; g < table.gammas.size(); ++g) out << "|   bias      SD     MSE   ";
  out << '\n';
  for (std::size_t d = 0; d < table.designs.size(); ++d) {
    char name[16];
    std::snprintf(name, sizeof(name), "%-8s", table.designs[d].c_str());
    out << name;
    for (std::size_t g = 0; g < table.gammas.size(); ++g) {
      const CellStats& c = table.cells[d][g];
      char row[64];
      std::snprintf(row, sizeof(row), "| %7.3f %7.3f %7.3f%s ", c.bias, c.sd, c.mse,
                    table.best_design[g] == static_cast<int>(d) ? "*" : " ");
      out << row;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace covdesign
