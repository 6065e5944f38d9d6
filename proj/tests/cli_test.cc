#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "covdesign/clustering.h"
#include "covdesign/correlation_root.h"
#include "covdesign/graph.h"
#include "fixtures.h"
#include "json.hpp"

namespace covdesign {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using testing::read_text;
using testing::TempDir;
using testing::write_text;

struct RunOutput {
  int code;
  std::string out;
  std::string err;
};

RunOutput run(const std::string& args, const TempDir& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(COVDESIGN_CLI) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), read_text(out), read_text(err)};
}

class Cli : public ::testing::Test {
 protected:
  Cli() : dir_("cli") {
    graph_ = dir_ / "g.el";
    write_edge_list(testing::sbm_fixture().graph, graph_);
    small_ = dir_ / "small.el";
    write_edge_list(testing::small_sbm(6, 8, 12).graph, small_);
    small_clusters_ = dir_ / "small.txt";
    write_clustering(testing::small_sbm(6, 8, 12).blocks, small_clusters_);
  }

  fs::path write_sim_config(const std::string& extra = "") {
    std::ostringstream c;
    c << R"({"graph": ")" << small_.string() << R"(", "clustering": ")"
      << small_clusters_.string() << R"(",
      "designs": ["ber", "cr", "ibr-p", {"kind": "ocd", "optimize": {"iterations": 200}}],
      "replications": 300, "seed": 5, "output_dir": "out")"
      << extra << "}";
    const fs::path p = dir_ / "sim.json";
    write_text(p, c.str());
    return p;
  }

  TempDir dir_;
  fs::path graph_, small_, small_clusters_;
};

TEST_F(Cli, ClusterWritesFileAndManifest) {
  const fs::path out = dir_ / "c.txt";
  RunOutput r = run("cluster --graph " + graph_.string() +
                        " --resolution 10 --seed 1 --out " + out.string(), dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  Clustering c = read_clustering(out, 200);
  EXPECT_GT(c.num_clusters(), 1);
  json m = json::parse(read_text(dir_ / "c.manifest.json"));
  EXPECT_EQ(m["command"], "cluster");
  EXPECT_EQ(m["config"]["resolution"], 10.0);
  EXPECT_EQ(m["config"]["seed"], 1);
  EXPECT_EQ(m["outputs"]["clusters"]["sha256"].get<std::string>().size(), 64u);
  EXPECT_TRUE(m["inputs"].contains("graph"));
  EXPECT_TRUE(m["timings_seconds"].contains("louvain"));
}

TEST_F(Cli, ResolutionSweepGrowsClusterCount) {
  int prev = 0;
  for (int res : {2, 5, 10}) {
    const fs::path out = dir_ / ("c" + std::to_string(res) + ".txt");
    RunOutput r = run("cluster --graph " + graph_.string() + " --resolution " +
                          std::to_string(res) + " --seed 1 --out " + out.string(), dir_);
    ASSERT_EQ(r.code, 0) << r.err;
    const int k = read_clustering(out, 200).num_clusters();
    EXPECT_GE(k, prev) << "resolution " << res;
    prev = k;
  }
}

TEST_F(Cli, MissingGraphNamesPath) {
  const fs::path missing = dir_ / "nope.el";
  RunOutput r = run("cluster --graph " + missing.string() + " --out " +
                        (dir_ / "c.txt").string(), dir_);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find(missing.string()), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "c.txt"));
}

TEST_F(Cli, OptimizeImprovesAndEchoesOmega) {
  const fs::path clusters = dir_ / "blocks.txt";
  write_clustering(testing::sbm_fixture().blocks, clusters);
  const fs::path out = dir_ / "r.csv";
  RunOutput r = run("optimize --graph " + graph_.string() + " --clusters " + clusters.string() +
                        " --iters 300 --out " + out.string(), dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_matrix_csv(out).rows(), 10u);

  std::istringstream trace(read_text(dir_ / "r.trace.csv"));
  std::string line, first, last;
  std::getline(trace, line);
  std::getline(trace, first);
  while (std::getline(trace, line))
    if (!line.empty()) last = line;
  auto objective = [](const std::string& row) {
    return std::stod(row.substr(row.find(',') + 1));
  };
  EXPECT_LE(objective(last), objective(first));

  json m = json::parse(read_text(dir_ / "r.manifest.json"));
  EXPECT_EQ(m["config"]["optimizer"]["omega"], 1.0);
  EXPECT_EQ(m["notes"]["omega"], 1.0);
  EXPECT_TRUE(m["notes"].contains("reduction"));
  json side = json::parse(read_text(dir_ / "r.json"));
  EXPECT_EQ(side["K"], 10);
  EXPECT_LE(side["final_objective"].get<double>(), side["initial_objective"].get<double>());
}

TEST_F(Cli, WarmStartSizeMismatchNamesBothSizes) {
  const fs::path clusters = dir_ / "blocks.txt";
  write_clustering(testing::sbm_fixture().blocks, clusters);
  const fs::path init = dir_ / "r3.csv";
  write_matrix_csv(Matrix::identity(3), init);
  RunOutput r = run("optimize --graph " + graph_.string() + " --clusters " + clusters.string() +
                        " --init " + init.string() + " --out " + (dir_ / "r.csv").string(),
                    dir_);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("3x3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("K=10"), std::string::npos) << r.err;
}

TEST_F(Cli, SimulateTableShape) {
  RunOutput r = run("simulate --config " + write_sim_config().string(), dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(read_text(dir_ / "out" / "linear_ht.csv"));
  std::string header, line;
  std::getline(csv, header);
  std::vector<std::string> rows;
  while (std::getline(csv, line))
    if (!line.empty()) rows.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(rows, (std::vector<std::string>{"ber", "cr", "ibr-p", "ocd"}));
  for (const char* g : {"gamma=0.5:", "gamma=1:", "gamma=2:"})
    EXPECT_NE(header.find(g), std::string::npos) << header;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "multiplicative_ht.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "manifest.json"));
  json report = json::parse(read_text(dir_ / "out" / "report.json"));
  EXPECT_EQ(report["reports"].size(), 2u);
  EXPECT_EQ(report["reports"][0]["cells"].size(), 12u);
  EXPECT_TRUE(report["reports"][0]["cells"][0].contains("se_mse"));
}

TEST_F(Cli, RepsFlagOverridesConfig) {
  RunOutput r = run("simulate --config " + write_sim_config().string() + " --reps 1000", dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  json report = json::parse(read_text(dir_ / "out" / "report.json"));
  EXPECT_EQ(report["config"]["replications"], 1000);
  EXPECT_EQ(report["reports"][0]["replications"], 1000);
  EXPECT_EQ(report["reports"][0]["cells"][0]["used"], 1000);
}

TEST_F(Cli, UnknownDesignListsValidKinds) {
  std::ostringstream c;
  c << R"({"graph": ")" << small_.string() << R"(", "designs": ["ber", "magic"],
          "output_dir": "out"})";
  write_text(dir_ / "bad.json", c.str());
  RunOutput r = run("simulate --config " + (dir_ / "bad.json").string(), dir_);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("magic"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("ber, cr, ibr, ibr-p, ocd"), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownConfigKeyRejected) {
  write_sim_config(R"(, "replicatons": 5)");
  RunOutput r = run("simulate --config " + (dir_ / "sim.json").string(), dir_);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("replicatons"), std::string::npos) << r.err;
}

void expect_same_files(const fs::path& a, const fs::path& b,
                       const std::vector<std::string>& names) {
  for (const std::string& name : names) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    ASSERT_TRUE(fs::exists(b / name)) << name;
    EXPECT_EQ(read_text(a / name), read_text(b / name)) << name;
  }
}

TEST_F(Cli, SimulateRerunIsByteIdenticalAcrossWorkers) {
  RunOutput r = run("simulate --config " + write_sim_config().string() + " --workers 1", dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  const fs::path again = dir_ / "again";
  r = run("rerun --manifest " + (dir_ / "out" / "manifest.json").string() + " --out-dir " +
              again.string() + " --workers 4", dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  expect_same_files(dir_ / "out", again,
                    {"linear_ht.csv", "multiplicative_ht.csv", "report.json", "ocd_3_root.csv"});
}

TEST_F(Cli, ClusterAndOptimizeRerunsAreByteIdentical) {
  const fs::path first = dir_ / "first";
  RunOutput r = run("cluster --graph " + small_.string() + " --seed 3 --out " +
                        (first / "c.txt").string(), dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  r = run("optimize --graph " + small_.string() + " --clusters " + (first / "c.txt").string() +
              " --iters 100 --out " + (first / "r.csv").string(), dir_);
  ASSERT_EQ(r.code, 0) << r.err;

  const fs::path second = dir_ / "second";
  for (const char* m : {"c.manifest.json", "r.manifest.json"}) {
    r = run("rerun --manifest " + (first / m).string() + " --out-dir " + second.string(), dir_);
    ASSERT_EQ(r.code, 0) << r.err;
  }
  expect_same_files(first, second, {"c.txt", "r.csv", "r.json", "r.trace.csv"});
}

TEST_F(Cli, AnalyzePrintsJson) {
  RunOutput r = run("analyze --graph " + small_.string() + " --clusters " +
                        small_clusters_.string() + " --design cr --gamma 2", dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  json a = json::parse(r.out);
  EXPECT_EQ(a["design"], "cr");
  EXPECT_EQ(a["variance_method"], "exact");
  EXPECT_GE(a["variance_bound"].get<double>(), a["variance"].get<double>());
  EXPECT_TRUE(a["objective"].contains("f"));
}

TEST_F(Cli, ReportRendersSavedResults) {
  ASSERT_EQ(run("simulate --config " + write_sim_config().string(), dir_).code, 0);
  RunOutput r = run("report --input " + (dir_ / "out" / "report.json").string() +
                        " --format csv", dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string saved = read_text(dir_ / "out" / "linear_ht.csv");
  EXPECT_NE(r.out.find(saved), std::string::npos);
}

}  // namespace
}  // namespace covdesign
