#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "rsnet/io.hpp"

using namespace rsnet;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("rsnet_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) {
        const std::string cmd = std::string(RSNET_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path write_config(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        write_file_atomic(p, text);
        return p;
    }

    std::string out(const std::string& name) { return read_file(dir_ / name); }
    std::string stdout_text() { return out("stdout.txt"); }
    std::string stderr_text() { return out("stderr.txt"); }

    fs::path dir_;
};

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_F(Cli, GenerateWritesTopology) {
    const auto cfg = write_config("c.json", R"({"network": {"alpha": 2, "beta": 5, "xi": 4}})");
    ASSERT_EQ(run("generate --config " + cfg.string() + " --seed 7 --out " + (dir_ / "a").string()), 0) << stderr_text();
    const auto t = read_topology(dir_ / "a" / "topology.json");
    EXPECT_EQ(t.generated_edges, 196u);
    EXPECT_EQ(t.grid.interface_count(), 16u);
    EXPECT_EQ(t.seed, 7u);
    EXPECT_NE(stdout_text().find("interface nodes 16"), std::string::npos);
    EXPECT_NE(stdout_text().find("connected yes"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "a" / "generate.manifest.json"));

    ASSERT_EQ(run("generate --config " + cfg.string() + " --seed 7 --out " + (dir_ / "b").string()), 0);
    EXPECT_EQ(out("a/topology.json"), out("b/topology.json"));
}

TEST_F(Cli, GenerateWithoutSupportingGrid) {
    const auto cfg = write_config("c.json", R"({"grid": {"subdivision": 0}})");
    ASSERT_EQ(run("generate --config " + cfg.string() + " --out " + dir_.string()), 0) << stderr_text();
    EXPECT_EQ(read_topology(dir_ / "topology.json").grid.node_count(), 16u);
}

TEST_F(Cli, SimulateAndAnalyze) {
    ASSERT_EQ(run("generate --seed 3 --out " + dir_.string()), 0);
    const auto topo = (dir_ / "topology.json").string();
    ASSERT_EQ(run("simulate --topology " + topo + " --amplitude 4 --out " + (dir_ / "s1").string()), 0) << stderr_text();
    const auto trace = out("s1/trace.csv");
    EXPECT_EQ(lines(trace), 1001u);
    ASSERT_EQ(run("simulate --topology " + topo + " --amplitude 4 --out " + (dir_ / "s2").string()), 0);
    EXPECT_EQ(trace, out("s2/trace.csv"));
    EXPECT_EQ(out("s1/summary.json"), out("s2/summary.json"));
    const auto summary = Json::parse(out("s1/summary.json"));
    EXPECT_GT(summary["energy_joules"].get<double>(), 0.0);
    EXPECT_EQ(summary["steps"].get<int>(), 1000);

    ASSERT_EQ(run("analyze --trace " + (dir_ / "s1" / "trace.csv").string() + " --out " + (dir_ / "s1").string()), 0)
        << stderr_text();
    const auto a = Json::parse(out("s1/analysis.json"));
    EXPECT_EQ(a["n_signals"].get<int>(), 16);
    EXPECT_NEAR(a["energy_joules"].get<double>(), summary["energy_joules"].get<double>(),
                1e-6 * summary["energy_joules"].get<double>());
    ASSERT_EQ(run("analyze --no-center --readout 2 9 --trace " + (dir_ / "s1" / "trace.csv").string() + " --out " +
                  (dir_ / "s1").string()),
              0);
    EXPECT_EQ(Json::parse(out("s1/analysis.json"))["signals"], "differential");
}

TEST_F(Cli, ZeroAmplitudeHasZeroEnergy) {
    ASSERT_EQ(run("generate --out " + dir_.string()), 0);
    ASSERT_EQ(run("simulate --amplitude 0 --topology " + (dir_ / "topology.json").string() + " --out " + dir_.string()),
              0);
    EXPECT_EQ(Json::parse(out("summary.json"))["energy_joules"].get<double>(), 0.0);
}

TEST_F(Cli, SweepTablesAndHeatmaps) {
    const auto cfg = write_config("c.json", R"({"solver": {"duration": 0.1},
        "sweep": {"alphas": [1, 10], "betas": [2, 5], "xis": [4], "amplitudes": [4], "trials": 2}})");
    ASSERT_EQ(run("sweep --heatmap --config " + cfg.string() + " --out " + (dir_ / "w1").string()), 0) << stderr_text();
    const auto records = out("w1/records.csv");
    EXPECT_EQ(lines(records), 9u);
    EXPECT_EQ(records.substr(0, records.find('\n')), std::string(kRecordsHeader));

    // Aggregate means equal the average of the two trials of each cell.
    std::istringstream rs(records), as(out("w1/aggregate.csv"));
    std::string line;
    std::getline(rs, line);
    std::getline(as, line);
    for (int cell = 0; cell < 4; ++cell) {
        double h = 0;
        for (int t = 0; t < 2; ++t) {
            std::getline(rs, line);
            std::vector<std::string> f;
            std::stringstream ls(line);
            for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
            h += std::stod(f[6]);
        }
        std::getline(as, line);
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
        EXPECT_NEAR(std::stod(f[6]), h / 2, 1e-8 * std::max(1.0, h));
    }

    const auto svg = out("w1/heatmaps/entropy_xi4_v4.svg");
    EXPECT_NE(svg.find("class=\"alpha\""), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "w1" / "heatmaps" / "energy_entropy.svg"));

    const auto manifest = Json::parse(out("w1/sweep.manifest.json"));
    EXPECT_EQ(manifest["tool"], "rsnet");
    EXPECT_TRUE(manifest.contains("version"));
    EXPECT_EQ(manifest["seeds"].size(), 8u);
    EXPECT_EQ(manifest["config"]["sweep"]["alphas"], Json::parse("[1.0, 10.0]"));

    // Re-running from the manifest's config echo reproduces the records.
    const auto echo = write_config("echo.json", manifest["config"].dump());
    ASSERT_EQ(run("sweep --config " + echo.string() + " --workers 3 --out " + (dir_ / "w2").string()), 0)
        << stderr_text();
    EXPECT_EQ(records, out("w2/records.csv"));
    EXPECT_EQ(out("w1/aggregate.csv"), out("w2/aggregate.csv"));
    for (const auto& e : fs::recursive_directory_iterator(dir_)) EXPECT_NE(e.path().extension(), ".tmp");
}

TEST_F(Cli, HierarchyCommand) {
    const auto cfg = write_config("c.json", R"({"solver": {"duration": 0.1},
        "network": {"alpha": 1, "beta": 5, "xi": 4}, "waveform": {"amplitude": 2},
        "hierarchy": {"networks": 4, "trials": 3}})");
    ASSERT_EQ(run("hierarchy --config " + cfg.string() + " --out " + dir_.string()), 0) << stderr_text();
    EXPECT_EQ(lines(out("records.csv")), 4u);
    EXPECT_EQ(lines(out("aggregate.csv")), 2u);
    EXPECT_TRUE(fs::exists(dir_ / "hierarchy.manifest.json"));
}

TEST_F(Cli, ExitCodes) {
    const auto bad = write_config("bad.json", R"({"solver": {"dtt": 1}})");
    EXPECT_EQ(run("sweep --config " + bad.string() + " --out " + dir_.string()), 1);
    EXPECT_NE(stderr_text().find("solver.dtt"), std::string::npos);
    const auto malformed = write_config("m.json", "{ nope");
    EXPECT_EQ(run("generate --config " + malformed.string()), 1);
    EXPECT_EQ(run("simulate --topology " + (dir_ / "missing.json").string()), 2);
    write_config("corrupt.json", R"({"format": "rsnet-topology"})");
    EXPECT_EQ(run("simulate --topology " + (dir_ / "corrupt.json").string() + " --out " + dir_.string()), 2);
    EXPECT_FALSE(fs::exists(dir_ / "trace.csv"));
    EXPECT_EQ(run("frobnicate"), 1);

    const auto fails = write_config("f.json", R"({"solver": {"duration": 0.01}, "network": {"input": 1},
        "sweep": {"alphas": [1], "betas": [1], "xis": [1], "amplitudes": [1e308], "trials": 1}})");
    EXPECT_EQ(run("sweep --config " + fails.string() + " --out " + dir_.string()), 3) << stderr_text();
    EXPECT_NE(out("records.csv").find("cell(alpha=1"), std::string::npos);
}
