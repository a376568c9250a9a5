#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <unistd.h>

#include "tenreco/scan.hpp"

using namespace tenreco;
namespace fs = std::filesystem;

namespace {

ScanConfig small_config() {
    ScanConfig config;
    config.experiment = "unit";
    config.m_values = {6};
    config.i_values = {2};
    config.t_values = {4, 6};
    config.strategy = "balanced";
    config.trials_per_cell = 3;
    config.base_seed = 99;
    return config;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("tenreco-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("scan rows are deterministic and scheduling independent") {
    ScanConfig config = small_config();
    const auto rows1 = run_scan(config);
    const auto rows2 = run_scan(config);
    config.threads = 3;
    const auto rows3 = run_scan(config);

    REQUIRE(rows1.size() == 6);
    CHECK(scan_csv(config, rows1) == scan_csv(config, rows2));
    CHECK(scan_csv(config, rows1) == scan_csv(config, rows3));

    for (const auto& row : rows1) {
        CHECK_FALSE(row.failed);
        CHECK(row.r_max >= 1);
        CHECK(row.r_max <= row.necessary);
        CHECK(row.seed == stable_hash(config.base_seed, row.trial));
    }
}

TEST_CASE("scan csv carries the schema header") {
    const ScanConfig config = small_config();
    const std::string csv = scan_csv(config, run_scan(config));
    CHECK(csv.rfind("# tenreco-scan v1\n", 0) == 0);
    CHECK(csv.find("experiment,trial,seed,M,I,T,strategy") != std::string::npos);
}

TEST_CASE("interrupted scans resume to the same dataset") {
    TempDir tmp;
    ScanConfig config = small_config();
    config.journal_path = (tmp.path / "full.journal").string();
    const auto full = run_scan(config);
    const std::string want = scan_csv(config, full);

    // Simulate an interrupt: keep only the first half of the journal.
    std::ifstream in(config.journal_path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            lines.push_back(line);
    in.close();
    REQUIRE(lines.size() == 6);

    ScanConfig resumed = config;
    resumed.journal_path = (tmp.path / "resume.journal").string();
    {
        std::ofstream out(resumed.journal_path);
        for (std::size_t i = 0; i < 3; ++i)
            out << lines[i] << "\n";
    }
    const auto rows = run_scan(resumed);
    CHECK(scan_csv(resumed, rows) == want);
}

TEST_CASE("failed journal rows are retried on resume") {
    TempDir tmp;
    ScanConfig config = small_config();
    config.journal_path = (tmp.path / "failed.journal").string();
    {
        TrialRow bad;
        bad.trial = 0;
        bad.failed = true;
        bad.error = "synthetic";
        bad.strategy = config.strategy;
        std::ofstream out(config.journal_path);
        out << to_json(bad).dump() << "\n";
    }
    const auto rows = run_scan(config);
    REQUIRE(rows.size() == 6);
    CHECK_FALSE(rows.front().failed);
}

TEST_CASE("scan config validation") {
    ScanConfig config = small_config();
    config.experiment.clear();
    CHECK_THROWS_AS(run_scan(config), std::invalid_argument);
    config = small_config();
    config.strategy = "bogus";
    CHECK_THROWS_AS(run_scan(config), std::invalid_argument);
    config = small_config();
    config.t_values.clear();
    CHECK_THROWS_AS(run_scan(config), std::invalid_argument);
}

TEST_CASE("full-strategy scans sweep an (M, I) grid") {
    ScanConfig config;
    config.experiment = "full-sweep";
    config.m_values = {4, 5};
    config.i_values = {2, 3};
    config.strategy = "full";
    config.trials_per_cell = 1;
    config.base_seed = 7;
    const auto rows = run_scan(config);
    REQUIRE(rows.size() == 4);
    std::set<std::pair<int, int>> cells;
    for (const auto& row : rows) {
        cells.insert({row.M, row.I});
        CHECK_FALSE(row.failed);
        // Full couplings report their actual triplet count.
        CHECK(row.T == row.M * (row.M - 1) * (row.M - 2) / 6);
    }
    CHECK(cells == std::set<std::pair<int, int>>{{4, 2}, {4, 3}, {5, 2}, {5, 3}});
}

TEST_CASE("csv file writer") {
    TempDir tmp;
    const ScanConfig config = small_config();
    const auto rows = run_scan(config);
    const std::string path = (tmp.path / "out.csv").string();
    write_scan_csv(path, config, rows);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "# tenreco-scan v1");
}
