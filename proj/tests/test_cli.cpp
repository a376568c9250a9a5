// End-to-end checks of the command-line surface: flags, file formats, and
// exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#ifndef TENRECO_CLI_PATH
#error "TENRECO_CLI_PATH must point at the tenreco binary"
#endif

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("tenreco-cli-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out_file = dir / "stdout.txt";
    const std::string cmd =
        std::string(TENRECO_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    result.out = ss.str();
    return result;
}

nlohmann::json run_json(const std::string& args, const fs::path& dir) {
    const RunResult r = run_cli(args, dir);
    REQUIRE(r.exit_code == 0);
    return nlohmann::json::parse(r.out);
}

} // namespace

TEST_CASE("coupling gen: cartesian partition example") {
    TempDir tmp;
    const auto j = run_json("coupling gen --M 5 --strategy cartesian --partition 1/23/45", tmp.path);
    const std::vector<std::vector<int>> expected{{1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {1, 3, 5}};
    CHECK(j.at("triplets").get<std::vector<std::vector<int>>>() == expected);
}

TEST_CASE("coupling info on the full M=8 coupling") {
    TempDir tmp;
    const auto j = run_json("coupling info --M 8 --strategy full", tmp.path);
    CHECK(j.at("T") == 56);
    CHECK(j.at("P") == 28);
    CHECK(j.at("connected") == true);
}

TEST_CASE("usage errors exit with code 2") {
    TempDir tmp;
    CHECK(run_cli("coupling gen", tmp.path).exit_code == 2);
    CHECK(run_cli("coupling gen --strategy cartesian", tmp.path).exit_code == 2);
    CHECK(run_cli("rmax --M 4 --strategy full", tmp.path).exit_code == 2); // missing --I
    CHECK(run_cli("bogus", tmp.path).exit_code == 2);
}

TEST_CASE("infeasible configurations exit with code 3") {
    TempDir tmp;
    CHECK(run_cli("coupling gen --M 3 --strategy full", tmp.path).exit_code == 3);
    CHECK(run_cli("coupling gen --M 8 --T 57 --strategy random", tmp.path).exit_code == 3);
}

TEST_CASE("rmax and verify round trip") {
    TempDir tmp;
    const fs::path cert = tmp.path / "cert.json";
    const RunResult search =
        run_cli("rmax --M 4 --strategy full --I 3 --out " + cert.string(), tmp.path);
    REQUIRE(search.exit_code == 0);
    std::ifstream in(cert);
    nlohmann::json j;
    in >> j;
    CHECK(j.at("r_max") == 7);
    CHECK(j.at("necessary_bound") == 7);
    CHECK(j.at("achieved") == true);

    CHECK(run_cli("verify --cert " + cert.string(), tmp.path).exit_code == 0);
    // One past a tight maximum must be rank deficient.
    CHECK(run_cli("verify --cert " + cert.string() + " --R 8", tmp.path).exit_code == 1);
    // Exact confirmation over the rationals (the dyadic embedding of the
    // same certificate point).
    CHECK(run_cli("verify --cert " + cert.string() + " --rational", tmp.path).exit_code == 0);
}

TEST_CASE("rmax caps at the defect bound for a coupling loaded from file") {
    TempDir tmp;
    // All triplets of {2..6} plus {1,5,6}: one variable of degree 1.
    std::vector<std::array<int, 3>> triplets{{1, 5, 6}};
    for (int a = 2; a <= 6; ++a)
        for (int b = a + 1; b <= 6; ++b)
            for (int c = b + 1; c <= 6; ++c)
                triplets.push_back({a, b, c});
    std::sort(triplets.begin(), triplets.end());
    nlohmann::json j;
    j["M"] = 6;
    j["triplets"] = nlohmann::json::array();
    for (const auto& t : triplets)
        j["triplets"].push_back({t[0], t[1], t[2]});
    const fs::path file = tmp.path / "defective.json";
    {
        std::ofstream out(file);
        out << j.dump();
    }
    const fs::path cert = tmp.path / "cert.json";
    const RunResult r = run_cli(
        "rmax --coupling " + file.string() + " --I 4 --out " + cert.string(), tmp.path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(cert);
    nlohmann::json res;
    in >> res;
    CHECK(res.at("r_max") == 16); // I^2 cap
    CHECK(res.at("achieved") == false);
}

TEST_CASE("rmax in rational mode verifies exactly") {
    TempDir tmp;
    const fs::path cert = tmp.path / "cert-rational.json";
    const RunResult search = run_cli(
        "rmax --M 4 --strategy full --I 2 --rational --out " + cert.string(), tmp.path);
    REQUIRE(search.exit_code == 0);
    const RunResult verify =
        run_cli("verify --cert " + cert.string() + " --rational", tmp.path);
    CHECK(verify.exit_code == 0);
    const auto j = nlohmann::json::parse(verify.out);
    CHECK(j.at("method") == "exact_rational");
    CHECK(j.at("full_column_rank") == true);
}

TEST_CASE("bounds report for full M=9 I=4") {
    TempDir tmp;
    const auto j = run_json("bounds --M 9 --strategy full --I 4", tmp.path);
    long long kargas_t2 = -1, even = -1;
    for (const auto& e : j.at("entries")) {
        if (e.at("name") == "kargas_t2")
            kargas_t2 = e.at("value").get<long long>();
        if (e.at("name") == "even_partition")
            even = e.at("value").get<long long>();
    }
    CHECK(kargas_t2 == 16);
    CHECK(even == 18);
}

TEST_CASE("bounds report for the even cartesian M=9 I=4") {
    TempDir tmp;
    const auto j =
        run_json("bounds --strategy cartesian --partition 123/456/789 --I 4", tmp.path);
    long long cartesian = -1;
    for (const auto& e : j.at("entries"))
        if (e.at("name") == "cartesian")
            cartesian = e.at("value").get<long long>();
    CHECK(cartesian == 25);
}

TEST_CASE("bounds CSV output") {
    TempDir tmp;
    const RunResult r = run_cli("bounds --M 4 --strategy full --I 3 --csv", tmp.path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("M,I,coupling") != std::string::npos);
    CHECK(r.out.find("4,3,full") != std::string::npos);
}

TEST_CASE("scan writes the versioned CSV and a usable journal") {
    TempDir tmp;
    const fs::path csv = tmp.path / "scan.csv";
    const fs::path journal = tmp.path / "scan.journal";
    const RunResult r = run_cli("scan --experiment smoke --M 6 --I 2 --T 4 --T 6 "
                                "--strategy balanced --trials 2 --seed 5 --journal " +
                                    journal.string() + " --out " + csv.string(),
                                tmp.path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(csv);
    std::string first;
    std::getline(in, first);
    CHECK(first == "# tenreco-scan v1");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            ++rows;
    CHECK(rows == 5); // header + 4 trials

    // Resume over the same journal recomputes nothing and matches.
    const fs::path csv2 = tmp.path / "scan2.csv";
    const RunResult again = run_cli("scan --experiment smoke --M 6 --I 2 --T 4 --T 6 "
                                    "--strategy balanced --trials 2 --seed 5 --journal " +
                                        journal.string() + " --out " + csv2.string(),
                                    tmp.path);
    REQUIRE(again.exit_code == 0);
    std::ifstream a(csv), b(csv2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}
