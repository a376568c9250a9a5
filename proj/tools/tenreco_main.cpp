// Command-line front end: coupling generation/inspection, rank searches,
// bound reports, seeded scans, and certificate verification.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tenreco/bounds.hpp"
#include "tenreco/cartesian.hpp"
#include "tenreco/rational.hpp"
#include "tenreco/recoverability.hpp"
#include "tenreco/scan.hpp"

namespace {

using namespace tenreco;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitExhausted = 4;

/// Missing or inconsistent flags (as opposed to infeasible values).
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "1/23/45" (single digits) or "1/2,3/4,5" (comma lists).
Partition parse_partition(const std::string& text) {
    Partition out;
    std::stringstream ss(text);
    std::string group;
    int g = 0;
    while (std::getline(ss, group, '/')) {
        if (g >= 3)
            throw std::invalid_argument("partition needs exactly three groups");
        if (group.find(',') != std::string::npos) {
            std::stringstream gs(group);
            std::string item;
            while (std::getline(gs, item, ','))
                out[g].push_back(std::stoi(item));
        } else {
            for (char ch : group) {
                if (ch < '1' || ch > '9')
                    throw std::invalid_argument("compact partition groups take digits 1-9");
                out[g].push_back(ch - '0');
            }
        }
        ++g;
    }
    if (g != 3)
        throw std::invalid_argument("partition needs exactly three groups");
    return out;
}

struct CouplingArgs {
    std::string strategy = "full";
    int M = 0;
    int T = 0;
    std::uint64_t seed = 0;
    std::string partition_text;
    std::string input_file;
};

void add_coupling_flags(CLI::App* cmd, CouplingArgs& args, bool with_input) {
    cmd->add_option("--M", args.M, "variable count");
    cmd->add_option("--T", args.T, "triplet count (random/balanced)");
    cmd->add_option("--strategy", args.strategy, "full|random|balanced|cartesian")
        ->check(CLI::IsMember({"full", "random", "balanced", "cartesian"}));
    cmd->add_option("--seed", args.seed, "generator seed");
    cmd->add_option("--partition", args.partition_text, "cartesian groups, e.g. 1/23/45");
    if (with_input)
        cmd->add_option("--coupling", args.input_file, "coupling JSON file (overrides flags)");
}

Coupling build_coupling(const CouplingArgs& args, std::optional<Partition>* partition_out = nullptr) {
    if (!args.input_file.empty()) {
        std::ifstream in(args.input_file);
        if (!in)
            throw std::invalid_argument("cannot open coupling file: " + args.input_file);
        nlohmann::json j;
        in >> j;
        return coupling_from_json(j);
    }
    if (args.strategy == "cartesian") {
        if (args.partition_text.empty())
            throw usage_error("cartesian strategy needs --partition");
        const Partition p = parse_partition(args.partition_text);
        if (partition_out)
            *partition_out = p;
        return make_cartesian(p);
    }
    if (args.M == 0)
        throw usage_error("--M is required");
    if (args.strategy == "full")
        return make_full(args.M);
    if (args.T == 0)
        throw usage_error("--T is required for random/balanced couplings");
    if (args.strategy == "random")
        return make_random(args.M, args.T, args.seed);
    return make_balanced(args.M, args.T, args.seed);
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw std::invalid_argument("cannot open output file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tenreco: recoverability and identifiability workbench for coupled "
                 "low-rank models of third-order marginals"};
    app.require_subcommand(1);

    // --- coupling ---------------------------------------------------------
    auto* coupling_cmd = app.add_subcommand("coupling", "generate or inspect couplings");
    coupling_cmd->require_subcommand(1);
    CouplingArgs gen_args;
    std::string gen_out;
    auto* gen_cmd = coupling_cmd->add_subcommand("gen", "generate a coupling as JSON");
    add_coupling_flags(gen_cmd, gen_args, false);
    gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

    CouplingArgs info_args;
    auto* info_cmd = coupling_cmd->add_subcommand("info", "print coupling statistics");
    add_coupling_flags(info_cmd, info_args, true);

    // --- rmax -------------------------------------------------------------
    CouplingArgs rmax_args;
    int rmax_i = 0;
    std::uint64_t rmax_seed = 0;
    double rmax_tol = 1e-10;
    int rmax_retries = 3;
    long long rmax_cap = -1;
    bool rmax_rational = false;
    std::string rmax_out;
    auto* rmax_cmd = app.add_subcommand("rmax", "maximum recoverable rank search");
    add_coupling_flags(rmax_cmd, rmax_args, true);
    rmax_cmd->add_option("--I", rmax_i, "bins per variable")->required();
    rmax_cmd->add_option("--search-seed", rmax_seed, "seed for the random parameter draws");
    rmax_cmd->add_option("--tol", rmax_tol, "relative singular value tolerance");
    rmax_cmd->add_option("--retries", rmax_retries, "fresh draws per failed rank");
    rmax_cmd->add_option("--r-cap", rmax_cap, "stop the search at this rank");
    rmax_cmd->add_flag("--rational", rmax_rational, "draw rational-mode parameters");
    rmax_cmd->add_option("--out", rmax_out, "output file (default stdout)");

    // --- bounds -----------------------------------------------------------
    CouplingArgs bounds_args;
    int bounds_i = 0;
    bool bounds_csv = false;
    bool bounds_with_rmax = false;
    std::uint64_t bounds_seed = 0;
    std::string bounds_out;
    auto* bounds_cmd = app.add_subcommand("bounds", "merged bound report");
    add_coupling_flags(bounds_cmd, bounds_args, true);
    bounds_cmd->add_option("--I", bounds_i, "bins per variable")->required();
    bounds_cmd->add_flag("--csv", bounds_csv, "emit a flat CSV row instead of JSON");
    bounds_cmd->add_flag("--rmax", bounds_with_rmax, "also run the rank search (empirical entry)");
    bounds_cmd->add_option("--search-seed", bounds_seed, "seed for the empirical search");
    bounds_cmd->add_option("--out", bounds_out, "output file (default stdout)");

    // --- scan --------------------------------------------------------------
    ScanConfig scan_config;
    std::string scan_out;
    auto* scan_cmd = app.add_subcommand("scan", "seeded, resumable trial farm");
    scan_cmd->add_option("--experiment", scan_config.experiment, "experiment name")->required();
    scan_cmd->add_option("--M", scan_config.m_values, "variable counts (repeatable)")->required();
    scan_cmd->add_option("--I", scan_config.i_values, "bins per variable (repeatable)")->required();
    scan_cmd->add_option("--T", scan_config.t_values, "triplet counts (repeatable)");
    scan_cmd->add_option("--strategy", scan_config.strategy, "random|balanced|full")
        ->check(CLI::IsMember({"random", "balanced", "full"}));
    scan_cmd->add_option("--trials", scan_config.trials_per_cell, "trials per grid cell")
        ->required();
    scan_cmd->add_option("--seed", scan_config.base_seed, "base seed");
    scan_cmd->add_option("--tol", scan_config.rel_tol, "relative singular value tolerance");
    scan_cmd->add_option("--retries", scan_config.retries, "fresh draws per failed rank");
    scan_cmd->add_option("--journal", scan_config.journal_path,
                         "completed-trial journal (enables resume)");
    scan_cmd->add_option("--threads", scan_config.threads,
                         "worker threads (0 = hardware, capped by TENRECO_THREADS)");
    scan_cmd->add_option("--out", scan_out, "CSV output path")->required();

    // --- verify -------------------------------------------------------------
    std::string verify_cert;
    long long verify_r = -1;
    bool verify_rational = false;
    double verify_tol = -1.0;
    auto* verify_cmd = app.add_subcommand("verify", "re-check a recoverability certificate");
    verify_cmd->add_option("--cert", verify_cert, "rmax result JSON")->required();
    verify_cmd->add_option("--R", verify_r, "rank to verify (default: the certified r_max)");
    verify_cmd->add_flag("--rational", verify_rational, "exact rank over rationals");
    verify_cmd->add_option("--tol", verify_tol, "override the stored tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints help/error text
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) {
            emit(to_json(build_coupling(gen_args)), gen_out);
            return kExitOk;
        }
        if (info_cmd->parsed()) {
            const Coupling c = build_coupling(info_args);
            nlohmann::json j = to_json(stats(c));
            j["M"] = c.M;
            j["hash"] = coupling_hash(c);
            emit(j, "");
            return kExitOk;
        }
        if (rmax_cmd->parsed()) {
            std::optional<Partition> partition;
            const Coupling c = build_coupling(rmax_args, &partition);
            RmaxOptions options;
            options.rel_tol = rmax_tol;
            options.retries_per_r = rmax_retries;
            options.r_cap = rmax_cap;
            options.mode = rmax_rational ? ParamMode::rational : ParamMode::generic;
            const RmaxResult res = rmax_search(c, rmax_i, rmax_seed, options);
            emit(to_json(res), rmax_out);
            std::cerr << "r_max=" << res.r_max << " necessary=" << res.necessary
                      << " achieved=" << (res.achieved ? "yes" : "no") << "\n";
            return kExitOk;
        }
        if (bounds_cmd->parsed()) {
            std::optional<Partition> partition;
            const Coupling c = build_coupling(bounds_args, &partition);
            if (!partition && !bounds_args.partition_text.empty())
                partition = parse_partition(bounds_args.partition_text);
            std::optional<long long> empirical;
            if (bounds_with_rmax)
                empirical = rmax_search(c, bounds_i, bounds_seed).r_max;
            const BoundReport rep = report(c.M, bounds_i, c, partition, empirical);
            if (bounds_csv) {
                std::ostringstream os;
                os << bound_report_csv_header() << "\n" << bound_report_csv_row(rep) << "\n";
                if (bounds_out.empty()) {
                    std::cout << os.str();
                } else {
                    std::ofstream out(bounds_out);
                    out << os.str();
                }
            } else {
                emit(to_json(rep), bounds_out);
            }
            return kExitOk;
        }
        if (scan_cmd->parsed()) {
            const auto rows = run_scan(scan_config);
            write_scan_csv(scan_out, scan_config, rows);
            int failed = 0;
            for (const auto& r : rows)
                failed += r.failed ? 1 : 0;
            std::cerr << "scan complete: " << rows.size() << " rows, " << failed << " failed\n";
            return failed == 0 ? kExitOk : kExitFailure;
        }
        if (verify_cmd->parsed()) {
            std::ifstream in(verify_cert);
            if (!in)
                throw std::invalid_argument("cannot open certificate: " + verify_cert);
            nlohmann::json j;
            in >> j;
            const RmaxResult res = rmax_from_json(j);
            const long long r = verify_r > 0 ? verify_r : res.r_max;
            std::uint64_t seed = 0;
            bool found = false;
            for (const auto& c : res.certificates)
                if (c.R == r) {
                    seed = c.seed;
                    found = true;
                }
            if (!found) {
                // No certificate at this rank: reuse the highest certified
                // seed; its parameter draw extends to rank r.
                if (res.certificates.empty())
                    throw std::invalid_argument("certificate carries no seeds");
                seed = res.certificates.back().seed;
            }
            const ParamVector theta =
                sample_params(res.coupling.M, res.I, static_cast<int>(r), seed, res.mode);
            const double tol = verify_tol > 0 ? verify_tol : res.rel_tol;
            RankReport report;
            if (verify_rational) {
                const RatMatrix jm = theta.mode == ParamMode::rational
                                         ? exact_jacobian(theta, res.coupling)
                                         : rat_from_dense(jacobian(theta, res.coupling).m);
                report = exact_rank_report(jm);
            } else {
                report = numerical_rank(jacobian(theta, res.coupling).m, tol);
            }
            nlohmann::json out;
            out["R"] = r;
            out["seed"] = seed;
            out["rows"] = report.rows;
            out["cols"] = report.cols;
            out["rank"] = report.rank;
            out["full_column_rank"] = report.full_column_rank;
            out["method"] = report.method == RankMethod::exact_rational ? "exact_rational" : "svd";
            if (!report.singular_values.empty()) {
                const double s1 = report.singular_values.front();
                auto tail = nlohmann::json::array();
                const std::size_t n = report.singular_values.size();
                for (std::size_t i = n > 5 ? n - 5 : 0; i < n; ++i)
                    tail.push_back(report.singular_values[i] / (s1 > 0 ? s1 : 1.0));
                out["sv_tail"] = std::move(tail);
            }
            std::cout << out.dump(2) << "\n";
            return report.full_column_rank ? kExitOk : kExitFailure;
        }
        return kExitUsage;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const resource_exhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
