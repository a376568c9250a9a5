#include "tenreco/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace tenreco {

void ScanConfig::validate() const {
    if (experiment.empty())
        throw std::invalid_argument("scan needs an experiment name");
    if (strategy != "random" && strategy != "balanced" && strategy != "full")
        throw std::invalid_argument("scan strategy must be random, balanced, or full");
    if (m_values.empty() || i_values.empty())
        throw std::invalid_argument("scan needs at least one M and one I value");
    for (int m : m_values)
        if (m < 4)
            throw std::invalid_argument("scan needs M >= 4");
    for (int i : i_values)
        if (i < 2)
            throw std::invalid_argument("scan needs I >= 2");
    if (strategy != "full" && t_values.empty())
        throw std::invalid_argument("scan needs at least one T value");
    if (trials_per_cell < 1)
        throw std::invalid_argument("scan needs trial count >= 1");
}

namespace {

int thread_budget(int requested) {
    int budget = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (budget < 1)
        budget = 1;
    if (const char* env = std::getenv("TENRECO_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1)
            budget = std::min(budget, cap);
    }
    return budget;
}

TrialRow run_trial(const ScanConfig& config, int trial) {
    TrialRow row;
    row.trial = trial;
    row.seed = stable_hash(config.base_seed, static_cast<std::uint64_t>(trial));
    // Trial layout: ((m_idx * |I| + i_idx) * t_axis + t_idx) * trials + k.
    int rest = trial / config.trials_per_cell;
    const int t_idx = rest % config.t_axis();
    rest /= config.t_axis();
    const int i_idx = rest % static_cast<int>(config.i_values.size());
    row.M = config.m_values[rest / config.i_values.size()];
    row.I = config.i_values[i_idx];
    row.T = config.strategy == "full" ? 0 : config.t_values[t_idx];
    row.strategy = config.strategy;
    try {
        Coupling coupling;
        if (config.strategy == "random")
            coupling = make_random(row.M, row.T, stable_hash(row.seed, 1));
        else if (config.strategy == "balanced")
            coupling = make_balanced(row.M, row.T, stable_hash(row.seed, 1));
        else
            coupling = make_full(row.M);
        const CouplingStats st = stats(coupling);
        row.T = st.T;
        row.coupling_hash = coupling_hash(coupling);
        row.d_spread = st.degree_spread();
        row.defect_class = to_string(st.defect_class);

        RmaxOptions options;
        options.rel_tol = config.rel_tol;
        options.retries_per_r = config.retries;
        const RmaxResult res = rmax_search(coupling, row.I, stable_hash(row.seed, 2), options);
        row.r_max = res.r_max;
        row.necessary = res.necessary;
        row.achieved = res.achieved;
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<TrialRow> run_scan(const ScanConfig& config) {
    config.validate();

    std::map<int, TrialRow> done;
    if (!config.journal_path.empty()) {
        std::ifstream in(config.journal_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            const TrialRow row = trial_row_from_json(nlohmann::json::parse(line));
            if (!row.failed) // failed trials are retried on resume
                done[row.trial] = row;
        }
    }

    std::ofstream journal;
    std::mutex journal_mutex;
    if (!config.journal_path.empty())
        journal.open(config.journal_path, std::ios::app);

    std::vector<int> pending;
    for (int t = 0; t < config.total_trials(); ++t)
        if (!done.count(t))
            pending.push_back(t);

    std::vector<TrialRow> fresh(pending.size());
    std::atomic<std::size_t> cursor{0};
    const int workers =
        std::min(thread_budget(config.threads),
                 std::max(static_cast<int>(pending.size()), 1));
    auto work = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= pending.size())
                return;
            fresh[i] = run_trial(config, pending[i]);
            if (journal.is_open()) {
                const std::string line = to_json(fresh[i]).dump();
                std::lock_guard<std::mutex> lock(journal_mutex);
                journal << line << "\n" << std::flush;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    for (auto& row : fresh)
        done[row.trial] = std::move(row);
    std::vector<TrialRow> rows;
    rows.reserve(done.size());
    for (auto& [idx, row] : done)
        rows.push_back(std::move(row));
    return rows;
}

std::string scan_csv(const ScanConfig& config, const std::vector<TrialRow>& rows) {
    std::ostringstream os;
    os << "# tenreco-scan v1\n";
    os << "experiment,trial,seed,M,I,T,strategy,coupling_hash,d_spread,defect_class,"
          "r_max,necessary_bound,achieved,status\n";
    for (const auto& r : rows) {
        os << config.experiment << ',' << r.trial << ',' << r.seed << ',' << r.M << ',' << r.I
           << ',' << r.T << ',' << r.strategy << ',' << r.coupling_hash << ',' << r.d_spread
           << ',' << r.defect_class << ',' << r.r_max << ',' << r.necessary << ','
           << (r.achieved ? 1 : 0) << ',' << (r.failed ? "failed" : "ok") << '\n';
    }
    return os.str();
}

void write_scan_csv(const std::string& path, const ScanConfig& config,
                    const std::vector<TrialRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot open scan output: " + path);
    out << scan_csv(config, rows);
}

nlohmann::json to_json(const TrialRow& row) {
    nlohmann::json j;
    j["trial"] = row.trial;
    j["seed"] = row.seed;
    j["M"] = row.M;
    j["I"] = row.I;
    j["T"] = row.T;
    j["strategy"] = row.strategy;
    j["coupling_hash"] = row.coupling_hash;
    j["d_spread"] = row.d_spread;
    j["defect_class"] = row.defect_class;
    j["r_max"] = row.r_max;
    j["necessary_bound"] = row.necessary;
    j["achieved"] = row.achieved;
    j["failed"] = row.failed;
    j["error"] = row.error;
    return j;
}

TrialRow trial_row_from_json(const nlohmann::json& j) {
    TrialRow row;
    row.trial = j.at("trial").get<int>();
    row.seed = j.at("seed").get<std::uint64_t>();
    row.M = j.at("M").get<int>();
    row.I = j.at("I").get<int>();
    row.T = j.at("T").get<int>();
    row.strategy = j.at("strategy").get<std::string>();
    row.coupling_hash = j.at("coupling_hash").get<std::string>();
    row.d_spread = j.at("d_spread").get<int>();
    row.defect_class = j.at("defect_class").get<std::string>();
    row.r_max = j.at("r_max").get<long long>();
    row.necessary = j.at("necessary_bound").get<long long>();
    row.achieved = j.at("achieved").get<bool>();
    row.failed = j.value("failed", false);
    row.error = j.value("error", std::string{});
    return row;
}

} // namespace tenreco
