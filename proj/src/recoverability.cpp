#include "tenreco/recoverability.hpp"

#include <Eigen/SVD>
#include <algorithm>

#include "tenreco/rational.hpp"

namespace tenreco {

RankReport numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.size() == 0)
        throw std::invalid_argument("numerical_rank needs a non-empty matrix");
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("numerical_rank needs rel_tol > 0");
    if (!m.allFinite())
        throw std::invalid_argument("numerical_rank needs finite entries");

    RankReport report;
    report.rows = static_cast<int>(m.rows());
    report.cols = static_cast<int>(m.cols());
    report.rel_tol = rel_tol;
    report.method = RankMethod::svd;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    report.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double s1 = report.singular_values.empty() ? 0.0 : report.singular_values.front();
    if (s1 > 0.0) {
        for (double s : report.singular_values)
            if (s > rel_tol * s1)
                ++report.rank;
    }
    report.full_column_rank = report.rank == report.cols;
    return report;
}

RankReport exact_rank_report(const RatMatrix& m) {
    RankReport report;
    report.rows = m.rows;
    report.cols = m.cols;
    report.method = RankMethod::exact_rational;
    report.rank = exact_rank(m);
    report.full_column_rank = report.rank == report.cols;
    return report;
}

long long n_obs(const Coupling& coupling, int I) {
    if (I < 2)
        throw std::invalid_argument("n_obs needs I >= 2");
    const CouplingStats s = stats(coupling);
    const long long e = I - 1;
    return 1 + static_cast<long long>(coupling.M) * e +
           static_cast<long long>(s.pair_count) * e * e +
           static_cast<long long>(s.T) * e * e * e;
}

long long necessary_bound(const Coupling& coupling, int I) {
    const long long n1 = 1 + static_cast<long long>(coupling.M) * (I - 1);
    return n_obs(coupling, I) / n1;
}

std::optional<long long> defect_bound(const CouplingStats& s, int I) {
    switch (s.defect_class) {
    case DefectClass::single_deg1:
        return static_cast<long long>(I) * I;
    case DefectClass::double_deg1_shared:
        return static_cast<long long>(I) * (I + 1) / 2;
    default:
        return std::nullopt;
    }
}

namespace {

struct RankProbe {
    bool full = false;
    std::vector<double> sv_tail; // sigma_i / sigma_1, last few
};

RankProbe probe_full_rank(const ParamVector& theta, const Coupling& coupling, double rel_tol) {
    const JacobianMatrix jac = jacobian(theta, coupling);
    RankProbe probe;
    if (jac.m.cols() > jac.m.rows())
        return probe; // cannot be full column rank; skip the SVD
    const RankReport report = numerical_rank(jac.m, rel_tol);
    probe.full = report.full_column_rank;
    const std::size_t n = report.singular_values.size();
    const double s1 = n ? report.singular_values.front() : 0.0;
    for (std::size_t i = n > 5 ? n - 5 : 0; i < n; ++i)
        probe.sv_tail.push_back(s1 > 0.0 ? report.singular_values[i] / s1 : 0.0);
    return probe;
}

} // namespace

RmaxResult rmax_search(const Coupling& coupling, int I, std::uint64_t seed,
                       const RmaxOptions& options) {
    coupling.validate();
    if (I < 2)
        throw std::invalid_argument("rmax_search needs I >= 2");
    if (options.r_cap == 0 || options.r_cap < -1)
        throw resource_exhausted("rmax_search needs r_cap >= 1");

    RmaxResult result;
    result.coupling = coupling;
    result.I = I;
    result.rel_tol = options.rel_tol;
    result.mode = options.mode;
    result.necessary = necessary_bound(coupling, I);
    const long long cap =
        options.r_cap < 0 ? result.necessary : std::min(options.r_cap, result.necessary);

    std::uint64_t current_seed = stable_hash(seed, 1, 0);
    for (long long r = 1; r <= cap; ++r) {
        bool ok = false;
        int retries_used = 0;
        RankProbe last;
        for (int attempt = 0; attempt <= options.retries_per_r; ++attempt) {
            const std::uint64_t trial_seed =
                attempt == 0 ? current_seed
                             : stable_hash(seed, static_cast<std::uint64_t>(r),
                                           static_cast<std::uint64_t>(attempt));
            const ParamVector theta =
                sample_params(coupling.M, I, static_cast<int>(r), trial_seed, options.mode);
            last = probe_full_rank(theta, coupling, options.rel_tol);
            if (last.full) {
                ok = true;
                current_seed = trial_seed;
                result.certificates.push_back(
                    {static_cast<int>(r), trial_seed, retries_used});
                break;
            }
            ++retries_used;
        }
        if (!ok) {
            result.failing_r = r;
            result.failing_sv_tail = last.sv_tail;
            break;
        }
        result.r_max = r;
    }
    result.achieved = result.r_max == result.necessary;

    if (result.r_max > result.necessary)
        throw std::logic_error("rmax search exceeded the necessary bound");
    if (const auto cap = defect_bound(stats(coupling), I); cap && result.r_max > *cap)
        throw std::logic_error("rmax search exceeded the degree-1 defect cap");
    return result;
}

bool rank_saturation_check(const Coupling& coupling, int I, int R_big, std::uint64_t seed,
                           double rel_tol) {
    coupling.validate();
    if (R_big <= necessary_bound(coupling, I) + 2)
        throw std::invalid_argument("rank_saturation_check needs R_big > necessary bound + 2");
    const ParamVector theta = sample_params(coupling.M, I, R_big, seed);
    const JacobianMatrix jac = jacobian(theta, coupling);
    const RankReport report = numerical_rank(jac.m, rel_tol);
    return report.rank == n_obs(coupling, I);
}

nlohmann::json to_json(const RmaxResult& r) {
    nlohmann::json j;
    j["coupling"] = to_json(r.coupling);
    j["I"] = r.I;
    j["rel_tol"] = r.rel_tol;
    j["mode"] = r.mode == ParamMode::rational ? "rational" : "generic";
    j["r_max"] = r.r_max;
    j["necessary_bound"] = r.necessary;
    j["achieved"] = r.achieved;
    auto certs = nlohmann::json::array();
    for (const auto& c : r.certificates)
        certs.push_back({{"R", c.R}, {"seed", c.seed}, {"retries_used", c.retries_used}});
    j["certificates"] = std::move(certs);
    j["failing_R"] = r.failing_r;
    j["failing_sv_tail"] = r.failing_sv_tail;
    return j;
}

RmaxResult rmax_from_json(const nlohmann::json& j) {
    RmaxResult r;
    r.coupling = coupling_from_json(j.at("coupling"));
    r.I = j.at("I").get<int>();
    r.rel_tol = j.at("rel_tol").get<double>();
    r.mode = j.at("mode").get<std::string>() == "rational" ? ParamMode::rational
                                                           : ParamMode::generic;
    r.r_max = j.at("r_max").get<long long>();
    r.necessary = j.at("necessary_bound").get<long long>();
    r.achieved = j.at("achieved").get<bool>();
    for (const auto& c : j.at("certificates"))
        r.certificates.push_back({c.at("R").get<int>(), c.at("seed").get<std::uint64_t>(),
                                  c.at("retries_used").get<int>()});
    r.failing_r = j.value("failing_R", -1LL);
    if (j.contains("failing_sv_tail"))
        r.failing_sv_tail = j.at("failing_sv_tail").get<std::vector<double>>();
    return r;
}

} // namespace tenreco
