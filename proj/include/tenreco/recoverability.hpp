#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tenreco/coupling.hpp"
#include "tenreco/parameterization.hpp"

namespace tenreco {

enum class RankMethod { svd, exact_rational };

struct RankReport {
    int rows = 0;
    int cols = 0;
    std::vector<double> singular_values; // descending; empty in exact mode
    int rank = 0;
    double rel_tol = 0.0; // unused in exact mode
    bool full_column_rank = false;
    RankMethod method = RankMethod::svd;
};

/// Numerical rank: the number of singular values above rel_tol * sigma_1
/// (rank 0 when sigma_1 == 0). Throws on non-finite entries.
RankReport numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

/// Exact rank of a rational matrix (wrapper around the fraction-free
/// elimination in rational.hpp, declared here to keep one report type).
RankReport exact_rank_report(const struct RatMatrix& m);

/// Degrees of freedom of the observed marginal set:
/// 1 + M(I-1) + P(I-1)^2 + T(I-1)^3, with P and T from the coupling.
long long n_obs(const Coupling& coupling, int I);

/// floor(n_obs / (1 + M(I-1))): no model with more terms can have a full
/// column rank Jacobian.
long long necessary_bound(const Coupling& coupling, int I);

/// Rank cap implied by degree-1 patterns: I^2 for single_deg1,
/// I(I+1)/2 for double_deg1_shared, absent otherwise.
std::optional<long long> defect_bound(const CouplingStats& s, int I);

struct RmaxOptions {
    double rel_tol = 1e-10;
    int retries_per_r = 3;
    long long r_cap = -1; // -1: default to the necessary bound
    ParamMode mode = ParamMode::generic;
};

struct RmaxCertificate {
    int R = 0;
    std::uint64_t seed = 0; // sample_params(M, I, R, seed) reproduces theta
    int retries_used = 0;
};

struct RmaxResult {
    Coupling coupling;
    int I = 0;
    double rel_tol = 0.0;
    ParamMode mode = ParamMode::generic;
    long long r_max = 0;
    long long necessary = 0;
    bool achieved = false;
    std::vector<RmaxCertificate> certificates;
    long long failing_r = -1; // -1 when the search hit its cap
    std::vector<double> failing_sv_tail; // sigma_i / sigma_1 at the failing R
};

/// Incremental maximum-recoverable-rank search: grow R while the Jacobian
/// at a random parameter point stays full column rank; a failed R is
/// retried with a wholly resampled theta up to retries_per_r times.
RmaxResult rmax_search(const Coupling& coupling, int I, std::uint64_t seed,
                       const RmaxOptions& options = {});

/// True iff the Jacobian rank at a generic point with R_big terms equals
/// n_obs, i.e. the parameterization attains its image dimension.
bool rank_saturation_check(const Coupling& coupling, int I, int R_big, std::uint64_t seed,
                           double rel_tol = 1e-10);

nlohmann::json to_json(const RmaxResult& r);
RmaxResult rmax_from_json(const nlohmann::json& j);

} // namespace tenreco
