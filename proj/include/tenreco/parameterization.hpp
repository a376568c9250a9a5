#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tenreco/coupling.hpp"
#include "tenreco/tensor.hpp"

namespace tenreco {

/// Exact small fraction; used by the rational parameter mode.
struct Frac {
    long long num = 0;
    long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    static Frac parse(const std::string& s);
};

enum class ParamMode { generic, rational };

/// Truncated parameter vector of a rank-R coupled model: R consecutive
/// blocks (lambda_r, ua^(1)_r, ..., ua^(M)_r), each truncated factor
/// column of length I-1. Block length is n1 = 1 + M * (I - 1).
struct ParamVector {
    int M = 0;
    int I = 0;
    int R = 0;
    ParamMode mode = ParamMode::generic;
    Eigen::VectorXd theta;
    std::vector<Frac> exact; // populated in rational mode, same layout

    int block_len() const { return 1 + M * (I - 1); }
    int size() const { return R * block_len(); }

    double lambda(int r) const { return theta[static_cast<Eigen::Index>(r) * block_len()]; }
    /// Truncated factor column of variable m (1-based) in term r (0-based).
    Eigen::VectorXd ua(int r, int m) const {
        return theta.segment(static_cast<Eigen::Index>(r) * block_len() + 1 +
                                 static_cast<Eigen::Index>(m - 1) * (I - 1),
                             I - 1);
    }

    /// Feasibility: lambda >= 0, truncated columns >= 0 with sum <= 1.
    /// strict requires the open versions (> 0, sum < 1).
    void validate(bool strict = false) const;
};

/// The stacked vector of vectorized triplet marginals, in the coupling's
/// canonical triplet order; length T * I^3.
struct MarginalStack {
    int I = 0;
    int T = 0;
    Eigen::VectorXd y;

    Eigen::VectorXd block(int t) const {
        const Eigen::Index n = static_cast<Eigen::Index>(I) * I * I;
        return y.segment(t * n, n);
    }
};

/// Dense Jacobian of mu: rows are T blocks of I^3 (triplet order), columns
/// are R blocks of n1 = 1 + M(I-1) laid out like ParamVector.
struct JacobianMatrix {
    int M = 0, I = 0, R = 0, T = 0;
    Eigen::MatrixXd m;

    int block_len() const { return 1 + M * (I - 1); }
};

/// Appends 1 - sum(ua): the sum-to-one completion of a truncated column.
Eigen::VectorXd lift(const Eigen::VectorXd& ua);

/// The I x (I-1) Jacobian of the lift: identity on top, last row all -1.
Eigen::MatrixXd simplex_lift_jacobian(int I);

/// Evaluates the coupled model: block t is the vectorized order-3 CPD of
/// the lifted factor columns of triplet t.
MarginalStack mu(const ParamVector& theta, const Coupling& coupling);

/// Exact analytic Jacobian of mu at theta. For triplet {j,k,l} with lifted
/// columns a,b,c, term r contributes the column block
///   [ c(x)b(x)a | lambda_r c(x)b(x)JP | lambda_r c(x)JP(x)a | lambda_r JP(x)b(x)a ]
/// in the j/k/l factor slots; every other factor slot is zero.
JacobianMatrix jacobian(const ParamVector& theta, const Coupling& coupling);

/// Random feasible parameters. generic: lambda ~ U[0.5, 1.5], factor
/// columns flat-Dirichlet then truncated. rational: exact small fractions
/// with the same feasibility, exposed in `exact`.
/// Block r depends only on (seed, r), so the R-term draw extends the
/// (R-1)-term draw for the same seed.
ParamVector sample_params(int M, int I, int R, std::uint64_t seed,
                          ParamMode mode = ParamMode::generic);

/// Lifts every truncated column; lambda is copied as-is.
FactorModel to_factor_model(const ParamVector& theta);

nlohmann::json to_json(const ParamVector& p);
ParamVector params_from_json(const nlohmann::json& j);

} // namespace tenreco
