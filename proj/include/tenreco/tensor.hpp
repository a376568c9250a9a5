#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tenreco/common.hpp"

namespace tenreco {

/// Dense real tensor in column-major layout: entry (i1,...,iM) (0-based)
/// lives at offset i1 + I1*i2 + I1*I2*i3 + ...
///
/// Construction is gated to 2^24 total entries; nothing in this codebase
/// needs a larger dense tensor and the gate catches accidental blowups.
struct DenseTensor {
    std::vector<int> dims;
    Eigen::VectorXd data;

    DenseTensor(std::vector<int> dims_, Eigen::VectorXd data_);

    /// Zero tensor with the given mode sizes.
    static DenseTensor zeros(std::vector<int> dims_);

    int order() const { return static_cast<int>(dims.size()); }
    std::int64_t size() const { return data.size(); }
    double sum() const { return data.sum(); }

    /// Flat column-major offset of a 0-based multi-index.
    std::int64_t offset(const std::vector<int>& index) const;

    double& at(const std::vector<int>& index) { return data[offset(index)]; }
    double at(const std::vector<int>& index) const { return data[offset(index)]; }
};

/// Maximum number of entries a DenseTensor may hold.
inline constexpr std::int64_t kDenseTensorEntryBudget = std::int64_t(1) << 24;

/// Weights and per-variable stochastic factor matrices of a simplex
/// constrained CP model: lambda >= 0, factors I x R with nonnegative
/// entries and unit column sums. In strict mode lambda itself sums to 1.
struct FactorModel {
    Eigen::VectorXd lambda;              // length R
    std::vector<Eigen::MatrixXd> factors; // M matrices, each I x R

    int variable_count() const { return static_cast<int>(factors.size()); }
    int bins() const { return factors.empty() ? 0 : static_cast<int>(factors.front().rows()); }
    int rank() const { return static_cast<int>(lambda.size()); }

    /// Checks the model invariants to 1e-12; throws std::invalid_argument
    /// on violation. strict additionally requires sum(lambda) == 1.
    void validate(bool strict = false) const;
};

/// Outer product of the given vectors, as an order-M tensor.
/// vec(a o b o c) == kron(c, kron(b, a)) under the column-major layout.
DenseTensor outer_product(const std::vector<Eigen::VectorXd>& vectors);

/// CP tensor of the model restricted to the given modes (1-based, distinct):
/// sum_r lambda_r * outer(factors[modes[0]].col(r), ...). Axis order follows
/// the order of `modes`.
DenseTensor cpd_eval(const FactorModel& model, const std::vector<int>& modes);

/// Sums the tensor over every mode not in `keep` (1-based mode indices).
/// Output axes are the kept modes in ascending order; total mass preserved.
DenseTensor marginalize(const DenseTensor& t, const std::vector<int>& keep);

/// Kronecker product. For b of size p x q:
/// (a (x) b)[(i-1)p+k, (j-1)q+l] = a(i,j) * b(k,l).
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace tenreco
