#pragma once

#include <array>
#include <optional>
#include <string>

#include "tenreco/parameterization.hpp"
#include "tenreco/rational.hpp"
#include "tenreco/tensor.hpp"

namespace tenreco {

using Partition = std::array<std::vector<int>, 3>;

/// Order-3 block tensor of all marginals of a Cartesian coupling: block
/// (r,s,t) is the marginal of triplet (j_r, k_s, l_t), axes in partition
/// order.
struct StackedTensor {
    Partition partition;
    DenseTensor Y;

    StackedTensor(Partition p, DenseTensor y) : partition(std::move(p)), Y(std::move(y)) {}
};

/// Bound value that may be absent (hypothesis violated); note explains.
struct BoundValue {
    std::optional<long long> value;
    std::string note;
};

void validate_partition(const Partition& partition, int M);

/// Blockwise stacking of the triplet marginals of theta.
StackedTensor stack(const ParamVector& theta, const Partition& partition);

/// The stacked factor matrices B^(i) (M_i I x R): vertical stacks of the
/// lifted factors of group i, so that Y = CPD(lambda; B1, B2, B3).
std::array<Eigen::MatrixXd, 3> stacked_factors(const ParamVector& theta,
                                               const Partition& partition);

/// Order-3 CPD with per-mode factor matrices (sizes may differ per mode).
DenseTensor cpd3(const Eigen::VectorXd& lambda, const std::array<Eigen::MatrixXd, 3>& factors);

/// The constant lift matrix Q of one group: column 0 marks the last row of
/// each I-block; the remaining columns carry one simplex-lift Jacobian per
/// variable, block-diagonally. B^(i) = Q * C^(i) exactly.
Eigen::MatrixXd build_q(int group_size, int I);

/// The reduced factor matrices C^(i) ((M_i(I-1)+1) x R): a row of ones on
/// top of the stacked truncated factors of group i.
std::array<Eigen::MatrixXd, 3> reduced_factors(const ParamVector& theta,
                                               const Partition& partition);

/// Sizes of the reduced tensor: (I-1) * M_i + 1 per group.
std::array<int, 3> reduced_sizes(const Partition& partition, int I);

/// Identifiability bound of the Cartesian coupling: the order-3 generic
/// identifiability bound evaluated at the reduced sizes (sorted descending;
/// requires the smallest to exceed 2).
BoundValue cartesian_ident_bound(const Partition& partition, int I);

/// Closed-form bound for the most balanced partition:
/// floor(K^2 (I-1)^2 / 3 - K (I-1)) with K = floor(M/3), clamped at 0.
long long even_partition_bound(int M, int I);

/// Exact counterparts for rational-mode parameters.
RatMatrix exact_build_q(int group_size, int I);
std::array<RatMatrix, 3> exact_stacked_factors(const ParamVector& theta,
                                               const Partition& partition);
std::array<RatMatrix, 3> exact_reduced_factors(const ParamVector& theta,
                                               const Partition& partition);

} // namespace tenreco
