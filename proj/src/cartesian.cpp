#include "tenreco/cartesian.hpp"

#include <algorithm>

namespace tenreco {

void validate_partition(const Partition& partition, int M) {
    std::vector<int> all;
    for (const auto& group : partition) {
        if (group.empty())
            throw std::invalid_argument("partition groups must be non-empty");
        all.insert(all.end(), group.begin(), group.end());
    }
    std::sort(all.begin(), all.end());
    if (static_cast<int>(all.size()) != M)
        throw std::invalid_argument("partition must cover {1..M} exactly");
    for (int i = 0; i < M; ++i)
        if (all[i] != i + 1)
            throw std::invalid_argument("partition must cover {1..M} exactly");
}

StackedTensor stack(const ParamVector& theta, const Partition& partition) {
    validate_partition(partition, theta.M);
    const int I = theta.I;
    const std::array<int, 3> sizes{static_cast<int>(partition[0].size()),
                                   static_cast<int>(partition[1].size()),
                                   static_cast<int>(partition[2].size())};
    DenseTensor y = DenseTensor::zeros({I * sizes[0], I * sizes[1], I * sizes[2]});

    for (int r = 0; r < sizes[0]; ++r)
        for (int s = 0; s < sizes[1]; ++s)
            for (int t = 0; t < sizes[2]; ++t) {
                std::array<Eigen::VectorXd, 3> cols;
                for (int term = 0; term < theta.R; ++term) {
                    cols[0] = lift(theta.ua(term, partition[0][r]));
                    cols[1] = lift(theta.ua(term, partition[1][s]));
                    cols[2] = lift(theta.ua(term, partition[2][t]));
                    const double l = theta.lambda(term);
                    for (int k = 0; k < I; ++k)
                        for (int j = 0; j < I; ++j)
                            for (int i = 0; i < I; ++i)
                                y.at({r * I + i, s * I + j, t * I + k}) +=
                                    l * cols[0][i] * cols[1][j] * cols[2][k];
                }
            }
    return StackedTensor(partition, std::move(y));
}

std::array<Eigen::MatrixXd, 3> stacked_factors(const ParamVector& theta,
                                               const Partition& partition) {
    validate_partition(partition, theta.M);
    std::array<Eigen::MatrixXd, 3> b;
    for (int g = 0; g < 3; ++g) {
        const auto& group = partition[g];
        b[g].resize(static_cast<Eigen::Index>(group.size()) * theta.I, theta.R);
        for (std::size_t v = 0; v < group.size(); ++v)
            for (int r = 0; r < theta.R; ++r)
                b[g].block(static_cast<Eigen::Index>(v) * theta.I, r, theta.I, 1) =
                    lift(theta.ua(r, group[v]));
    }
    return b;
}

DenseTensor cpd3(const Eigen::VectorXd& lambda, const std::array<Eigen::MatrixXd, 3>& factors) {
    DenseTensor out = DenseTensor::zeros({static_cast<int>(factors[0].rows()),
                                          static_cast<int>(factors[1].rows()),
                                          static_cast<int>(factors[2].rows())});
    for (Eigen::Index r = 0; r < lambda.size(); ++r) {
        const DenseTensor term = outer_product({factors[0].col(r), factors[1].col(r), factors[2].col(r)});
        out.data += lambda[r] * term.data;
    }
    return out;
}

Eigen::MatrixXd build_q(int group_size, int I) {
    if (group_size < 1 || I < 2)
        throw std::invalid_argument("build_q needs group_size >= 1 and I >= 2");
    const int rows = group_size * I;
    const int cols = group_size * (I - 1) + 1;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(rows, cols);
    const Eigen::MatrixXd jp = simplex_lift_jacobian(I);
    for (int v = 0; v < group_size; ++v) {
        q(v * I + I - 1, 0) = 1.0;
        q.block(v * I, 1 + v * (I - 1), I, I - 1) = jp;
    }
    return q;
}

std::array<Eigen::MatrixXd, 3> reduced_factors(const ParamVector& theta,
                                               const Partition& partition) {
    validate_partition(partition, theta.M);
    std::array<Eigen::MatrixXd, 3> c;
    for (int g = 0; g < 3; ++g) {
        const auto& group = partition[g];
        const int rows = static_cast<int>(group.size()) * (theta.I - 1) + 1;
        c[g].resize(rows, theta.R);
        c[g].row(0).setOnes();
        for (std::size_t v = 0; v < group.size(); ++v)
            for (int r = 0; r < theta.R; ++r)
                c[g].block(1 + static_cast<Eigen::Index>(v) * (theta.I - 1), r, theta.I - 1, 1) =
                    theta.ua(r, group[v]);
    }
    return c;
}

std::array<int, 3> reduced_sizes(const Partition& partition, int I) {
    std::array<int, 3> out{};
    for (int g = 0; g < 3; ++g)
        out[g] = (I - 1) * static_cast<int>(partition[g].size()) + 1;
    return out;
}

BoundValue cartesian_ident_bound(const Partition& partition, int I) {
    std::array<int, 3> sizes = reduced_sizes(partition, I);
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    if (sizes[2] <= 2)
        return {std::nullopt, "smallest reduced size is " + std::to_string(sizes[2]) +
                                  "; the order-3 bound needs it above 2"};
    const long long i1 = sizes[0], i2 = sizes[1], i3 = sizes[2];
    // floor(i1 i2 i3 / (i1+i2+i3-2)) - i1, all integer.
    const long long value = (i1 * i2 * i3) / (i1 + i2 + i3 - 2) - i1;
    return {value, ""};
}

long long even_partition_bound(int M, int I) {
    if (M <= 3 || I < 2)
        throw std::invalid_argument("even_partition_bound needs M > 3 and I >= 2");
    const long long k = M / 3;
    const long long e = I - 1;
    const long long raw = (k * k * e * e) / 3 - k * e; // exact floor of K^2 e^2 / 3 - K e
    return std::max(raw, 0LL);
}

RatMatrix exact_build_q(int group_size, int I) {
    const int rows = group_size * I;
    const int cols = group_size * (I - 1) + 1;
    RatMatrix q(rows, cols);
    for (int v = 0; v < group_size; ++v) {
        q.at(v * I + I - 1, 0) = 1;
        for (int p = 0; p < I - 1; ++p) {
            q.at(v * I + p, 1 + v * (I - 1) + p) = 1;
            q.at(v * I + I - 1, 1 + v * (I - 1) + p) = -1;
        }
    }
    return q;
}

std::array<RatMatrix, 3> exact_stacked_factors(const ParamVector& theta,
                                               const Partition& partition) {
    validate_partition(partition, theta.M);
    std::array<RatMatrix, 3> b;
    for (int g = 0; g < 3; ++g) {
        const auto& group = partition[g];
        b[g] = RatMatrix(static_cast<int>(group.size()) * theta.I, theta.R);
        for (std::size_t v = 0; v < group.size(); ++v)
            for (int r = 0; r < theta.R; ++r) {
                const auto col = exact_lift(theta, r, group[v]);
                for (int i = 0; i < theta.I; ++i)
                    b[g].at(static_cast<int>(v) * theta.I + i, r) = col[i];
            }
    }
    return b;
}

std::array<RatMatrix, 3> exact_reduced_factors(const ParamVector& theta,
                                               const Partition& partition) {
    validate_partition(partition, theta.M);
    const int n1 = theta.block_len();
    std::array<RatMatrix, 3> c;
    for (int g = 0; g < 3; ++g) {
        const auto& group = partition[g];
        c[g] = RatMatrix(static_cast<int>(group.size()) * (theta.I - 1) + 1, theta.R);
        for (int r = 0; r < theta.R; ++r) {
            c[g].at(0, r) = 1;
            for (std::size_t v = 0; v < group.size(); ++v)
                for (int i = 0; i < theta.I - 1; ++i)
                    c[g].at(1 + static_cast<int>(v) * (theta.I - 1) + i, r) =
                        exact_entry(theta, r * n1 + 1 + (group[v] - 1) * (theta.I - 1) + i);
        }
    }
    return c;
}

} // namespace tenreco
