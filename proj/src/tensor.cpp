#include "tenreco/tensor.hpp"

#include <algorithm>
#include <set>

namespace tenreco {

namespace {

std::int64_t checked_total(const std::vector<int>& dims) {
    if (dims.empty())
        throw std::invalid_argument("tensor needs at least one mode");
    std::int64_t total = 1;
    for (int d : dims) {
        if (d < 1)
            throw std::invalid_argument("tensor mode sizes must be >= 1");
        total *= d;
        if (total > kDenseTensorEntryBudget)
            throw std::invalid_argument("tensor exceeds the dense entry budget");
    }
    return total;
}

} // namespace

DenseTensor::DenseTensor(std::vector<int> dims_, Eigen::VectorXd data_)
    : dims(std::move(dims_)), data(std::move(data_)) {
    const std::int64_t total = checked_total(dims);
    if (data.size() != total)
        throw std::invalid_argument("tensor data length does not match mode sizes");
}

DenseTensor DenseTensor::zeros(std::vector<int> dims_) {
    const std::int64_t total = checked_total(dims_);
    return DenseTensor(std::move(dims_), Eigen::VectorXd::Zero(total));
}

std::int64_t DenseTensor::offset(const std::vector<int>& index) const {
    std::int64_t off = 0;
    std::int64_t stride = 1;
    for (std::size_t m = 0; m < dims.size(); ++m) {
        off += stride * index[m];
        stride *= dims[m];
    }
    return off;
}

void FactorModel::validate(bool strict) const {
    constexpr double tol = 1e-12;
    const int r = rank();
    const int i = bins();
    if (factors.empty() || r < 1 || i < 1)
        throw std::invalid_argument("factor model must have factors and rank >= 1");
    if (lambda.minCoeff() < 0.0)
        throw std::invalid_argument("lambda must be entrywise nonnegative");
    if (strict && std::abs(lambda.sum() - 1.0) > tol)
        throw std::invalid_argument("strict mode requires sum(lambda) == 1");
    for (const auto& a : factors) {
        if (a.rows() != i || a.cols() != r)
            throw std::invalid_argument("factor matrices must share the I x R shape");
        if (a.minCoeff() < 0.0)
            throw std::invalid_argument("factors must be entrywise nonnegative");
        for (int c = 0; c < r; ++c) {
            if (std::abs(a.col(c).sum() - 1.0) > tol)
                throw std::invalid_argument("factor columns must sum to 1");
        }
    }
}

DenseTensor outer_product(const std::vector<Eigen::VectorXd>& vectors) {
    if (vectors.empty())
        throw std::invalid_argument("outer_product needs at least one vector");
    std::vector<int> dims;
    dims.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (v.size() == 0)
            throw std::invalid_argument("outer_product vectors must be non-empty");
        dims.push_back(static_cast<int>(v.size()));
    }
    checked_total(dims);

    // vec over modes 1..M is v_M (x) ... (x) v_1; build by folding from mode 1.
    Eigen::VectorXd acc = Eigen::VectorXd::Ones(1);
    for (const auto& v : vectors) {
        Eigen::VectorXd next(v.size() * acc.size());
        std::int64_t pos = 0;
        for (std::int64_t i = 0; i < v.size(); ++i)
            for (std::int64_t j = 0; j < acc.size(); ++j)
                next[pos++] = v[i] * acc[j];
        acc = std::move(next);
    }
    return DenseTensor(std::move(dims), std::move(acc));
}

DenseTensor cpd_eval(const FactorModel& model, const std::vector<int>& modes) {
    const int m_count = model.variable_count();
    if (modes.empty())
        throw std::invalid_argument("cpd_eval needs at least one mode");
    std::set<int> seen;
    for (int m : modes) {
        if (m < 1 || m > m_count)
            throw std::invalid_argument("cpd_eval mode index out of range");
        if (!seen.insert(m).second)
            throw std::invalid_argument("cpd_eval mode indices must be distinct");
    }

    std::vector<int> dims(modes.size(), model.bins());
    DenseTensor out = DenseTensor::zeros(dims);
    std::vector<Eigen::VectorXd> cols(modes.size());
    for (int r = 0; r < model.rank(); ++r) {
        for (std::size_t k = 0; k < modes.size(); ++k)
            cols[k] = model.factors[modes[k] - 1].col(r);
        out.data += model.lambda[r] * outer_product(cols).data;
    }
    return out;
}

DenseTensor marginalize(const DenseTensor& t, const std::vector<int>& keep) {
    if (keep.empty())
        throw std::invalid_argument("marginalize needs a non-empty keep set");
    std::vector<int> kept(keep);
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.size() != keep.size())
        throw std::invalid_argument("marginalize keep modes must be distinct");
    for (int m : kept)
        if (m < 1 || m > t.order())
            throw std::invalid_argument("marginalize keep mode out of range");

    std::vector<int> out_dims;
    out_dims.reserve(kept.size());
    for (int m : kept)
        out_dims.push_back(t.dims[m - 1]);

    DenseTensor out = DenseTensor::zeros(out_dims);
    for (std::int64_t flat = 0; flat < t.size(); ++flat) {
        std::int64_t rem = flat;
        std::int64_t out_off = 0;
        std::int64_t out_stride = 1;
        std::size_t k = 0;
        for (int m = 0; m < t.order(); ++m) {
            const int digit = static_cast<int>(rem % t.dims[m]);
            rem /= t.dims[m];
            if (k < kept.size() && kept[k] == m + 1) {
                out_off += out_stride * digit;
                out_stride *= t.dims[m];
                ++k;
            }
        }
        out.data[out_off] += t.data[flat];
    }
    return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace tenreco
