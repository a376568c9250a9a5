#pragma once

#include <gmpxx.h>
#include <vector>

#include "tenreco/coupling.hpp"
#include "tenreco/parameterization.hpp"

namespace tenreco {

/// Dense matrix of exact rationals (row-major). Only what the exact rank
/// and exact-algebra checks need; no attempt at a general matrix library.
struct RatMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<mpq_class> a;

    RatMatrix() = default;
    RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, mpq_class(0)) {}

    mpq_class& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const mpq_class& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

RatMatrix rat_mul(const RatMatrix& x, const RatMatrix& y);
bool rat_equal(const RatMatrix& x, const RatMatrix& y);

/// Exact matrix rank by fraction-free (Bareiss) elimination over GMP
/// integers, after clearing denominators row by row.
int exact_rank(const RatMatrix& m);

/// Exact embedding of a double matrix (doubles are dyadic rationals).
RatMatrix rat_from_dense(const Eigen::MatrixXd& m);

/// Exact counterparts of the parameterization pieces. theta must be in
/// rational mode (carry exact entries).
mpq_class exact_entry(const ParamVector& theta, int flat_index);
std::vector<mpq_class> exact_lift(const ParamVector& theta, int r, int m);
RatMatrix exact_jacobian(const ParamVector& theta, const Coupling& coupling);

} // namespace tenreco
