#include "tenreco/rational.hpp"

namespace tenreco {

RatMatrix rat_mul(const RatMatrix& x, const RatMatrix& y) {
    if (x.cols != y.rows)
        throw std::invalid_argument("rational matrix product shape mismatch");
    RatMatrix out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const mpq_class& v = x.at(i, k);
            if (v == 0)
                continue;
            for (int j = 0; j < y.cols; ++j)
                out.at(i, j) += v * y.at(k, j);
        }
    return out;
}

bool rat_equal(const RatMatrix& x, const RatMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        return false;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (x.a[i] != y.a[i])
            return false;
    return true;
}

int exact_rank(const RatMatrix& m) {
    if (m.rows == 0 || m.cols == 0)
        return 0;
    // Clear denominators per row; row scaling preserves rank.
    std::vector<std::vector<mpz_class>> z(m.rows, std::vector<mpz_class>(m.cols));
    for (int i = 0; i < m.rows; ++i) {
        mpz_class l = 1;
        for (int j = 0; j < m.cols; ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
        for (int j = 0; j < m.cols; ++j) {
            mpq_class scaled = m.at(i, j) * mpq_class(l);
            z[i][j] = scaled.get_num();
        }
    }

    // Fraction-free elimination; entries stay minors of the scaled matrix,
    // so the division below is exact.
    int rank = 0;
    mpz_class prev = 1;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < m.rows; ++i)
            if (z[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        std::swap(z[rank], z[pivot]);
        for (int i = rank + 1; i < m.rows; ++i) {
            for (int j = col + 1; j < m.cols; ++j) {
                mpz_class v = z[rank][col] * z[i][j] - z[i][col] * z[rank][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                z[i][j] = v;
            }
            z[i][col] = 0;
        }
        prev = z[rank][col];
        ++rank;
    }
    return rank;
}

RatMatrix rat_from_dense(const Eigen::MatrixXd& m) {
    RatMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j)
            out.at(i, j) = mpq_class(m(i, j));
    return out;
}

mpq_class exact_entry(const ParamVector& theta, int flat_index) {
    if (theta.mode != ParamMode::rational)
        throw std::invalid_argument("exact entries require a rational-mode parameter vector");
    const Frac& f = theta.exact[flat_index];
    return mpq_class(static_cast<long>(f.num), static_cast<long>(f.den));
}

std::vector<mpq_class> exact_lift(const ParamVector& theta, int r, int m) {
    const int base = r * theta.block_len() + 1 + (m - 1) * (theta.I - 1);
    std::vector<mpq_class> out(theta.I);
    mpq_class sum = 0;
    for (int i = 0; i < theta.I - 1; ++i) {
        out[i] = exact_entry(theta, base + i);
        sum += out[i];
    }
    out[theta.I - 1] = mpq_class(1) - sum;
    return out;
}

RatMatrix exact_jacobian(const ParamVector& theta, const Coupling& coupling) {
    if (theta.M != coupling.M)
        throw std::invalid_argument("parameter vector and coupling disagree on M");
    const int I = theta.I;
    const int n3 = I * I * I;
    const int n1 = theta.block_len();
    const int T = coupling.triplet_count();

    std::vector<std::vector<std::vector<mpq_class>>> lifted(theta.R);
    for (int r = 0; r < theta.R; ++r)
        for (int m = 1; m <= theta.M; ++m)
            lifted[r].push_back(exact_lift(theta, r, m));

    // jp(i, p) = [i == p] - [i == I-1]
    const auto jp = [I](int i, int p) -> int { return (i == p ? 1 : 0) - (i == I - 1 ? 1 : 0); };

    RatMatrix out(n3 * T, n1 * theta.R);
    for (int t = 0; t < T; ++t) {
        const auto& tri = coupling.triplets[t];
        for (int r = 0; r < theta.R; ++r) {
            const auto& a = lifted[r][tri[0] - 1];
            const auto& b = lifted[r][tri[1] - 1];
            const auto& c = lifted[r][tri[2] - 1];
            const mpq_class l = exact_entry(theta, r * n1);
            const int col0 = n1 * r;
            const auto col_of = [&](int m, int p) { return col0 + 1 + (m - 1) * (I - 1) + p; };
            int row = n3 * t;
            for (int k = 0; k < I; ++k)
                for (int j = 0; j < I; ++j)
                    for (int i = 0; i < I; ++i, ++row) {
                        out.at(row, col0) = a[i] * b[j] * c[k];
                        for (int p = 0; p < I - 1; ++p) {
                            if (jp(i, p) != 0)
                                out.at(row, col_of(tri[0], p)) = l * jp(i, p) * b[j] * c[k];
                            if (jp(j, p) != 0)
                                out.at(row, col_of(tri[1], p)) = l * jp(j, p) * a[i] * c[k];
                            if (jp(k, p) != 0)
                                out.at(row, col_of(tri[2], p)) = l * jp(k, p) * a[i] * b[j];
                        }
                    }
        }
    }
    return out;
}

} // namespace tenreco
