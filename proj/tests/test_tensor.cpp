#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tenreco/tensor.hpp"

using namespace tenreco;
using tenreco::testing::all_modes;
using tenreco::testing::random_simplex_model;

namespace {

Eigen::VectorXd random_vec(Rng& rng, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng.uniform(-1.0, 1.0);
    return v;
}

} // namespace

TEST_CASE("outer product of basis vectors") {
    Eigen::VectorXd a(2), b(2);
    a << 1, 0;
    b << 0, 1;
    const DenseTensor t = outer_product({a, b});
    REQUIRE(t.dims == std::vector<int>{2, 2});
    CHECK(t.at({0, 1}) == 1.0);
    CHECK(t.at({0, 0}) == 0.0);
    CHECK(t.at({1, 0}) == 0.0);
    CHECK(t.at({1, 1}) == 0.0);

    Eigen::VectorXd e1(2);
    e1 << 1, 0;
    const DenseTensor cube = outer_product({e1, e1, e1});
    CHECK(cube.at({0, 0, 0}) == 1.0);
    CHECK(cube.data.sum() == 1.0);
}

TEST_CASE("outer product matches the triple-loop oracle and the kron identity") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int I = 3;
        const Eigen::VectorXd a = random_vec(rng, I), b = random_vec(rng, I), c = random_vec(rng, I);
        const DenseTensor t = outer_product({a, b, c});

        // Independent oracle: direct triple loop over all (i, j, k).
        for (int k = 0; k < I; ++k)
            for (int j = 0; j < I; ++j)
                for (int i = 0; i < I; ++i)
                    CHECK(t.data[i + I * j + I * I * k] == doctest::Approx(a[i] * b[j] * c[k]).epsilon(1e-15));

        // vec(a o b o c) = c (x) b (x) a, bit for bit when the products
        // associate the same way (right-nested here).
        const Eigen::MatrixXd k3 = kron(c, kron(b, a));
        for (int i = 0; i < t.data.size(); ++i)
            CHECK(t.data[i] == k3(i, 0));
    }
}

TEST_CASE("outer product rejects bad input") {
    CHECK_THROWS_AS(outer_product({}), std::invalid_argument);
    CHECK_THROWS_AS(outer_product({Eigen::VectorXd()}), std::invalid_argument);
}

TEST_CASE("dense tensor invariants") {
    CHECK_THROWS_AS(DenseTensor({2, 2}, Eigen::VectorXd::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(DenseTensor({0}, Eigen::VectorXd::Zero(0)), std::invalid_argument);
    CHECK_THROWS_AS(DenseTensor::zeros({4096, 4096, 4096}), std::invalid_argument);
}

TEST_CASE("cpd_eval basics") {
    FactorModel model;
    model.lambda = Eigen::VectorXd::Ones(1);
    Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(3, 1);
    e1(0, 0) = 1.0;
    model.factors = {e1, e1, e1};
    const DenseTensor t = cpd_eval(model, {1, 2, 3});
    CHECK(t.at({0, 0, 0}) == 1.0);
    CHECK(t.data.sum() == 1.0);

    CHECK_THROWS_AS(cpd_eval(model, {1, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(cpd_eval(model, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(cpd_eval(model, {1, 2, 4}), std::invalid_argument);
}

TEST_CASE("two identical rank-one terms collapse to one") {
    FactorModel two = random_simplex_model(3, 2, 1, 5);
    FactorModel one = two;
    two.lambda = Eigen::VectorXd::Constant(2, 0.5);
    for (auto& f : two.factors) {
        Eigen::MatrixXd doubled(f.rows(), 2);
        doubled << f, f;
        f = doubled;
    }
    one.lambda = Eigen::VectorXd::Ones(1);
    const DenseTensor a = cpd_eval(two, {1, 2, 3});
    const DenseTensor b = cpd_eval(one, {1, 2, 3});
    for (int i = 0; i < a.data.size(); ++i)
        CHECK(a.data[i] == doctest::Approx(b.data[i]).epsilon(1e-14));
}

TEST_CASE("cpd on a triplet equals the marginalized full tensor") {
    const FactorModel model = random_simplex_model(4, 3, 2, 42);
    const DenseTensor full = cpd_eval(model, all_modes(4));
    for (const std::vector<int> keep : {std::vector<int>{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}) {
        const DenseTensor direct = cpd_eval(model, keep);
        const DenseTensor via_full = marginalize(full, keep);
        REQUIRE(direct.dims == via_full.dims);
        for (int i = 0; i < direct.data.size(); ++i)
            CHECK(direct.data[i] == doctest::Approx(via_full.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("marginalize basics") {
    const DenseTensor ones({2, 2, 2}, Eigen::VectorXd::Ones(8));
    const DenseTensor m = marginalize(ones, {1});
    REQUIRE(m.dims == std::vector<int>{2});
    CHECK(m.data[0] == 4.0);
    CHECK(m.data[1] == 4.0);

    const DenseTensor same = marginalize(ones, {1, 2, 3});
    CHECK(same.data == ones.data);

    CHECK_THROWS_AS(marginalize(ones, {}), std::invalid_argument);
    CHECK_THROWS_AS(marginalize(ones, {4}), std::invalid_argument);
}

TEST_CASE("simplex-constrained marginal keeps its CP structure") {
    const FactorModel model = random_simplex_model(5, 2, 3, 7);
    const DenseTensor full = cpd_eval(model, all_modes(5));
    const DenseTensor kept = marginalize(full, {1, 3, 4});
    const DenseTensor direct = cpd_eval(model, {1, 3, 4});
    for (int i = 0; i < kept.data.size(); ++i)
        CHECK(kept.data[i] == doctest::Approx(direct.data[i]).epsilon(1e-12));
}

TEST_CASE("property: marginalization conserves mass") {
    Rng rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        const int order = 2 + static_cast<int>(rng.below(3));
        std::vector<int> dims;
        for (int m = 0; m < order; ++m)
            dims.push_back(2 + static_cast<int>(rng.below(3)));
        DenseTensor t = DenseTensor::zeros(dims);
        for (int i = 0; i < t.data.size(); ++i)
            t.data[i] = rng.uniform(-1.0, 2.0);

        std::vector<int> keep;
        for (int m = 1; m <= order; ++m)
            if (rng.below(2) == 0)
                keep.push_back(m);
        if (keep.empty())
            keep.push_back(1);
        const DenseTensor m = marginalize(t, keep);
        CHECK(m.data.sum() == doctest::Approx(t.data.sum()).epsilon(1e-12));
    }
}

TEST_CASE("property: marginal-CPD commutation on random triplets") {
    Rng rng(321);
    for (int trial = 0; trial < 100; ++trial) {
        const int M = 4 + static_cast<int>(rng.below(3)); // 4..6
        const int I = 2 + static_cast<int>(rng.below(3)); // 2..4
        const int R = 1 + static_cast<int>(rng.below(4)); // 1..4
        const FactorModel model = random_simplex_model(M, I, R, rng.next());
        const DenseTensor full = cpd_eval(model, all_modes(M));

        std::vector<int> keep;
        while (keep.size() < 3) {
            const int m = 1 + static_cast<int>(rng.below(M));
            if (std::find(keep.begin(), keep.end(), m) == keep.end())
                keep.push_back(m);
        }
        std::sort(keep.begin(), keep.end());
        const DenseTensor lhs = marginalize(full, keep);
        const DenseTensor rhs = cpd_eval(model, keep);
        for (int i = 0; i < lhs.data.size(); ++i)
            CHECK(lhs.data[i] == doctest::Approx(rhs.data[i]).epsilon(1e-10));
    }
}

TEST_CASE("kron basics and oracle") {
    const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
    CHECK(kron(i2, i2).isApprox(Eigen::MatrixXd::Identity(4, 4)));

    Eigen::MatrixXd col(2, 1), row(1, 2);
    col << 1, 1;
    row << 1, 0;
    Eigen::MatrixXd expected(2, 2);
    expected << 1, 0, 1, 0;
    CHECK(kron(col, row) == expected);

    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd a(2, 2), b(2, 2);
        for (int i = 0; i < 4; ++i) {
            a(i / 2, i % 2) = rng.uniform(-1, 1);
            b(i / 2, i % 2) = rng.uniform(-1, 1);
        }
        const Eigen::MatrixXd k = kron(a, b);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q)
                        CHECK(k(i * 2 + p, j * 2 + q) == a(i, j) * b(p, q));
    }
}
