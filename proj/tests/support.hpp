#pragma once

// Shared helpers for the test suites.

#include <algorithm>
#include <vector>

#include "tenreco/coupling.hpp"
#include "tenreco/parameterization.hpp"
#include "tenreco/tensor.hpp"

namespace tenreco::testing {

/// All triplets of {2..M} plus {1, M-1, M}: the most favorable coupling
/// with exactly one degree-1 variable.
inline Coupling single_deg1_favorable(int M) {
    Coupling c;
    c.M = M;
    for (int j = 2; j <= M; ++j)
        for (int k = j + 1; k <= M; ++k)
            for (int l = k + 1; l <= M; ++l)
                c.triplets.push_back({j, k, l});
    c.triplets.push_back({1, M - 1, M});
    std::sort(c.triplets.begin(), c.triplets.end());
    c.validate();
    return c;
}

/// All triplets of {3..M} plus {1, 2, M}: two degree-1 variables sharing
/// their only triplet.
inline Coupling double_deg1_favorable(int M) {
    Coupling c;
    c.M = M;
    for (int j = 3; j <= M; ++j)
        for (int k = j + 1; k <= M; ++k)
            for (int l = k + 1; l <= M; ++l)
                c.triplets.push_back({j, k, l});
    c.triplets.push_back({1, 2, M});
    std::sort(c.triplets.begin(), c.triplets.end());
    c.validate();
    return c;
}

/// Random simplex-constrained model with sum(lambda) == 1.
inline FactorModel random_simplex_model(int M, int I, int R, std::uint64_t seed) {
    FactorModel model = to_factor_model(sample_params(M, I, R, seed));
    model.lambda /= model.lambda.sum();
    return model;
}

/// Ascending mode list 1..M.
inline std::vector<int> all_modes(int M) {
    std::vector<int> modes(M);
    for (int m = 0; m < M; ++m)
        modes[m] = m + 1;
    return modes;
}

} // namespace tenreco::testing
