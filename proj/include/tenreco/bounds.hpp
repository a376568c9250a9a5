#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tenreco/cartesian.hpp"
#include "tenreco/coupling.hpp"

namespace tenreco {

/// Kruskal rank: the largest k such that every k-subset of columns is
/// linearly independent, by exhaustive subset rank tests. Matrices with
/// more than 12 columns need an explicit cap on the subset size.
int kruskal_rank(const Eigen::MatrixXd& a, int cap = -1, double rel_tol = 1e-10);

/// Order-3 sufficient uniqueness condition kappa1+kappa2+kappa3 >= 2R+2.
/// In generic mode the arguments are mode sizes and kappa_i = min(I_i, R);
/// otherwise they are taken as Kruskal ranks directly.
bool kruskal_bound_order3(int i1, int i2, int i3, bool generic, int R);

/// Order-M generalization: 2R + (M-1) <= sum of kappas. Same convention
/// for `generic` as the order-3 variant.
bool kruskal_bound_orderM(const std::vector<int>& sizes, int R, bool generic);

/// Order-3 generic identifiability bound for sizes with the smallest
/// above 2: floor(I1 I2 I3 / (I1+I2+I3-2) - I1), sizes sorted internally.
std::optional<long long> bocci_bound(int i1, int i2, int i3);

/// Sufficient identifiability bound from the full marginal set:
/// I(M-2) when M <= I, else (floor(sqrt(MI-1)/I) * I - 1)^2.
long long kargas_t1_bound(int M, int I);

/// Sufficient identifiability bound 4^(alpha-1) with alpha the largest
/// integer such that 2^alpha <= floor(M/3) * I; absent when that product
/// is below 2.
std::optional<long long> kargas_t2_bound(int M, int I);

enum class BoundKind { necessary, sufficient_identifiability, empirical };

struct BoundEntry {
    std::string name;
    BoundKind kind = BoundKind::necessary;
    std::optional<long long> value;
    std::string source;
};

struct BoundReport {
    int M = 0;
    int I = 0;
    std::string descriptor;
    std::vector<BoundEntry> entries;

    std::optional<long long> value_of(const std::string& name) const;
};

/// Merged report for one configuration. Kargas and even-partition entries
/// attach to full couplings only (their statements need the full marginal
/// set); the Cartesian reduction bound needs the partition. Throws
/// std::logic_error if a sufficient value exceeds a necessary one.
BoundReport report(int M, int I, const Coupling& coupling,
                   const std::optional<Partition>& partition = std::nullopt,
                   std::optional<long long> empirical_r_max = std::nullopt);

/// (M, I, even_partition_bound, kargas_t1, kargas_t2) rows where the
/// even-partition bound fails to dominate a Kargas bound.
struct ImprovementViolation {
    int M = 0;
    int I = 0;
    long long even = 0;
    long long kargas_t1 = 0;
    long long kargas_t2 = 0;
};
std::vector<ImprovementViolation> improvement_violations(int m_lo, int m_hi, int i_lo, int i_hi);

nlohmann::json to_json(const BoundReport& r);
std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport& r);

} // namespace tenreco
