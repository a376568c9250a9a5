#include "tenreco/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tenreco/recoverability.hpp"

namespace tenreco {

namespace {

bool subset_independent(const Eigen::MatrixXd& a, const std::vector<int>& cols, double rel_tol) {
    Eigen::MatrixXd sub(a.rows(), cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        sub.col(i) = a.col(cols[i]);
    return numerical_rank(sub, rel_tol).rank == static_cast<int>(cols.size());
}

// Visits all k-subsets; returns false as soon as one is dependent.
bool all_subsets_independent(const Eigen::MatrixXd& a, int k, double rel_tol) {
    const int n = static_cast<int>(a.cols());
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        if (!subset_independent(a, idx, rel_tol))
            return false;
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos)
            --pos;
        if (pos < 0)
            return true;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i)
            idx[i] = idx[i - 1] + 1;
    }
}

} // namespace

int kruskal_rank(const Eigen::MatrixXd& a, int cap, double rel_tol) {
    const int n = static_cast<int>(a.cols());
    if (n == 0)
        return 0;
    if (cap < 0 && n > 12)
        throw resource_exhausted("kruskal_rank beyond 12 columns needs an explicit cap");
    const int k_max = std::min({cap < 0 ? n : cap, n, static_cast<int>(a.rows())});
    int k = 0;
    while (k < k_max && all_subsets_independent(a, k + 1, rel_tol))
        ++k;
    return k;
}

bool kruskal_bound_order3(int i1, int i2, int i3, bool generic, int R) {
    const auto kappa = [&](int v) { return generic ? std::min(v, R) : v; };
    return kappa(i1) + kappa(i2) + kappa(i3) >= 2 * R + 2;
}

bool kruskal_bound_orderM(const std::vector<int>& sizes, int R, bool generic) {
    if (sizes.size() < 3)
        throw std::invalid_argument("the Kruskal condition needs order >= 3");
    long long sum = 0;
    for (int v : sizes)
        sum += generic ? std::min(v, R) : v;
    return 2LL * R + static_cast<long long>(sizes.size()) - 1 <= sum;
}

std::optional<long long> bocci_bound(int i1, int i2, int i3) {
    std::array<long long, 3> s{i1, i2, i3};
    std::sort(s.begin(), s.end(), std::greater<long long>());
    if (s[2] <= 2)
        return std::nullopt;
    return (s[0] * s[1] * s[2]) / (s[0] + s[1] + s[2] - 2) - s[0];
}

long long kargas_t1_bound(int M, int I) {
    if (M <= 3)
        throw std::invalid_argument("kargas_t1_bound needs M > 3");
    if (M <= I)
        return static_cast<long long>(I) * (M - 2);
    const long long mi = static_cast<long long>(M) * I - 1;
    const long long root = static_cast<long long>(std::floor(std::sqrt(static_cast<double>(mi)) / I));
    const long long base = root * I - 1;
    return base * base;
}

std::optional<long long> kargas_t2_bound(int M, int I) {
    if (M <= 3)
        throw std::invalid_argument("kargas_t2_bound needs M > 3");
    const long long target = static_cast<long long>(M / 3) * I;
    if (target < 2)
        return std::nullopt;
    int alpha = 0;
    while ((1LL << (alpha + 1)) <= target)
        ++alpha;
    return 1LL << (2 * (alpha - 1)); // 4^(alpha-1)
}

std::optional<long long> BoundReport::value_of(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name)
            return e.value;
    return std::nullopt;
}

namespace {

bool is_full_coupling(const Coupling& c) {
    const long long full = static_cast<long long>(c.M) * (c.M - 1) * (c.M - 2) / 6;
    return static_cast<long long>(c.triplet_count()) == full;
}

// Largest R >= 1 satisfying the generic order-M Kruskal condition. The
// condition is monotone beyond R = I, so scanning a little past the
// closed-form crossover (M(I-1)+1)/2 is enough.
long long generic_kruskal_value(int M, int I) {
    long long best = 0;
    const std::vector<int> sizes(static_cast<std::size_t>(M), I);
    const long long limit = (static_cast<long long>(M) * (I - 1) + 1) / 2 + 4;
    for (long long r = 1; r <= limit; ++r)
        if (kruskal_bound_orderM(sizes, static_cast<int>(r), true))
            best = r;
    return best;
}

} // namespace

BoundReport report(int M, int I, const Coupling& coupling,
                   const std::optional<Partition>& partition,
                   std::optional<long long> empirical_r_max) {
    coupling.validate();
    if (coupling.M != M)
        throw std::invalid_argument("coupling does not match M");

    BoundReport rep;
    rep.M = M;
    rep.I = I;
    const bool full = is_full_coupling(coupling);
    rep.descriptor = full ? "full" : (partition ? "cartesian" : "partial");

    rep.entries.push_back({"necessary", BoundKind::necessary, necessary_bound(coupling, I),
                           "degrees-of-freedom count over the coupled marginals"});

    const CouplingStats st = stats(coupling);
    if (auto defect = defect_bound(st, I))
        rep.entries.push_back({"defect", BoundKind::necessary, defect,
                               "degree-1 pattern cap (" + to_string(st.defect_class) + ")"});

    if (full) {
        rep.entries.push_back({"kargas_t1", BoundKind::sufficient_identifiability,
                               kargas_t1_bound(M, I), "Kargas et al. FCTF3D Theorem 1"});
        rep.entries.push_back({"kargas_t2", BoundKind::sufficient_identifiability,
                               kargas_t2_bound(M, I), "Kargas et al. FCTF3D Theorem 2"});
        const long long even = even_partition_bound(M, I);
        rep.entries.push_back({"even_partition", BoundKind::sufficient_identifiability, even,
                               even == 0 ? "even-partition stacking bound (vacuous)"
                                         : "even-partition stacking bound"});
        rep.entries.push_back({"kruskal_generic", BoundKind::sufficient_identifiability,
                               generic_kruskal_value(M, I),
                               "generic order-M Kruskal condition for the joint tensor"});
    }
    if (partition) {
        const BoundValue cart = cartesian_ident_bound(*partition, I);
        rep.entries.push_back({"cartesian", BoundKind::sufficient_identifiability, cart.value,
                               cart.note.empty() ? "order-3 bound at the reduced sizes"
                                                 : cart.note});
    }
    if (empirical_r_max)
        rep.entries.push_back({"r_max", BoundKind::empirical, empirical_r_max,
                               "incremental Jacobian rank search"});

    // Identifiability implies recoverability: no sufficient value may
    // exceed a necessary one.
    for (const auto& suff : rep.entries) {
        if (suff.kind != BoundKind::sufficient_identifiability || !suff.value)
            continue;
        for (const auto& nec : rep.entries) {
            if (nec.kind != BoundKind::necessary || !nec.value)
                continue;
            if (*suff.value > *nec.value)
                throw std::logic_error("bound report violates sufficient <= necessary: " +
                                       suff.name + " > " + nec.name);
        }
    }
    return rep;
}

std::vector<ImprovementViolation> improvement_violations(int m_lo, int m_hi, int i_lo, int i_hi) {
    std::vector<ImprovementViolation> out;
    for (int m = m_lo; m <= m_hi; ++m)
        for (int i = i_lo; i <= i_hi; ++i) {
            const long long even = even_partition_bound(m, i);
            const long long t1 = kargas_t1_bound(m, i);
            const long long t2 = kargas_t2_bound(m, i).value_or(0);
            if (even < t1 || even < t2)
                out.push_back({m, i, even, t1, t2});
        }
    return out;
}

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["M"] = r.M;
    j["I"] = r.I;
    j["coupling"] = r.descriptor;
    auto arr = nlohmann::json::array();
    for (const auto& e : r.entries) {
        nlohmann::json je;
        je["name"] = e.name;
        je["kind"] = e.kind == BoundKind::necessary ? "necessary"
                     : e.kind == BoundKind::empirical ? "empirical"
                                                      : "sufficient-identifiability";
        if (e.value)
            je["value"] = *e.value;
        else
            je["value"] = nullptr;
        je["source"] = e.source;
        arr.push_back(std::move(je));
    }
    j["entries"] = std::move(arr);
    return j;
}

namespace {
const char* kCsvNames[] = {"necessary", "defect",         "kargas_t1", "kargas_t2",
                           "even_partition", "kruskal_generic", "cartesian", "r_max"};
}

std::string bound_report_csv_header() {
    std::ostringstream os;
    os << "M,I,coupling";
    for (const char* n : kCsvNames)
        os << "," << n;
    return os.str();
}

std::string bound_report_csv_row(const BoundReport& r) {
    std::ostringstream os;
    os << r.M << "," << r.I << "," << r.descriptor;
    for (const char* n : kCsvNames) {
        os << ",";
        if (auto v = r.value_of(n))
            os << *v;
    }
    return os.str();
}

} // namespace tenreco
