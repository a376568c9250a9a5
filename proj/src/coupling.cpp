#include "tenreco/coupling.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>

namespace tenreco {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<Triplet> all_triplets(int M) {
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(M) * (M - 1) * (M - 2) / 6);
    for (int j = 1; j <= M; ++j)
        for (int k = j + 1; k <= M; ++k)
            for (int l = k + 1; l <= M; ++l)
                out.push_back({j, k, l});
    return out;
}

bool covers_all(const Coupling& c) {
    std::vector<char> seen(c.M + 1, 0);
    for (const auto& t : c.triplets)
        for (int m : t)
            seen[m] = 1;
    for (int m = 1; m <= c.M; ++m)
        if (!seen[m])
            return false;
    return true;
}

void canonicalize(Coupling& c) {
    for (auto& t : c.triplets)
        std::sort(t.begin(), t.end());
    std::sort(c.triplets.begin(), c.triplets.end());
}

std::int64_t choose3(int M) {
    return static_cast<std::int64_t>(M) * (M - 1) * (M - 2) / 6;
}

void check_random_pre(int M, int T) {
    if (M < 4)
        throw std::invalid_argument("couplings need M >= 4");
    const int t_min = (M + 2) / 3;
    if (T < t_min || T > choose3(M))
        throw std::invalid_argument("triplet count T out of range for M");
}

std::vector<int> degree_vector(const Coupling& c) {
    std::vector<int> d(c.M, 0);
    for (const auto& t : c.triplets)
        for (int m : t)
            ++d[m - 1];
    return d;
}

} // namespace

void Coupling::validate() const {
    if (M < 4)
        throw std::invalid_argument("couplings need M >= 4");
    if (triplets.empty())
        throw std::invalid_argument("coupling has no triplets");
    for (const auto& t : triplets) {
        if (!(1 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] <= M))
            throw std::invalid_argument("triplets must be ascending 3-subsets of {1..M}");
    }
    for (std::size_t i = 1; i < triplets.size(); ++i)
        if (!(triplets[i - 1] < triplets[i]))
            throw std::invalid_argument("triplets must be sorted and distinct");
    if (!covers_all(*this))
        throw std::invalid_argument("every variable must appear in some triplet");
    if (!is_connected(*this))
        throw std::invalid_argument("coupling hypergraph must be connected");
}

std::string to_string(DefectClass c) {
    switch (c) {
    case DefectClass::single_deg1: return "single_deg1";
    case DefectClass::double_deg1_shared: return "double_deg1_shared";
    default: return "none";
    }
}

DefectClass defect_class_from_string(const std::string& s) {
    if (s == "single_deg1") return DefectClass::single_deg1;
    if (s == "double_deg1_shared") return DefectClass::double_deg1_shared;
    if (s == "none") return DefectClass::none;
    throw std::invalid_argument("unknown defect class: " + s);
}

IncidenceMatrix incidence_matrix(const Coupling& c) {
    IncidenceMatrix v;
    v.T = c.triplet_count();
    v.M = c.M;
    v.v.assign(static_cast<std::size_t>(v.T) * v.M, 0);
    for (int t = 0; t < v.T; ++t)
        for (int m : c.triplets[t])
            v.v[static_cast<std::size_t>(t) * v.M + (m - 1)] = 1;
    return v;
}

bool is_connected(const Coupling& c) {
    if (c.triplets.empty())
        return false;
    UnionFind uf(c.M);
    for (const auto& t : c.triplets) {
        uf.unite(t[0] - 1, t[1] - 1);
        uf.unite(t[0] - 1, t[2] - 1);
    }
    const int root = uf.find(0);
    for (int m = 1; m < c.M; ++m)
        if (uf.find(m) != root)
            return false;
    return true;
}

int CouplingStats::degree_spread() const {
    auto [mn, mx] = std::minmax_element(degrees.begin(), degrees.end());
    return *mx - *mn;
}

CouplingStats stats(const Coupling& c) {
    CouplingStats s;
    s.T = c.triplet_count();
    s.degrees = degree_vector(c);
    s.connected = is_connected(c);

    // P = (nnz(V^T V) - M) / 2; V^T V counts triplets shared by each pair.
    const IncidenceMatrix v = incidence_matrix(c);
    int nnz = 0;
    for (int a = 0; a < c.M; ++a) {
        for (int b = 0; b < c.M; ++b) {
            int dot = 0;
            for (int t = 0; t < v.T; ++t)
                dot += v.at(t, a) * v.at(t, b);
            if (dot != 0)
                ++nnz;
        }
    }
    s.pair_count = (nnz - c.M) / 2;

    std::vector<int> ones;
    for (int m = 0; m < c.M; ++m)
        if (s.degrees[m] == 1)
            ones.push_back(m + 1);
    if (ones.size() == 1) {
        s.defect_class = DefectClass::single_deg1;
    } else if (ones.size() == 2) {
        for (const auto& t : c.triplets) {
            const bool has0 = std::find(t.begin(), t.end(), ones[0]) != t.end();
            const bool has1 = std::find(t.begin(), t.end(), ones[1]) != t.end();
            if (has0 && has1) {
                s.defect_class = DefectClass::double_deg1_shared;
                break;
            }
        }
    }
    return s;
}

Coupling make_full(int M) {
    if (M < 4)
        throw std::invalid_argument("couplings need M >= 4");
    Coupling c;
    c.M = M;
    c.triplets = all_triplets(M);
    c.validate();
    return c;
}

Coupling make_random(int M, int T, std::uint64_t seed, int retry_cap) {
    check_random_pre(M, T);
    const std::vector<Triplet> pool = all_triplets(M);
    Rng rng(stable_hash(seed, 0x52414e44ULL));

    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        std::vector<int> idx(pool.size());
        std::iota(idx.begin(), idx.end(), 0);
        // Partial Fisher-Yates: the first T slots are a uniform T-subset.
        for (int i = 0; i < T; ++i) {
            const std::size_t j = i + rng.below(idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        Coupling c;
        c.M = M;
        for (int i = 0; i < T; ++i)
            c.triplets.push_back(pool[idx[i]]);
        canonicalize(c);
        if (covers_all(c) && is_connected(c))
            return c;
    }
    throw resource_exhausted("no valid random coupling found within the retry cap");
}

namespace {

// One greedy pass: repeatedly add the unchosen triplet minimizing the
// resulting maximum degree (then the current degree sum), random ties.
Coupling greedy_balanced_attempt(int M, int T, Rng& rng, const std::vector<Triplet>& pool) {
    std::vector<char> chosen(pool.size(), 0);
    std::vector<int> deg(M + 1, 0);
    Coupling c;
    c.M = M;
    for (int step = 0; step < T; ++step) {
        long best_score = -1;
        std::vector<int> best;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (chosen[i])
                continue;
            const auto& t = pool[i];
            const int mx = std::max({deg[t[0]], deg[t[1]], deg[t[2]]}) + 1;
            const int sum = deg[t[0]] + deg[t[1]] + deg[t[2]];
            const long score = static_cast<long>(mx) * 100000 + sum;
            if (best_score < 0 || score < best_score) {
                best_score = score;
                best.clear();
            }
            if (score == best_score)
                best.push_back(static_cast<int>(i));
        }
        const int pick = best[rng.below(best.size())];
        chosen[pick] = 1;
        for (int m : pool[pick])
            ++deg[m];
        c.triplets.push_back(pool[pick]);
    }
    canonicalize(c);
    return c;
}

// Swap-based connectivity repair: drop a triplet whose members all have
// degree >= 2 and insert one bridging distinct components, preferring
// low-degree variables. Returns false when stuck.
bool repair_connectivity(Coupling& c, Rng& rng) {
    for (int round = 0; round < 4 * c.M; ++round) {
        UnionFind uf(c.M);
        for (const auto& t : c.triplets) {
            uf.unite(t[0] - 1, t[1] - 1);
            uf.unite(t[0] - 1, t[2] - 1);
        }
        std::set<int> roots;
        for (int m = 0; m < c.M; ++m)
            roots.insert(uf.find(m));
        if (roots.size() <= 1)
            return true;

        std::vector<int> deg = degree_vector(c);
        std::vector<std::size_t> removable;
        for (std::size_t i = 0; i < c.triplets.size(); ++i) {
            const auto& t = c.triplets[i];
            if (deg[t[0] - 1] >= 2 && deg[t[1] - 1] >= 2 && deg[t[2] - 1] >= 2)
                removable.push_back(i);
        }
        if (removable.empty())
            return false;

        // One lowest-degree variable per component, then pad with the next
        // lowest-degree variables overall.
        std::vector<int> bridge;
        for (int root : roots) {
            int pick = -1;
            for (int m = 0; m < c.M; ++m)
                if (uf.find(m) == root && (pick < 0 || deg[m] < deg[pick]))
                    pick = m;
            bridge.push_back(pick + 1);
            if (bridge.size() == 3)
                break;
        }
        std::vector<int> by_deg(c.M);
        std::iota(by_deg.begin(), by_deg.end(), 0);
        std::sort(by_deg.begin(), by_deg.end(), [&](int a, int b) { return deg[a] < deg[b]; });
        for (int m : by_deg) {
            if (bridge.size() == 3)
                break;
            if (std::find(bridge.begin(), bridge.end(), m + 1) == bridge.end())
                bridge.push_back(m + 1);
        }
        Triplet add{bridge[0], bridge[1], bridge[2]};
        std::sort(add.begin(), add.end());
        if (std::find(c.triplets.begin(), c.triplets.end(), add) != c.triplets.end())
            return false;

        c.triplets.erase(c.triplets.begin() + removable[rng.below(removable.size())]);
        c.triplets.push_back(add);
        canonicalize(c);
    }
    return false;
}

} // namespace

Coupling make_balanced(int M, int T, std::uint64_t seed, int retry_cap) {
    check_random_pre(M, T);
    const std::vector<Triplet> pool = all_triplets(M);

    Coupling best;
    int best_spread = -1;
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        Rng rng(stable_hash(seed, 0x42414cULL, static_cast<std::uint64_t>(attempt)));
        Coupling c = greedy_balanced_attempt(M, T, rng, pool);
        if (!covers_all(c))
            continue;
        if (!is_connected(c) && !repair_connectivity(c, rng))
            continue;
        if (!covers_all(c) || !is_connected(c))
            continue;
        const int spread = stats(c).degree_spread();
        if (best_spread < 0 || spread < best_spread) {
            best = c;
            best_spread = spread;
        }
        if (best_spread <= 1) {
            best.validate();
            return best;
        }
    }
    if (best_spread < 0)
        throw resource_exhausted("no valid balanced coupling found within the retry cap");
    best.validate();
    return best;
}

Coupling make_cartesian(const std::array<std::vector<int>, 3>& partition) {
    std::vector<int> all;
    for (const auto& group : partition) {
        if (group.empty())
            throw std::invalid_argument("partition groups must be non-empty");
        all.insert(all.end(), group.begin(), group.end());
    }
    std::vector<int> sorted(all);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i) + 1)
            throw std::invalid_argument("partition groups must be disjoint and cover {1..M}");

    Coupling c;
    c.M = static_cast<int>(all.size());
    if (c.M < 4)
        throw std::invalid_argument("couplings need M >= 4");
    for (int j : partition[0])
        for (int k : partition[1])
            for (int l : partition[2]) {
                Triplet t{j, k, l};
                std::sort(t.begin(), t.end());
                c.triplets.push_back(t);
            }
    canonicalize(c);
    c.validate();
    return c;
}

std::array<std::vector<int>, 3> even_partition(int M) {
    if (M < 4)
        throw std::invalid_argument("couplings need M >= 4");
    const int k = M / 3;
    const int eps = M % 3;
    const std::array<int, 3> sizes{k + (eps >= 1 ? 1 : 0), k + (eps == 2 ? 1 : 0), k};
    std::array<std::vector<int>, 3> out;
    int next = 1;
    for (int g = 0; g < 3; ++g)
        for (int i = 0; i < sizes[g]; ++i)
            out[g].push_back(next++);
    return out;
}

std::string coupling_hash(const Coupling& c) {
    std::uint64_t h = stable_hash(0x74656e7265636fULL, static_cast<std::uint64_t>(c.M));
    for (const auto& t : c.triplets) {
        const std::uint64_t packed = (static_cast<std::uint64_t>(t[0]) << 40) |
                                     (static_cast<std::uint64_t>(t[1]) << 20) |
                                     static_cast<std::uint64_t>(t[2]);
        h = stable_hash(h, packed);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

nlohmann::json to_json(const Coupling& c) {
    nlohmann::json j;
    j["M"] = c.M;
    auto arr = nlohmann::json::array();
    for (const auto& t : c.triplets)
        arr.push_back({t[0], t[1], t[2]});
    j["triplets"] = std::move(arr);
    return j;
}

Coupling coupling_from_json(const nlohmann::json& j) {
    Coupling c;
    c.M = j.at("M").get<int>();
    for (const auto& t : j.at("triplets")) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("each triplet must be a 3-element array");
        c.triplets.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    c.validate();
    return c;
}

nlohmann::json to_json(const CouplingStats& s) {
    nlohmann::json j;
    j["T"] = s.T;
    j["d"] = s.degrees;
    j["P"] = s.pair_count;
    j["defect_class"] = to_string(s.defect_class);
    j["connected"] = s.connected;
    return j;
}

} // namespace tenreco
