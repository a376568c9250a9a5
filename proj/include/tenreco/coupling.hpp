#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tenreco/common.hpp"

namespace tenreco {

/// A strictly increasing 3-subset of {1..M}, 1-based.
using Triplet = std::array<int, 3>;

/// A validated 3-uniform hypergraph over M variables. Triplets are kept in
/// canonical form: each ascending, the list sorted lexicographically.
/// Every variable appears in at least one triplet and the hypergraph is
/// connected (variables adjacent when they share a triplet).
struct Coupling {
    int M = 0;
    std::vector<Triplet> triplets;

    int triplet_count() const { return static_cast<int>(triplets.size()); }

    /// Throws std::invalid_argument if any invariant fails.
    void validate() const;
};

enum class DefectClass { none, single_deg1, double_deg1_shared };

std::string to_string(DefectClass c);
DefectClass defect_class_from_string(const std::string& s);

/// T x M binary incidence matrix; row t holds ones at triplet t's members.
struct IncidenceMatrix {
    int T = 0;
    int M = 0;
    std::vector<std::uint8_t> v; // row-major T x M

    std::uint8_t at(int t, int m) const { return v[static_cast<std::size_t>(t) * M + m]; }
};

struct CouplingStats {
    int T = 0;
    std::vector<int> degrees; // length M
    int pair_count = 0;       // P
    DefectClass defect_class = DefectClass::none;
    bool connected = true;

    int degree_spread() const;
};

IncidenceMatrix incidence_matrix(const Coupling& c);
CouplingStats stats(const Coupling& c);
bool is_connected(const Coupling& c);

/// All C(M,3) triplets. M >= 4.
Coupling make_full(int M);

/// T distinct triplets sampled uniformly without replacement, resampled
/// wholesale until the coupling covers all variables and is connected.
/// Deterministic for a fixed seed.
Coupling make_random(int M, int T, std::uint64_t seed, int retry_cap = 10000);

/// A valid coupling whose degree sequence is as flat as the generator can
/// achieve (spread <= 1 whenever such a connected covering design is found).
Coupling make_balanced(int M, int T, std::uint64_t seed, int retry_cap = 10000);

/// The Cartesian coupling of a 3-way partition: every {j,k,l} with one
/// member per group. Groups must be non-empty, disjoint, and cover {1..M}.
Coupling make_cartesian(const std::array<std::vector<int>, 3>& partition);

/// The most balanced 3-way partition of {1..M}, variables in ascending
/// order; group sizes differ by at most one.
std::array<std::vector<int>, 3> even_partition(int M);

/// Stable 64-bit content hash of (M, triplets); hex string.
std::string coupling_hash(const Coupling& c);

nlohmann::json to_json(const Coupling& c);
Coupling coupling_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CouplingStats& s);

} // namespace tenreco
