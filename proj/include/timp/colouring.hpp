#pragma once

#include <optional>
#include <vector>

#include "timp/graph.hpp"

namespace timp {

struct Colouring {
    std::vector<int> assignment; // vertex -> class, classes 0..class_count-1, all nonempty
    int class_count = 0;
};

bool is_t_dependent(const Graph& g, const VertexSet& s, int t);

struct AlphaResult {
    int size = 0;
    VertexSet witness;
};

// Exact t-dependence number by branch and bound (bitset sets, degeneracy
// ordering, clique-cover pruning). Exact for every n; practical well past
// n = 60 at moderate densities.
AlphaResult alpha_t_exact(const Graph& g, int t);

inline constexpr int kChiExactDefaultCap = 24;

struct ChiResult {
    int count = 0;
    Colouring colouring;
};

// Exact t-improper chromatic number; iterates the class count upward with a
// branch-and-bound feasibility search. Throws CapExceededError for n > cap.
ChiResult chi_t_exact(const Graph& g, int t, int cap = kChiExactDefaultCap);

// Maximal-under-insertion t-dependent subset of s: scan s by ascending
// degree within s (ties by index), insert whenever the set stays
// t-dependent. target > 0 stops the scan early at that size.
VertexSet greedy_dependent_set(const Graph& g, const VertexSet& s, int t, int target = 0);

// Peel greedy classes until no vertex remains.
Colouring greedy_peel_colouring(const Graph& g, int t);

// Constructive realization of chi^t <= ceil((Delta+1)/(t+1)): round-robin
// start, then move violating vertices to their sparsest class until every
// class is t-dependent. Empty classes are compacted away.
Colouring lovasz_decomposition(const Graph& g, int t);

struct LovaszDetails {
    Colouring colouring;
    int m = 0;            // pre-compaction class count ceil((Delta+1)/(t+1))
    long long moves = 0;  // local moves performed; bounded by the edge potential
};
LovaszDetails lovasz_decomposition_details(const Graph& g, int t);

bool verify_colouring(const Graph& g, int t, const Colouring& c);

struct BoundsReport {
    int n = 0;
    int t = 0;
    std::optional<int> alpha_exact;      // within cap only
    int alpha_greedy = 0;                // always populated, lower bound on alpha^t
    int chi_lower_ratio = 1;             // ceil(n / alpha-upper-knowledge), see impl
    std::optional<int> chi_lower_proper; // ceil(chi / (t+1)) when chi computable
    int chi_upper_lovasz = 1;            // ceil((Delta+1)/(t+1))
    std::optional<int> chi_upper_proper; // chi when computable
    int chi_upper_greedy = 1;            // peel class count
};

BoundsReport bounds_report(const Graph& g, int t, int alpha_cap = 100,
                           int chi_cap = kChiExactDefaultCap);

} // namespace timp
