#include "timp/graph.hpp"

#include <string>

#include "timp/errors.hpp"
#include "timp/rng.hpp"

namespace timp {

namespace {
int checked_vertex_count(int n) {
    if (n < 0) throw ValidationError("vertex count must be non-negative");
    return n;
}
} // namespace

Graph::Graph(int n) : n_(checked_vertex_count(n)), adj_(n_, Bitset(n_)) {}

void Graph::add_edge(int u, int v) {
    adj_[u].set(v);
    adj_[v].set(u);
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ValidationError("edge endpoint out of range: (" + std::to_string(u) +
                                  "," + std::to_string(v) + ") with n=" + std::to_string(n));
        if (u == v)
            throw ValidationError("self-loop rejected at vertex " + std::to_string(u));
        add_edge(u, v);
    }
}

Graph new_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    return Graph(n, edges);
}

long long Graph::edge_count() const {
    long long twice = 0;
    for (int v = 0; v < n_; ++v) twice += degree(v);
    return twice / 2;
}

Graph sample_gnp(int n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0,1]");
    Graph g(n);
    SplitMix64 rng(seed);
    // Row-major pair order (0,1),(0,2),...,(n-2,n-1); one draw per pair, so
    // the stream position of any pair is seed-independent.
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.next_double() < p) g.add_edge(u, v);
    return g;
}

Graph sample_gnm(int n, long long m, std::uint64_t seed) {
    long long npairs = static_cast<long long>(n) * (n - 1) / 2;
    if (m < 0 || m > npairs)
        throw ValidationError("edge count " + std::to_string(m) + " outside [0, " +
                              std::to_string(npairs) + "]");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(npairs);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    // Full Fisher-Yates, then take a prefix: the positions of pairs after
    // the shuffle do not depend on m, so the m-edge set nests inside the
    // (m+1)-edge set for a fixed seed (the coupling the theory wants).
    SplitMix64 rng(seed);
    for (long long i = npairs - 1; i > 0; --i) {
        long long j = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(pairs[i], pairs[j]);
    }
    Graph g(n);
    for (long long i = 0; i < m; ++i) g.add_edge(pairs[i].first, pairs[i].second);
    return g;
}

int max_degree(const Graph& g) {
    int d = 0;
    for (int v = 0; v < g.n(); ++v) d = std::max(d, g.degree(v));
    return d;
}

Rational avg_degree(const Graph& g, const VertexSet& s) {
    long long size = static_cast<long long>(s.count());
    if (size == 0) throw ValidationError("average degree of an empty set");
    long long twice_edges = 0;
    for (int v = s.find_first(); v >= 0; v = s.find_next(v))
        twice_edges += static_cast<long long>(count_and(g.neighbours(v), s));
    return Rational::make(twice_edges, size);
}

Graph induced_subgraph(const Graph& g, const VertexSet& s) {
    std::vector<int> verts;
    for (int v = s.find_first(); v >= 0; v = s.find_next(v)) verts.push_back(v);
    Graph h(static_cast<int>(verts.size()));
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            if (g.edge(verts[i], verts[j])) h.add_edge(static_cast<int>(i), static_cast<int>(j));
    return h;
}

} // namespace timp
