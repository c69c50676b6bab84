#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "timp/bitset.hpp"
#include "timp/rational.hpp"

namespace timp {

using VertexSet = Bitset;

// Undirected simple graph on {0,...,n-1}, adjacency as bit-packed symmetric
// rows. Immutable once constructed; safe to share across threads.
class Graph {
public:
    explicit Graph(int n);
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    bool edge(int u, int v) const { return adj_[u].test(v); }
    const Bitset& neighbours(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].count()); }
    long long edge_count() const;

private:
    void add_edge(int u, int v);

    int n_;
    std::vector<Bitset> adj_;

    friend Graph sample_gnp(int, double, std::uint64_t);
    friend Graph sample_gnm(int, long long, std::uint64_t);
    friend Graph induced_subgraph(const Graph&, const VertexSet&);
};

Graph new_graph(int n, const std::vector<std::pair<int, int>>& edges);
Graph sample_gnp(int n, double p, std::uint64_t seed);
Graph sample_gnm(int n, long long m, std::uint64_t seed);

int max_degree(const Graph& g);
Rational avg_degree(const Graph& g, const VertexSet& s);
Graph induced_subgraph(const Graph& g, const VertexSet& s);

} // namespace timp
