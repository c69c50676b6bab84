#include "timp/colouring.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "timp/errors.hpp"

namespace timp {

bool is_t_dependent(const Graph& g, const VertexSet& s, int t) {
    if (t < 0) throw ValidationError("t must be non-negative");
    for (int v = s.find_first(); v >= 0; v = s.find_next(v))
        if (static_cast<int>(count_and(g.neighbours(v), s)) > t) return false;
    return true;
}

namespace {

// Smallest-first removal sequence; the solver relabels vertices along it.
std::vector<int> degeneracy_order(const Graph& g) {
    int n = g.n();
    std::vector<int> deg(n), order;
    order.reserve(n);
    Bitset alive = full_set(n);
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
    for (int round = 0; round < n; ++round) {
        int best = -1;
        for (int v = alive.find_first(); v >= 0; v = alive.find_next(v))
            if (best < 0 || deg[v] < deg[best]) best = v;
        order.push_back(best);
        alive.reset(best);
        for (int u = alive.find_first(); u >= 0; u = alive.find_next(u))
            if (g.edge(best, u)) --deg[u];
    }
    return order;
}

// Greedy clique cover of R. Taking c vertices from a clique C gives each of
// them c - 1 neighbours inside the selection on top of the cnt[] neighbours
// it already has in S, so c is feasible only if the c members with the
// smallest cnt all satisfy cnt + c - 1 <= t. With cnt == 0 everywhere this
// reduces to the familiar min(|C|, t + 1) cap.
int cover_bound(const Graph& g, Bitset r, int t, const std::vector<int>& cnt) {
    int bound = 0;
    std::vector<int> members;
    for (int v = r.find_first(); v >= 0; v = r.find_first()) {
        r.reset(v);
        members.clear();
        members.push_back(cnt[v]);
        Bitset common = g.neighbours(v);
        common &= r;
        for (int u = common.find_first(); u >= 0; u = common.find_first()) {
            r.reset(u);
            members.push_back(cnt[u]);
            common &= g.neighbours(u);
            common &= r;
        }
        std::sort(members.begin(), members.end());
        int cap = 0;
        while (cap < static_cast<int>(members.size()) && members[cap] + cap <= t) ++cap;
        bound += cap;
    }
    return bound;
}

struct AlphaSearch {
    const Graph& g;
    int t;
    int best = 0;
    Bitset best_set;
    std::vector<Bitset> non_nbr; // complement adjacency, self excluded

    AlphaSearch(const Graph& g_, int t_) : g(g_), t(t_), best_set(g_.n()) {
        int n = g.n();
        non_nbr.reserve(n);
        for (int v = 0; v < n; ++v) {
            Bitset b = full_set(n);
            b.and_not(g.neighbours(v));
            b.reset(v);
            non_nbr.push_back(std::move(b));
        }
    }

    // S: chosen set; R: exactly the vertices currently insertable; cnt[v]:
    // neighbours of v inside S.
    void dfs(Bitset s, int s_size, Bitset r, std::vector<int> cnt) {
        if (s_size > best) {
            best = s_size;
            best_set = s;
        }
        while (true) {
            int r_size = static_cast<int>(r.count());
            if (s_size + r_size <= best) return;

            // Any solution of size best + 1 gives each member at least
            // best - t non-neighbours inside it, so a candidate lacking that
            // many non-neighbours in the pool is dead weight and a chosen
            // vertex lacking them kills the whole branch. Removals cascade.
            {
                Bitset pool = s;
                pool |= r;
                int pool_size = s_size + r_size;
                bool changed = true;
                while (changed) {
                    changed = false;
                    if (pool_size <= best) return;
                    int need = best - t; // (best + 1) - 1 - t
                    for (int u = r.find_first(); u >= 0; u = r.find_next(u)) {
                        int nonadj = pool_size - 1 - static_cast<int>(count_and(g.neighbours(u), pool));
                        if (nonadj < need) {
                            r.reset(u);
                            pool.reset(u);
                            --pool_size;
                            --r_size;
                            changed = true;
                        }
                    }
                    for (int u = s.find_first(); u >= 0; u = s.find_next(u)) {
                        int nonadj = pool_size - 1 - static_cast<int>(count_and(g.neighbours(u), pool));
                        if (nonadj < need) return;
                    }
                    if (changed) continue;

                    // Second-order rule: two members u, v of a solution of
                    // size best + 1 leave at most 2t slots for their joint
                    // neighbours, so the rest of the solution avoids both.
                    // Non-adjacent pairs also occupy two of those avoiding
                    // slots themselves.
                    if (best + 1 - 2 * t - 2 > 0) {
                        for (int u = s.find_first(); u >= 0; u = s.find_next(u)) {
                            for (int v = s.find_next(u); v >= 0; v = s.find_next(v)) {
                                int required = best + 1 - 2 * t - (g.neighbours(u).test(v) ? 0 : 2);
                                if (static_cast<int>(count_and3(non_nbr[u], non_nbr[v], pool)) < required)
                                    return;
                            }
                            for (int v = r.find_first(); v >= 0; v = r.find_next(v)) {
                                int required = best + 1 - 2 * t - (g.neighbours(u).test(v) ? 0 : 2);
                                if (static_cast<int>(count_and3(non_nbr[u], non_nbr[v], pool)) < required) {
                                    r.reset(v);
                                    pool.reset(v);
                                    --pool_size;
                                    --r_size;
                                    changed = true;
                                }
                            }
                        }
                    }
                }
            }

            if (s_size + r_size <= best) return;
            if (s_size + cover_bound(g, r, t, cnt) <= best) return;
            // Branch on the vertex with the most neighbours left in R; the
            // include branch then burns capacity fastest.
            int v = -1, vdeg = -1;
            for (int u = r.find_first(); u >= 0; u = r.find_next(u)) {
                int d = static_cast<int>(count_and(g.neighbours(u), r));
                if (d > vdeg) { v = u; vdeg = d; }
            }
            r.reset(v);

            // Include branch on a copy of the state.
            {
                Bitset s2 = s;
                s2.set(v);
                Bitset r2 = r;
                std::vector<int> cnt2 = cnt;
                const Bitset& nv = g.neighbours(v);
                if (cnt2[v] == t) r2.and_not(nv); // v enters saturated
                for (int u = nv.find_first(); u >= 0; u = nv.find_next(u)) {
                    if (u == v) continue;
                    if (s.test(u)) {
                        if (++cnt2[u] == t) r2.and_not(g.neighbours(u));
                    } else if (r2.test(u)) {
                        if (++cnt2[u] > t) r2.reset(u);
                    } else {
                        ++cnt2[u];
                    }
                }
                dfs(s2, s_size + 1, r2, std::move(cnt2));
            }
            // Exclude branch continues in this frame.
        }
    }
};

} // namespace

VertexSet greedy_dependent_set(const Graph& g, const VertexSet& s, int t, int target) {
    int n = g.n();
    std::vector<int> verts;
    for (int v = s.find_first(); v >= 0; v = s.find_next(v)) verts.push_back(v);
    std::stable_sort(verts.begin(), verts.end(), [&](int a, int b) {
        return count_and(g.neighbours(a), s) < count_and(g.neighbours(b), s);
    });
    Bitset chosen(n), saturated(n);
    std::vector<int> cnt(n, 0);
    int size = 0;
    for (int v : verts) {
        const Bitset& nv = g.neighbours(v);
        if (nv.intersects(saturated)) continue;
        int inside = static_cast<int>(count_and(nv, chosen));
        if (inside > t) continue;
        cnt[v] = inside;
        if (inside == t) saturated.set(v);
        for (int u = nv.find_first(); u >= 0; u = nv.find_next(u))
            if (chosen.test(u) && ++cnt[u] == t) saturated.set(u);
        chosen.set(v);
        ++size;
        if (target > 0 && size >= target) break;
    }
    return chosen;
}

AlphaResult alpha_t_exact(const Graph& g, int t) {
    if (t < 0) throw ValidationError("t must be non-negative");
    int n = g.n();
    if (n == 0) return {0, Bitset(0)};

    // Relabel along the degeneracy order so the search always branches on
    // the first remaining vertex of that order.
    std::vector<int> order = degeneracy_order(g);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    Graph h(n);
    {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = g.neighbours(u).find_next(u); v >= 0; v = g.neighbours(u).find_next(v))
                edges.emplace_back(pos[u], pos[v]);
        h = Graph(n, edges);
    }

    AlphaSearch search(h, t);
    Bitset seed = greedy_dependent_set(h, full_set(n), t);
    search.best = static_cast<int>(seed.count());
    search.best_set = seed;
    search.dfs(Bitset(n), 0, full_set(n), std::vector<int>(n, 0));

    Bitset witness(n);
    for (int v = search.best_set.find_first(); v >= 0; v = search.best_set.find_next(v))
        witness.set(order[v]);
    return {search.best, witness};
}

namespace {

struct ChiSearch {
    const Graph& g;
    int t, m;
    std::vector<int> order;        // vertices, descending degree
    std::vector<int> assign;       // by order position
    std::vector<Bitset> classes;
    std::vector<int> cnt;          // neighbours in own class, by vertex

    ChiSearch(const Graph& g_, int t_, int m_, std::vector<int> order_)
        : g(g_), t(t_), m(m_), order(std::move(order_)), assign(g_.n(), -1),
          classes(m_, Bitset(g_.n())), cnt(g_.n(), 0) {}

    bool place(int idx, int used) {
        if (idx == g.n()) return true;
        int v = order[idx];
        const Bitset& nv = g.neighbours(v);
        int limit = std::min(used + 1, m); // first-use class numbering
        for (int c = 0; c < limit; ++c) {
            int inside = static_cast<int>(count_and(nv, classes[c]));
            if (inside > t) continue;
            bool saturates_neighbour = false;
            if (inside > 0) {
                for (int u = nv.find_first(); u >= 0; u = nv.find_next(u))
                    if (classes[c].test(u) && cnt[u] == t) {
                        saturates_neighbour = true;
                        break;
                    }
            }
            if (saturates_neighbour) continue;
            classes[c].set(v);
            cnt[v] = inside;
            for (int u = nv.find_first(); u >= 0; u = nv.find_next(u))
                if (classes[c].test(u) && u != v) ++cnt[u];
            assign[v] = c;
            if (place(idx + 1, std::max(used, c + 1))) return true;
            assign[v] = -1;
            classes[c].reset(v);
            for (int u = nv.find_first(); u >= 0; u = nv.find_next(u))
                if (classes[c].test(u)) --cnt[u];
        }
        return false;
    }
};

Colouring colouring_from_assignment(const std::vector<int>& assign) {
    Colouring c;
    c.assignment = assign;
    c.class_count = assign.empty() ? 0 : *std::max_element(assign.begin(), assign.end()) + 1;
    return c;
}

} // namespace

ChiResult chi_t_exact(const Graph& g, int t, int cap) {
    if (t < 0) throw ValidationError("t must be non-negative");
    int n = g.n();
    if (n > cap)
        throw CapExceededError("exact chi^t capped at n <= " + std::to_string(cap) +
                               ", got n = " + std::to_string(n));
    if (n == 0) return {0, Colouring{}};

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return g.degree(a) > g.degree(b); });

    Colouring greedy = greedy_peel_colouring(g, t);
    int ub = greedy.class_count;
    int lb = 1;
    {
        AlphaResult a = alpha_t_exact(g, t);
        if (a.size > 0) lb = std::max(lb, (n + a.size - 1) / a.size);
    }
    for (int m = lb; m < ub; ++m) {
        ChiSearch search(g, t, m, order);
        if (search.place(0, 0)) return {m, colouring_from_assignment(search.assign)};
    }
    return {ub, greedy};
}

Colouring greedy_peel_colouring(const Graph& g, int t) {
    if (t < 0) throw ValidationError("t must be non-negative");
    int n = g.n();
    Colouring c;
    c.assignment.assign(n, -1);
    Bitset remaining = full_set(n);
    while (remaining.any()) {
        Bitset cls = greedy_dependent_set(g, remaining, t);
        for (int v = cls.find_first(); v >= 0; v = cls.find_next(v))
            c.assignment[v] = c.class_count;
        ++c.class_count;
        remaining.and_not(cls);
    }
    return c;
}

LovaszDetails lovasz_impl(const Graph& g, int t) {
    if (t < 0) throw ValidationError("t must be non-negative");
    int n = g.n();
    LovaszDetails out;
    if (n == 0) return out;
    int m = (max_degree(g) + 1 + t) / (t + 1); // ceil((Delta+1)/(t+1))
    out.m = m;

    std::vector<int> assign(n);
    std::vector<Bitset> classes(m, Bitset(n));
    for (int v = 0; v < n; ++v) {
        assign[v] = v % m;
        classes[v % m].set(v);
    }
    std::vector<int> cnt(n);
    auto recount = [&](int v) {
        cnt[v] = static_cast<int>(count_and(g.neighbours(v), classes[assign[v]]));
    };
    for (int v = 0; v < n; ++v) recount(v);

    while (true) {
        int violator = -1;
        for (int v = 0; v < n; ++v)
            if (cnt[v] > t) { violator = v; break; }
        if (violator < 0) break;
        const Bitset& nv = g.neighbours(violator);
        int target = 0, target_neighbours = g.n() + 1;
        for (int c = 0; c < m; ++c) {
            int inside = static_cast<int>(count_and(nv, classes[c]));
            if (inside < target_neighbours) {
                target_neighbours = inside;
                target = c;
            }
        }
        int from = assign[violator];
        classes[from].reset(violator);
        classes[target].set(violator);
        assign[violator] = target;
        for (int u = nv.find_first(); u >= 0; u = nv.find_next(u)) {
            if (assign[u] == from) --cnt[u];
            else if (assign[u] == target) ++cnt[u];
        }
        cnt[violator] = target_neighbours;
        ++out.moves;
    }

    // Compact away empty classes, preserving index order.
    std::vector<int> remap(m, -1);
    int next = 0;
    for (int c = 0; c < m; ++c)
        if (classes[c].any()) remap[c] = next++;
    out.colouring.class_count = next;
    out.colouring.assignment.resize(n);
    for (int v = 0; v < n; ++v) out.colouring.assignment[v] = remap[assign[v]];
    return out;
}

LovaszDetails lovasz_decomposition_details(const Graph& g, int t) {
    return lovasz_impl(g, t);
}

Colouring lovasz_decomposition(const Graph& g, int t) {
    return lovasz_impl(g, t).colouring;
}

bool verify_colouring(const Graph& g, int t, const Colouring& c) {
    int n = g.n();
    if (static_cast<int>(c.assignment.size()) != n) return false;
    if (n == 0) return c.class_count == 0;
    std::vector<Bitset> classes(c.class_count, Bitset(n));
    for (int v = 0; v < n; ++v) {
        int cls = c.assignment[v];
        if (cls < 0 || cls >= c.class_count) return false;
        classes[cls].set(v);
    }
    for (const Bitset& cls : classes) {
        if (cls.none()) return false;
        if (!is_t_dependent(g, cls, t)) return false;
    }
    return true;
}

BoundsReport bounds_report(const Graph& g, int t, int alpha_cap, int chi_cap) {
    BoundsReport r;
    r.n = g.n();
    r.t = t;
    if (g.n() == 0) return r;

    r.chi_upper_lovasz = (max_degree(g) + 1 + t) / (t + 1);
    Colouring peel = greedy_peel_colouring(g, t);
    r.chi_upper_greedy = peel.class_count;
    r.alpha_greedy = static_cast<int>(greedy_dependent_set(g, full_set(g.n()), t).count());

    if (g.n() <= alpha_cap) {
        AlphaResult a = alpha_t_exact(g, t);
        r.alpha_exact = a.size;
        r.chi_lower_ratio = (g.n() + a.size - 1) / a.size;
    } else {
        r.chi_lower_ratio = 1; // without an upper bound on alpha^t nothing stronger is sound
    }
    if (g.n() <= chi_cap) {
        int chi = chi_t_exact(g, 0, chi_cap).count;
        r.chi_upper_proper = chi;
        r.chi_lower_proper = (chi + t) / (t + 1); // ceil(chi/(t+1))
    }
    return r;
}

} // namespace timp
