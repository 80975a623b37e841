#ifndef MIXBND_TESTS_SUPPORT_HPP
#define MIXBND_TESTS_SUPPORT_HPP

// Fixtures and brute-force reference computations shared by the tests. The
// references work on full 2^n joints and never call the enumeration helpers
// of the library.

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <vector>

#include "mixbnd/dag.hpp"
#include "mixbnd/model.hpp"

namespace mixbnd::testing {

// V1..V13 of the 13-vertex example, shifted to 0-based ids.
inline Dag thirteen_vertex() {
    const int pairs[][2] = {{1, 3}, {2, 3}, {2, 4}, {3, 5}, {4, 6}, {5, 7},
                            {6, 8}, {7, 9}, {9, 10}, {9, 11}, {11, 12}, {12, 13}};
    std::vector<Edge> edges;
    for (const auto& p : pairs) edges.push_back({VertexId{p[0] - 1}, VertexId{p[1] - 1}});
    return Dag::create(13, edges);
}

// Ids: V1=0, V2=1, Y=2, V3=3, V4=4, V5=5.
inline Dag six_vertex() {
    return Dag::create(6, {{VertexId{0}, VertexId{2}},
                           {VertexId{1}, VertexId{2}},
                           {VertexId{2}, VertexId{4}},
                           {VertexId{2}, VertexId{5}},
                           {VertexId{3}, VertexId{4}},
                           {VertexId{4}, VertexId{5}}});
}

inline Dag chain(int n) {
    std::vector<Edge> edges;
    for (int v = 0; v + 1 < n; ++v) edges.push_back({VertexId{v}, VertexId{v + 1}});
    return Dag::create(n, edges);
}

inline Dag empty_graph(int n) { return Dag::create(n, {}); }

// Random DAG over a random vertex order; edges kept while both endpoints
// stay within the skeleton degree cap.
inline Dag random_dag(int n, int max_degree, double edge_prob, std::mt19937_64& rng) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution keep(edge_prob);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int a = order[static_cast<std::size_t>(i)], b = order[static_cast<std::size_t>(j)];
            if (degree[a] >= max_degree || degree[b] >= max_degree || !keep(rng)) continue;
            edges.push_back({VertexId{a}, VertexId{b}});
            ++degree[a];
            ++degree[b];
        }
    }
    return Dag::create(n, edges);
}

inline Assignment from_bits(int n, std::size_t bits) {
    Assignment a(n);
    for (int v = 0; v < n; ++v) a.set(VertexId{v}, static_cast<int>((bits >> v) & 1U));
    return a;
}

// Full joint of one source as a table over 2^n bit patterns.
inline std::vector<double> joint_table(const MixtureModel& m, int u) {
    const int n = m.n();
    std::vector<double> out(std::size_t{1} << n);
    for (std::size_t bits = 0; bits < out.size(); ++bits) {
        double p = 1.0;
        for (int v = 0; v < n; ++v) {
            const Cpt& c = m.cpt(u, VertexId{v});
            std::size_t mask = 0;
            for (std::size_t i = 0; i < c.parents.size(); ++i)
                if ((bits >> c.parents[i].value) & 1U) mask |= std::size_t{1} << i;
            const double p1 = c.table[mask];
            p *= ((bits >> v) & 1U) ? p1 : 1.0 - p1;
        }
        out[bits] = p;
    }
    return out;
}

inline bool consistent(std::size_t bits, const Assignment& a) {
    for (int v = 0; v < a.n(); ++v)
        if (a.has(VertexId{v}) && static_cast<int>((bits >> v) & 1U) != a.get(VertexId{v})) return false;
    return true;
}

inline double table_mass(const std::vector<double>& joint, const Assignment& a) {
    double s = 0.0;
    for (std::size_t bits = 0; bits < joint.size(); ++bits)
        if (consistent(bits, a)) s += joint[bits];
    return s;
}

// P_u(targets | given) from the full joint.
inline double brute_conditional(const MixtureModel& m, int u, const Assignment& targets,
                                const Assignment& given) {
    const auto joint = joint_table(m, u);
    Assignment both = given;
    for (int v = 0; v < targets.n(); ++v)
        if (targets.has(VertexId{v})) both.set(VertexId{v}, targets.get(VertexId{v}));
    return table_mass(joint, both) / table_mass(joint, given);
}

// Mixture joint over 2^n patterns.
inline std::vector<double> mixture_table(const MixtureModel& m) {
    std::vector<double> out(std::size_t{1} << m.n(), 0.0);
    for (int u = 0; u < m.k(); ++u) {
        const auto j = joint_table(m, u);
        for (std::size_t b = 0; b < out.size(); ++b) out[b] += m.weights()[u] * j[b];
    }
    return out;
}

// Shortest root distance by a plain queue walk over the edge list.
inline std::vector<int> reference_depths(int n, const std::vector<Edge>& edges) {
    std::vector<int> indeg(static_cast<std::size_t>(n), 0), depth(static_cast<std::size_t>(n), -1);
    for (const Edge& e : edges) ++indeg[ix(e.child)];
    std::deque<int> q;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) {
            depth[v] = 0;
            q.push_back(v);
        }
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        for (const Edge& e : edges) {
            if (e.parent.value != v || depth[ix(e.child)] >= 0) continue;
            depth[ix(e.child)] = depth[v] + 1;
            q.push_back(e.child.value);
        }
    }
    return depth;
}

}  // namespace mixbnd::testing

#endif
