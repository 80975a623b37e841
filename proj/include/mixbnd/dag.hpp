#ifndef MIXBND_DAG_HPP
#define MIXBND_DAG_HPP

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace mixbnd {

struct VertexId {
    int value = 0;
    constexpr auto operator<=>(const VertexId&) const = default;
};

inline std::size_t ix(VertexId v) { return static_cast<std::size_t>(v.value); }

// Sorted, duplicate-free set of vertices.
class VertexSet {
public:
    VertexSet() = default;
    VertexSet(std::initializer_list<int> ids);
    explicit VertexSet(std::vector<VertexId> members);

    bool contains(VertexId v) const;
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    VertexId operator[](std::size_t i) const { return members_[i]; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }
    const std::vector<VertexId>& members() const { return members_; }

    void insert(VertexId v);
    void erase(VertexId v);
    // Position of v in the sorted order, or -1.
    int index_of(VertexId v) const;

    VertexSet unite(const VertexSet& other) const;
    VertexSet minus(const VertexSet& other) const;
    VertexSet intersect(const VertexSet& other) const;
    bool intersects(const VertexSet& other) const;

    bool operator==(const VertexSet&) const = default;

private:
    std::vector<VertexId> members_;
};

std::string to_string(const VertexSet& s);

struct Edge {
    VertexId parent;
    VertexId child;
    bool operator==(const Edge&) const = default;
};

class Dag {
public:
    // Validates indices, self-loops, duplicates and acyclicity.
    static Dag create(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<VertexId>& topo_order() const { return topo_; }

    const VertexSet& parents(VertexId v) const;
    const VertexSet& children(VertexId v) const;
    const VertexSet& markov_boundary(VertexId v) const;
    VertexSet top_set(VertexId v) const;
    int depth(VertexId v) const;

    // Strict ancestors of the members of s, excluding s.
    VertexSet ancestors(const VertexSet& s) const;
    VertexSet descendants(VertexId v) const;
    bool has_edge(VertexId parent, VertexId child) const;

    int gamma() const { return gamma_; }
    int max_in_degree() const;
    int max_out_degree() const;
    // Degree bound on the undirected skeleton.
    int max_degree() const;

    bool is_path() const;

private:
    Dag() = default;
    void check(VertexId v) const;

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<VertexSet> parents_;
    std::vector<VertexSet> children_;
    std::vector<VertexSet> mb_;
    std::vector<int> depth_;
    std::vector<VertexId> topo_;
    int gamma_ = 0;
};

VertexSet bottom_vertices(const Dag& g, const VertexSet& i);

// Shallow-first search, ties to the smaller id. Each pick removes
// Y, Mb(Y) and Mb(Mb(Y)) from the pool.
VertexSet find_centers(const Dag& g, int count, int max_depth);

// Up to limit center sets, in the order the search finds them.
std::vector<VertexSet> center_options(const Dag& g, int count, int max_depth, std::size_t limit);

}  // namespace mixbnd

#endif
