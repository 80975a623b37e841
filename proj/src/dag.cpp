#include "mixbnd/dag.hpp"

#include <algorithm>
#include <functional>
#include <deque>
#include <limits>
#include <tuple>

#include "mixbnd/error.hpp"

namespace mixbnd {

VertexSet::VertexSet(std::initializer_list<int> ids) {
    for (int id : ids) members_.push_back(VertexId{id});
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet::VertexSet(std::vector<VertexId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool VertexSet::contains(VertexId v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

void VertexSet::insert(VertexId v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
}

void VertexSet::erase(VertexId v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it != members_.end() && *it == v) members_.erase(it);
}

int VertexSet::index_of(VertexId v) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) return -1;
    return static_cast<int>(it - members_.begin());
}

VertexSet VertexSet::unite(const VertexSet& other) const {
    std::vector<VertexId> out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(out));
    VertexSet s;
    s.members_ = std::move(out);
    return s;
}

VertexSet VertexSet::minus(const VertexSet& other) const {
    std::vector<VertexId> out;
    std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out));
    VertexSet s;
    s.members_ = std::move(out);
    return s;
}

VertexSet VertexSet::intersect(const VertexSet& other) const {
    std::vector<VertexId> out;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                          other.members_.end(), std::back_inserter(out));
    VertexSet s;
    s.members_ = std::move(out);
    return s;
}

bool VertexSet::intersects(const VertexSet& other) const {
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
        if (*a == *b) return true;
        if (*a < *b) ++a;
        else ++b;
    }
    return false;
}

std::string to_string(const VertexSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i].value);
    }
    return out + "}";
}

Dag Dag::create(int n, std::vector<Edge> edges) {
    if (n < 0) throw Error(ErrorCode::BadVertexIndex, "negative vertex count");
    for (const Edge& e : edges) {
        if (e.parent.value < 0 || e.parent.value >= n || e.child.value < 0 ||
            e.child.value >= n) {
            throw Error(ErrorCode::BadVertexIndex,
                        "edge (" + std::to_string(e.parent.value) + "," +
                            std::to_string(e.child.value) + ") out of range for n=" +
                            std::to_string(n));
        }
        if (e.parent == e.child) {
            throw Error(ErrorCode::CycleDetected,
                        "self-loop at vertex " + std::to_string(e.parent.value));
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.parent, a.child) < std::tie(b.parent, b.child);
    });
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw Error(ErrorCode::BadFormat, "duplicate edge");
    }

    Dag g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    std::vector<std::vector<VertexId>> pa(n), ch(n);
    for (const Edge& e : g.edges_) {
        pa[ix(e.child)].push_back(e.parent);
        ch[ix(e.parent)].push_back(e.child);
    }
    for (int v = 0; v < n; ++v) {
        g.parents_.emplace_back(pa[v]);
        g.children_.emplace_back(ch[v]);
    }

    // Kahn's algorithm, smallest ready vertex first.
    std::vector<int> indeg(n);
    for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.parents_[v].size());
    std::vector<VertexId> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(VertexId{v});
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end());
        VertexId v = *it;
        ready.erase(it);
        g.topo_.push_back(v);
        for (VertexId c : g.children_[ix(v)])
            if (--indeg[ix(c)] == 0) ready.push_back(c);
    }
    if (static_cast<int>(g.topo_.size()) != n) {
        // Every leftover vertex has a leftover parent; walk parents until a repeat.
        int start = 0;
        while (indeg[start] == 0) ++start;
        std::vector<int> seen(n, -1);
        std::vector<int> walk;
        int v = start;
        while (seen[v] < 0) {
            seen[v] = static_cast<int>(walk.size());
            walk.push_back(v);
            for (VertexId p : g.parents_[v]) {
                if (indeg[ix(p)] > 0) {
                    v = p.value;
                    break;
                }
            }
        }
        std::vector<int> cycle(walk.begin() + seen[v], walk.end());
        std::reverse(cycle.begin(), cycle.end());
        std::string msg = "cycle:";
        for (int c : cycle) msg += " " + std::to_string(c) + " ->";
        msg += " " + std::to_string(cycle.front());
        throw Error(ErrorCode::CycleDetected, msg);
    }

    for (int v = 0; v < n; ++v) {
        VertexSet mb = g.parents_[v].unite(g.children_[v]);
        for (VertexId c : g.children_[v]) mb = mb.unite(g.parents_[ix(c)]);
        mb.erase(VertexId{v});
        g.gamma_ = std::max(g.gamma_, static_cast<int>(mb.size()));
        g.mb_.push_back(std::move(mb));
    }

    // Multi-source BFS from the roots.
    g.depth_.assign(n, -1);
    std::deque<int> queue;
    for (int v = 0; v < n; ++v) {
        if (g.parents_[v].empty()) {
            g.depth_[v] = 0;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (VertexId c : g.children_[v]) {
            if (g.depth_[ix(c)] < 0) {
                g.depth_[ix(c)] = g.depth_[v] + 1;
                queue.push_back(c.value);
            }
        }
    }
    return g;
}

void Dag::check(VertexId v) const {
    if (v.value < 0 || v.value >= n_) {
        throw Error(ErrorCode::BadVertexIndex,
                    "vertex " + std::to_string(v.value) + " out of range for n=" +
                        std::to_string(n_));
    }
}

const VertexSet& Dag::parents(VertexId v) const {
    check(v);
    return parents_[ix(v)];
}

const VertexSet& Dag::children(VertexId v) const {
    check(v);
    return children_[ix(v)];
}

const VertexSet& Dag::markov_boundary(VertexId v) const {
    check(v);
    return mb_[ix(v)];
}

VertexSet Dag::top_set(VertexId v) const {
    check(v);
    return mb_[ix(v)].minus(children_[ix(v)]);
}

int Dag::depth(VertexId v) const {
    check(v);
    return depth_[ix(v)];
}

VertexSet Dag::ancestors(const VertexSet& s) const {
    std::vector<char> mark(n_, 0);
    std::vector<VertexId> stack;
    for (VertexId v : s) {
        check(v);
        stack.push_back(v);
    }
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId p : parents_[ix(v)]) {
            if (!mark[ix(p)]) {
                mark[ix(p)] = 1;
                stack.push_back(p);
            }
        }
    }
    std::vector<VertexId> out;
    for (int v = 0; v < n_; ++v)
        if (mark[v] && !s.contains(VertexId{v})) out.push_back(VertexId{v});
    return VertexSet(std::move(out));
}

VertexSet Dag::descendants(VertexId v) const {
    check(v);
    std::vector<char> mark(n_, 0);
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
        VertexId x = stack.back();
        stack.pop_back();
        for (VertexId c : children_[ix(x)]) {
            if (!mark[ix(c)]) {
                mark[ix(c)] = 1;
                stack.push_back(c);
            }
        }
    }
    std::vector<VertexId> out;
    for (int x = 0; x < n_; ++x)
        if (mark[x]) out.push_back(VertexId{x});
    return VertexSet(std::move(out));
}

bool Dag::has_edge(VertexId parent, VertexId child) const {
    check(parent);
    check(child);
    return children_[ix(parent)].contains(child);
}

int Dag::max_in_degree() const {
    int d = 0;
    for (const auto& p : parents_) d = std::max(d, static_cast<int>(p.size()));
    return d;
}

int Dag::max_out_degree() const {
    int d = 0;
    for (const auto& c : children_) d = std::max(d, static_cast<int>(c.size()));
    return d;
}

int Dag::max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v)
        d = std::max(d, static_cast<int>(parents_[v].size() + children_[v].size()));
    return d;
}

bool Dag::is_path() const {
    if (n_ == 0) return false;
    if (static_cast<int>(edges_.size()) != n_ - 1) return false;
    for (int v = 0; v + 1 < n_; ++v)
        if (!children_[v].contains(VertexId{v + 1})) return false;
    return true;
}

VertexSet bottom_vertices(const Dag& g, const VertexSet& i) {
    int deepest = -1;
    for (VertexId v : i) deepest = std::max(deepest, g.depth(v));
    std::vector<VertexId> out;
    for (VertexId v : i)
        if (g.depth(v) == deepest) out.push_back(v);
    return VertexSet(std::move(out));
}

std::vector<VertexSet> center_options(const Dag& g, int count, int max_depth, std::size_t limit) {
    std::vector<VertexId> order;
    for (int v = 0; v < g.n(); ++v)
        if (g.depth(VertexId{v}) <= max_depth) order.push_back(VertexId{v});
    std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        return g.depth(a) < g.depth(b);
    });
    // blocked[v] counts picked centers whose closed boundary meets v's.
    std::vector<int> blocked(static_cast<std::size_t>(g.n()), 0);
    auto mark = [&](VertexId y, int delta) {
        blocked[ix(y)] += delta;
        for (VertexId m : g.markov_boundary(y)) {
            blocked[ix(m)] += delta;
            for (VertexId mm : g.markov_boundary(m)) blocked[ix(mm)] += delta;
        }
    };
    // Depth-first in shallow-first order: the first branch is the greedy
    // choice, later branches only run when it dead-ends.
    constexpr long long kSearchBudget = 1000000;
    long long steps = 0;
    std::vector<VertexId> picked, best;
    std::vector<VertexSet> found;
    std::function<void(std::size_t)> search = [&](std::size_t from) {
        if (static_cast<int>(picked.size()) == count) {
            found.emplace_back(picked);
            return;
        }
        if (picked.size() > best.size()) best = picked;
        for (std::size_t i = from; i < order.size() && found.size() < limit; ++i) {
            if (++steps > kSearchBudget) return;
            const VertexId y = order[i];
            if (blocked[ix(y)] > 0) continue;
            if (static_cast<int>(order.size() - i) < count - static_cast<int>(picked.size())) return;
            picked.push_back(y);
            mark(y, 1);
            search(i + 1);
            mark(y, -1);
            picked.pop_back();
        }
    };
    if (count <= 0) return {VertexSet{}};
    search(0);
    if (found.empty()) {
        throw Error(ErrorCode::NotEnoughCenters,
                    "found " + std::to_string(best.size()) + " of " +
                        std::to_string(count) + " centers");
    }
    return found;
}

VertexSet find_centers(const Dag& g, int count, int max_depth) {
    return center_options(g, count, max_depth, 1).front();
}

}  // namespace mixbnd
