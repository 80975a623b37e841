#include "mixbnd/runs.hpp"

#include <deque>

#include "mixbnd/error.hpp"

namespace mixbnd {

VertexSet conditioning_set(const Dag& g, const VertexSet& i) {
    VertexSet bottom = bottom_vertices(g, i);
    VertexSet c;
    for (VertexId v : i)
        c = c.unite(bottom.contains(v) ? g.parents(v) : g.markov_boundary(v));
    return c;
}

Run make_run(const Dag& g, VertexSet i, const Assignment& values) {
    Run r;
    r.bottom = bottom_vertices(g, i);
    r.assignment = values.restricted(conditioning_set(g, i));
    r.independent = std::move(i);
    return r;
}

std::string encode_run(const Run& r) {
    std::string out(static_cast<std::size_t>(r.assignment.n()), '-');
    for (int v = 0; v < r.assignment.n(); ++v) {
        VertexId id{v};
        if (r.independent.contains(id)) out[ix(id)] = '*';
        else if (r.assignment.has(id)) out[ix(id)] = r.assignment.get(id) ? '1' : '0';
    }
    return out;
}

Run parse_run(const Dag& g, const std::string& code) {
    if (static_cast<int>(code.size()) != g.n())
        throw Error(ErrorCode::BadFormat, "run encoding length differs from n");
    Run r;
    r.assignment = Assignment(g.n());
    std::vector<VertexId> members;
    for (int v = 0; v < g.n(); ++v) {
        switch (code[ix(VertexId{v})]) {
            case '*': members.push_back(VertexId{v}); break;
            case '0': r.assignment.set(VertexId{v}, 0); break;
            case '1': r.assignment.set(VertexId{v}, 1); break;
            case '-': break;
            default: throw Error(ErrorCode::BadFormat, "bad run character in " + code);
        }
    }
    r.independent = VertexSet(std::move(members));
    r.bottom = bottom_vertices(g, r.independent);
    return r;
}

bool is_well_formed(const Dag& g, const Run& r) {
    if (r.independent.empty()) return false;
    VertexSet c = conditioning_set(g, r.independent);
    if (c.intersects(r.independent)) return false;
    if (r.assignment.keys() != c) return false;
    VertexSet touched = c.unite(r.independent);
    for (VertexId b : bottom_vertices(g, r.independent))
        if (g.descendants(b).intersects(touched)) return false;
    return true;
}

bool is_n_independent(const Run& r, int n_mp) {
    return static_cast<int>(r.independent.size()) >= n_mp;
}

std::vector<int> covering_runs(const Dag& g, const RunCollection& coll, VertexId v,
                               std::size_t mask) {
    bool bottom_somewhere = false;
    for (const Run& r : coll.runs)
        if (r.bottom.contains(v)) bottom_somewhere = true;
    const VertexSet& pa = g.parents(v);
    std::vector<int> out;
    for (std::size_t idx = 0; idx < coll.runs.size(); ++idx) {
        const Run& r = coll.runs[idx];
        if (!r.independent.contains(v)) continue;
        if (bottom_somewhere && !r.bottom.contains(v)) continue;
        if (!pa.minus(r.assignment.keys()).empty()) continue;
        if (parent_mask(pa, r.assignment) == mask) out.push_back(static_cast<int>(idx));
    }
    return out;
}

bool covers(const Dag& g, const RunCollection& coll, VertexId v) {
    const std::size_t masks = std::size_t{1} << g.parents(v).size();
    for (std::size_t mask = 0; mask < masks; ++mask)
        if (covering_runs(g, coll, v, mask).empty()) return false;
    return true;
}

VertexSet alignment_variables(const Dag& g, const Run& a, const Run& b) {
    std::vector<VertexId> out;
    for (VertexId x : a.independent.intersect(b.independent)) {
        const VertexSet& mb = g.markov_boundary(x);
        if (!a.bottom.contains(x) && !b.bottom.contains(x)) {
            if (a.assignment.agrees_on(b.assignment, mb)) out.push_back(x);
            continue;
        }
        // A bottom occurrence is conditioned on its parents only; compare what
        // either run conditions inside Mb(x), which must be assigned by both.
        VertexSet seen = mb.intersect(a.assignment.keys().unite(b.assignment.keys()));
        if (!g.parents(x).minus(seen).empty()) continue;
        if (a.assignment.agrees_on(b.assignment, seen)) out.push_back(x);
    }
    return VertexSet(std::move(out));
}

RunCollection build_spanning_tree(const Dag& g, std::vector<Run> runs, int root,
                                  std::vector<std::string> labels) {
    RunCollection coll;
    coll.runs = std::move(runs);
    coll.labels = std::move(labels);
    coll.root = root;
    const int count = static_cast<int>(coll.runs.size());
    if (count == 0) return coll;
    if (root < 0 || root >= count) throw Error(ErrorCode::NotAlignable, "root out of range");
    std::vector<char> reached(count, 0);
    reached[root] = 1;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        int at = queue.front();
        queue.pop_front();
        for (int next = 0; next < count; ++next) {
            if (reached[next]) continue;
            VertexSet av = alignment_variables(g, coll.runs[at], coll.runs[next]);
            if (av.empty()) continue;
            reached[next] = 1;
            coll.tree.push_back(TreeEdge{at, next, std::move(av)});
            queue.push_back(next);
        }
    }
    std::string missing;
    for (int i = 0; i < count; ++i) {
        if (reached[i]) continue;
        if (!missing.empty()) missing += ",";
        missing += std::to_string(i) + ":" + encode_run(coll.runs[i]);
    }
    if (!missing.empty())
        throw Error(ErrorCode::NotAlignable, "runs not reachable from the root: " + missing);
    return coll;
}

GoodCollectionReport is_good_collection(const Dag& g, const RunCollection& coll, int n_mp,
                                        int depth_cap) {
    if (depth_cap < 0) depth_cap = 3 * n_mp;
    GoodCollectionReport rep;
    auto fail = [](CheckResult& c, const std::string& why) {
        if (c.pass) c.witness = why;
        c.pass = false;
    };
    const int count = static_cast<int>(coll.runs.size());

    // (i) the stored tree spans every run and each edge has a valid variable
    std::vector<int> hits(count, 0);
    if (count > 0) hits[coll.root] = 1;
    for (const TreeEdge& e : coll.tree) {
        if (e.child < 0 || e.child >= count || e.parent < 0 || e.parent >= count) {
            fail(rep.alignable, "tree edge out of range");
            continue;
        }
        ++hits[e.child];
        VertexSet av = alignment_variables(g, coll.runs[e.parent], coll.runs[e.child]);
        if (e.candidates.empty() || !e.candidates.minus(av).empty())
            fail(rep.alignable, "edge " + std::to_string(e.parent) + "-" +
                                    std::to_string(e.child) + " has no alignment variable");
    }
    for (int i = 0; i < count; ++i)
        if (hits[i] != 1) fail(rep.alignable, "run " + std::to_string(i) + " not spanned once");

    // (ii)
    for (int i = 0; i < count; ++i)
        if (!is_n_independent(coll.runs[i], n_mp))
            fail(rep.independent, "run " + std::to_string(i) + " " + encode_run(coll.runs[i]) +
                                      " has " + std::to_string(coll.runs[i].independent.size()) +
                                      " independent vertices");

    // (iii)
    for (int v = 0; v < g.n(); ++v) {
        const std::size_t masks = std::size_t{1} << g.parents(VertexId{v}).size();
        for (std::size_t mask = 0; mask < masks; ++mask)
            if (covering_runs(g, coll, VertexId{v}, mask).empty())
                fail(rep.covering, "vertex " + std::to_string(v) + " parent mask " +
                                       std::to_string(mask) + " uncovered");
    }

    // (iv) and (v)
    std::vector<char> as_bottom(g.n(), 0), as_inner(g.n(), 0);
    for (const Run& r : coll.runs) {
        for (VertexId v : r.independent) {
            if (r.bottom.contains(v)) as_bottom[ix(v)] = 1;
            else as_inner[ix(v)] = 1;
        }
    }
    for (int v = 0; v < g.n(); ++v) {
        if (as_bottom[v] && as_inner[v])
            fail(rep.bottom_consistent, "vertex " + std::to_string(v) + " is bottom and non-bottom");
        if (as_inner[v] && g.depth(VertexId{v}) > depth_cap)
            fail(rep.depth_capped, "vertex " + std::to_string(v) + " at depth " +
                                       std::to_string(g.depth(VertexId{v})));
    }

    for (int i = 0; i < count; ++i)
        if (!is_well_formed(g, coll.runs[i]))
            fail(rep.well_formed, "run " + std::to_string(i) + " " + encode_run(coll.runs[i]));
    return rep;
}

}  // namespace mixbnd
