#ifndef MIXBND_RUNS_HPP
#define MIXBND_RUNS_HPP

#include <string>
#include <vector>

#include "mixbnd/dag.hpp"
#include "mixbnd/model.hpp"

namespace mixbnd {

struct Run {
    VertexSet independent;
    Assignment assignment;  // keyed by the conditioning set
    VertexSet bottom;
};

// Union of Mb over non-bottom members and Pa over bottom members. Members of
// i are not removed; an overlap marks the run as ill-formed.
VertexSet conditioning_set(const Dag& g, const VertexSet& i);

// Builds a run on i, taking the conditioning values from `values`.
Run make_run(const Dag& g, VertexSet i, const Assignment& values);

// One character per vertex: '*' independent, '0'/'1' conditioned, '-' neither.
std::string encode_run(const Run& r);
// Inverse of encode_run; the result is not validated.
Run parse_run(const Dag& g, const std::string& code);

// Disjoint independent and conditioning sets, assignment keyed exactly by the
// conditioning set, and no bottom vertex with a descendant among the
// conditioned or independent vertices.
bool is_well_formed(const Dag& g, const Run& r);
bool is_n_independent(const Run& r, int n_mp);

struct TreeEdge {
    int parent = 0;
    int child = 0;
    VertexSet candidates;  // structural alignment variables, ascending
};

struct RunCollection {
    std::vector<Run> runs;
    std::vector<std::string> labels;
    std::vector<TreeEdge> tree;  // in breadth-first order from root
    int root = 0;
};

// Run indices whose occurrence of v fixes Pa(v) to `mask`. A vertex that is
// bottom anywhere in the collection only counts its bottom occurrences.
std::vector<int> covering_runs(const Dag& g, const RunCollection& coll, VertexId v,
                               std::size_t mask);
bool covers(const Dag& g, const RunCollection& coll, VertexId v);

VertexSet alignment_variables(const Dag& g, const Run& a, const Run& b);

// Breadth-first over the alignability graph, lowest index first. Fills the
// tree of `runs` and returns the collection.
RunCollection build_spanning_tree(const Dag& g, std::vector<Run> runs, int root,
                                  std::vector<std::string> labels = {});

struct CheckResult {
    bool pass = true;
    std::string witness;
};

struct GoodCollectionReport {
    CheckResult alignable;
    CheckResult independent;
    CheckResult covering;
    CheckResult bottom_consistent;
    CheckResult depth_capped;
    CheckResult well_formed;

    bool all() const {
        return alignable.pass && independent.pass && covering.pass &&
               bottom_consistent.pass && depth_capped.pass && well_formed.pass;
    }
};

// depth_cap < 0 means 3 * n_mp.
GoodCollectionReport is_good_collection(const Dag& g, const RunCollection& coll, int n_mp,
                                        int depth_cap = -1);

}  // namespace mixbnd

#endif
