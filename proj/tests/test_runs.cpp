#include <gtest/gtest.h>

#include "mixbnd/error.hpp"
#include "mixbnd/run_builder.hpp"
#include "mixbnd/runs.hpp"
#include "support.hpp"

using namespace mixbnd;
namespace t = mixbnd::testing;

namespace {

VertexId V(int one_based) { return VertexId{one_based - 1}; }

VertexSet Vs(std::initializer_list<int> one_based) {
    VertexSet s;
    for (int i : one_based) s.insert(V(i));
    return s;
}

Assignment zeros(int n) {
    Assignment a(n);
    for (int v = 0; v < n; ++v) a.set(VertexId{v}, 0);
    return a;
}

RunCollection single_run_collection(const Dag& g, const std::string& code) {
    return build_spanning_tree(g, {parse_run(g, code)}, 0);
}

}  // namespace

TEST(ConditioningSet, ThirteenVertexCentralRun) {
    EXPECT_EQ(conditioning_set(t::thirteen_vertex(), Vs({1, 6, 9, 13})), Vs({2, 3, 4, 7, 8, 10, 11, 12}));
}

TEST(ConditioningSet, SmallCases) {
    EXPECT_TRUE(conditioning_set(t::chain(2), Vs({1})).empty());
    EXPECT_EQ(conditioning_set(t::chain(3), Vs({1, 3})), Vs({2}));
}

TEST(ConditioningSet, AllBottomIsParentUnion) {
    Dag g = t::thirteen_vertex();
    // V3 and V4 share depth 1.
    EXPECT_EQ(conditioning_set(g, Vs({3, 4})), g.parents(V(3)).unite(g.parents(V(4))));
}

TEST(WellFormed, Examples) {
    Dag c = t::chain(2);
    EXPECT_FALSE(is_well_formed(c, make_run(c, Vs({1, 2}), zeros(2))));
    Dag g = t::thirteen_vertex();
    EXPECT_TRUE(is_well_formed(g, make_run(g, Vs({1, 6, 9, 13}), zeros(13))));
    Dag e = t::empty_graph(4);
    EXPECT_TRUE(is_well_formed(e, make_run(e, Vs({1, 3}), zeros(4))));
}

TEST(WellFormed, BottomWithConditionedDescendantIsRejected) {
    // R=0 -> A=1, R -> B=2, B -> P=3, P -> A. A and B are both bottom, and P,
    // a descendant of B, is conditioned on as a parent of A.
    Dag g = Dag::create(4, {{VertexId{0}, VertexId{1}}, {VertexId{0}, VertexId{2}},
                            {VertexId{2}, VertexId{3}}, {VertexId{3}, VertexId{1}}});
    mixbnd::Run r = make_run(g, VertexSet({1, 2}), zeros(4));
    EXPECT_EQ(r.bottom, VertexSet({1, 2}));
    EXPECT_EQ(r.assignment.keys(), VertexSet({0, 3}));
    EXPECT_FALSE(is_well_formed(g, r));
}

TEST(NIndependent, Sizes) {
    mixbnd::Run r;
    r.independent = VertexSet({0, 1, 2, 3});
    EXPECT_TRUE(is_n_independent(r, 3));
    r.independent = VertexSet({0, 1});
    EXPECT_FALSE(is_n_independent(r, 3));
    Dag g = t::thirteen_vertex();
    EXPECT_TRUE(is_n_independent(make_run(g, Vs({1, 6, 9, 13}), zeros(13)), 3));
}

TEST(Encoding, RoundTrip) {
    Dag g = t::chain(8);
    for (const char* code : {"0*0*0*--", "*0*0-1*-", "*00*0*--"}) {
        EXPECT_EQ(encode_run(parse_run(g, code)), code);
    }
    EXPECT_THROW(parse_run(g, "0*0*"), Error);
    EXPECT_THROW(parse_run(g, "0*0*0*-x"), Error);
}

TEST(Covers, Examples) {
    Dag c = t::chain(2);
    EXPECT_TRUE(covers(c, single_run_collection(c, "*-"), V(1)));
    EXPECT_FALSE(covers(c, single_run_collection(c, "0*"), V(2)));
    RunCollection path = build_path(t::chain(8), 3);
    for (int v = 0; v < 8; ++v) EXPECT_TRUE(covers(t::chain(8), path, VertexId{v}));
}

TEST(AlignmentVariables, IdenticalRunsShareEverything) {
    Dag g = t::thirteen_vertex();
    mixbnd::Run r = make_run(g, Vs({1, 6, 9, 13}), zeros(13));
    EXPECT_EQ(alignment_variables(g, r, r), r.independent);
}

TEST(AlignmentVariables, OddAndLinkMeetAtV1) {
    Dag g = t::chain(8);
    EXPECT_EQ(alignment_variables(g, parse_run(g, "*0*0*---"), parse_run(g, "*00*0*--")), Vs({1}));
}

TEST(AlignmentVariables, CentralSweepKeepsOtherCenters) {
    Dag g = t::thirteen_vertex();
    RunCollection coll = build_generic(g, 3);
    const mixbnd::Run& a0 = coll.runs[0];
    for (std::size_t i = 1; i < coll.runs.size(); ++i) {
        if (coll.labels[i].rfind("sweep x=0 ", 0) != 0) continue;
        VertexSet av = alignment_variables(g, a0, coll.runs[i]);
        EXPECT_FALSE(av.contains(V(1)));
        EXPECT_TRUE(av.contains(V(6)));
        EXPECT_TRUE(av.contains(V(7)));
    }
}

TEST(AlignmentVariables, Symmetric) {
    Dag g = t::thirteen_vertex();
    RunCollection coll = build_generic(g, 3);
    for (const mixbnd::Run& a : coll.runs)
        for (const mixbnd::Run& b : coll.runs) EXPECT_EQ(alignment_variables(g, a, b), alignment_variables(g, b, a));
}

TEST(SpanningTree, TrivialAndDisconnected) {
    Dag g = t::empty_graph(4);
    RunCollection one = single_run_collection(g, "**--");
    EXPECT_TRUE(one.tree.empty());
    try {
        build_spanning_tree(g, {parse_run(g, "**--"), parse_run(g, "--**")}, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAlignable);
        EXPECT_NE(std::string(e.what()).find("--**"), std::string::npos);
    }
}

TEST(GoodCollection, PathPassesAllChecks) {
    Dag g = t::chain(8);
    GoodCollectionReport rep = is_good_collection(g, build_path(g, 3), 3);
    EXPECT_TRUE(rep.all()) << rep.alignable.witness << rep.independent.witness << rep.covering.witness
                           << rep.bottom_consistent.witness << rep.depth_capped.witness
                           << rep.well_formed.witness;
}

TEST(GoodCollection, MissingParentAssignmentNamesVertex) {
    Dag g = t::chain(8);
    RunCollection coll = build_path(g, 3);
    std::vector<mixbnd::Run> runs;
    for (std::size_t i = 0; i < coll.runs.size(); ++i)
        if (encode_run(coll.runs[i]) != "*0*0-1*-") runs.push_back(coll.runs[i]);
    GoodCollectionReport rep = is_good_collection(g, build_spanning_tree(g, runs, 0), 3);
    EXPECT_FALSE(rep.covering.pass);
    EXPECT_NE(rep.covering.witness.find("vertex 6"), std::string::npos);
}

TEST(GoodCollection, ShortRunFailsIndependence) {
    Dag g = t::chain(8);
    RunCollection coll = build_path(g, 3);
    GoodCollectionReport rep = is_good_collection(g, coll, 4);
    EXPECT_FALSE(rep.independent.pass);
}

TEST(DSeparation, WellFormedRunsFactorize) {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + trial % 5;
        Dag g = t::random_dag(n, 3, 0.45, rng);
        MixtureModel m = random_separated_model(g, 2, 0.05, 500 + trial);
        for (int attempt = 0; attempt < 30; ++attempt) {
            VertexSet i;
            for (int v = 0; v < n; ++v)
                if (rng() % 3 == 0) i.insert(VertexId{v});
            if (i.size() < 2) continue;
            Assignment values(n);
            for (int v = 0; v < n; ++v) values.set(VertexId{v}, static_cast<int>(rng() & 1U));
            if (conditioning_set(g, i).intersects(i)) continue;
            mixbnd::Run r = make_run(g, i, values);
            if (!is_well_formed(g, r)) continue;
            for (std::size_t a = 0; a < i.size(); ++a) {
                for (std::size_t b = a + 1; b < i.size(); ++b) {
                    Assignment both(n), xa(n), xb(n);
                    both.set(i[a], 1);
                    both.set(i[b], 1);
                    xa.set(i[a], 1);
                    xb.set(i[b], 1);
                    for (int u = 0; u < 2; ++u) {
                        const double joint = t::brute_conditional(m, u, both, r.assignment);
                        const double prod = t::brute_conditional(m, u, xa, r.assignment) *
                                            t::brute_conditional(m, u, xb, r.assignment);
                        EXPECT_NEAR(joint, prod, 1e-9) << encode_run(r);
                        ++checked;
                    }
                }
            }
        }
    }
    EXPECT_GT(checked, 50);
}
