#include <gtest/gtest.h>

#include "mixbnd/dag.hpp"
#include "mixbnd/error.hpp"
#include "support.hpp"

using namespace mixbnd;
using mixbnd::testing::chain;
using mixbnd::testing::empty_graph;
using mixbnd::testing::thirteen_vertex;
using mixbnd::testing::six_vertex;

namespace {

ErrorCode code_of(int n, std::vector<Edge> edges) {
    try {
        Dag::create(n, std::move(edges));
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::ShapeMismatch;
}

VertexId V(int one_based) { return VertexId{one_based - 1}; }

}  // namespace

TEST(DagCreate, TwoChainHasTopoOrder) {
    Dag g = Dag::create(2, {{VertexId{0}, VertexId{1}}});
    ASSERT_EQ(g.topo_order().size(), 2u);
    EXPECT_EQ(g.topo_order()[0], VertexId{0});
    EXPECT_EQ(g.topo_order()[1], VertexId{1});
}

TEST(DagCreate, RejectsTwoCycleAndNamesIt) {
    try {
        Dag::create(2, {{VertexId{0}, VertexId{1}}, {VertexId{1}, VertexId{0}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CycleDetected);
        EXPECT_NE(std::string(e.what()).find("0"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
    }
}

TEST(DagCreate, RejectsBadInput) {
    EXPECT_EQ(code_of(2, {{VertexId{0}, VertexId{2}}}), ErrorCode::BadVertexIndex);
    EXPECT_EQ(code_of(2, {{VertexId{-1}, VertexId{0}}}), ErrorCode::BadVertexIndex);
    EXPECT_EQ(code_of(2, {{VertexId{1}, VertexId{1}}}), ErrorCode::CycleDetected);
    EXPECT_EQ(code_of(2, {{VertexId{0}, VertexId{1}}, {VertexId{0}, VertexId{1}}}), ErrorCode::BadFormat);
    EXPECT_EQ(code_of(3, {{VertexId{0}, VertexId{1}}, {VertexId{1}, VertexId{2}}, {VertexId{2}, VertexId{0}}}),
              ErrorCode::CycleDetected);
}

TEST(DagCreate, ThirteenVertexIsValid) {
    Dag g = thirteen_vertex();
    EXPECT_EQ(g.n(), 13);
    EXPECT_EQ(g.edges().size(), 12u);
}

TEST(DagQueries, ParentsAndChildren) {
    Dag g = thirteen_vertex();
    EXPECT_EQ(g.parents(V(13)), VertexSet({V(12).value}));
    EXPECT_EQ(g.children(V(9)), VertexSet({V(10).value, V(11).value}));
    EXPECT_TRUE(empty_graph(3).ancestors(VertexSet{0}).empty());
    EXPECT_THROW(g.parents(VertexId{13}), Error);
}

TEST(DagQueries, MarkovBoundary) {
    EXPECT_EQ(six_vertex().markov_boundary(VertexId{2}), VertexSet({0, 1, 3, 4, 5}));
    EXPECT_EQ(thirteen_vertex().markov_boundary(V(1)), VertexSet({V(2).value, V(3).value}));
    EXPECT_TRUE(empty_graph(2).markov_boundary(VertexId{0}).empty());
}

TEST(DagQueries, TopSet) {
    EXPECT_EQ(six_vertex().top_set(VertexId{2}), VertexSet({0, 1, 3}));
    EXPECT_TRUE(chain(2).top_set(VertexId{0}).empty());
    EXPECT_TRUE(empty_graph(1).top_set(VertexId{0}).empty());
}

TEST(DagQueries, Depth) {
    EXPECT_EQ(chain(3).depth(VertexId{0}), 0);
    EXPECT_EQ(chain(3).depth(VertexId{2}), 2);
    Dag g = thirteen_vertex();
    const auto ref = mixbnd::testing::reference_depths(g.n(), g.edges());
    for (int v = 0; v < g.n(); ++v) EXPECT_EQ(g.depth(VertexId{v}), ref[v]) << "vertex " << v;
    EXPECT_EQ(g.depth(V(13)), 7);
}

TEST(DagQueries, Gamma) {
    EXPECT_EQ(empty_graph(4).gamma(), 0);
    EXPECT_EQ(chain(2).gamma(), 1);
    EXPECT_EQ(thirteen_vertex().gamma(), 3);
}

TEST(DagQueries, BottomVertices) {
    Dag g = thirteen_vertex();
    EXPECT_EQ(bottom_vertices(g, VertexSet{0}), VertexSet{0});
    EXPECT_EQ(bottom_vertices(g, VertexSet({V(1).value, V(6).value, V(9).value, V(13).value})),
              VertexSet({V(13).value}));
    EXPECT_EQ(bottom_vertices(g, VertexSet({V(1).value, V(2).value})), VertexSet({V(1).value, V(2).value}));
}

TEST(DagQueries, GammaCanExceedDeltaTimesDeltaMinusOne) {
    // A single edge: degree 1, boundary 1.
    EXPECT_EQ(chain(2).gamma(), 1);
    EXPECT_EQ(chain(2).max_degree(), 1);
    // v = 0 with children 1, 2, each with one more parent (3, 4): |Mb(v)| = 4.
    Dag g = Dag::create(5, {{VertexId{0}, VertexId{1}}, {VertexId{0}, VertexId{2}},
                            {VertexId{3}, VertexId{1}}, {VertexId{4}, VertexId{2}}});
    EXPECT_EQ(g.max_degree(), 2);
    EXPECT_EQ(g.gamma(), 4);
}

TEST(FindCenters, ThirteenVertexCountFourIsDisjoint) {
    Dag g = thirteen_vertex();
    VertexSet c = find_centers(g, 4, 9);
    ASSERT_EQ(c.size(), 4u);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_LE(g.depth(c[i]), 9);
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            VertexSet a = g.markov_boundary(c[i]);
            a.insert(c[i]);
            VertexSet b = g.markov_boundary(c[j]);
            b.insert(c[j]);
            EXPECT_FALSE(a.intersects(b));
        }
    }
    EXPECT_EQ(c, VertexSet({V(1).value, V(6).value, V(7).value, V(12).value}));
}

TEST(FindCenters, EmptyGraphTakesEverything) {
    EXPECT_EQ(find_centers(empty_graph(5), 5, 0), VertexSet({0, 1, 2, 3, 4}));
}

TEST(FindCenters, ShortChainFailsWithCount) {
    try {
        find_centers(chain(2), 2, 6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotEnoughCenters);
        EXPECT_NE(std::string(e.what()).find("found 1 of 2"), std::string::npos);
    }
}

TEST(DagProperties, RandomGraphs) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 11;
        const int cap = 1 + trial % 4;
        Dag g = mixbnd::testing::random_dag(n, cap, 0.5, rng);
        const auto ref = mixbnd::testing::reference_depths(n, g.edges());
        const int din = g.max_in_degree(), dout = g.max_out_degree(), d = g.max_degree();
        EXPECT_LE(g.gamma(), d * d);
        for (int v = 0; v < n; ++v) {
            const VertexId x{v};
            EXPECT_EQ(g.depth(x), ref[v]);
            EXPECT_EQ(g.depth(x) == 0, g.parents(x).empty());
            EXPECT_LE(static_cast<int>(g.markov_boundary(x).size()), din + dout * din);
            for (VertexId y : g.markov_boundary(x)) EXPECT_TRUE(g.markov_boundary(y).contains(x));
        }
        try {
            VertexSet c = find_centers(g, 2, 3 * 2);
            for (VertexId a : c)
                for (VertexId b : c)
                    if (a != b) EXPECT_FALSE(g.markov_boundary(a).intersects(g.markov_boundary(b)));
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::NotEnoughCenters);
        }
    }
}
