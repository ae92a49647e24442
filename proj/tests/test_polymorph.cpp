#include <gtest/gtest.h>

#include "qcsp/polymorph.hpp"

using namespace qcsp;

namespace {

bool loop_connected(const Graph& g)
{
    auto loops = g.looped_vertices();
    return loops.size() <= 1 || is_connected(g.induced(loops));
}

TernaryTable first_projection(int n)
{
    TernaryTable f(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                f.set(x, y, z, x);
    return f;
}

} // namespace

TEST(Meet, Rules)
{
    Graph star(4);
    star.add_edge(0, 1);
    star.add_edge(1, 2);
    star.add_edge(1, 3);
    RootedTree t(star, 0);
    EXPECT_EQ(t.meet(0, 3), 0);
    EXPECT_EQ(t.meet(1, 3), 1);
    EXPECT_EQ(t.meet(2, 3), 1);
}

TEST(F0, HandEvaluatedEntries)
{
    RootedTree t(path_graph("0000"), 0);
    TernaryTable f = f0_table(t);
    EXPECT_EQ(f(1, 2, 3), 1);
    EXPECT_EQ(f(0, 2, 1), 0);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            EXPECT_EQ(f(x, x, y), x);
    EXPECT_TRUE(is_majority(f));
    EXPECT_TRUE(f.verified_majority());
    EXPECT_TRUE(is_polymorphism(f, t.graph()));
}

TEST(F0, RejectsBadRoots)
{
    Graph star(4);
    star.add_edge(0, 1);
    star.add_edge(0, 2);
    star.add_edge(0, 3);
    EXPECT_THROW(f0_table(RootedTree(star, 0)), PreconditionError);
    EXPECT_THROW(f0_table(RootedTree(path_graph("010"), 0)), PreconditionError);
}

TEST(F0, EveryIrreflexiveTreeRootedAtALeaf)
{
    for (int n = 1; n <= 8; ++n)
        for (const auto& t : enumerate_trees(n, false))
            for (int root = 0; root < n; ++root) {
                if (t.degree_without_loop(root) > 1)
                    continue;
                TernaryTable f = f0_table(RootedTree(t, root));
                EXPECT_TRUE(is_majority(f));
                EXPECT_TRUE(is_polymorphism(f, t)) << print_graph(t) << "root " << root;
            }
}

TEST(Median, Examples)
{
    Graph p = path_graph("11111");
    TernaryTable m = median_table(p);
    EXPECT_EQ(m(0, 2, 4), 2);
    EXPECT_EQ(m(3, 3, 1), 3);
    Graph star(3);
    star.add_edge(0, 1);
    star.add_edge(0, 2);
    for (int v = 0; v < 3; ++v)
        star.add_loop(v);
    EXPECT_EQ(median_table(star)(1, 2, 0), 0);
    EXPECT_TRUE(is_majority(m));
    EXPECT_TRUE(is_polymorphism(median_table(path_graph("111")), path_graph("111")));
    EXPECT_THROW(median_table(path_graph("101")), PreconditionError);
}

TEST(Checkers, FirstProjectionIsNotMajority)
{
    TernaryTable f = first_projection(3);
    EXPECT_FALSE(is_majority(f));
    EXPECT_TRUE(is_polymorphism(f, path_graph("101")));
    EXPECT_THROW(is_polymorphism(f, path_graph("10")), PreconditionError);
}

TEST(F1, HandEvaluatedEntries)
{
    TernaryTable f = f1_table(path_graph("100"));
    EXPECT_EQ(f(1, 2, 0), 0);
    EXPECT_TRUE(is_majority(f));
    EXPECT_TRUE(is_polymorphism(f, path_graph("100")));
}

TEST(F1, ThreeDistinctComponentsUseMedian)
{
    // reflexive star 0;1,2,3 with a pendant irreflexive leaf on each arm
    Graph t(7);
    for (int v = 0; v < 4; ++v)
        t.add_loop(v);
    for (int arm = 1; arm <= 3; ++arm) {
        t.add_edge(0, arm);
        t.add_edge(arm, arm + 3);
    }
    TernaryTable f = f1_table(t);
    EXPECT_EQ(f(4, 5, 6), 0);
    EXPECT_TRUE(is_polymorphism(f, t));
}

TEST(F1, RejectsLoopDisconnected)
{
    EXPECT_THROW(f1_table(path_graph("101")), PreconditionError);
}

TEST(F1, EveryLoopConnectedTreeUpToEight)
{
    int checked = 0;
    for (int n = 1; n <= 8; ++n)
        for (const auto& t : enumerate_trees(n, true)) {
            if (!loop_connected(t))
                continue;
            TernaryTable f = f1_table(t);
            ASSERT_TRUE(is_majority(f)) << print_graph(t);
            ASSERT_TRUE(is_polymorphism(f, t)) << print_graph(t);
            ++checked;
        }
    EXPECT_GT(checked, 1000);
}

TEST(F1, AgreesWithF0OnIrreflexiveTrees)
{
    for (int n = 1; n <= 7; ++n)
        for (const auto& t : enumerate_trees(n, false)) {
            int leaf = 0;
            while (t.degree_without_loop(leaf) > 1)
                ++leaf;
            EXPECT_EQ(f1_table(t), f0_table(RootedTree(t, leaf)));
        }
}

TEST(ComponentStructure, SharedRoot)
{
    Graph t = path_graph("010");
    auto cs = component_structure(t);
    EXPECT_EQ(cs.components.size(), 2u);
    EXPECT_EQ(cs.member_of[1].size(), 2u);
    EXPECT_EQ(cs.centre, (std::vector<int>{1}));
}

TEST(Search, Examples)
{
    EXPECT_EQ(search_majority_polymorphism(path_graph("101"), 1'000'000).status, SearchStatus::refuted);
    EXPECT_EQ(search_majority_polymorphism(path_graph("01010"), 1'000'000).status, SearchStatus::refuted);
    auto found = search_majority_polymorphism(path_graph("11"), 1'000'000);
    ASSERT_EQ(found.status, SearchStatus::found);
    EXPECT_TRUE(is_majority(*found.table));
    EXPECT_TRUE(is_polymorphism(*found.table, path_graph("11")));
}

TEST(Search, LoopDisconnectedTreesHaveNoMajority)
{
    int refuted = 0;
    for (int n = 3; n <= 7; ++n)
        for (const auto& t : enumerate_trees(n, true)) {
            if (loop_connected(t))
                continue;
            auto r = search_majority_polymorphism(t, 5'000'000);
            EXPECT_EQ(r.status, SearchStatus::refuted) << print_graph(t);
            ++refuted;
        }
    EXPECT_GT(refuted, 100);
}

TEST(Search, FoundTablesPassCheckers)
{
    for (int n = 1; n <= 5; ++n)
        for (const auto& t : enumerate_trees(n, true)) {
            if (!loop_connected(t))
                continue;
            auto r = search_majority_polymorphism(t, 5'000'000);
            ASSERT_EQ(r.status, SearchStatus::found) << print_graph(t);
            EXPECT_TRUE(is_majority(*r.table));
            EXPECT_TRUE(is_polymorphism(*r.table, t));
        }
}

TEST(Search, BudgetExhaustion)
{
    auto r = search_majority_polymorphism(path_graph("0000"), 1);
    EXPECT_NE(r.status, SearchStatus::refuted);
}

TEST(TableDump, Format)
{
    std::string dump = print_table(median_table(path_graph("1")));
    EXPECT_EQ(dump, "1\n1 1 1 -> 1\n");
}
