#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qcsp/graphs.hpp"

using namespace qcsp;

namespace {

Graph random_graph(std::mt19937& rng, int n, double p)
{
    std::bernoulli_distribution coin(p);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v)
            if (coin(rng))
                g.add_edge(u, v);
    return g;
}

Graph random_tree(std::mt19937& rng, int n, double loop_p)
{
    Graph g(n);
    std::bernoulli_distribution coin(loop_p);
    for (int v = 1; v < n; ++v)
        g.add_edge(v, std::uniform_int_distribution<int>(0, v - 1)(rng));
    for (int v = 0; v < n; ++v)
        if (coin(rng))
            g.add_loop(v);
    return g;
}

} // namespace

TEST(PathGraph, Transcription)
{
    Graph g = path_graph("101");
    EXPECT_EQ(g.size(), 3);
    EXPECT_TRUE(g.has_edge(0, 1));
    EXPECT_TRUE(g.has_edge(1, 2));
    EXPECT_TRUE(g.is_looped(0));
    EXPECT_FALSE(g.is_looped(1));
    EXPECT_TRUE(g.is_looped(2));
    EXPECT_FALSE(g.has_edge(0, 2));
    EXPECT_EQ(g.edge_count(), 4u);

    Graph single = path_graph("0");
    EXPECT_EQ(single.size(), 1);
    EXPECT_EQ(single.edge_count(), 0u);

    Graph long_path = path_graph("10000001");
    EXPECT_EQ(long_path.size(), 8);
    EXPECT_EQ(long_path.looped_vertices(), (std::vector<int>{0, 7}));
    EXPECT_TRUE(is_tree(long_path));
}

TEST(PathGraph, RejectsBadWords)
{
    EXPECT_THROW(PathForm(""), FormatError);
    EXPECT_THROW(PathForm("102"), FormatError);
}

TEST(PathForm, CanonicalOrientation)
{
    EXPECT_EQ(PathForm("0011").canonical().word(), "0011");
    EXPECT_EQ(PathForm("1100").canonical().word(), "0011");
    EXPECT_EQ(PathForm("0100").canonical(), PathForm("0010").canonical());
}

TEST(Product, SingleLoopIsIdentity)
{
    Graph p = direct_product(path_graph("1"), path_graph("1"));
    EXPECT_EQ(p.size(), 1);
    EXPECT_TRUE(p.is_looped(0));
}

TEST(Product, TwoVertexSquareByDefinition)
{
    Graph a = path_graph("10");
    Graph p = direct_product(a, a);
    ASSERT_EQ(p.size(), 4);
    // vertex (x,u) is 2x+u; 0 is the loop of P10
    EXPECT_TRUE(p.is_looped(0));
    EXPECT_TRUE(p.has_edge(0, 1));
    EXPECT_TRUE(p.has_edge(0, 2));
    EXPECT_TRUE(p.has_edge(0, 3));
    EXPECT_EQ(p.neighbors(3).size(), 1u);
    // (0,1) and (1,0) are adjacent since 0-1 is an edge in both factors
    EXPECT_TRUE(p.has_edge(1, 2));
    EXPECT_EQ(power(a, 2), p);
}

TEST(Product, SquareOfP101Loops)
{
    Graph p = power(path_graph("101"), 2);
    EXPECT_EQ(p.size(), 9);
    EXPECT_EQ(p.looped_vertices(), (std::vector<int>{0, 2, 6, 8}));
}

TEST(Product, PowerBasics)
{
    Graph g = path_graph("0110");
    EXPECT_EQ(power(g, 1), g);
    EXPECT_EQ(power(g, 3).size(), 64);
    EXPECT_THROW(power(g, 0), PreconditionError);
}

TEST(Product, EdgeCountMatchesPairEnumeration)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = random_graph(rng, 1 + trial % 5, 0.4);
        Graph h = random_graph(rng, 1 + (trial / 5) % 5, 0.4);
        Graph p = direct_product(g, h);
        std::set<std::pair<int, int>> pairs;
        for (int x = 0; x < g.size(); ++x)
            for (int y = 0; y < g.size(); ++y)
                for (int u = 0; u < h.size(); ++u)
                    for (int v = 0; v < h.size(); ++v)
                        if (g.has_edge(x, y) && h.has_edge(u, v)) {
                            int a = x * h.size() + u, b = y * h.size() + v;
                            pairs.emplace(std::min(a, b), std::max(a, b));
                        }
        EXPECT_EQ(p.edge_count(), pairs.size());
    }
}

TEST(Homomorphism, Examples)
{
    Graph g = path_graph("0110");
    std::vector<int> id{0, 1, 2, 3};
    EXPECT_TRUE(is_homomorphism(g, g, id));
    std::vector<int> constant(4, 1);
    EXPECT_TRUE(is_homomorphism(g, g, constant));
    std::vector<int> two(2, 0);
    EXPECT_FALSE(is_homomorphism(path_graph("00"), path_graph("00"), two));
}

TEST(Homomorphism, FlagsAreSetByCheckers)
{
    auto g = std::make_shared<const Graph>(path_graph("010"));
    auto h = std::make_shared<const Graph>(path_graph("01"));
    VertexMap f(g, h, {0, 1, 0});
    EXPECT_FALSE(f.verified_homomorphism());
    EXPECT_TRUE(is_surjective_homomorphism(f));
    EXPECT_TRUE(f.verified_surjective());
    EXPECT_TRUE(f.verified_homomorphism());

    VertexMap sub(h, g, {0, 1});
    EXPECT_TRUE(is_homomorphism(sub));
    EXPECT_FALSE(is_surjective_homomorphism(sub));
}

TEST(Homomorphism, AgreesWithNaiveCheck)
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        Graph g = random_graph(rng, 1 + trial % 6, 0.35);
        Graph h = random_graph(rng, 1 + (trial / 6) % 5, 0.5);
        std::vector<int> image(static_cast<std::size_t>(g.size()));
        for (auto& x : image)
            x = std::uniform_int_distribution<int>(0, h.size() - 1)(rng);
        bool naive = true;
        for (int u = 0; u < g.size(); ++u)
            for (int v = 0; v < g.size(); ++v)
                if (g.has_edge(u, v) && !h.has_edge(image[static_cast<std::size_t>(u)], image[static_cast<std::size_t>(v)]))
                    naive = false;
        EXPECT_EQ(is_homomorphism(g, h, image), naive);
    }
}

TEST(SurjectiveSearch, Examples)
{
    auto r = find_surjective_homomorphism(power(path_graph("100"), 2), path_graph("00100"), 100000);
    ASSERT_EQ(r.status, SearchStatus::found);
    EXPECT_TRUE(is_surjective_homomorphism(power(path_graph("100"), 2), path_graph("00100"), *r.image));

    EXPECT_EQ(find_surjective_homomorphism(path_graph("00"), path_graph("000"), 1000).status, SearchStatus::refuted);
    EXPECT_EQ(find_surjective_homomorphism(path_graph("11"), path_graph("10"), 1000).status, SearchStatus::refuted);
    EXPECT_THROW(find_surjective_homomorphism(path_graph("1"), path_graph("1"), 0), PreconditionError);
}

TEST(SurjectiveSearch, BudgetExhaustionIsReported)
{
    auto r = find_surjective_homomorphism(power(path_graph("00000"), 2), path_graph("0000000"), 3);
    EXPECT_EQ(r.status, SearchStatus::exhausted);
    EXPECT_FALSE(r.image);
}

TEST(SurjectiveSearch, ReturnedMapsAlwaysVerify)
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        Graph g = random_graph(rng, 2 + trial % 6, 0.4);
        Graph h = random_graph(rng, 1 + trial % 4, 0.5);
        for (bool surj : {false, true}) {
            auto r = find_homomorphism(g, h, 100000, surj);
            ASSERT_NE(r.status, SearchStatus::exhausted);
            if (r.image) {
                EXPECT_EQ(r.status, SearchStatus::found);
                EXPECT_TRUE(surj ? is_surjective_homomorphism(g, h, *r.image) : is_homomorphism(g, h, *r.image));
            }
            else {
                // refutation cross-checked by brute force
                std::vector<int> image(static_cast<std::size_t>(g.size()), 0);
                bool any = false;
                while (!any) {
                    any = surj ? is_surjective_homomorphism(g, h, image) : is_homomorphism(g, h, image);
                    std::size_t i = 0;
                    while (i < image.size() && ++image[i] == h.size())
                        image[i++] = 0;
                    if (i == image.size())
                        break;
                }
                EXPECT_FALSE(any);
            }
        }
    }
}

TEST(Distances, LoopDistance)
{
    EXPECT_EQ(loop_distance(path_graph("101"), 1), 1);
    Graph refl = path_graph("1111");
    for (int v = 0; v < 4; ++v)
        EXPECT_EQ(loop_distance(refl, v), 0);
    EXPECT_FALSE(loop_distance(path_graph("000"), 1).has_value());
}

TEST(Distances, SymmetricAndTriangle)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Graph g = random_graph(rng, 1 + trial % 8, 0.3);
        auto d = distances(g);
        for (int x = 0; x < g.size(); ++x)
            for (int y = 0; y < g.size(); ++y) {
                EXPECT_EQ(d[x][y], d[y][x]);
                for (int z = 0; z < g.size(); ++z)
                    if (d[x][y] && d[y][z]) {
                        ASSERT_TRUE(d[x][z]);
                        EXPECT_LE(*d[x][z], *d[x][y] + *d[y][z]);
                    }
            }
    }
}

TEST(RootedTree, ParityAndMeet)
{
    Graph t = path_graph("00000");
    RootedTree r(t, 2);
    EXPECT_EQ(r.depth(0), 2);
    EXPECT_EQ(r.parity(1), 1);
    EXPECT_EQ(r.parent(2), -1);
    EXPECT_EQ(r.meet(0, 1), 1);
    EXPECT_EQ(r.meet(0, 4), 2);
    EXPECT_EQ(r.ancestor_at(0, 1), 1);
    EXPECT_EQ(tree_median(r, 0, 1, 4), 1);
}

TEST(RootedTree, MedianLiesOnAllThreePaths)
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        Graph t = random_tree(rng, 2 + trial % 9, 0.0);
        RootedTree r(t, 0);
        auto d = distances(t);
        for (int x = 0; x < t.size(); ++x)
            for (int y = 0; y < t.size(); ++y)
                for (int z = 0; z < t.size(); ++z) {
                    int m = tree_median(r, x, y, z);
                    EXPECT_EQ(*d[x][m] + *d[m][y], *d[x][y]);
                    EXPECT_EQ(*d[y][m] + *d[m][z], *d[y][z]);
                    EXPECT_EQ(*d[x][m] + *d[m][z], *d[x][z]);
                }
    }
}

TEST(TextFormat, RoundTrip)
{
    Graph g = parse_graph("4 # four vertices\n1 2\n2 3\n3 3\n3 4\n");
    EXPECT_EQ(g, path_graph("0010"));
    EXPECT_EQ(parse_graph(print_graph(g)), g);
    EXPECT_EQ(parse_path(print_path(PathForm("10010"))), PathForm("10010"));
    EXPECT_THROW(parse_graph("3\n1 4\n"), FormatError);
    EXPECT_THROW(parse_graph("3\n1\n"), FormatError);
    EXPECT_THROW(parse_graph("x"), FormatError);
    EXPECT_THROW(parse_path("1a0"), FormatError);
}

TEST(Forest, Predicates)
{
    Graph f(4);
    f.add_edge(0, 1);
    f.add_edge(2, 3);
    f.add_loop(2);
    EXPECT_TRUE(is_forest(f));
    EXPECT_FALSE(is_tree(f));
    f.add_edge(1, 2);
    EXPECT_TRUE(is_tree(f));
    f.add_edge(0, 3);
    EXPECT_FALSE(is_forest(f));
}

TEST(Enumeration, UnlabelledTreeCounts)
{
    // number of unlabelled free trees on n vertices
    const std::size_t expected[] = {1, 1, 1, 2, 3, 6, 11, 23};
    for (int n = 1; n <= 8; ++n)
        EXPECT_EQ(enumerate_trees(n, false).size(), expected[n - 1]) << n;
}

TEST(Enumeration, LoopedCountsMatchBruteForce)
{
    for (int n = 1; n <= 5; ++n) {
        std::set<std::string> forms;
        for (const auto& t : enumerate_trees(n, false))
            for (unsigned mask = 0; mask < (1U << n); ++mask) {
                Graph g = t;
                for (int v = 0; v < n; ++v)
                    if (mask >> v & 1U)
                        g.add_loop(v);
                forms.insert(tree_canonical_form(g));
            }
        EXPECT_EQ(enumerate_trees(n, true).size(), forms.size());
    }
    // paths of length 3 up to reversal: 000 001 010 011 101 111 and the 2 stars coincide
    EXPECT_EQ(enumerate_trees(3, true).size(), 6u);
}

TEST(Enumeration, WalkCriterionMatchesLiteralWalks)
{
    for (int n = 1; n <= 7; ++n)
        for (const auto& t : enumerate_trees(n, true)) {
            auto loops = t.looped_vertices();
            if (loops.empty())
                continue;
            auto d = bfs_distances(t, loops);
            for (int v = 0; v < n; ++v)
                for (int len = 0; len <= n; ++len) {
                    auto targets = exact_walk_targets(t, v, len);
                    bool reaches = false;
                    for (int l : loops)
                        reaches = reaches || targets[static_cast<std::size_t>(l)];
                    EXPECT_EQ(reaches, *d[static_cast<std::size_t>(v)] <= len);
                }
        }
}
