#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "qcsp/solver.hpp"

using namespace qcsp;

namespace {

// Plain game-tree evaluation straight from the semantics.
bool naive_eval(const Sentence& s, const Graph& t, std::vector<int>& val, std::size_t pos)
{
    if (pos == s.prefix().size()) {
        for (auto [x, y] : s.atoms())
            if (!t.has_edge(val[static_cast<std::size_t>(x)], val[static_cast<std::size_t>(y)]))
                return false;
        return true;
    }
    auto [q, v] = s.prefix()[pos];
    for (int c = 0; c < t.size(); ++c) {
        val[static_cast<std::size_t>(v)] = c;
        bool r = naive_eval(s, t, val, pos + 1);
        if (q == Quantifier::forall && !r)
            return false;
        if (q == Quantifier::exists && r)
            return true;
    }
    return q == Quantifier::forall;
}

bool naive_eval(const Sentence& s, const Graph& t)
{
    std::vector<int> val(static_cast<std::size_t>(s.variable_count()), 0);
    return naive_eval(s, t, val, 0);
}

Graph random_graph(std::mt19937& rng, int n)
{
    std::bernoulli_distribution coin(0.45);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v)
            if (coin(rng))
                g.add_edge(u, v);
    return g;
}

Graph relabel(const Graph& g, const std::vector<int>& perm)
{
    Graph out(g.size());
    for (auto [u, v] : g.arcs())
        out.add_edge(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
    return out;
}

} // namespace

TEST(Eval, Examples)
{
    Graph p101 = path_graph("101");
    EXPECT_TRUE(eval(parse_sentence("A x / E y / edge x y"), p101).holds());
    EXPECT_FALSE(eval(parse_sentence("A x / A y / edge x y"), p101).holds());
    EXPECT_FALSE(eval(parse_sentence("E x / edge x x"), path_graph("00000")).holds());
    EXPECT_TRUE(eval(parse_sentence("A x / E y / E z / edge x y / edge y z / edge z z"), path_graph("0010")).holds());
    EXPECT_FALSE(eval(parse_sentence("A x / E y / E z / edge x y / edge y z / edge z z"), path_graph("00010")).holds());
}

TEST(Eval, NodeLimitIsDistinctFromFalse)
{
    EvalConfig cfg;
    cfg.node_limit = 5;
    cfg.memoize = false;
    cfg.propagation = Propagation::none;
    auto r = eval(parse_sentence("A a / A b / E c / E d / edge a c / edge c d / edge d b"), path_graph("0000000"), cfg);
    EXPECT_EQ(r.outcome, Outcome::exhausted);
}

TEST(Eval, RejectsOpenSentencesAndBadPins)
{
    Sentence s;
    int x = s.add_free("x");
    int y = s.add_exists("y");
    s.add_atom(x, y);
    EXPECT_THROW(eval(s, path_graph("10")), PreconditionError);
    std::vector<Pin> pins{{x, 0}};
    EXPECT_TRUE(eval(s, path_graph("10"), pins).holds());
    std::vector<Pin> bad{{x, 5}};
    EXPECT_THROW(eval(s, path_graph("10"), bad), PreconditionError);
}

TEST(EvalCsp, Pinning)
{
    Graph p101 = path_graph("101");
    Sentence two_edges = parse_sentence("E a / E m / E b / edge a m / edge m b");
    std::vector<Pin> ends{{0, 0}, {2, 2}};
    EXPECT_TRUE(eval_csp(two_edges, ends, p101).holds());

    Sentence one_edge = parse_sentence("E a / E b / edge a b");
    std::vector<Pin> loops{{0, 0}, {1, 2}};
    EXPECT_FALSE(eval_csp(one_edge, loops, p101).holds());
    std::vector<Pin> out_of_range{{0, 9}};
    EXPECT_THROW(eval_csp(one_edge, out_of_range, p101), PreconditionError);
}

TEST(Eval, ConfigInvarianceAgainstNaive)
{
    std::mt19937 rng(42);
    SentenceSampler sampler{314, 8, 2, 9};
    int checked = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
        Sentence s = sample_sentence(sampler, i);
        Graph t = random_graph(rng, 1 + static_cast<int>(i % 5));
        const bool expected = naive_eval(s, t);
        for (auto prop : {Propagation::none, Propagation::arc_consistency})
            for (bool memo : {false, true})
                for (bool par : {false, true}) {
                    EvalConfig cfg{prop, memo, 10'000'000, par};
                    auto r = eval(s, t, cfg);
                    ASSERT_NE(r.outcome, Outcome::exhausted);
                    EXPECT_EQ(r.holds(), expected) << print_sentence(s) << print_graph(t);
                }
        ++checked;
    }
    EXPECT_EQ(checked, 500);
}

TEST(Eval, InvariantUnderTemplateRelabelling)
{
    std::mt19937 rng(8);
    SentenceSampler sampler{77, 6, 2, 7};
    for (std::uint64_t i = 0; i < 200; ++i) {
        Sentence s = sample_sentence(sampler, i);
        Graph t = random_graph(rng, 2 + static_cast<int>(i % 5));
        std::vector<int> perm(static_cast<std::size_t>(t.size()));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_EQ(eval(s, t).holds(), eval(s, relabel(t, perm)).holds());
    }
}

TEST(Eval, ExistentialFragmentMatchesHomSearch)
{
    std::mt19937 rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = random_graph(rng, 1 + trial % 6);
        Graph t = random_graph(rng, 1 + (trial / 6) % 5);
        Sentence s;
        for (int v = 0; v < g.size(); ++v)
            s.add_exists("v" + std::to_string(v));
        for (auto [u, v] : g.arcs())
            if (u <= v)
                s.add_atom(u, v);
        auto hom = find_homomorphism(g, t, 1'000'000, false);
        ASSERT_NE(hom.status, SearchStatus::exhausted);
        EXPECT_EQ(eval(s, t).holds(), hom.status == SearchStatus::found);
    }
}
