#include <gtest/gtest.h>

#include <functional>

#include "qcsp/metrics.hpp"
#include "qcsp/reduce.hpp"
#include "qcsp/solver.hpp"

using namespace qcsp;

namespace {

// Plain boolean game tree; shares nothing with the compiler.
bool qnae_oracle(const QnaeInstance& phi)
{
    const std::size_t n = phi.prefix.size();
    std::vector<int> value(n, 0);
    std::function<bool(std::size_t)> play = [&](std::size_t i) -> bool {
        if (i == n) {
            for (const auto& c : phi.clauses) {
                const int s = value[static_cast<std::size_t>(c[0])] + value[static_cast<std::size_t>(c[1])] +
                              value[static_cast<std::size_t>(c[2])];
                if (s == 0 || s == 3)
                    return false;
            }
            return true;
        }
        const bool all = phi.prefix[i].first == Quantifier::forall;
        for (int b = 0; b < 2; ++b) {
            value[i] = b;
            const bool r = play(i + 1);
            if (all && !r)
                return false;
            if (!all && r)
                return true;
        }
        return all;
    };
    return play(0);
}

QnaeInstance make(std::vector<Quantifier> qs, std::vector<std::array<int, 3>> clauses)
{
    QnaeInstance phi;
    for (std::size_t i = 0; i < qs.size(); ++i)
        phi.prefix.emplace_back(qs[i], "v" + std::to_string(i));
    phi.clauses = std::move(clauses);
    return phi;
}

// Every multiset of up to `max_clauses` clauses, each a multiset of variables.
std::vector<std::vector<std::array<int, 3>>> clause_sets(int vars, int max_clauses)
{
    std::vector<std::array<int, 3>> kinds;
    for (int a = 0; a < vars; ++a)
        for (int b = a; b < vars; ++b)
            for (int c = b; c < vars; ++c)
                kinds.push_back({a, b, c});
    std::vector<std::vector<std::array<int, 3>>> out;
    std::vector<std::array<int, 3>> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (!cur.empty())
            out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_clauses)
            return;
        for (std::size_t k = from; k < kinds.size(); ++k) {
            cur.push_back(kinds[k]);
            rec(k);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

bool reduced_verdict(const QnaeInstance& phi, const PathForm& word)
{
    auto r = choose_recipe(word);
    auto s = compile(normalize(phi), r, path_graph(word));
    auto res = eval(s, path_graph(word));
    EXPECT_NE(res.outcome, Outcome::exhausted);
    return res.holds();
}

} // namespace

TEST(Qnae, ParsePrintRoundTrip)
{
    auto phi = parse_qnae("A u\nE x # comment\nE y\nc u x y\n");
    EXPECT_EQ(phi.prefix.size(), 3u);
    EXPECT_EQ(phi.clauses[0], (std::array<int, 3>{0, 1, 2}));
    EXPECT_EQ(parse_qnae(print_qnae(phi)), phi);
    EXPECT_THROW(parse_qnae("E x\nc x x z\n"), FormatError);
    EXPECT_THROW(parse_qnae("E x\nE x\n"), FormatError);
    EXPECT_THROW(parse_qnae("E x\nc x x\n"), FormatError);
}

TEST(Qnae, Normalize)
{
    auto phi = make({Quantifier::forall, Quantifier::exists, Quantifier::forall}, {{0, 2, 1}, {0, 1, 2}});
    auto n = normalize(phi);
    EXPECT_TRUE(is_normalized(n));
    EXPECT_FALSE(is_normalized(phi));
    EXPECT_EQ(n.clauses[1], phi.clauses[1]);
    EXPECT_EQ(normalize(n), n);
    auto bad = make({Quantifier::forall, Quantifier::forall}, {{0, 1, 1}});
    EXPECT_THROW(normalize(bad), PreconditionError);
}

TEST(Recipe, PaperExamples)
{
    auto r = choose_recipe(PathForm("101"));
    EXPECT_EQ(r.tag, CaseTag::p101_family);
    EXPECT_EQ(r.pattern.word(), "101");
    EXPECT_EQ(r.selector.word(), "10");
    EXPECT_FALSE(r.vertical_brace);

    r = choose_recipe(PathForm("00100010000"));
    EXPECT_EQ(r.tag, CaseTag::wb0_centred);
    EXPECT_EQ(r.pattern.word(), "10001");
    EXPECT_EQ(r.selector.word(), "10000");
    EXPECT_EQ(r.params["b"], 3);
    EXPECT_EQ(r.params["m"], 4);

    r = choose_recipe(PathForm("10101"));
    EXPECT_EQ(r.tag, CaseTag::p10101_family);
    EXPECT_EQ(r.pattern.word(), "10101");
    EXPECT_EQ(r.selector.word(), "10");
    EXPECT_TRUE(r.vertical_brace);

    r = choose_recipe(PathForm("1011101"));
    EXPECT_EQ(r.tag, CaseTag::p101d01);
    EXPECT_EQ(r.pattern.word(), "1011101");
    EXPECT_EQ(r.selector.word(), "1110");
    EXPECT_EQ(r.vertical_brace, 5);

    EXPECT_THROW(choose_recipe(PathForm("0100")), PreconditionError);
}

TEST(TreeRecipe, Parameters)
{
    auto h = tree_hardness_parameters(path_graph("101"));
    EXPECT_EQ(h.lambda, 1);
    EXPECT_EQ(h.mu, 2);
    EXPECT_EQ(h.nu, 1);
    EXPECT_EQ(h.delta, 2);
    EXPECT_TRUE(h.reflection_closed);
    EXPECT_EQ(tree_recipe(path_graph("101")).pattern.word(), "101");

    // two loops three apart, each with a long tail
    auto g = tree_hardness_parameters(path_graph("00010010000"));
    EXPECT_EQ(g.mu, 3);
    EXPECT_THROW(tree_hardness_parameters(path_graph("0100")), PreconditionError);
}

TEST(TreeRecipe, ReflectionClosedOnSmallTrees)
{
    int seen = 0;
    for (int n = 3; n <= 8 && seen < 100; ++n)
        for (const auto& t : enumerate_trees(n, true)) {
            if (is_quasi_loop_connected(t))
                continue;
            auto h = tree_hardness_parameters(t);
            EXPECT_GT(h.mu, 1);
            EXPECT_TRUE(h.reflection_closed) << print_graph(t);
            if (++seen == 100)
                break;
        }
    EXPECT_EQ(seen, 100);
}

TEST(Gadget, NaeTableOnHardPaths)
{
    for (const char* w : {"101", "010010", "00100010000", "10101", "1011101"}) {
        auto r = choose_recipe(PathForm(w));
        EXPECT_EQ(gadget_extension_check(r, path_graph(w)), nae_table) << w;
    }
}

TEST(Compile, SmallExamples)
{
    auto xyz = make({Quantifier::exists, Quantifier::exists, Quantifier::exists}, {{0, 1, 2}});
    EXPECT_TRUE(reduced_verdict(xyz, PathForm("101")));
    auto xxx = make({Quantifier::exists}, {{0, 0, 0}});
    EXPECT_FALSE(reduced_verdict(xxx, PathForm("101")));
    auto ux = make({Quantifier::forall, Quantifier::exists}, {{0, 1, 1}});
    EXPECT_TRUE(reduced_verdict(ux, PathForm("101")));
    EXPECT_THROW(compile(make({Quantifier::forall, Quantifier::exists}, {{1, 0, 1}}), choose_recipe(PathForm("101")),
                         path_graph("101")),
                 PreconditionError);
    EXPECT_THROW(compile(xyz, choose_recipe(PathForm("101")), path_graph("10101")), PreconditionError);
}

TEST(Compile, ExistentialInstancesMatchNaeOracleOnP101)
{
    int checked = 0;
    for (int vars = 1; vars <= 3; ++vars)
        for (const auto& cs : clause_sets(vars, 3)) {
            auto phi = make(std::vector<Quantifier>(static_cast<std::size_t>(vars), Quantifier::exists), cs);
            ASSERT_EQ(reduced_verdict(phi, PathForm("101")), qnae_oracle(phi)) << print_qnae(phi);
            ++checked;
        }
    EXPECT_GT(checked, 300);
}

TEST(Compile, OneUniversalInstancesMatchQnaeOracleOnP101)
{
    int checked = 0;
    for (int exist = 0; exist <= 2; ++exist)
        for (int pos = 0; pos <= exist; ++pos) {
            std::vector<Quantifier> qs(static_cast<std::size_t>(exist + 1), Quantifier::exists);
            qs[static_cast<std::size_t>(pos)] = Quantifier::forall;
            for (const auto& cs : clause_sets(exist + 1, 2)) {
                auto phi = make(qs, cs);
                bool all_universal = false;
                for (const auto& c : cs)
                    all_universal = all_universal || (c[0] == pos && c[1] == pos && c[2] == pos);
                if (all_universal)
                    continue;
                ASSERT_EQ(reduced_verdict(phi, PathForm("101")), qnae_oracle(phi)) << print_qnae(phi);
                ++checked;
            }
        }
    EXPECT_GT(checked, 30);
}

TEST(Compile, ReducedSuitesOnOtherTemplates)
{
    for (const char* w : {"10101", "010010"}) {
        for (int vars = 1; vars <= 2; ++vars)
            for (const auto& cs : clause_sets(vars, 2)) {
                auto phi = make(std::vector<Quantifier>(static_cast<std::size_t>(vars), Quantifier::exists), cs);
                ASSERT_EQ(reduced_verdict(phi, PathForm(w)), qnae_oracle(phi)) << w << '\n' << print_qnae(phi);
            }
        for (int pos = 0; pos <= 1; ++pos)
            for (const auto& cs : clause_sets(2, 2)) {
                std::vector<Quantifier> qs(2, Quantifier::exists);
                qs[static_cast<std::size_t>(pos)] = Quantifier::forall;
                auto phi = make(qs, cs);
                bool all_universal = false;
                for (const auto& c : cs)
                    all_universal = all_universal || (c[0] == pos && c[1] == pos && c[2] == pos);
                if (all_universal)
                    continue;
                ASSERT_EQ(reduced_verdict(phi, PathForm(w)), qnae_oracle(phi)) << w << '\n' << print_qnae(phi);
            }
    }
}

TEST(Compile, SmallInstancesOnEveryHardPath)
{
    std::vector<QnaeInstance> suite;
    for (const char* text : {"E x\nE y\nE z\nc x y z\n", "E x\nc x x x\n", "A u\nE x\nc u x x\n",
                             "E x\nE y\nc x x y\nc x y y\n", "A u\nE x\nc u x u\n", "E x\nA u\nc u x u\n",
                             "A u\nA v\nE x\nc u x v\n", "E x\nE y\nE z\nc x y z\nc x x y\nc y z z\n"})
        suite.push_back(normalize(parse_qnae(text)));
    int literal = 0, fallback = 0;
    for (int n = 3; n <= 8; ++n)
        for (unsigned mask = 0; mask < (1U << n); ++mask) {
            std::string w;
            for (int i = 0; i < n; ++i)
                w.push_back(mask >> i & 1U ? '1' : '0');
            const PathForm p(w);
            if (is_zero_eccentric(p) || p.canonical() != p)
                continue;
            auto r = choose_recipe(p);
            const Graph t = path_graph(p);
            if (r.fallback) {
                EXPECT_GT(r.params.at("mu"), 1) << w;
                ++fallback;
            }
            else
                ++literal;
            for (const auto& phi : suite) {
                bool universal = false;
                for (const auto& v : phi.prefix)
                    universal = universal || v.first == Quantifier::forall;
                if (r.fallback && universal)
                    continue;
                auto res = eval(compile(phi, r, t), t);
                ASSERT_EQ(res.holds(), qnae_oracle(phi)) << w << '\n' << print_qnae(phi);
            }
        }
    EXPECT_GT(literal, 150);
    EXPECT_GE(fallback, 5);
}

// With a universal in the middle slot the diamond over that slot breaks.
TEST(Compile, LiteralOrderMatters)
{
    auto phi = make({Quantifier::forall, Quantifier::exists}, {{0, 0, 1}});
    ASSERT_TRUE(qnae_oracle(phi));
    const PathForm w("10101");
    auto r = choose_recipe(w);
    const Graph t = path_graph(w);
    EXPECT_THROW(compile(phi, r, t), PreconditionError);
    EXPECT_FALSE(eval(compile(phi, r, t, CompileOptions{true}), t).holds());
    EXPECT_TRUE(eval(compile(normalize(phi), r, t), t).holds());
}

TEST(Qnae, TruthMatchesOracle)
{
    for (int vars = 1; vars <= 3; ++vars)
        for (unsigned qmask = 0; qmask < (1U << vars); ++qmask) {
            std::vector<Quantifier> qs;
            for (int i = 0; i < vars; ++i)
                qs.push_back(qmask >> i & 1U ? Quantifier::forall : Quantifier::exists);
            for (const auto& cs : clause_sets(vars, 2)) {
                auto phi = make(qs, cs);
                ASSERT_EQ(qnae_truth(phi), qnae_oracle(phi)) << print_qnae(phi);
            }
        }
}
