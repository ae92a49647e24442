#include "qcsp/polymorph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace qcsp {

bool is_majority(const TernaryTable& f)
{
    const int n = f.size();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (f(x, x, y) != x || f(x, y, x) != x || f(y, x, x) != x)
                return false;
    return true;
}

bool is_majority(TernaryTable& f)
{
    f.verified_majority_ = is_majority(static_cast<const TernaryTable&>(f));
    return f.verified_majority_;
}

bool is_polymorphism(const TernaryTable& f, const Graph& g)
{
    if (f.size() != g.size())
        throw PreconditionError("table and graph sizes differ");
    const auto arcs = g.arcs();
    for (auto [a, a2] : arcs)
        for (auto [b, b2] : arcs)
            for (auto [c, c2] : arcs)
                if (!g.has_edge(f(a, b, c), f(a2, b2, c2)))
                    return false;
    return true;
}

namespace {

// Rooted irreflexive tree given by parent/depth arrays over global ids.
struct Rooting {
    int root;
    const std::vector<int>& parent;
    const std::vector<int>& depth;
    const Graph& g;

    int dep(int v) const { return v == root ? 0 : depth[static_cast<std::size_t>(v)]; }
    int up(int v) const { return v == root ? -1 : parent[static_cast<std::size_t>(v)]; }

    int meet(int x, int y) const
    {
        while (dep(x) > dep(y))
            x = up(x);
        while (dep(y) > dep(x))
            y = up(y);
        while (x != y) {
            x = up(x);
            y = up(y);
        }
        return x;
    }

    // d [-1]: d itself when its parity matches, else one step towards the root
    // (or away from it at the root).
    int adjust(int d, int parity) const
    {
        if (dep(d) % 2 == parity)
            return d;
        if (d != root)
            return up(d);
        for (int w : g.neighbors(root))
            if (w != root && up(w) == root)
                return w;
        throw std::logic_error("f0 needs a child of the root");
    }

    int f0(int x, int y, int z) const
    {
        const int px = dep(x) % 2, py = dep(y) % 2, pz = dep(z) % 2;
        if (px == py && py == pz) {
            int d = meet(x, y);
            for (int m : {meet(y, z), meet(x, z)})
                if (dep(m) > dep(d))
                    d = m;
            return adjust(d, px);
        }
        if (px == py)
            return adjust(meet(x, y), px);
        if (py == pz)
            return adjust(meet(y, z), py);
        return adjust(meet(x, z), px);
    }
};

} // namespace

TernaryTable f0_table(const RootedTree& t)
{
    const Graph& g = t.graph();
    if (!g.is_irreflexive())
        throw PreconditionError("f0 needs an irreflexive tree");
    if (g.degree_without_loop(t.root()) > 1)
        throw PreconditionError("f0 needs a root of degree one");
    std::vector<int> parent(static_cast<std::size_t>(g.size())), depth(static_cast<std::size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v) {
        parent[static_cast<std::size_t>(v)] = t.parent(v);
        depth[static_cast<std::size_t>(v)] = t.depth(v);
    }
    Rooting r{t.root(), parent, depth, g};
    TernaryTable f(g.size());
    for (int x = 0; x < g.size(); ++x)
        for (int y = 0; y < g.size(); ++y)
            for (int z = 0; z < g.size(); ++z)
                f.set(x, y, z, r.f0(x, y, z));
    return f;
}

TernaryTable median_table(const Graph& tree)
{
    if (!tree.is_reflexive())
        throw PreconditionError("median table needs a reflexive tree");
    RootedTree t(tree, 0);
    TernaryTable f(tree.size());
    for (int x = 0; x < tree.size(); ++x)
        for (int y = 0; y < tree.size(); ++y)
            for (int z = 0; z < tree.size(); ++z)
                f.set(x, y, z, tree_median(t, x, y, z));
    return f;
}

namespace {

bool loops_connected(const Graph& g)
{
    auto loops = g.looped_vertices();
    return loops.size() <= 1 || is_connected(g.induced(loops));
}

} // namespace

ComponentStructure component_structure(const Graph& tree)
{
    if (!is_tree(tree))
        throw PreconditionError("component structure needs a tree");
    if (!loops_connected(tree))
        throw PreconditionError("tree is not loop-connected");
    const auto n = static_cast<std::size_t>(tree.size());
    ComponentStructure cs;
    cs.member_of.resize(n);
    cs.parent.assign(n, -1);
    cs.depth.assign(n, 0);
    cs.centre = tree.looped_vertices();
    for (int l : cs.centre)
        for (int w : tree.neighbors(l)) {
            if (tree.is_looped(w))
                continue;
            ComponentStructure::Component comp{l, {l}};
            const int id = static_cast<int>(cs.components.size());
            cs.member_of[static_cast<std::size_t>(l)].push_back(id);
            cs.parent[static_cast<std::size_t>(w)] = l;
            cs.depth[static_cast<std::size_t>(w)] = 1;
            std::vector<int> stack{w};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                comp.vertices.push_back(v);
                cs.member_of[static_cast<std::size_t>(v)].push_back(id);
                for (int u : tree.neighbors(v))
                    if (u != v && u != cs.parent[static_cast<std::size_t>(v)]) {
                        cs.parent[static_cast<std::size_t>(u)] = v;
                        cs.depth[static_cast<std::size_t>(u)] = cs.depth[static_cast<std::size_t>(v)] + 1;
                        stack.push_back(u);
                    }
            }
            cs.components.push_back(std::move(comp));
        }
    return cs;
}

TernaryTable f1_table(const Graph& tree)
{
    if (!is_tree(tree))
        throw PreconditionError("f1 needs a tree");
    if (tree.is_irreflexive()) {
        int leaf = 0;
        for (int v = 0; v < tree.size(); ++v)
            if (tree.degree_without_loop(v) <= 1) {
                leaf = v;
                break;
            }
        return f0_table(RootedTree(tree, leaf));
    }
    const ComponentStructure cs = component_structure(tree);
    const RootedTree whole(tree, 0);
    const int n = tree.size();

    auto in = [&](int v, int comp) {
        const auto& m = cs.member_of[static_cast<std::size_t>(v)];
        return std::find(m.begin(), m.end(), comp) != m.end();
    };

    TernaryTable f(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const int args[3] = {x, y, z};
                int value = -1;
                // Rule A
                for (int k : cs.member_of[static_cast<std::size_t>(x)])
                    if (in(y, k) && in(z, k)) {
                        Rooting r{cs.components[static_cast<std::size_t>(k)].root, cs.parent, cs.depth, tree};
                        value = r.f0(x, y, z);
                        break;
                    }
                // Rules B and C; every applicable pair must agree
                if (value < 0)
                    for (int i = 0; i < 3; ++i) {
                        const int u = args[i], v = args[(i + 1) % 3], other = args[(i + 2) % 3];
                        for (int k : cs.member_of[static_cast<std::size_t>(u)]) {
                            if (!in(v, k) || in(other, k))
                                continue;
                            Rooting r{cs.components[static_cast<std::size_t>(k)].root, cs.parent, cs.depth, tree};
                            const int pu = r.dep(u) % 2, pv = r.dep(v) % 2;
                            const int candidate = pu == pv ? r.adjust(r.meet(u, v), pu) : r.root;
                            if (value >= 0 && value != candidate)
                                throw std::logic_error("f1 rules B/C disagree at a shared root");
                            value = candidate;
                        }
                    }
                // Rule D
                if (value < 0)
                    value = tree_median(whole, x, y, z);
                f.set(x, y, z, value);
            }
    return f;
}

namespace {

struct SearchAbort {};

class TableSearch {
public:
    TableSearch(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget)
    {
        if (g.size() > 64)
            throw PreconditionError("majority search supports at most 64 vertices");
        n_ = g.size();
        cells_ = n_ * n_ * n_;
        for (int c = 0; c < n_; ++c) {
            std::uint64_t m = 0;
            for (int d : g.neighbors(c))
                m |= 1ULL << d;
            nbr_.push_back(m);
            if (g.is_looped(c))
                looped_ |= 1ULL << c;
        }
        cube_ = power(g, 3);
    }

    TableSearchResult run()
    {
        const std::uint64_t full = n_ == 64 ? ~0ULL : (1ULL << n_) - 1;
        std::vector<std::uint64_t> dom(static_cast<std::size_t>(cells_), full);
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < n_; ++y)
                for (int z = 0; z < n_; ++z) {
                    auto& d = dom[static_cast<std::size_t>((x * n_ + y) * n_ + z)];
                    if (x == y || x == z)
                        d &= 1ULL << x;
                    else if (y == z)
                        d &= 1ULL << y;
                    if (cube_.is_looped((x * n_ + y) * n_ + z))
                        d &= looped_;
                }
        TableSearchResult result{SearchStatus::refuted, std::nullopt, 0};
        try {
            if (propagate(dom, all_cells()) && search(dom)) {
                TernaryTable t(n_);
                for (int c = 0; c < cells_; ++c)
                    t.set(c / (n_ * n_), c / n_ % n_, c % n_, std::countr_zero(solution_[static_cast<std::size_t>(c)]));
                result.status = SearchStatus::found;
                result.table = std::move(t);
            }
        }
        catch (const SearchAbort&) {
            result.status = SearchStatus::exhausted;
        }
        result.nodes = nodes_;
        return result;
    }

private:
    std::vector<int> all_cells() const
    {
        std::vector<int> out(static_cast<std::size_t>(cells_));
        for (int c = 0; c < cells_; ++c)
            out[static_cast<std::size_t>(c)] = c;
        return out;
    }

    bool propagate(std::vector<std::uint64_t>& dom, std::vector<int> queue) const
    {
        std::vector<char> queued(static_cast<std::size_t>(cells_), 0);
        for (int c : queue)
            queued[static_cast<std::size_t>(c)] = 1;
        while (!queue.empty()) {
            const int c = queue.back();
            queue.pop_back();
            queued[static_cast<std::size_t>(c)] = 0;
            // support for every neighbour of c in the cube
            std::uint64_t reach = 0;
            for (std::uint64_t m = dom[static_cast<std::size_t>(c)]; m; m &= m - 1)
                reach |= nbr_[static_cast<std::size_t>(std::countr_zero(m))];
            for (int w : cube_.neighbors(c)) {
                if (w == c)
                    continue;
                auto& dw = dom[static_cast<std::size_t>(w)];
                const std::uint64_t keep = dw & reach;
                if (keep == dw)
                    continue;
                if (!keep)
                    return false;
                dw = keep;
                if (!queued[static_cast<std::size_t>(w)]) {
                    queued[static_cast<std::size_t>(w)] = 1;
                    queue.push_back(w);
                }
            }
        }
        return true;
    }

    bool search(const std::vector<std::uint64_t>& dom)
    {
        int best = -1, best_size = 65;
        for (int c = 0; c < cells_; ++c) {
            const int sz = std::popcount(dom[static_cast<std::size_t>(c)]);
            if (sz > 1 && sz < best_size) {
                best = c;
                best_size = sz;
            }
        }
        if (best < 0) {
            solution_ = dom;
            return true;
        }
        for (std::uint64_t m = dom[static_cast<std::size_t>(best)]; m; m &= m - 1) {
            if (++nodes_ > budget_)
                throw SearchAbort{};
            auto next = dom;
            next[static_cast<std::size_t>(best)] = m & -m;
            if (propagate(next, {best}) && search(next))
                return true;
        }
        return false;
    }

    const Graph& g_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    int n_ = 0;
    int cells_ = 0;
    std::vector<std::uint64_t> nbr_;
    std::uint64_t looped_ = 0;
    Graph cube_;
    std::vector<std::uint64_t> solution_;
};

} // namespace

TableSearchResult search_majority_polymorphism(const Graph& g, std::uint64_t node_budget)
{
    if (node_budget == 0)
        throw PreconditionError("node budget must be positive");
    if (g.size() == 0)
        throw PreconditionError("graph must be nonempty");
    TableSearch s(g, node_budget);
    return s.run();
}

std::string print_table(const TernaryTable& f)
{
    std::ostringstream out;
    out << f.size() << '\n';
    for (int x = 0; x < f.size(); ++x)
        for (int y = 0; y < f.size(); ++y)
            for (int z = 0; z < f.size(); ++z)
                out << x + 1 << ' ' << y + 1 << ' ' << z + 1 << " -> " << f(x, y, z) + 1 << '\n';
    return out.str();
}

} // namespace qcsp
