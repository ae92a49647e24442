#include "qcsp/graphs.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace qcsp {

Graph Graph::from_adjacency(std::vector<std::vector<int>> adj)
{
    Graph g;
    g.loop_.assign(adj.size(), 0);
    for (std::size_t v = 0; v < adj.size(); ++v)
        g.loop_[v] = std::binary_search(adj[v].begin(), adj[v].end(), static_cast<int>(v)) ? 1 : 0;
    g.adj_ = std::move(adj);
    return g;
}

void Graph::add_edge(int u, int v)
{
    if (u < 0 || v < 0 || u >= size() || v >= size())
        throw PreconditionError("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
    auto insert = [](std::vector<int>& list, int x) {
        auto it = std::lower_bound(list.begin(), list.end(), x);
        if (it == list.end() || *it != x)
            list.insert(it, x);
    };
    insert(adj_[static_cast<std::size_t>(u)], v);
    insert(adj_[static_cast<std::size_t>(v)], u);
    if (u == v)
        loop_[static_cast<std::size_t>(u)] = 1;
}

bool Graph::has_edge(int u, int v) const
{
    const auto& list = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(list.begin(), list.end(), v);
}

int Graph::degree_without_loop(int v) const
{
    return static_cast<int>(neighbors(v).size()) - (is_looped(v) ? 1 : 0);
}

std::vector<int> Graph::looped_vertices() const
{
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (is_looped(v))
            out.push_back(v);
    return out;
}

bool Graph::is_reflexive() const
{
    return std::all_of(loop_.begin(), loop_.end(), [](auto b) { return b != 0; });
}

bool Graph::is_irreflexive() const
{
    return std::none_of(loop_.begin(), loop_.end(), [](auto b) { return b != 0; });
}

std::size_t Graph::edge_count() const
{
    std::size_t twice = 0, loops = 0;
    for (int v = 0; v < size(); ++v) {
        twice += neighbors(v).size();
        loops += is_looped(v) ? 1 : 0;
    }
    return (twice - loops) / 2 + loops;
}

std::vector<std::pair<int, int>> Graph::arcs() const
{
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < size(); ++v)
        for (int w : neighbors(v))
            out.emplace_back(v, w);
    return out;
}

Graph Graph::loopless() const
{
    auto adj = adj_;
    for (std::size_t v = 0; v < adj.size(); ++v)
        std::erase(adj[v], static_cast<int>(v));
    return from_adjacency(std::move(adj));
}

Graph Graph::induced(std::span<const int> keep) const
{
    std::vector<int> index(adj_.size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i)
        index[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    Graph out(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (int w : neighbors(keep[i]))
            if (index[static_cast<std::size_t>(w)] >= 0)
                out.add_edge(static_cast<int>(i), index[static_cast<std::size_t>(w)]);
    return out;
}

PathForm::PathForm(std::string word) : word_(std::move(word))
{
    if (word_.empty())
        throw FormatError("path word must be nonempty");
    for (char c : word_)
        if (c != '0' && c != '1')
            throw FormatError(std::string("path word may contain only 0 and 1, got '") + c + "'");
}

PathForm PathForm::reversed() const
{
    return PathForm(std::string(word_.rbegin(), word_.rend()));
}

PathForm PathForm::canonical() const
{
    return std::min(*this, reversed());
}

Graph path_graph(const PathForm& form)
{
    Graph g(form.size());
    for (int i = 0; i < form.size(); ++i) {
        if (form.looped(i + 1))
            g.add_loop(i);
        if (i + 1 < form.size())
            g.add_edge(i, i + 1);
    }
    return g;
}

Graph direct_product(const Graph& g, const Graph& h)
{
    const int nh = h.size();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.size()) * static_cast<std::size_t>(nh));
    for (int x = 0; x < g.size(); ++x)
        for (int u = 0; u < nh; ++u) {
            auto& list = adj[static_cast<std::size_t>(x * nh + u)];
            for (int y : g.neighbors(x))
                for (int v : h.neighbors(u))
                    list.push_back(y * nh + v);
        }
    return Graph::from_adjacency(std::move(adj));
}

Graph power(const Graph& g, int k)
{
    if (k < 1)
        throw PreconditionError("power exponent must be at least 1");
    Graph out = g;
    for (int i = 1; i < k; ++i)
        out = direct_product(out, g);
    return out;
}

std::vector<std::vector<int>> connected_components(const Graph& g)
{
    std::vector<int> seen(static_cast<std::size_t>(g.size()), 0);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.size(); ++s) {
        if (seen[static_cast<std::size_t>(s)])
            continue;
        std::vector<int> comp{s};
        seen[static_cast<std::size_t>(s)] = 1;
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (int w : g.neighbors(comp[i]))
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    comp.push_back(w);
                }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

bool is_connected(const Graph& g)
{
    return g.size() > 0 && connected_components(g).size() == 1;
}

bool is_forest(const Graph& g)
{
    std::size_t simple_edges = 0;
    for (int v = 0; v < g.size(); ++v)
        simple_edges += static_cast<std::size_t>(g.degree_without_loop(v));
    simple_edges /= 2;
    return simple_edges + connected_components(g).size() == static_cast<std::size_t>(g.size());
}

bool is_tree(const Graph& g)
{
    return is_connected(g) && is_forest(g);
}

VertexMap::VertexMap(std::shared_ptr<const Graph> domain, std::shared_ptr<const Graph> codomain, std::vector<int> image)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), image_(std::move(image))
{
    if (static_cast<int>(image_.size()) != domain_->size())
        throw PreconditionError("vertex map must be total on its domain");
    for (int w : image_)
        if (w < 0 || w >= codomain_->size())
            throw PreconditionError("vertex map image out of codomain range");
}

bool is_homomorphism(const Graph& g, const Graph& h, std::span<const int> image)
{
    if (static_cast<int>(image.size()) != g.size())
        return false;
    for (int v = 0; v < g.size(); ++v)
        for (int w : g.neighbors(v))
            if (w >= v && !h.has_edge(image[static_cast<std::size_t>(v)], image[static_cast<std::size_t>(w)]))
                return false;
    return true;
}

bool is_surjective_homomorphism(const Graph& g, const Graph& h, std::span<const int> image)
{
    if (!is_homomorphism(g, h, image))
        return false;
    std::vector<char> hit(static_cast<std::size_t>(h.size()), 0);
    for (int w : image)
        hit[static_cast<std::size_t>(w)] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

bool is_homomorphism(VertexMap& f)
{
    f.verified_hom_ = is_homomorphism(*f.domain_, *f.codomain_, f.image_);
    return f.verified_hom_;
}

bool is_surjective_homomorphism(VertexMap& f)
{
    f.verified_surj_ = is_surjective_homomorphism(*f.domain_, *f.codomain_, f.image_);
    f.verified_hom_ = f.verified_hom_ || f.verified_surj_;
    return f.verified_surj_;
}

std::string_view to_string(SearchStatus s)
{
    switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::refuted: return "refuted";
    case SearchStatus::exhausted: return "exhausted";
    }
    return "?";
}

namespace {

struct BudgetExceeded {};

class HomSearch {
public:
    HomSearch(const Graph& g, const Graph& h, std::uint64_t budget, bool surjective)
        : g_(g), h_(h), budget_(budget), surjective_(surjective)
    {
        if (h.size() > 64)
            throw PreconditionError("homomorphism search supports codomains of at most 64 vertices");
        const std::uint64_t full = h.size() == 64 ? ~0ULL : ((1ULL << h.size()) - 1);
        nbr_.resize(static_cast<std::size_t>(h.size()));
        for (int c = 0; c < h.size(); ++c)
            for (int d : h.neighbors(c))
                nbr_[static_cast<std::size_t>(c)] |= 1ULL << d;
        looped_mask_ = 0;
        for (int c = 0; c < h.size(); ++c)
            if (h.is_looped(c))
                looped_mask_ |= 1ULL << c;
        domains_.assign(static_cast<std::size_t>(g.size()), full);
        for (int v = 0; v < g.size(); ++v)
            if (g.is_looped(v))
                domains_[static_cast<std::size_t>(v)] &= looped_mask_;
        image_.assign(static_cast<std::size_t>(g.size()), -1);
        cover_.assign(static_cast<std::size_t>(h.size()), 0);
    }

    HomSearchResult run()
    {
        HomSearchResult result{SearchStatus::refuted, std::nullopt, 0};
        if (surjective_ && g_.size() < h_.size()) {
            return result;
        }
        try {
            if (search(domains_, 0)) {
                result.status = SearchStatus::found;
                result.image = image_;
            }
        }
        catch (const BudgetExceeded&) {
            result.status = SearchStatus::exhausted;
        }
        result.nodes = nodes_;
        return result;
    }

private:
    bool search(std::vector<std::uint64_t>& domains, int assigned)
    {
        if (assigned == g_.size())
            return !surjective_ || std::find(cover_.begin(), cover_.end(), 0) == cover_.end();
        if (surjective_ && !coverable(domains, assigned))
            return false;

        int best = -1, best_size = 65;
        for (int v = 0; v < g_.size(); ++v)
            if (image_[static_cast<std::size_t>(v)] < 0) {
                int sz = std::popcount(domains[static_cast<std::size_t>(v)]);
                if (sz < best_size) {
                    best = v;
                    best_size = sz;
                }
            }
        if (best_size == 0)
            return false;

        std::uint64_t dom = domains[static_cast<std::size_t>(best)];
        while (dom) {
            const int c = std::countr_zero(dom);
            dom &= dom - 1;
            if (++nodes_ > budget_)
                throw BudgetExceeded{};
            std::vector<std::uint64_t> next = domains;
            next[static_cast<std::size_t>(best)] = 1ULL << c;
            bool ok = true;
            for (int w : g_.neighbors(best)) {
                if (w == best)
                    continue;
                auto& d = next[static_cast<std::size_t>(w)];
                d &= nbr_[static_cast<std::size_t>(c)];
                if (!d) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            image_[static_cast<std::size_t>(best)] = c;
            ++cover_[static_cast<std::size_t>(c)];
            if (search(next, assigned + 1))
                return true;
            --cover_[static_cast<std::size_t>(c)];
            image_[static_cast<std::size_t>(best)] = -1;
        }
        return false;
    }

    bool coverable(const std::vector<std::uint64_t>& domains, int assigned) const
    {
        std::uint64_t reachable = 0;
        int uncovered = 0;
        for (int v = 0; v < g_.size(); ++v)
            if (image_[static_cast<std::size_t>(v)] < 0)
                reachable |= domains[static_cast<std::size_t>(v)];
        for (int c = 0; c < h_.size(); ++c)
            if (cover_[static_cast<std::size_t>(c)] == 0) {
                ++uncovered;
                if (!(reachable >> c & 1ULL))
                    return false;
            }
        return uncovered <= g_.size() - assigned;
    }

    const Graph& g_;
    const Graph& h_;
    std::uint64_t budget_;
    bool surjective_;
    std::uint64_t nodes_ = 0;
    std::vector<std::uint64_t> nbr_;
    std::uint64_t looped_mask_ = 0;
    std::vector<std::uint64_t> domains_;
    std::vector<int> image_;
    std::vector<int> cover_;
};

} // namespace

HomSearchResult find_homomorphism(const Graph& g, const Graph& h, std::uint64_t node_budget, bool surjective)
{
    if (node_budget == 0)
        throw PreconditionError("node budget must be positive");
    if (h.size() == 0)
        return {g.size() == 0 ? SearchStatus::found : SearchStatus::refuted,
                g.size() == 0 ? std::optional<std::vector<int>>(std::vector<int>{}) : std::nullopt, 0};
    HomSearch search(g, h, node_budget, surjective);
    return search.run();
}

std::vector<Distance> bfs_distances(const Graph& g, std::span<const int> sources)
{
    std::vector<Distance> dist(static_cast<std::size_t>(g.size()));
    std::queue<int> q;
    for (int s : sources)
        if (!dist[static_cast<std::size_t>(s)]) {
            dist[static_cast<std::size_t>(s)] = 0;
            q.push(s);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : g.neighbors(v))
            if (!dist[static_cast<std::size_t>(w)]) {
                dist[static_cast<std::size_t>(w)] = *dist[static_cast<std::size_t>(v)] + 1;
                q.push(w);
            }
    }
    return dist;
}

std::vector<std::vector<Distance>> distances(const Graph& g)
{
    std::vector<std::vector<Distance>> table;
    table.reserve(static_cast<std::size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v) {
        const int src[] = {v};
        table.push_back(bfs_distances(g, src));
    }
    return table;
}

Distance loop_distance(const Graph& g, int v)
{
    auto loops = g.looped_vertices();
    if (loops.empty())
        return std::nullopt;
    return bfs_distances(g, loops)[static_cast<std::size_t>(v)];
}

std::vector<bool> exact_walk_targets(const Graph& g, int from, int length)
{
    std::vector<bool> cur(static_cast<std::size_t>(g.size()), false);
    cur[static_cast<std::size_t>(from)] = true;
    for (int step = 0; step < length; ++step) {
        std::vector<bool> next(cur.size(), false);
        for (int v = 0; v < g.size(); ++v)
            if (cur[static_cast<std::size_t>(v)])
                for (int w : g.neighbors(v))
                    next[static_cast<std::size_t>(w)] = true;
        cur = std::move(next);
    }
    return cur;
}

RootedTree::RootedTree(const Graph& tree, int root)
    : tree_(std::make_shared<const Graph>(tree)), root_(root)
{
    if (!is_tree(tree))
        throw PreconditionError("rooted tree requires a tree");
    if (root < 0 || root >= tree.size())
        throw PreconditionError("root out of range");
    parent_.assign(static_cast<std::size_t>(tree.size()), -1);
    depth_.assign(static_cast<std::size_t>(tree.size()), -1);
    depth_[static_cast<std::size_t>(root)] = 0;
    std::vector<int> order{root};
    for (std::size_t i = 0; i < order.size(); ++i) {
        int v = order[i];
        for (int w : tree.neighbors(v))
            if (depth_[static_cast<std::size_t>(w)] < 0) {
                depth_[static_cast<std::size_t>(w)] = depth_[static_cast<std::size_t>(v)] + 1;
                parent_[static_cast<std::size_t>(w)] = v;
                order.push_back(w);
            }
    }
}

int RootedTree::meet(int x, int y) const
{
    while (depth(x) > depth(y))
        x = parent(x);
    while (depth(y) > depth(x))
        y = parent(y);
    while (x != y) {
        x = parent(x);
        y = parent(y);
    }
    return x;
}

int RootedTree::ancestor_at(int v, int d) const
{
    if (d < 0 || d > depth(v))
        throw PreconditionError("ancestor depth out of range");
    while (depth(v) > d)
        v = parent(v);
    return v;
}

std::vector<int> RootedTree::children(int v) const
{
    std::vector<int> out;
    for (int w : tree_->neighbors(v))
        if (parent(w) == v)
            out.push_back(w);
    return out;
}

int tree_median(const RootedTree& t, int x, int y, int z)
{
    int a = t.meet(x, y), b = t.meet(y, z), c = t.meet(x, z);
    int best = a;
    if (t.depth(b) > t.depth(best))
        best = b;
    if (t.depth(c) > t.depth(best))
        best = c;
    return best;
}

namespace {

std::string strip_comments(std::string_view text)
{
    std::string out;
    bool comment = false;
    for (char c : text) {
        if (c == '#')
            comment = true;
        else if (c == '\n')
            comment = false;
        if (!comment)
            out.push_back(c);
    }
    return out;
}

} // namespace

Graph parse_graph(std::string_view text)
{
    std::istringstream in(strip_comments(text));
    long long n;
    if (!(in >> n) || n < 1)
        throw FormatError("graph file must start with a positive vertex count");
    Graph g(static_cast<int>(n));
    std::string a, b;
    while (in >> a) {
        if (!(in >> b))
            throw FormatError("dangling edge endpoint '" + a + "'");
        long long u, v;
        try {
            std::size_t pa, pb;
            u = std::stoll(a, &pa);
            v = std::stoll(b, &pb);
            if (pa != a.size() || pb != b.size())
                throw std::invalid_argument("junk");
        }
        catch (const std::exception&) {
            throw FormatError("bad edge line '" + a + " " + b + "'");
        }
        if (u < 1 || v < 1 || u > n || v > n)
            throw FormatError("edge endpoint out of range in '" + a + " " + b + "'");
        g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
    }
    return g;
}

std::string print_graph(const Graph& g)
{
    std::ostringstream out;
    out << g.size() << '\n';
    for (int v = 0; v < g.size(); ++v)
        for (int w : g.neighbors(v))
            if (w >= v)
                out << v + 1 << ' ' << w + 1 << '\n';
    return out.str();
}

PathForm parse_path(std::string_view text)
{
    std::string word;
    for (char c : strip_comments(text))
        if (!std::isspace(static_cast<unsigned char>(c)))
            word.push_back(c);
    return PathForm(std::move(word));
}

std::string print_path(const PathForm& p)
{
    return p.word() + "\n";
}

namespace {

std::vector<int> tree_centres(const Graph& g)
{
    const int n = g.size();
    if (n <= 2) {
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::vector<int> deg(static_cast<std::size_t>(n));
    std::vector<int> leaves;
    for (int v = 0; v < n; ++v) {
        deg[static_cast<std::size_t>(v)] = g.degree_without_loop(v);
        if (deg[static_cast<std::size_t>(v)] <= 1)
            leaves.push_back(v);
    }
    int remaining = n;
    while (remaining > 2) {
        remaining -= static_cast<int>(leaves.size());
        std::vector<int> next;
        for (int v : leaves) {
            deg[static_cast<std::size_t>(v)] = 0;
            for (int w : g.neighbors(v))
                if (w != v && deg[static_cast<std::size_t>(w)] > 0 && --deg[static_cast<std::size_t>(w)] == 1)
                    next.push_back(w);
        }
        leaves = std::move(next);
    }
    std::sort(leaves.begin(), leaves.end());
    return leaves;
}

std::string rooted_encoding(const Graph& g, int v, int parent)
{
    std::vector<std::string> kids;
    for (int w : g.neighbors(v))
        if (w != v && w != parent)
            kids.push_back(rooted_encoding(g, w, v));
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    out += g.is_looped(v) ? '1' : '0';
    for (auto& k : kids)
        out += k;
    out += ')';
    return out;
}

Graph tree_from_pruefer(const std::vector<int>& code, int n)
{
    Graph g(n);
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (int x : code)
        ++degree[static_cast<std::size_t>(x)];
    std::set<int> leaves;
    for (int v = 0; v < n; ++v)
        if (degree[static_cast<std::size_t>(v)] == 1)
            leaves.insert(v);
    for (int x : code) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        g.add_edge(leaf, x);
        if (--degree[static_cast<std::size_t>(x)] == 1)
            leaves.insert(x);
    }
    int u = *leaves.begin();
    int w = *std::next(leaves.begin());
    g.add_edge(u, w);
    return g;
}

} // namespace

std::string tree_canonical_form(const Graph& tree)
{
    std::string best;
    for (int c : tree_centres(tree)) {
        auto enc = rooted_encoding(tree, c, -1);
        if (best.empty() || enc < best)
            best = enc;
    }
    return std::to_string(tree.size()) + ":" + best;
}

std::vector<Graph> enumerate_trees(int n, bool with_loops)
{
    if (n < 1)
        throw PreconditionError("tree size must be positive");
    std::vector<Graph> shapes;
    if (n == 1) {
        shapes.emplace_back(1);
    }
    else if (n == 2) {
        Graph g(2);
        g.add_edge(0, 1);
        shapes.push_back(g);
    }
    else {
        std::map<std::string, Graph> seen;
        std::vector<int> code(static_cast<std::size_t>(n - 2), 0);
        while (true) {
            Graph g = tree_from_pruefer(code, n);
            seen.emplace(tree_canonical_form(g), std::move(g));
            int i = 0;
            while (i < n - 2 && ++code[static_cast<std::size_t>(i)] == n)
                code[static_cast<std::size_t>(i++)] = 0;
            if (i == n - 2)
                break;
        }
        for (auto& [key, g] : seen)
            shapes.push_back(std::move(g));
    }
    if (!with_loops)
        return shapes;

    std::map<std::string, Graph> out;
    for (const auto& shape : shapes)
        for (unsigned mask = 0; mask < (1U << n); ++mask) {
            Graph g = shape;
            for (int v = 0; v < n; ++v)
                if (mask >> v & 1U)
                    g.add_loop(v);
            out.emplace(tree_canonical_form(g), std::move(g));
        }
    std::vector<Graph> result;
    result.reserve(out.size());
    for (auto& [key, g] : out)
        result.push_back(std::move(g));
    return result;
}

} // namespace qcsp
