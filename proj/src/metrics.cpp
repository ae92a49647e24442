#include "qcsp/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcsp {

PathDecomposition decompose(const PathForm& p)
{
    const std::string& w = p.word();
    std::size_t end = w.size();
    PathDecomposition d;
    while (end > 0 && w[end - 1] == '0') {
        --end;
        ++d.a;
    }
    while (end > 0 && w[end - 1] == '1') {
        --end;
        ++d.b;
    }
    d.alpha = w.substr(0, end);
    return d;
}

std::string_view to_string(Centring c)
{
    switch (c) {
    case Centring::not_balanced: return "not";
    case Centring::zero_centred: return "0-centred";
    case Centring::one_centred: return "1-centred";
    }
    return "?";
}

namespace {

bool has_nonloop_then_loop(const std::string& seq)
{
    auto zero = seq.find('0');
    return zero != std::string::npos && seq.find('1', zero) != std::string::npos;
}

} // namespace

BalanceInfo balance(const PathForm& p)
{
    const std::string& w = p.word();
    const int n = p.size();
    BalanceInfo info;
    info.centre = (n + 1) / 2.0;
    std::string left, right;
    bool centre_loopless;
    if (n % 2 == 1) {
        const int c = (n - 1) / 2; // 0-based
        for (int i = c; i >= 0; --i)
            left.push_back(w[static_cast<std::size_t>(i)]);
        for (int i = c; i < n; ++i)
            right.push_back(w[static_cast<std::size_t>(i)]);
        centre_loopless = w[static_cast<std::size_t>(c)] == '0';
    }
    else {
        const int c1 = n / 2 - 1, c2 = n / 2;
        // a loopless centre vertex also counts as a non-loop for the other direction
        if (w[static_cast<std::size_t>(c2)] == '0')
            left.push_back('0');
        for (int i = c1; i >= 0; --i)
            left.push_back(w[static_cast<std::size_t>(i)]);
        if (w[static_cast<std::size_t>(c1)] == '0')
            right.push_back('0');
        for (int i = c2; i < n; ++i)
            right.push_back(w[static_cast<std::size_t>(i)]);
        centre_loopless = w[static_cast<std::size_t>(c1)] == '0' || w[static_cast<std::size_t>(c2)] == '0';
    }
    info.left = has_nonloop_then_loop(left);
    info.right = has_nonloop_then_loop(right);
    if (info.left && info.right)
        info.centring = centre_loopless ? Centring::zero_centred : Centring::one_centred;
    return info;
}

bool is_loop_connected(const Graph& g)
{
    if (!is_connected(g))
        throw PreconditionError("loop-connectivity is defined for connected graphs");
    auto loops = g.looped_vertices();
    return loops.size() <= 1 || is_connected(g.induced(loops));
}

bool is_zero_eccentric(const PathForm& p)
{
    for (const auto& q : {p, p.reversed()}) {
        auto d = decompose(q);
        if (static_cast<int>(d.alpha.size()) <= d.a)
            return true;
    }
    return false;
}

TreeMetrics tree_metrics(const Graph& tree)
{
    if (!is_tree(tree))
        throw PreconditionError("tree metrics need a tree");
    TreeMetrics m;
    const auto loops = tree.looped_vertices();
    m.lambda = bfs_distances(tree, loops);
    if (loops.empty()) {
        m.quasi_loop_connected = true;
        return m;
    }
    int lam = 0;
    for (const auto& d : m.lambda)
        lam = std::max(lam, *d);
    m.lambda_max = lam;

    for (auto& comp : connected_components(tree.induced(loops))) {
        std::vector<int> ids;
        for (int i : comp)
            ids.push_back(loops[static_cast<std::size_t>(i)]);
        std::sort(ids.begin(), ids.end());
        m.reflexive_subtrees.push_back(std::move(ids));
    }
    std::sort(m.reflexive_subtrees.begin(), m.reflexive_subtrees.end());

    int best = -1;
    for (std::size_t i = 0; i < m.reflexive_subtrees.size(); ++i) {
        auto dist = bfs_distances(tree, m.reflexive_subtrees[i]);
        int far = 0;
        for (const auto& d : dist)
            far = std::max(far, *d);
        if (far <= lam && (best < 0 || far < best)) {
            best = far;
            m.t0 = i;
        }
    }
    m.quasi_loop_connected = m.t0.has_value();
    if (!m.t0 || lam == 0)
        return m;

    for (int v = 0; v < tree.size(); ++v)
        if (*m.lambda[static_cast<std::size_t>(v)] == lam) {
            m.v_lambda = v;
            break;
        }
    if (tree.degree_without_loop(m.v_lambda) > 1)
        throw std::logic_error("farthest vertex of a quasi-loop-connected tree is not a leaf");
    const auto to_t0 = bfs_distances(tree, m.reflexive_subtrees[*m.t0]);
    std::vector<int> path{m.v_lambda};
    while (*to_t0[static_cast<std::size_t>(path.back())] > 0)
        for (int w : tree.neighbors(path.back()))
            if (*to_t0[static_cast<std::size_t>(w)] + 1 == *to_t0[static_cast<std::size_t>(path.back())]) {
                path.push_back(w);
                break;
            }
    std::reverse(path.begin(), path.end());
    m.l = path.front();
    m.arm = std::move(path);
    return m;
}

PrunedTree build_pruned_tree(const Graph& tree)
{
    const TreeMetrics m = tree_metrics(tree);
    if (!m.quasi_loop_connected)
        throw PreconditionError("tree is not quasi-loop-connected");
    if (tree.is_irreflexive() || tree.is_reflexive())
        throw PreconditionError("tree must be neither reflexive nor irreflexive");

    PrunedTree out;
    out.t = std::make_shared<const Graph>(tree);
    out.lambda = *m.lambda_max;

    if (is_loop_connected(tree)) {
        out.identity = true;
        out.t_prime = out.t;
        out.t_double_prime = out.t;
        out.keep.resize(static_cast<std::size_t>(tree.size()));
        for (int v = 0; v < tree.size(); ++v)
            out.keep[static_cast<std::size_t>(v)] = v;
        out.fold = out.keep;
        out.l = m.l;
        out.arm = m.arm;
        out.t0 = m.reflexive_subtrees[*m.t0];
        return out;
    }

    const RootedTree rooted(tree, m.l);
    const int first = m.arm[1];
    std::vector<char> on_arm(static_cast<std::size_t>(tree.size()), 0);
    for (int v : m.arm)
        on_arm[static_cast<std::size_t>(v)] = 1;
    auto in_branch = [&](int u) { return u != m.l && rooted.ancestor_at(u, 1) == first; };

    std::vector<int> index(static_cast<std::size_t>(tree.size()), -1);
    for (int v = 0; v < tree.size(); ++v)
        if (!in_branch(v) || on_arm[static_cast<std::size_t>(v)]) {
            index[static_cast<std::size_t>(v)] = static_cast<int>(out.keep.size());
            out.keep.push_back(v);
        }
    out.t_prime = std::make_shared<const Graph>(tree.induced(out.keep));

    out.fold.resize(static_cast<std::size_t>(tree.size()));
    for (int u = 0; u < tree.size(); ++u) {
        if (index[static_cast<std::size_t>(u)] >= 0) {
            out.fold[static_cast<std::size_t>(u)] = index[static_cast<std::size_t>(u)];
            continue;
        }
        const int k = rooted.depth(rooted.meet(u, m.v_lambda));
        const int d = rooted.depth(u) - k;
        out.fold[static_cast<std::size_t>(u)] = index[static_cast<std::size_t>(m.arm[static_cast<std::size_t>(std::max(k - d, 0))])];
    }
    if (!is_surjective_homomorphism(tree, *out.t_prime, out.fold))
        throw std::logic_error("fold onto T' is not a surjective homomorphism");

    out.l = index[static_cast<std::size_t>(m.l)];
    for (int v : m.arm)
        out.arm.push_back(index[static_cast<std::size_t>(v)]);
    std::vector<char> in_t0(static_cast<std::size_t>(tree.size()), 0);
    for (int v : m.reflexive_subtrees[*m.t0]) {
        in_t0[static_cast<std::size_t>(v)] = 1;
        out.t0.push_back(index[static_cast<std::size_t>(v)]);
    }

    const Graph& tp = *out.t_prime;
    Graph closed = tp;
    for (int r : out.t0)
        for (int w : tp.neighbors(r)) {
            if (in_t0[static_cast<std::size_t>(out.keep[static_cast<std::size_t>(w)])] || (r == out.l && w == out.arm[1]))
                continue;
            std::vector<int> sub{r, w};
            for (std::size_t i = 1; i < sub.size(); ++i)
                for (int x : tp.neighbors(sub[i]))
                    if (std::find(sub.begin(), sub.end(), x) == sub.end())
                        sub.push_back(x);
            for (std::size_t i = 1; i < sub.size(); ++i)
                closed.add_loop(sub[i]);
            out.hanging.push_back(std::move(sub));
        }
    out.t_double_prime = std::make_shared<const Graph>(std::move(closed));

    for (int u = 0; u < tree.size(); ++u) {
        if (!in_branch(u))
            continue;
        auto kids = rooted.children(u);
        if (!kids.empty())
            continue;
        std::vector<int> path;
        for (int d = 0; d <= rooted.depth(u); ++d)
            path.push_back(rooted.ancestor_at(u, d));
        out.branch_leaf_paths.push_back(std::move(path));
    }
    return out;
}

} // namespace qcsp
