#include "qcsp/surject.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "qcsp/metrics.hpp"

namespace qcsp {

int surhom_entry(int m, int row, int col)
{
    if (row < 0 || col < 0 || row > m || col > m)
        throw PreconditionError("surhom entry out of range");
    if (row < col)
        return (col - 1 + row) % 2 == 0 ? row : -row;
    if (row == col)
        return -col;
    return (row - col) % 2 == 1 ? col + 1 : -col;
}

VertexMap surhom_matrix(int m)
{
    if (m < 1)
        throw PreconditionError("surhom needs m >= 1");
    auto base = std::make_shared<const Graph>(path_graph("1" + std::string(static_cast<std::size_t>(m), '0')));
    auto target = std::make_shared<const Graph>(
        path_graph(std::string(static_cast<std::size_t>(m), '0') + "1" + std::string(static_cast<std::size_t>(m), '0')));
    auto square = std::make_shared<const Graph>(power(*base, 2));
    std::vector<int> image;
    for (int r = 0; r <= m; ++r)
        for (int c = 0; c <= m; ++c)
            image.push_back(surhom_entry(m, r, c) + m);
    return VertexMap(square, target, std::move(image));
}

std::vector<std::vector<int>> surhom_figure(int m)
{
    std::vector<std::vector<int>> out(static_cast<std::size_t>(m + 1));
    for (int r = 0; r <= m; ++r)
        for (int c = 0; c <= m; ++c)
            out[static_cast<std::size_t>(r)].push_back(surhom_entry(m, r, c));
    return out;
}

namespace {

// Label of dense id in the -c..-1, 0_1..0_b, 1..a layout: (value, block)
// with block in 1..b when value == 0.
std::pair<int, int> surhom2_decode(int b, int c, int id)
{
    if (id < c)
        return {id - c, 0};
    if (id < c + b)
        return {0, id - c + 1};
    return {id - c - b + 1, 0};
}

int surhom2_encode(int b, int c, int value, int block)
{
    if (value < 0)
        return value + c;
    if (value == 0)
        return c + block - 1;
    return c + b + value - 1;
}

// SE rule: column j reads 1, ..., j, j-1, j, j-1, ...
int fold_depth(int i, int j)
{
    if (i <= j)
        return i;
    return (i - j) % 2 == 0 ? j : j - 1;
}

} // namespace

VertexMap surhom2_matrix(int a, int b, int c)
{
    if (a < 1 || b < 1 || c < 1 || c > a)
        throw PreconditionError("surhom2 needs 1 <= c <= a and b >= 1");
    const std::string ones(static_cast<std::size_t>(b), '1'), zeros(static_cast<std::size_t>(a), '0');
    auto base = std::make_shared<const Graph>(path_graph(std::string(static_cast<std::size_t>(c), '1') + ones + zeros));
    auto target = std::make_shared<const Graph>(path_graph(std::string(static_cast<std::size_t>(c), '0') + ones + zeros));
    auto square = std::make_shared<const Graph>(power(*base, 2));
    const int n = base->size();
    std::vector<int> image;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            auto [i, bi] = surhom2_decode(b, c, x);
            auto [j, bj] = surhom2_decode(b, c, y);
            int value, block = 0;
            if (j == 0) {
                value = 0;
                block = bj;
            }
            else if (i <= 0) {
                value = 0;
                block = j < 0 ? 1 : b;
            }
            else if (j > 0) {
                value = fold_depth(i, j);
                block = b;
            }
            else {
                value = -fold_depth(i, -j);
                block = 1;
            }
            (void)bi;
            image.push_back(surhom2_encode(b, c, value, block));
        }
    return VertexMap(square, target, std::move(image));
}

std::string surhom2_label(int a, int b, int c, int id)
{
    (void)a;
    auto [v, block] = surhom2_decode(b, c, id);
    return v == 0 ? "0_" + std::to_string(block) : std::to_string(v);
}

std::vector<std::vector<std::string>> surhom2_figure(int a, int b, int c)
{
    VertexMap f = surhom2_matrix(a, b, c);
    const int n = c + b + a;
    std::vector<std::vector<std::string>> out(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            out[static_cast<std::size_t>(x)].push_back(surhom2_label(a, b, c, f(x * n + y)));
    return out;
}

MultipliedPaths multiply_paths_map(const ArmedGraph& h, int target_arms)
{
    const Graph& g = *h.graph;
    const int k = static_cast<int>(h.arms.size());
    if (k < 1 || h.l < 0 || h.l >= g.size() || !g.is_looped(h.l))
        throw PreconditionError("multiply_paths needs at least one arm on a looped vertex");
    const int lambda = static_cast<int>(h.arms[0].size());
    if (lambda < 1)
        throw PreconditionError("arms must have positive length");
    if (target_arms < k || target_arms > k + k * k)
        throw PreconditionError("target arm count must lie in [k, k + k^2]");

    std::vector<int> arm_of(static_cast<std::size_t>(g.size()), -1), depth_of(static_cast<std::size_t>(g.size()), 0);
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(h.arms[static_cast<std::size_t>(i)].size()) != lambda)
            throw PreconditionError("arms must have equal length");
        int prev = h.l;
        for (int d = 1; d <= lambda; ++d) {
            const int v = h.arms[static_cast<std::size_t>(i)][static_cast<std::size_t>(d - 1)];
            if (g.is_looped(v) || !g.has_edge(prev, v) || arm_of[static_cast<std::size_t>(v)] >= 0)
                throw PreconditionError("arm is not an irreflexive path from l");
            const int expected_degree = d == lambda ? 1 : 2;
            if (g.degree_without_loop(v) != expected_degree)
                throw PreconditionError("arm vertices must not carry other branches");
            arm_of[static_cast<std::size_t>(v)] = i;
            depth_of[static_cast<std::size_t>(v)] = d;
            prev = v;
        }
    }

    Graph grown(g.size() + (target_arms - k) * lambda);
    for (auto [u, v] : g.arcs())
        grown.add_edge(u, v);
    ArmedGraph out;
    out.l = h.l;
    out.arms = h.arms;
    for (int a = k; a < target_arms; ++a) {
        std::vector<int> arm;
        int prev = h.l;
        for (int d = 1; d <= lambda; ++d) {
            const int v = g.size() + (a - k) * lambda + (d - 1);
            grown.add_edge(prev, v);
            arm.push_back(v);
            prev = v;
        }
        out.arms.push_back(std::move(arm));
    }
    out.graph = std::make_shared<const Graph>(std::move(grown));

    // arm receiving the minus part of block (i, j)
    std::vector<int> partner(static_cast<std::size_t>(k * k));
    int fresh = k;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            partner[static_cast<std::size_t>(i * k + j)] = fresh < target_arms ? fresh++ : i;

    auto at = [&](int arm, int depth) {
        return depth == 0 ? h.l : out.arms[static_cast<std::size_t>(arm)][static_cast<std::size_t>(depth - 1)];
    };
    const int n = g.size();
    std::vector<int> image;
    image.reserve(static_cast<std::size_t>(n * n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int i = arm_of[static_cast<std::size_t>(x)];
            if (i < 0) {
                image.push_back(x);
                continue;
            }
            const int r = depth_of[static_cast<std::size_t>(x)];
            const int j = arm_of[static_cast<std::size_t>(y)];
            if (j < 0 && y != h.l) {
                image.push_back(h.l);
                continue;
            }
            const int e = surhom_entry(lambda, r, j < 0 ? 0 : depth_of[static_cast<std::size_t>(y)]);
            if (e >= 0)
                image.push_back(at(i, e));
            else
                image.push_back(at(partner[static_cast<std::size_t>(i * k + (j < 0 ? i : j))], -e));
        }
    auto square = std::make_shared<const Graph>(power(g, 2));
    return {out, VertexMap(square, out.graph, std::move(image))};
}

long long EquivalenceLink::power() const
{
    long long p = 1;
    for (const auto& s : backward)
        p *= s.exponent;
    return p;
}

namespace {

long long int_pow(long long base, long long e)
{
    long long r = 1;
    while (e-- > 0)
        r *= base;
    return r;
}

} // namespace

bool verify_witness(const EquivalenceWitness& w)
{
    const Graph* current = w.source.get();
    for (const auto& link : w.chain) {
        if (*link.from != *current)
            return false;
        if (!is_surjective_homomorphism(*link.from, *link.to, link.forward))
            return false;
        if (link.backward.empty() || *link.backward.front().source != *link.to || *link.backward.back().target != *link.from)
            return false;
        for (std::size_t i = 0; i < link.backward.size(); ++i) {
            const Stage& s = link.backward[i];
            if (i > 0 && *link.backward[i - 1].target != *s.source)
                return false;
            if (static_cast<long long>(s.image.size()) != int_pow(s.source->size(), s.exponent))
                return false;
            if (!is_surjective_homomorphism(power(*s.source, s.exponent), *s.target, s.image))
                return false;
        }
        current = link.to.get();
    }
    return true;
}

VertexMap compose_stages(const std::vector<Stage>& stages)
{
    if (stages.empty())
        throw PreconditionError("no stages to compose");
    long long p = 1;
    for (const auto& s : stages)
        p *= s.exponent;
    const Graph& base = *stages.front().source;
    const long long count = int_pow(base.size(), p);
    if (count > 5'000'000)
        throw PreconditionError("composite power too large to materialise");
    std::vector<int> image(static_cast<std::size_t>(count));
    std::vector<int> digits;
    for (long long v = 0; v < count; ++v) {
        digits.assign(static_cast<std::size_t>(p), 0);
        long long rest = v;
        for (long long i = p - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % base.size());
            rest /= base.size();
        }
        for (const auto& s : stages) {
            std::vector<int> next;
            for (std::size_t i = 0; i < digits.size(); i += static_cast<std::size_t>(s.exponent)) {
                long long idx = 0;
                for (int e = 0; e < s.exponent; ++e)
                    idx = idx * s.source->size() + digits[i + static_cast<std::size_t>(e)];
                next.push_back(s.image[static_cast<std::size_t>(idx)]);
            }
            digits = std::move(next);
        }
        image[static_cast<std::size_t>(v)] = digits.front();
    }
    auto domain = std::make_shared<const Graph>(power(base, static_cast<int>(p)));
    return VertexMap(domain, stages.back().target, std::move(image));
}

EquivalenceWitness equivalence_witness_path(const PathForm& p)
{
    if (!is_zero_eccentric(p))
        throw PreconditionError("path " + p.word() + " is not 0-eccentric");
    EquivalenceWitness w;
    w.source = std::make_shared<const Graph>(path_graph(p));
    const int n = p.size();

    bool flipped = static_cast<int>(decompose(p).alpha.size()) > decompose(p).a;
    const PathForm q = flipped ? p.reversed() : p;
    const auto d = decompose(q);
    auto to_source = [&](int id) { return flipped ? n - 1 - id : id; };

    if (d.b == 0) {
        w.core_word = p;
        return w;
    }

    EquivalenceLink link;
    link.from = w.source;
    std::vector<int> forward(static_cast<std::size_t>(n));
    Stage stage;
    stage.exponent = 2;
    stage.target = w.source;

    if (d.b == 1) {
        // alpha 1 0^a with |alpha| <= a: core P_{10^a}
        const int m = d.a, loop = n - 1 - m;
        const PathForm core("1" + std::string(static_cast<std::size_t>(m), '0'));
        if (core == q) {
            w.core_word = p;
            return w;
        }
        w.core_word = core;
        link.to = std::make_shared<const Graph>(path_graph(core));
        for (int i = 0; i < n; ++i)
            forward[static_cast<std::size_t>(to_source(i))] = std::max(i - loop, 0);
        VertexMap s = surhom_matrix(m);
        stage.source = link.to;
        for (int v : s.image()) {
            const int label = v - m;
            int pos;
            if (label >= 0)
                pos = loop + label;
            else if (-label <= loop)
                pos = loop + label;
            else
                pos = (-label - loop) % 2;
            stage.image.push_back(to_source(pos));
        }
        link.note = "fold onto P_{10^m}; surhom into P_{0^m10^m} then cover";
    }
    else {
        // alpha 1^b 0^a with b >= 2 and |alpha| <= a: core P_{1^{|alpha|+b} 0^a}
        const int c = static_cast<int>(d.alpha.size());
        const PathForm core(std::string(static_cast<std::size_t>(c + d.b), '1') + std::string(static_cast<std::size_t>(d.a), '0'));
        if (core == q) {
            w.core_word = p;
            return w;
        }
        w.core_word = core;
        link.to = std::make_shared<const Graph>(path_graph(core));
        for (int i = 0; i < n; ++i)
            forward[static_cast<std::size_t>(to_source(i))] = i;
        stage.source = link.to;
        if (c == 0) {
            // core is P_{1^b 0^a} and P itself; unreachable since core == q
            throw std::logic_error("empty alpha with b >= 2 should equal its core");
        }
        VertexMap s = surhom2_matrix(d.a, d.b, c);
        for (int v : s.image())
            stage.image.push_back(to_source(v));
        link.note = "identity onto P_{1^c1^b0^a}; surhom2 into P_{0^c1^b0^a} then identity";
    }
    link.forward = std::move(forward);
    link.backward.push_back(std::move(stage));
    w.chain.push_back(std::move(link));
    return w;
}

EquivalenceWitness equivalence_witness_tree(const Graph& tree, long long power_cap)
{
    EquivalenceWitness w;
    w.source = std::make_shared<const Graph>(tree);
    const TreeMetrics m = tree_metrics(tree);
    if (!m.quasi_loop_connected)
        throw PreconditionError("tree is not quasi-loop-connected");
    if (tree.is_irreflexive() || tree.is_reflexive() || is_loop_connected(tree))
        return w;

    const PrunedTree pt = build_pruned_tree(tree);
    const int lambda = pt.lambda;

    // T <-> T'
    const int leaves = static_cast<int>(pt.branch_leaf_paths.size());
    if (pt.t_prime->size() < tree.size()) {
        EquivalenceLink link;
        link.from = w.source;
        link.to = pt.t_prime;
        link.forward = pt.fold;
        int branch_size = 1;
        {
            std::vector<char> seen(static_cast<std::size_t>(tree.size()), 0);
            for (const auto& path : pt.branch_leaf_paths)
                for (std::size_t i = 1; i < path.size(); ++i)
                    if (!seen[static_cast<std::size_t>(path[i])]) {
                        seen[static_cast<std::size_t>(path[i])] = 1;
                        ++branch_size;
                    }
        }
        link.paper_bound = "p = |T1| - 1 = " + std::to_string(branch_size - 1);

        ArmedGraph h{pt.t_prime, pt.l, {std::vector<int>(pt.arm.begin() + 1, pt.arm.end())}};
        int k = 1;
        long long p = 1;
        while (k < leaves) {
            const int target = std::min(leaves, k + k * k);
            MultipliedPaths mp = multiply_paths_map(h, target);
            link.backward.push_back(Stage{h.graph, 2, mp.target.graph, mp.map.image()});
            h = mp.target;
            k = target;
            p *= 2;
        }
        if (p > power_cap) {
            w.status = SearchStatus::exhausted;
            return w;
        }
        // arms onto the branch leaves, bouncing at leaves that are too close
        Stage cover{h.graph, 1, w.source, std::vector<int>(static_cast<std::size_t>(h.graph->size()))};
        std::vector<int> arm_of(static_cast<std::size_t>(h.graph->size()), -1), depth_of(arm_of.size(), 0);
        for (int i = 0; i < k; ++i)
            for (int dd = 1; dd <= lambda; ++dd) {
                const int v = h.arms[static_cast<std::size_t>(i)][static_cast<std::size_t>(dd - 1)];
                arm_of[static_cast<std::size_t>(v)] = i;
                depth_of[static_cast<std::size_t>(v)] = dd;
            }
        for (int v = 0; v < h.graph->size(); ++v) {
            const int i = arm_of[static_cast<std::size_t>(v)];
            if (i < 0) {
                cover.image[static_cast<std::size_t>(v)] = pt.keep[static_cast<std::size_t>(v)];
                continue;
            }
            const auto& path = pt.branch_leaf_paths[static_cast<std::size_t>(i)];
            const int top = static_cast<int>(path.size()) - 1;
            const int dd = depth_of[static_cast<std::size_t>(v)];
            const int pos = dd <= top ? dd : top - (dd - top) % 2;
            cover.image[static_cast<std::size_t>(v)] = path[static_cast<std::size_t>(pos)];
        }
        link.backward.push_back(std::move(cover));
        link.note = "fold branch onto the arm; multiply the arm by repeated squaring";
        w.chain.push_back(std::move(link));
    }

    // T' <-> T''
    if (!pt.hanging.empty()) {
        EquivalenceLink link;
        link.from = pt.t_prime;
        link.to = pt.t_double_prime;
        const int n = pt.t_prime->size();
        link.forward.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v)
            link.forward[static_cast<std::size_t>(v)] = v;

        // clock: arm depth of the first coordinate; ancestors by depth for the second
        std::vector<int> clock(static_cast<std::size_t>(n), 0), depth(static_cast<std::size_t>(n), 0);
        std::vector<std::vector<int>> lineage(static_cast<std::size_t>(n));
        for (int dd = 0; dd <= lambda; ++dd)
            clock[static_cast<std::size_t>(pt.arm[static_cast<std::size_t>(dd)])] = dd;
        for (int dd = 1; dd <= lambda; ++dd) {
            const int v = pt.arm[static_cast<std::size_t>(dd)];
            depth[static_cast<std::size_t>(v)] = dd;
            lineage[static_cast<std::size_t>(v)].assign(pt.arm.begin(), pt.arm.begin() + dd + 1);
        }
        std::size_t total = 0;
        for (const auto& sub : pt.hanging) {
            total += sub.size();
            const int root = sub[0];
            lineage[static_cast<std::size_t>(sub[1])] = {root, sub[1]};
            depth[static_cast<std::size_t>(sub[1])] = 1;
            for (std::size_t i = 1; i < sub.size(); ++i)
                for (int x : pt.t_prime->neighbors(sub[i]))
                    if (x != sub[i] && x != root && lineage[static_cast<std::size_t>(x)].empty()) {
                        lineage[static_cast<std::size_t>(x)] = lineage[static_cast<std::size_t>(sub[i])];
                        lineage[static_cast<std::size_t>(x)].push_back(x);
                        depth[static_cast<std::size_t>(x)] = depth[static_cast<std::size_t>(sub[i])] + 1;
                    }
        }
        Stage st{pt.t_double_prime, 2, pt.t_prime, {}};
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (lineage[static_cast<std::size_t>(y)].empty()) {
                    st.image.push_back(y);
                    continue;
                }
                const int g = fold_depth(clock[static_cast<std::size_t>(x)], depth[static_cast<std::size_t>(y)]);
                st.image.push_back(lineage[static_cast<std::size_t>(y)][static_cast<std::size_t>(g)]);
            }
        link.backward.push_back(std::move(st));
        link.paper_bound = "p = 2^" + std::to_string(total);
        link.note = "identity onto T''; squaring unloops the hanging subtrees";
        if (link.power() > power_cap) {
            w.status = SearchStatus::exhausted;
            return w;
        }
        w.chain.push_back(std::move(link));
    }
    return w;
}

} // namespace qcsp
