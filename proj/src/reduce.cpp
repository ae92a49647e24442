#include "qcsp/reduce.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qcsp/metrics.hpp"
#include "qcsp/solver.hpp"

namespace qcsp {

QnaeInstance parse_qnae(std::string_view text)
{
    QnaeInstance phi;
    std::vector<std::array<std::string, 3>> raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head))
            continue;
        std::vector<std::string> rest;
        for (std::string w; ls >> w;)
            rest.push_back(w);
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (head == "A" || head == "E") {
            if (rest.size() != 1)
                throw FormatError(where + "expected one variable name");
            for (const auto& [q, n] : phi.prefix)
                if (n == rest[0])
                    throw FormatError(where + "variable " + n + " quantified twice");
            phi.prefix.emplace_back(head == "A" ? Quantifier::forall : Quantifier::exists, rest[0]);
        }
        else if (head == "c") {
            if (rest.size() != 3)
                throw FormatError(where + "a clause has exactly three literals");
            raw.push_back({rest[0], rest[1], rest[2]});
        }
        else
            throw FormatError(where + "unknown directive '" + head + "'");
    }
    for (const auto& c : raw) {
        std::array<int, 3> clause{};
        for (int k = 0; k < 3; ++k) {
            auto it = std::find_if(phi.prefix.begin(), phi.prefix.end(),
                                   [&](const auto& e) { return e.second == c[static_cast<std::size_t>(k)]; });
            if (it == phi.prefix.end())
                throw FormatError("clause variable " + c[static_cast<std::size_t>(k)] + " is not quantified");
            clause[static_cast<std::size_t>(k)] = static_cast<int>(it - phi.prefix.begin());
        }
        phi.clauses.push_back(clause);
    }
    return phi;
}

std::string print_qnae(const QnaeInstance& phi)
{
    std::ostringstream out;
    for (const auto& [q, n] : phi.prefix)
        out << (q == Quantifier::forall ? "A " : "E ") << n << '\n';
    for (const auto& c : phi.clauses)
        out << "c " << phi.prefix[static_cast<std::size_t>(c[0])].second << ' ' << phi.prefix[static_cast<std::size_t>(c[1])].second
            << ' ' << phi.prefix[static_cast<std::size_t>(c[2])].second << '\n';
    return out.str();
}

namespace {

bool universal(const QnaeInstance& phi, int v)
{
    return phi.prefix[static_cast<std::size_t>(v)].first == Quantifier::forall;
}

} // namespace

QnaeInstance normalize(const QnaeInstance& phi)
{
    QnaeInstance out = phi;
    for (auto& c : out.clauses) {
        if (!universal(phi, c[1]))
            continue;
        if (!universal(phi, c[0]))
            std::swap(c[0], c[1]);
        else if (!universal(phi, c[2]))
            std::swap(c[1], c[2]);
        else
            throw PreconditionError("invalid instance: clause (" + phi.prefix[static_cast<std::size_t>(c[0])].second + ", " +
                                    phi.prefix[static_cast<std::size_t>(c[1])].second + ", " +
                                    phi.prefix[static_cast<std::size_t>(c[2])].second + ") has only universal literals");
    }
    return out;
}

bool is_normalized(const QnaeInstance& phi)
{
    return std::none_of(phi.clauses.begin(), phi.clauses.end(), [&](const auto& c) { return universal(phi, c[1]); });
}

std::string_view to_string(CaseTag t)
{
    switch (t) {
    case CaseTag::p101_family: return "P101-family";
    case CaseTag::wb0_centred: return "wb-0-centred";
    case CaseTag::p10101_family: return "P10101-family";
    case CaseTag::p101d01: return "P101d01";
    case CaseTag::wb1_centred: return "wb-1-centred";
    case CaseTag::remaining_case: return "remaining-case";
    case CaseTag::tree_hardness: return "tree-hardness";
    }
    return "?";
}

namespace {

std::string zeros(int k) { return std::string(static_cast<std::size_t>(std::max(k, 0)), '0'); }
std::string ones(int k) { return std::string(static_cast<std::size_t>(std::max(k, 0)), '1'); }

std::optional<ReductionRecipe> weakly_balanced_zero(const PathForm& p)
{
    const std::string& w = p.word();
    const int n = p.size();
    const double centre = (n - 1) / 2.0;
    int left = -1, right = -1;
    for (int i = 0; i < n; ++i)
        if (w[static_cast<std::size_t>(i)] == '1') {
            if (i < centre)
                left = i;
            else if (i > centre && right < 0)
                right = i;
        }
    if (left < 0 || right < 0)
        return std::nullopt;
    const int a = left, b = right - left - 1, c = n - 1 - right;
    if (a + b < c || b + c < a)
        return std::nullopt;
    const int m = std::max({a, b, c});
    ReductionRecipe r;
    r.tag = p.word() == "101" ? CaseTag::p101_family : CaseTag::wb0_centred;
    r.pattern = PathForm("1" + zeros(b) + "1");
    r.selector = PathForm("1" + zeros(m));
    r.params = {{"a", a}, {"b", b}, {"c", c}, {"m", m}};
    return r;
}

std::optional<ReductionRecipe> weakly_balanced_one(const PathForm& p, std::string& why)
{
    const std::string& w = p.word();
    const int n = p.size();
    int s = (n - 1) / 2, t = n / 2;
    while (s > 0 && w[static_cast<std::size_t>(s - 1)] == '1')
        --s;
    while (t + 1 < n && w[static_cast<std::size_t>(t + 1)] == '1')
        ++t;
    int i = s - 1, j = t + 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == '0')
        --i;
    while (j < n && w[static_cast<std::size_t>(j)] == '0')
        ++j;
    if (i < 0 || j >= n) {
        why = "no loop beyond the zeros flanking the central loop block";
        return std::nullopt;
    }
    const int a = i, c = s - 1 - i, d = t - s + 1, e = j - t - 1, b = n - 1 - j;
    if (c == 0 || e == 0) {
        why = "central loop block is not flanked by zeros";
        return std::nullopt;
    }
    const bool family = a == 0 && b == 0 && c == 1 && e == 1;
    ReductionRecipe r;
    r.tag = CaseTag::wb1_centred;
    r.params = {{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"e", e}};
    if (a + c != e + b) {
        const int mp = std::min(a + c, e + b);
        const int l = a + c < e + b ? e : c;
        r.subcase = a + c < e + b ? "a+c<e+b" : "e+b<a+c";
        r.pattern = PathForm("1" + zeros(l) + "1");
        r.selector = PathForm(ones(d) + zeros(mp + 1));
        r.params["m'"] = mp;
        r.params["l"] = l;
        return r;
    }
    const int m = std::max(c, e);
    r.params["m"] = m;
    int tail;
    if (std::max(a, b) <= std::min(c, e)) {
        r.subcase = "a,b<=min(c,e)";
        tail = m;
    }
    else if (std::max(c, e) <= std::min(a, b)) {
        r.subcase = "c,e<=min(a,b)";
        tail = std::max(a, b);
    }
    else if (std::max(a, e) <= std::min(b, c)) {
        r.subcase = "a,e<=min(b,c)";
        tail = std::max(b, c);
    }
    else if (std::max(b, c) <= std::min(a, e)) {
        r.subcase = "b,c<=min(a,e)";
        tail = std::max(a, e);
    }
    else {
        why = "a+c=e+b but no ordering subcase of {a,b,c,e} applies";
        return std::nullopt;
    }
    r.pattern = PathForm("1" + zeros(m) + ones(d) + zeros(m) + "1");
    r.selector = PathForm(ones(d) + zeros(tail));
    r.vertical_brace = d + 2 * m;
    if (family)
        r.tag = d == 1 ? CaseTag::p10101_family : CaseTag::p101d01;
    return r;
}

std::optional<ReductionRecipe> remaining_case(const PathForm& p, std::string& why)
{
    for (const auto& q : {p, p.reversed()}) {
        const auto dec = decompose(q);
        const int n = q.size(), alpha = static_cast<int>(dec.alpha.size());
        if (dec.b < 1 || 2 * (alpha + 1) > n + 1 || n + 1 > 2 * (alpha + dec.b))
            continue;
        const auto last_one = dec.alpha.rfind('1');
        if (last_one == std::string::npos || last_one + 1 >= dec.alpha.size()) {
            why = "alpha has no 10 factor";
            continue;
        }
        const int c = static_cast<int>(last_one) + 1;
        const int e = alpha - c;
        if (c < dec.a || dec.b + dec.a - c < 0) {
            why = "right-most 10 of alpha lies before position a";
            continue;
        }
        ReductionRecipe r;
        r.tag = CaseTag::remaining_case;
        r.subcase = q == p ? "" : "reversed";
        r.pattern = PathForm("1" + zeros(e) + "1");
        r.selector = PathForm(ones(dec.b + dec.a - c) + zeros(c));
        r.params = {{"a", dec.a}, {"b", dec.b}, {"c", c}, {"e", e}, {"alpha", alpha}};
        return r;
    }
    if (why.empty())
        why = "centre is not inside the final loop block";
    return std::nullopt;
}

// Every template vertex can stand at the universal end of the selector.
bool selector_total(const PathForm& sel, const Graph& tmpl)
{
    Sentence s;
    const int n = sel.size();
    for (int i = 1; i <= n; ++i) {
        const int v = i == n ? s.add_free("u") : s.add_exists("s" + std::to_string(i));
        if (sel.looped(i))
            s.add_atom(v, v);
        if (i > 1)
            s.add_atom(v - 1, v);
    }
    for (int x = 0; x < tmpl.size(); ++x) {
        const std::vector<Pin> pins{{n - 1, x}};
        if (!eval_csp(s, pins, tmpl).holds())
            return false;
    }
    return true;
}

} // namespace

bool qnae_truth(const QnaeInstance& phi)
{
    std::vector<int> value(phi.prefix.size(), 0);
    auto satisfied = [&] {
        return std::all_of(phi.clauses.begin(), phi.clauses.end(), [&](const std::array<int, 3>& c) {
            const int s = value[static_cast<std::size_t>(c[0])] + value[static_cast<std::size_t>(c[1])] +
                          value[static_cast<std::size_t>(c[2])];
            return s == 1 || s == 2;
        });
    };
    auto play = [&](auto&& self, std::size_t i) -> bool {
        if (i == value.size())
            return satisfied();
        const bool all = phi.prefix[i].first == Quantifier::forall;
        for (int b = 0; b < 2; ++b) {
            value[i] = b;
            if (self(self, i + 1) != all)
                return !all;
        }
        return all;
    };
    return play(play, 0);
}

ReductionRecipe choose_recipe(const PathForm& p)
{
    if (is_zero_eccentric(p))
        throw PreconditionError("path " + p.word() + " is 0-eccentric");
    auto source = std::make_shared<const Graph>(path_graph(p));
    std::optional<ReductionRecipe> r;
    std::string why;
    switch (weakly_balanced(p)) {
    case Centring::zero_centred:
        r = weakly_balanced_zero(p);
        if (!r)
            why = "centre not between the central loops";
        break;
    case Centring::one_centred:
        r = weakly_balanced_one(p, why);
        break;
    case Centring::not_balanced:
        r = remaining_case(p, why);
        break;
    }
    if (r && !(selector_total(r->selector, *source) &&
               (!r->bottom_selector || selector_total(*r->bottom_selector, *source)))) {
        why = "selector " + r->selector.word() + " is not satisfiable from every vertex";
        r.reset();
    }
    if (r && r->vertical_brace) {
        r->source = source;
        if (!designated_loops(*r, *source) || gadget_extension_check(*r, *source) != nae_table) {
            why = "clause gadget for " + r->pattern.word() + " does not restrict to not-all-equal";
            r.reset();
        }
    }
    if (!r) {
        r = tree_recipe(*source);
        r->fallback = true;
        r->subcase = why;
    }
    r->source = source;
    return *r;
}

TreeHardness tree_hardness_parameters(const Graph& tree)
{
    const TreeMetrics tm = tree_metrics(tree);
    if (tm.quasi_loop_connected)
        throw PreconditionError("tree is quasi-loop-connected");
    TreeHardness h;
    h.lambda = *tm.lambda_max;
    const auto& comps = tm.reflexive_subtrees;
    const std::size_t k = comps.size();
    const int n = tree.size();
    std::vector<std::vector<int>> dist(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (const auto& d : bfs_distances(tree, comps[i]))
            dist[i].push_back(*d);
        h.nu = std::max(h.nu, static_cast<int>(comps[i].size()));
    }
    std::vector<std::vector<int>> between(k, std::vector<int>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            int best = n;
            for (int v : comps[i])
                best = std::min(best, dist[j][static_cast<std::size_t>(v)]);
            between[i][j] = best;
        }
    auto reach = [&](int x) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < k; ++i)
            if (dist[i][static_cast<std::size_t>(x)] <= h.lambda)
                out.push_back(i);
        return out;
    };
    auto mu_of = [&](int x, int y) {
        int best = n;
        for (auto i : reach(x))
            for (auto j : reach(y))
                best = std::min(best, between[i][j]);
        return best;
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            h.mu = std::max(h.mu, mu_of(x, y));
    if (h.mu <= 1)
        throw std::logic_error("mu <= 1 on a tree that is not quasi-loop-connected");

    std::set<std::pair<std::size_t, std::size_t>> witnesses;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (mu_of(x, y) != h.mu)
                continue;
            for (auto i : reach(x))
                for (auto j : reach(y))
                    if (between[i][j] == h.mu)
                        witnesses.emplace(i, j);
        }
    std::set<std::vector<int>> paths;
    for (auto [i, j] : witnesses) {
        int v = -1;
        for (int u : comps[i])
            if (dist[j][static_cast<std::size_t>(u)] == h.mu)
                v = u;
        std::vector<int> path{v};
        while (dist[j][static_cast<std::size_t>(path.back())] > 0)
            for (int w : tree.neighbors(path.back()))
                if (dist[j][static_cast<std::size_t>(w)] + 1 == dist[j][static_cast<std::size_t>(path.back())]) {
                    path.push_back(w);
                    break;
                }
        paths.insert(path);
    }
    h.reflection_closed = std::all_of(paths.begin(), paths.end(), [&](const auto& p) {
        return paths.count(std::vector<int>(p.rbegin(), p.rend())) > 0;
    });
    for (const auto& p : paths) {
        const int last = static_cast<int>(p.size()) - 1;
        int k2 = last - 1;
        while (k2 > 0 && !tree.is_looped(p[static_cast<std::size_t>(k2)]))
            --k2;
        h.delta = std::max(h.delta, last - k2);
        h.paths.push_back(p);
    }
    return h;
}

ReductionRecipe tree_recipe(const Graph& tree)
{
    const TreeHardness h = tree_hardness_parameters(tree);
    ReductionRecipe r;
    r.tag = CaseTag::tree_hardness;
    r.pattern = PathForm("1" + zeros(h.delta - 1) + "1");
    r.selector = PathForm(zeros(h.mu - 1) + ones(h.nu) + zeros(h.lambda));
    r.bottom_selector = PathForm(ones(h.nu) + zeros(h.lambda));
    r.params = {{"lambda", h.lambda}, {"mu", h.mu}, {"nu", h.nu}, {"delta", h.delta}};
    r.source = std::make_shared<const Graph>(tree);
    return r;
}

namespace {

// Vertices the attach end of `sel` can take when its last vertex sits at u.
std::vector<int> selector_reach(const Graph& g, const PathForm& sel, int u)
{
    const int len = sel.size();
    std::vector<char> cur(static_cast<std::size_t>(g.size()), 0);
    if (sel.looped(len) && !g.is_looped(u))
        return {};
    cur[static_cast<std::size_t>(u)] = 1;
    for (int pos = len - 1; pos >= 1; --pos) {
        std::vector<char> next(cur.size(), 0);
        for (int v = 0; v < g.size(); ++v)
            if (cur[static_cast<std::size_t>(v)])
                for (int w : g.neighbors(v))
                    if (!sel.looped(pos) || g.is_looped(w))
                        next[static_cast<std::size_t>(w)] = 1;
        cur = std::move(next);
    }
    std::vector<int> out;
    for (int v = 0; v < g.size(); ++v)
        if (cur[static_cast<std::size_t>(v)])
            out.push_back(v);
    return out;
}

// Induced piece of the template square; (T,T), (B,B) and (T,B) play top,
// bottom and the restricted vertex.
struct Booleaniser {
    int size = 0;
    int top = -1, bottom = -1, value = -1;
    std::vector<std::pair<int, int>> edges;
};

Booleaniser square_piece(const Graph& square, const std::vector<int>& keep, int top, int bottom, int value)
{
    Booleaniser g;
    g.size = static_cast<int>(keep.size());
    const Graph piece = square.induced(keep);
    for (auto [u, v] : piece.arcs())
        if (u <= v)
            g.edges.emplace_back(u, v);
    auto local = [&](int id) { return static_cast<int>(std::find(keep.begin(), keep.end(), id) - keep.begin()); };
    g.top = local(top);
    g.bottom = local(bottom);
    g.value = local(value);
    return g;
}

bool restricts(const Booleaniser& g, const Graph& tmpl, int t, int b)
{
    Sentence s;
    std::vector<int> var(static_cast<std::size_t>(g.size));
    var[static_cast<std::size_t>(g.top)] = s.add_free("top");
    var[static_cast<std::size_t>(g.bottom)] = s.add_free("bottom");
    var[static_cast<std::size_t>(g.value)] = s.add_free("x");
    for (int i = 0; i < g.size; ++i)
        if (i != g.top && i != g.bottom && i != g.value)
            var[static_cast<std::size_t>(i)] = s.add_exists("b" + std::to_string(i));
    for (auto [u, v] : g.edges)
        s.add_atom(var[static_cast<std::size_t>(u)], var[static_cast<std::size_t>(v)]);
    for (int x = 0; x < tmpl.size(); ++x) {
        const std::vector<Pin> pins{{var[static_cast<std::size_t>(g.top)], t}, {var[static_cast<std::size_t>(g.bottom)], b},
                                    {var[static_cast<std::size_t>(g.value)], x}};
        if (eval_csp(s, pins, tmpl).holds() != (x == t || x == b))
            return false;
    }
    return true;
}

std::optional<Booleaniser> build_booleaniser(const Graph& tmpl, int t, int b)
{
    const int n = tmpl.size();
    const Graph square = power(tmpl, 2);
    const int top = t * n + t, bottom = b * n + b, value = t * n + b;
    std::vector<int> keep(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n * n; ++i)
        keep[static_cast<std::size_t>(i)] = i;
    if (!restricts(square_piece(square, keep, top, bottom, value), tmpl, t, b))
        return std::nullopt;
    for (int id = 0; id < n * n; ++id) {
        if (id == top || id == bottom || id == value)
            continue;
        std::vector<int> smaller;
        for (int k : keep)
            if (k != id)
                smaller.push_back(k);
        if (restricts(square_piece(square, smaller, top, bottom, value), tmpl, t, b))
            keep = std::move(smaller);
    }
    return square_piece(square, keep, top, bottom, value);
}

bool has_interior_loop(const PathForm& p)
{
    return p.word().find('1', 1) < static_cast<std::size_t>(p.size() - 1);
}

std::optional<Booleaniser> booleaniser_for(const ReductionRecipe& r, const Graph& tmpl)
{
    if (!has_interior_loop(r.pattern))
        return std::nullopt;
    auto loops = designated_loops(r, tmpl);
    if (!loops)
        throw PreconditionError("recipe selectors do not designate two loops of the template");
    auto g = build_booleaniser(tmpl, loops->first, loops->second);
    if (!g)
        throw PreconditionError("template square does not restrict to the designated loops");
    return g;
}

class Builder {
public:
    Builder(const ReductionRecipe& r, std::optional<Booleaniser> boolean) : bool_(std::move(boolean)), r_(r)
    {
        const std::string& w = r.pattern.word();
        brace_at_ = static_cast<int>(w.find('0'));
    }

    Sentence s;

    int fresh(const std::string& stem) { return s.add_variable(stem + std::to_string(counter_++)); }
    void loop(int v) { s.add_atom(v, v); }
    bool needs_booleaniser() const { return bool_.has_value(); }

    // Interior vertices of a copy of `word` from `from` to `to`.
    std::vector<int> path(int from, int to, const std::string& word, std::vector<int>* sink)
    {
        std::vector<int> inner;
        int prev = from;
        for (std::size_t k = 1; k + 1 < word.size(); ++k) {
            const int v = fresh("g");
            if (word[k] == '1')
                loop(v);
            s.add_atom(prev, v);
            inner.push_back(v);
            prev = v;
        }
        s.add_atom(prev, to);
        if (sink)
            sink->insert(sink->end(), inner.begin(), inner.end());
        return inner;
    }

    // Two pattern copies from the apex, braced at the first non-loop vertex.
    void half_diamond(int apex, int x, int y)
    {
        auto p = path(apex, x, r_.pattern.word(), &inner_);
        auto q = path(apex, y, r_.pattern.word(), &inner_);
        s.add_atom(p[static_cast<std::size_t>(brace_at_ - 1)], q[static_cast<std::size_t>(brace_at_ - 1)]);
    }

    // Restricts x to the designated loops, given top and bottom pinned there.
    void booleanise(int top, int bottom, int x)
    {
        const Booleaniser& g = *bool_;
        std::vector<int> var(static_cast<std::size_t>(g.size));
        for (int i = 0; i < g.size; ++i) {
            if (i == g.top)
                var[static_cast<std::size_t>(i)] = top;
            else if (i == g.bottom)
                var[static_cast<std::size_t>(i)] = bottom;
            else if (i == g.value)
                var[static_cast<std::size_t>(i)] = x;
            else {
                var[static_cast<std::size_t>(i)] = fresh("b");
                inner_.push_back(var[static_cast<std::size_t>(i)]);
            }
        }
        for (auto [u, v] : g.edges)
            if (!((u == g.top || u == g.bottom || u == g.value) && u == v))
                s.add_atom(var[static_cast<std::size_t>(u)], var[static_cast<std::size_t>(v)]);
    }

    // Universal end first, then the selector interior, then the attach vertex.
    int selector(const PathForm& sel, const std::string& stem, int* universal_var)
    {
        const int u = s.add_variable("u_" + stem);
        s.bind(Quantifier::forall, u);
        return selector_from(sel, stem, u, universal_var);
    }

    int selector_from(const PathForm& sel, const std::string& stem, int u, int* universal_var)
    {
        if (sel.looped(sel.size()))
            loop(u);
        const int attach = s.add_variable("v_" + stem);
        if (sel.looped(1))
            loop(attach);
        std::string reversed(sel.word().rbegin(), sel.word().rend());
        auto inner = path(u, attach, reversed, nullptr);
        for (int v : inner)
            s.bind(Quantifier::exists, v);
        s.bind(Quantifier::exists, attach);
        if (universal_var)
            *universal_var = u;
        return attach;
    }

    void close()
    {
        for (int v : inner_)
            s.bind(Quantifier::exists, v);
        inner_.clear();
    }

    std::vector<int> inner_;

private:
    std::optional<Booleaniser> bool_;
    const ReductionRecipe& r_;
    int brace_at_ = 1;
    int counter_ = 0;
};

void clause_body(Builder& b, int top, int bottom, int l1, int l2, int l3)
{
    const int t = b.fresh("t"), s = b.fresh("s");
    b.inner_.push_back(t);
    b.inner_.push_back(s);
    b.loop(t);
    b.loop(s);
    if (b.needs_booleaniser()) {
        b.booleanise(top, bottom, t);
        b.booleanise(top, bottom, s);
    }
    b.half_diamond(t, l1, l2);
    b.half_diamond(bottom, t, l3);
    b.half_diamond(s, l1, l2);
    b.half_diamond(top, s, l3);
}

} // namespace

std::optional<std::pair<int, int>> designated_loops(const ReductionRecipe& r, const Graph& tmpl)
{
    if (tmpl.size() < 2)
        return std::nullopt;
    auto top = selector_reach(tmpl, r.selector, 0);
    auto bottom = selector_reach(tmpl, r.bottom_selector.value_or(r.selector), tmpl.size() - 1);
    if (top.size() != 1 || bottom.size() != 1 || top[0] == bottom[0])
        return std::nullopt;
    if (!tmpl.is_looped(top[0]) || !tmpl.is_looped(bottom[0]))
        return std::nullopt;
    return std::pair{top[0], bottom[0]};
}

Sentence compile(const QnaeInstance& phi, const ReductionRecipe& r, const Graph& tmpl, CompileOptions opt)
{
    if (r.source && *r.source != tmpl)
        throw PreconditionError("recipe/template mismatch");
    if (!opt.allow_unnormalized && !is_normalized(phi))
        throw PreconditionError("instance is not normalized");
    for (const auto& c : phi.clauses)
        if (universal(phi, c[0]) && universal(phi, c[1]) && universal(phi, c[2]))
            throw PreconditionError("invalid instance: all-universal clause");
    if (r.tag == CaseTag::tree_hardness)
        for (const auto& [q, n] : phi.prefix)
            if (q == Quantifier::forall)
                throw PreconditionError("the tree reduction takes existential instances only");

    Builder b(r, booleaniser_for(r, tmpl));
    const int u_top = b.s.add_forall("u_top");
    const int u_bottom = b.s.add_forall("u_bottom");
    const int top = b.selector_from(r.selector, "top", u_top, nullptr);
    const int bottom = b.selector_from(r.bottom_selector.value_or(r.selector), "bottom", u_bottom, nullptr);
    if (!r.selector.looped(1))
        b.loop(top);
    if (!r.bottom_selector.value_or(r.selector).looped(1))
        b.loop(bottom);

    std::vector<int> node;
    for (const auto& [q, name] : phi.prefix) {
        if (q == Quantifier::exists) {
            const int x = b.s.add_variable("x_" + name);
            b.s.bind(Quantifier::exists, x);
            b.loop(x);
            b.path(top, x, r.pattern.word(), &b.inner_);
            b.path(x, bottom, r.pattern.word(), &b.inner_);
            if (b.needs_booleaniser())
                b.booleanise(top, bottom, x);
            node.push_back(x);
            continue;
        }
        node.push_back(b.selector(r.selector, "x_" + name, nullptr));
    }
    for (const auto& c : phi.clauses)
        clause_body(b, top, bottom, node[static_cast<std::size_t>(c[0])], node[static_cast<std::size_t>(c[1])],
                    node[static_cast<std::size_t>(c[2])]);
    b.close();
    b.s.validate();
    return b.s;
}

Sentence clause_gadget(const ReductionRecipe& r, const Graph& tmpl)
{
    Builder b(r, booleaniser_for(r, tmpl));
    const int top = b.s.add_free("top"), bottom = b.s.add_free("bottom");
    std::array<int, 3> l{b.s.add_free("l1"), b.s.add_free("l2"), b.s.add_free("l3")};
    for (int v : {top, bottom, l[0], l[1], l[2]})
        b.loop(v);
    clause_body(b, top, bottom, l[0], l[1], l[2]);
    b.close();
    return b.s;
}

std::array<bool, 8> gadget_extension_check(const ReductionRecipe& r, const Graph& tmpl)
{
    auto loops = designated_loops(r, tmpl);
    if (!loops)
        throw PreconditionError("recipe selectors do not designate two loops of the template");
    const Sentence g = clause_gadget(r, tmpl);
    std::array<bool, 8> table{};
    for (int row = 0; row < 8; ++row) {
        std::vector<Pin> pins{{0, loops->first}, {1, loops->second}};
        for (int k = 0; k < 3; ++k)
            pins.emplace_back(2 + k, row >> k & 1 ? loops->second : loops->first);
        table[static_cast<std::size_t>(row)] = eval_csp(g, pins, tmpl).holds();
    }
    return table;
}

} // namespace qcsp
