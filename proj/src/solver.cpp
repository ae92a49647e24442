#include "qcsp/solver.hpp"

#include <atomic>
#include <bit>
#include <future>
#include <mutex>
#include <unordered_map>

namespace qcsp {

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::holds: return "true";
    case Outcome::fails: return "false";
    case Outcome::exhausted: return "exhausted";
    }
    return "?";
}

namespace {

struct NodeLimit {};

using Domains = std::vector<std::uint64_t>;

class Engine {
public:
    Engine(const Sentence& s, const Graph& t, const EvalConfig& cfg) : s_(s), t_(t), cfg_(cfg)
    {
        if (t.size() == 0)
            throw PreconditionError("template must be nonempty");
        if (t.size() > 64)
            throw PreconditionError("templates are limited to 64 vertices");
        full_ = t.size() == 64 ? ~0ULL : (1ULL << t.size()) - 1;
        for (int c = 0; c < t.size(); ++c) {
            std::uint64_t m = 0;
            for (int d : t.neighbors(c))
                m |= 1ULL << d;
            nbr_.push_back(m);
        }
        const auto nv = static_cast<std::size_t>(s.variable_count());
        incident_.resize(nv);
        for (std::size_t a = 0; a < s.atoms().size(); ++a) {
            auto [x, y] = s.atoms()[a];
            incident_[static_cast<std::size_t>(x)].push_back(static_cast<int>(a));
            if (y != x)
                incident_[static_cast<std::size_t>(y)].push_back(static_cast<int>(a));
        }
        position_.assign(nv, -1);
        for (std::size_t i = 0; i < s.prefix().size(); ++i)
            position_[static_cast<std::size_t>(s.prefix()[i].var)] = static_cast<int>(i);
        // frontier[p]: variables bound before position p that share an atom
        // with a variable bound at or after p
        const std::size_t np = s.prefix().size();
        frontier_.resize(np + 1);
        for (std::size_t p = 0; p <= np; ++p)
            for (std::size_t v = 0; v < nv; ++v) {
                if (position_[v] >= static_cast<int>(p))
                    continue;
                bool touches = false;
                for (int a : incident_[v]) {
                    auto [x, y] = s.atoms()[static_cast<std::size_t>(a)];
                    int other = x == static_cast<int>(v) ? y : x;
                    if (position_[static_cast<std::size_t>(other)] >= static_cast<int>(p))
                        touches = true;
                }
                if (touches)
                    frontier_[p].push_back(static_cast<int>(v));
            }
    }

    EvalResult run(std::span<const Pin> pins)
    {
        Domains dom(static_cast<std::size_t>(s_.variable_count()), full_);
        std::vector<int> pinned(dom.size(), 0);
        for (auto [v, c] : pins) {
            if (v < 0 || v >= s_.variable_count())
                throw PreconditionError("pinned variable out of range");
            if (c < 0 || c >= t_.size())
                throw PreconditionError("pinned constant out of range: " + std::to_string(c));
            if (position_[static_cast<std::size_t>(v)] >= 0)
                throw PreconditionError("only free variables can be pinned");
            dom[static_cast<std::size_t>(v)] = 1ULL << c;
            pinned[static_cast<std::size_t>(v)] = 1;
        }
        for (int v : s_.free_vars())
            if (!pinned[static_cast<std::size_t>(v)])
                throw PreconditionError("free variable " + s_.name(v) + " is not pinned");

        EvalResult result{Outcome::fails, 0};
        try {
            bool ok;
            if (cfg_.propagation == Propagation::arc_consistency)
                ok = arc_consistent(dom, 0) && solve(dom, 0, cfg_.parallel);
            else
                ok = pins_consistent(dom) && solve(dom, 0, cfg_.parallel);
            result.outcome = ok ? Outcome::holds : Outcome::fails;
        }
        catch (const NodeLimit&) {
            result.outcome = Outcome::exhausted;
        }
        result.nodes = nodes_.load();
        return result;
    }

private:
    bool atom_ok(const Domains& dom, int a) const
    {
        auto [x, y] = s_.atoms()[static_cast<std::size_t>(a)];
        return t_.has_edge(std::countr_zero(dom[static_cast<std::size_t>(x)]),
                           std::countr_zero(dom[static_cast<std::size_t>(y)]));
    }

    bool assigned(int v, std::size_t pos) const
    {
        int p = position_[static_cast<std::size_t>(v)];
        return p < 0 || p < static_cast<int>(pos);
    }

    bool pins_consistent(const Domains& dom) const
    {
        for (std::size_t a = 0; a < s_.atoms().size(); ++a) {
            auto [x, y] = s_.atoms()[a];
            if (assigned(x, 0) && assigned(y, 0) && !atom_ok(dom, static_cast<int>(a)))
                return false;
        }
        return true;
    }

    // AC-3 over the atoms. Only ever removes values that appear in no full
    // solution extending the current assignment.
    bool arc_consistent(Domains& dom, std::size_t pos) const
    {
        const auto& atoms = s_.atoms();
        std::vector<int> queue(atoms.size());
        std::vector<char> queued(atoms.size(), 1);
        for (std::size_t a = 0; a < atoms.size(); ++a)
            queue[a] = static_cast<int>(a);
        while (!queue.empty()) {
            int a = queue.back();
            queue.pop_back();
            queued[static_cast<std::size_t>(a)] = 0;
            auto [x, y] = atoms[static_cast<std::size_t>(a)];
            for (int side = 0; side < 2; ++side) {
                int u = side ? y : x, w = side ? x : y;
                auto& du = dom[static_cast<std::size_t>(u)];
                std::uint64_t keep = 0;
                if (u == w) {
                    for (std::uint64_t m = du; m; m &= m - 1) {
                        int c = std::countr_zero(m);
                        if (nbr_[static_cast<std::size_t>(c)] >> c & 1ULL)
                            keep |= 1ULL << c;
                    }
                }
                else {
                    const std::uint64_t dw = dom[static_cast<std::size_t>(w)];
                    for (std::uint64_t m = du; m; m &= m - 1) {
                        int c = std::countr_zero(m);
                        if (nbr_[static_cast<std::size_t>(c)] & dw)
                            keep |= 1ULL << c;
                    }
                }
                if (keep == du)
                    continue;
                if (!keep)
                    return false;
                // a pruned universal value is a winning move for the universal player
                int p = position_[static_cast<std::size_t>(u)];
                if (p >= static_cast<int>(pos) && s_.prefix()[static_cast<std::size_t>(p)].q == Quantifier::forall)
                    return false;
                du = keep;
                for (int b : incident_[static_cast<std::size_t>(u)])
                    if (!queued[static_cast<std::size_t>(b)]) {
                        queued[static_cast<std::size_t>(b)] = 1;
                        queue.push_back(b);
                    }
            }
        }
        return true;
    }

    std::string memo_key(const Domains& dom, std::size_t pos) const
    {
        std::string key;
        key.reserve(frontier_[pos].size() + 4);
        const auto p32 = static_cast<std::uint32_t>(pos);
        key.append(reinterpret_cast<const char*>(&p32), sizeof p32);
        for (int v : frontier_[pos])
            key.push_back(static_cast<char>(std::countr_zero(dom[static_cast<std::size_t>(v)])));
        return key;
    }

    // Sets variable v to c and filters; false when that choice is dead.
    bool assign(Domains& dom, int v, int c, std::size_t pos_after) const
    {
        dom[static_cast<std::size_t>(v)] = 1ULL << c;
        if (cfg_.propagation == Propagation::arc_consistency)
            return arc_consistent(dom, pos_after);
        for (int a : incident_[static_cast<std::size_t>(v)]) {
            auto [x, y] = s_.atoms()[static_cast<std::size_t>(a)];
            if (assigned(x, pos_after) && assigned(y, pos_after) && !atom_ok(dom, a))
                return false;
        }
        return true;
    }

    void tick()
    {
        if (nodes_.fetch_add(1) + 1 > cfg_.node_limit)
            throw NodeLimit{};
    }

    bool solve(const Domains& dom, std::size_t pos, bool allow_parallel)
    {
        if (pos == s_.prefix().size())
            return true;

        std::string key;
        if (cfg_.memoize) {
            key = memo_key(dom, pos);
            std::lock_guard lock(memo_mutex_);
            if (auto it = memo_.find(key); it != memo_.end())
                return it->second;
        }

        const auto [q, v] = s_.prefix()[pos];
        const std::uint64_t values = dom[static_cast<std::size_t>(v)];
        bool result;
        if (q == Quantifier::forall) {
            if (values != full_)
                result = false;
            else if (allow_parallel && t_.size() > 1)
                result = forall_parallel(dom, pos);
            else {
                result = true;
                for (std::uint64_t m = values; m && result; m &= m - 1)
                    result = branch(dom, pos, v, std::countr_zero(m), false);
            }
        }
        else {
            result = false;
            for (std::uint64_t m = values; m && !result; m &= m - 1)
                result = branch(dom, pos, v, std::countr_zero(m), allow_parallel);
        }

        if (cfg_.memoize) {
            std::lock_guard lock(memo_mutex_);
            memo_.emplace(std::move(key), result);
        }
        return result;
    }

    bool branch(const Domains& dom, std::size_t pos, int v, int c, bool allow_parallel)
    {
        tick();
        Domains next = dom;
        if (!assign(next, v, c, pos + 1))
            return false;
        return solve(next, pos + 1, allow_parallel);
    }

    bool forall_parallel(const Domains& dom, std::size_t pos)
    {
        const int v = s_.prefix()[pos].var;
        std::vector<std::future<bool>> jobs;
        for (int c = 0; c < t_.size(); ++c)
            jobs.push_back(std::async(std::launch::async, [this, &dom, pos, v, c] { return branch(dom, pos, v, c, false); }));
        bool result = true;
        std::exception_ptr error;
        for (auto& job : jobs) {
            try {
                result = job.get() && result;
            }
            catch (...) {
                error = std::current_exception();
            }
        }
        if (error)
            std::rethrow_exception(error);
        return result;
    }

    const Sentence& s_;
    const Graph& t_;
    EvalConfig cfg_;
    std::uint64_t full_ = 0;
    std::vector<std::uint64_t> nbr_;
    std::vector<std::vector<int>> incident_;
    std::vector<int> position_;
    std::vector<std::vector<int>> frontier_;
    std::atomic<std::uint64_t> nodes_{0};
    std::mutex memo_mutex_;
    std::unordered_map<std::string, bool> memo_;
};

} // namespace

EvalResult eval(const Sentence& s, const Graph& t, std::span<const Pin> pins, const EvalConfig& cfg)
{
    s.validate();
    Engine engine(s, t, cfg);
    return engine.run(pins);
}

EvalResult eval(const Sentence& s, const Graph& t, const EvalConfig& cfg)
{
    if (!s.is_closed())
        throw PreconditionError("sentence has free variables");
    return eval(s, t, std::span<const Pin>{}, cfg);
}

EvalResult eval_csp(const Sentence& s, std::span<const Pin> pins, const Graph& t, const EvalConfig& cfg)
{
    s.validate();
    std::vector<int> is_pinned(static_cast<std::size_t>(s.variable_count()), 0);
    for (auto [v, c] : pins) {
        if (v < 0 || v >= s.variable_count())
            throw PreconditionError("pinned variable out of range");
        is_pinned[static_cast<std::size_t>(v)] = 1;
    }
    Sentence result;
    for (int v = 0; v < s.variable_count(); ++v) {
        if (is_pinned[static_cast<std::size_t>(v)])
            result.add_free(s.name(v));
        else
            result.add_variable(s.name(v));
    }
    for (int v = 0; v < s.variable_count(); ++v)
        if (!is_pinned[static_cast<std::size_t>(v)])
            result.bind(Quantifier::exists, v);
    for (auto [x, y] : s.atoms())
        result.add_atom(x, y);
    return eval(result, t, pins, cfg);
}

} // namespace qcsp
