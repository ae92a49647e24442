#include "qcsp/logic.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace qcsp {

int Sentence::add_variable(std::string name)
{
    names_.push_back(std::move(name));
    return variable_count() - 1;
}

int Sentence::add_free(std::string name)
{
    int v = add_variable(std::move(name));
    free_.push_back(v);
    return v;
}

int Sentence::add_forall(std::string name)
{
    int v = add_variable(std::move(name));
    bind(Quantifier::forall, v);
    return v;
}

int Sentence::add_exists(std::string name)
{
    int v = add_variable(std::move(name));
    bind(Quantifier::exists, v);
    return v;
}

void Sentence::bind(Quantifier q, int var)
{
    prefix_.push_back({q, var});
}

void Sentence::add_atom(int x, int y)
{
    atoms_.emplace_back(x, y);
}

int Sentence::universal_count() const
{
    return static_cast<int>(std::count_if(prefix_.begin(), prefix_.end(),
                                          [](const QuantifiedVar& qv) { return qv.q == Quantifier::forall; }));
}

void Sentence::validate() const
{
    std::vector<int> seen(names_.size(), 0);
    auto mark = [&](int v) {
        if (v < 0 || v >= variable_count())
            throw FormatError("variable id out of range");
        if (seen[static_cast<std::size_t>(v)]++)
            throw FormatError("duplicate quantified variable " + name(v));
    };
    for (int v : free_)
        mark(v);
    for (const auto& qv : prefix_)
        mark(qv.var);
    for (const auto& [x, y] : atoms_)
        for (int v : {x, y})
            if (v < 0 || v >= variable_count() || !seen[static_cast<std::size_t>(v)])
                throw FormatError("unbound variable " + (v >= 0 && v < variable_count() ? name(v) : std::to_string(v)));
}

Sentence parse_sentence(std::string_view text)
{
    Sentence s;
    std::map<std::string, int, std::less<>> ids;
    std::string cleaned;
    bool comment = false;
    for (char c : text) {
        if (c == '#')
            comment = true;
        if (c == '\n')
            comment = false;
        if (!comment)
            cleaned.push_back(c == '/' ? '\n' : c);
    }
    std::istringstream lines(cleaned);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream in(line);
        std::vector<std::string> tok;
        for (std::string t; in >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        if ((tok[0] == "A" || tok[0] == "E") && tok.size() == 2) {
            if (ids.count(tok[1]))
                throw FormatError("duplicate quantified variable " + tok[1]);
            int v = tok[0] == "A" ? s.add_forall(tok[1]) : s.add_exists(tok[1]);
            ids.emplace(tok[1], v);
        }
        else if (tok[0] == "edge" && tok.size() == 3) {
            int xy[2];
            for (int i = 0; i < 2; ++i) {
                auto it = ids.find(tok[static_cast<std::size_t>(i + 1)]);
                if (it == ids.end())
                    throw FormatError("unbound variable " + tok[static_cast<std::size_t>(i + 1)]);
                xy[i] = it->second;
            }
            s.add_atom(xy[0], xy[1]);
        }
        else {
            throw FormatError("cannot parse sentence line '" + line + "'");
        }
    }
    if (s.prefix().empty() && !s.atoms().empty())
        throw FormatError("atoms without a quantifier prefix");
    return s;
}

std::string print_sentence(const Sentence& s)
{
    if (!s.is_closed())
        throw PreconditionError("only closed sentences have a text form");
    std::ostringstream out;
    for (const auto& qv : s.prefix())
        out << (qv.q == Quantifier::forall ? "A " : "E ") << s.name(qv.var) << '\n';
    for (const auto& [x, y] : s.atoms())
        out << "edge " << s.name(x) << ' ' << s.name(y) << '\n';
    return out.str();
}

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

Sentence sample_sentence(const SentenceSampler& s, std::uint64_t index)
{
    if (s.max_vars < 1 || s.max_atoms < 1 || s.max_universals < 0)
        throw PreconditionError("sampler bounds must be positive");
    std::mt19937_64 rng(splitmix(s.seed ^ splitmix(index)));
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    int atoms = uniform(1, s.max_atoms);
    int vars = std::min(uniform(1, s.max_vars), atoms + 1);
    int universals = uniform(0, std::min(s.max_universals, vars));

    std::vector<Quantifier> kinds(static_cast<std::size_t>(vars), Quantifier::exists);
    std::fill_n(kinds.begin(), universals, Quantifier::forall);
    std::shuffle(kinds.begin(), kinds.end(), rng);

    Sentence out;
    for (int v = 0; v < vars; ++v) {
        out.add_variable("x" + std::to_string(v));
        out.bind(kinds[static_cast<std::size_t>(v)], v);
    }

    bool connected = std::bernoulli_distribution(0.9)(rng);
    int placed = 0;
    if (connected)
        for (int v = 1; v < vars && placed < atoms; ++v, ++placed) {
            int u = uniform(0, v - 1);
            if (uniform(0, 1))
                out.add_atom(u, v);
            else
                out.add_atom(v, u);
        }
    for (; placed < atoms; ++placed)
        out.add_atom(uniform(0, vars - 1), uniform(0, vars - 1));
    return out;
}

} // namespace qcsp
