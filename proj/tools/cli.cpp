#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcsp/classify.hpp"
#include "qcsp/metrics.hpp"
#include "qcsp/solver.hpp"

namespace qcsp::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Exactly one of a word option and a file option.
Graph load_graph(const std::string& word, const std::string& file, const std::string& what)
{
    if (word.empty() == file.empty())
        throw UsageError("give exactly one of --" + what + " and --" + what + "-file");
    return word.empty() ? parse_graph(read_file(file)) : path_graph(PathForm(word));
}

json recipe_json(const ReductionRecipe& r)
{
    json j{{"tag", std::string(to_string(r.tag))},
           {"subcase", r.subcase},
           {"pattern", r.pattern.word()},
           {"selector", r.selector.word()},
           {"fallback", r.fallback},
           {"parameters", r.params}};
    j["bottom_selector"] = r.bottom_selector ? json(r.bottom_selector->word()) : json(nullptr);
    j["vertical_brace"] = r.vertical_brace ? json(*r.vertical_brace) : json(nullptr);
    return j;
}

json chain_json(const EquivalenceWitness& w)
{
    json links = json::array();
    for (const auto& l : w.chain)
        links.push_back({{"from_size", l.from->size()},
                         {"to_size", l.to->size()},
                         {"power", l.power()},
                         {"stages", l.backward.size()},
                         {"note", l.note},
                         {"paper_bound", l.paper_bound}});
    json j{{"status", std::string(to_string(w.status))}, {"links", links}, {"core_size", w.core().size()}};
    j["core_word"] = w.core_word ? json(w.core_word->word()) : json(nullptr);
    return j;
}

json verdict_json(const Verdict& v)
{
    json j{{"class", std::string(to_string(v.cls))},
           {"reason", std::string(to_string(v.reason))},
           {"verified", v.verified},
           {"note", v.note},
           {"parameters", v.params}};
    json w = json::object();
    if (v.polymorphism)
        w["polymorphism"] = {{"operation", "f1"}, {"size", v.polymorphism->size()}};
    if (v.equivalence)
        w["equivalence"] = chain_json(*v.equivalence);
    if (v.recipe)
        w["recipe"] = recipe_json(*v.recipe);
    j["witness"] = w;
    return j;
}

void print_verdict(std::ostream& out, const Verdict& v)
{
    out << "class: " << to_string(v.cls) << '\n' << "reason: " << to_string(v.reason) << '\n';
    for (const auto& [k, x] : v.params)
        out << "  " << k << " = " << x << '\n';
    if (v.equivalence) {
        const auto& w = *v.equivalence;
        out << "equivalence chain: " << w.chain.size() << " link(s), " << to_string(w.status) << '\n';
        for (const auto& l : w.chain)
            out << "  " << l.from->size() << " -> " << l.to->size() << " vertices, power " << l.power() << " (" << l.note
                << ")\n";
        if (w.core_word)
            out << "  core " << w.core_word->word() << '\n';
    }
    if (v.polymorphism)
        out << "polymorphism: f1 on " << v.polymorphism->size() << " vertices\n";
    if (v.recipe) {
        const auto& r = *v.recipe;
        out << "recipe: " << to_string(r.tag) << (r.subcase.empty() ? "" : " [" + r.subcase + "]") << ", pattern "
            << r.pattern.word() << ", selector " << r.selector.word();
        if (r.bottom_selector)
            out << ", bottom selector " << r.bottom_selector->word();
        if (r.vertical_brace)
            out << ", brace " << *r.vertical_brace;
        out << '\n';
    }
    if (!v.note.empty())
        out << "note: " << v.note << '\n';
    out << "verified: " << (v.verified ? "yes" : "no") << '\n';
}

struct Common {
    bool json_out = false;
    std::uint64_t seed = 1;
    int threads = 1;
};

int do_classify(const std::string& word, const std::string& file, long long cap, const Common& c, std::ostream& out)
{
    if (word.empty() == file.empty())
        throw UsageError("give exactly one of --path and --tree");
    ClassifyOptions opt;
    opt.power_cap = cap;
    Verdict v = word.empty() ? classify_forest(parse_graph(read_file(file)), opt) : classify_path(PathForm(word), opt);
    if (c.json_out)
        out << verdict_json(v).dump(2) << '\n';
    else
        print_verdict(out, v);
    if (!v.verified && v.equivalence && v.equivalence->status == SearchStatus::exhausted)
        return exit_exhausted;
    return v.verified ? exit_ok : exit_negative;
}

EvalConfig eval_config(std::uint64_t limit, const Common& c)
{
    EvalConfig cfg;
    if (limit > 0)
        cfg.node_limit = limit;
    cfg.parallel = c.threads > 1;
    return cfg;
}

int outcome_code(Outcome o)
{
    switch (o) {
    case Outcome::holds: return exit_ok;
    case Outcome::fails: return exit_negative;
    case Outcome::exhausted: return exit_exhausted;
    }
    return exit_usage;
}

int do_eval(const Graph& t, const std::string& sentence_file, std::uint64_t limit, const Common& c, std::ostream& out)
{
    const Sentence s = parse_sentence(read_file(sentence_file));
    const EvalResult r = eval(s, t, eval_config(limit, c));
    if (c.json_out)
        out << json{{"result", std::string(to_string(r.outcome))}, {"nodes", r.nodes}}.dump(2) << '\n';
    else
        out << to_string(r.outcome) << '\n';
    return outcome_code(r.outcome);
}

int do_reduce(const std::string& word, const std::string& nae_file, const std::string& emit, bool check, std::uint64_t limit,
              const Common& c, std::ostream& out)
{
    const PathForm p(word);
    const Graph t = path_graph(p);
    const QnaeInstance phi = normalize(parse_qnae(read_file(nae_file)));
    const ReductionRecipe r = choose_recipe(p);
    const Sentence s = compile(phi, r, t);
    const std::string text = print_sentence(s);
    if (!emit.empty()) {
        std::ofstream f(emit);
        if (!f)
            throw UsageError("cannot write " + emit);
        f << text;
    }
    json j{{"recipe", recipe_json(r)}, {"variables", s.variable_count()}, {"atoms", s.atoms().size()}};
    int code = exit_ok;
    if (check) {
        const EvalResult res = eval(s, t, eval_config(limit, c));
        const bool truth = qnae_truth(phi);
        j["reduced"] = std::string(to_string(res.outcome));
        j["oracle"] = truth;
        if (res.outcome == Outcome::exhausted)
            code = exit_exhausted;
        else if (res.holds() != truth)
            code = exit_negative;
        j["agree"] = code == exit_ok;
    }
    if (c.json_out)
        out << j.dump(2) << '\n';
    else {
        if (emit.empty())
            out << text;
        out << "recipe: " << to_string(r.tag) << ", pattern " << r.pattern.word() << ", selector " << r.selector.word()
            << "; " << s.variable_count() << " variables, " << s.atoms().size() << " atoms\n";
        if (check)
            out << "reduced: " << j["reduced"].get<std::string>() << ", oracle: " << (j["oracle"].get<bool>() ? "true" : "false")
                << (code == exit_ok ? ", agree" : code == exit_negative ? ", DISAGREE" : "") << '\n';
    }
    return code;
}

int smallest_leaf(const Graph& g)
{
    for (int v = 0; v < g.size(); ++v)
        if (g.neighbors(v).size() - (g.is_looped(v) ? 1 : 0) <= 1)
            return v;
    return 0;
}

int do_poly(const Graph& g, const std::string& construct, bool search, std::uint64_t budget, const Common& c,
            std::ostream& out)
{
    if (construct.empty() == !search)
        throw UsageError("give exactly one of --construct and --search");
    if (search) {
        const auto r = search_majority_polymorphism(g, budget);
        json j{{"status", std::string(to_string(r.status))}, {"nodes", r.nodes}};
        if (r.table)
            j["cells"] = r.table->cells();
        if (c.json_out)
            out << j.dump(2) << '\n';
        else {
            out << to_string(r.status) << " after " << r.nodes << " nodes\n";
            if (r.table)
                out << print_table(*r.table);
        }
        return r.status == SearchStatus::found ? exit_ok : r.status == SearchStatus::refuted ? exit_negative : exit_exhausted;
    }
    TernaryTable f = construct == "f0"       ? f0_table(RootedTree(g, smallest_leaf(g)))
                     : construct == "f1"     ? f1_table(g)
                     : construct == "median" ? median_table(g)
                                             : throw UsageError("unknown operation " + construct);
    const bool maj = is_majority(f);
    const bool pol = is_polymorphism(f, g);
    if (c.json_out)
        out << json{{"operation", construct}, {"majority", maj}, {"polymorphism", pol}, {"cells", f.cells()}}.dump(2) << '\n';
    else
        out << print_table(f) << "majority: " << (maj ? "yes" : "no") << "\npolymorphism: " << (pol ? "yes" : "no") << '\n';
    return maj && pol ? exit_ok : exit_negative;
}

template <class Row>
void print_rows(std::ostream& out, const std::vector<Row>& rows)
{
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? " " : "") << row[i];
        out << '\n';
    }
}

int do_surject(const std::string& lemma, int m, int a, int b, int cc, const std::string& witness,
               const std::string& witness_file, long long cap, const Common& c, std::ostream& out)
{
    const int chosen = !lemma.empty() + !witness.empty() + !witness_file.empty();
    if (chosen != 1)
        throw UsageError("give exactly one of --lemma, --witness and --witness-file");
    if (!lemma.empty()) {
        json j{{"lemma", lemma}};
        bool ok = false;
        if (lemma == "surhom") {
            if (m < 1)
                throw UsageError("--m must be positive");
            VertexMap f = surhom_matrix(m);
            ok = is_surjective_homomorphism(f);
            j["matrix"] = surhom_figure(m);
            if (!c.json_out)
                print_rows(out, surhom_figure(m));
        }
        else if (lemma == "surhom2") {
            if (a < 1 || b < 1)
                throw UsageError("--a and --b must be positive");
            const int col = cc > 0 ? cc : a;
            VertexMap f = surhom2_matrix(a, b, col);
            ok = is_surjective_homomorphism(f);
            j["matrix"] = surhom2_figure(a, b, col);
            if (!c.json_out)
                print_rows(out, surhom2_figure(a, b, col));
        }
        else
            throw UsageError("unknown lemma " + lemma);
        j["surjective_homomorphism"] = ok;
        if (c.json_out)
            out << j.dump(2) << '\n';
        else
            out << "surjective homomorphism: " << (ok ? "verified" : "FAILED") << '\n';
        return ok ? exit_ok : exit_negative;
    }
    const EquivalenceWitness w = witness.empty() ? equivalence_witness_tree(parse_graph(read_file(witness_file)), cap)
                                                 : equivalence_witness_path(PathForm(witness));
    const bool ok = w.status == SearchStatus::found && verify_witness(w);
    json j = chain_json(w);
    j["verified"] = ok;
    if (c.json_out)
        out << j.dump(2) << '\n';
    else {
        out << "chain: " << w.chain.size() << " link(s), " << to_string(w.status) << '\n';
        for (const auto& l : w.chain)
            out << "  " << l.from->size() << " -> " << l.to->size() << " vertices, power " << l.power() << " (" << l.note
                << (l.paper_bound.empty() ? "" : "; paper bound " + l.paper_bound) << ")\n";
        if (w.core_word)
            out << "core: " << w.core_word->word() << '\n';
        out << "verified: " << (ok ? "yes" : "no") << '\n';
    }
    if (w.status == SearchStatus::exhausted)
        return exit_exhausted;
    return ok ? exit_ok : exit_negative;
}

int do_survey(int max_n, bool audit, bool witnesses, const Common& c, std::ostream& out)
{
    if (max_n < 1 || max_n > 20)
        throw UsageError("--paths-up-to must be in 1..20");
    ClassifyOptions opt;
    opt.witnesses = witnesses;
    const auto rows = survey_paths(max_n, opt);
    bool consistent = true;
    json table = json::array();
    for (const auto& r : rows) {
        consistent = consistent && (r.verdict.cls == ComplexityClass::nl) == is_zero_eccentric(r.word);
        if (witnesses)
            consistent = consistent && r.verdict.verified;
        if (c.json_out)
            table.push_back({{"word", r.word.word()},
                             {"class", std::string(to_string(r.verdict.cls))},
                             {"reason", std::string(to_string(r.verdict.reason))}});
        else
            out << r.word.word() << ' ' << to_string(r.verdict.cls) << ' ' << to_string(r.verdict.reason) << '\n';
    }
    json unmatched = json::array();
    if (audit) {
        const auto listed = audit_cases(rows);
        if (!c.json_out)
            out << "# unmatched by the literal case analysis: " << listed.size() << '\n';
        for (const auto& r : listed) {
            const auto& p = r.verdict.params;
            const bool mu_ok = p.count("mu") && p.at("mu") > 1;
            consistent = consistent && mu_ok && r.verdict.recipe;
            if (c.json_out)
                unmatched.push_back({{"word", r.word.word()},
                                     {"why", r.verdict.note},
                                     {"recipe", recipe_json(*r.verdict.recipe)},
                                     {"parameters", p}});
            else
                out << r.word.word() << " NP-hard tree-hardness lambda=" << p.at("lambda") << " mu=" << p.at("mu")
                    << " nu=" << p.at("nu") << " delta=" << p.at("delta") << " (" << r.verdict.note << ")\n";
        }
    }
    if (c.json_out) {
        json j{{"paths_up_to", max_n}, {"words", table}, {"consistent", consistent}};
        if (audit)
            j["unmatched"] = unmatched;
        out << j.dump(2) << '\n';
    }
    else
        out << "# " << rows.size() << " words, partition " << (consistent ? "consistent" : "INCONSISTENT") << '\n';
    return consistent ? exit_ok : exit_negative;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"QCSP dichotomy tools for partially reflexive forests", "qcsp"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--seed", c.seed, "seed for randomised steps");
    app.add_option("--threads", c.threads, "worker threads (more than 1 enables parallel evaluation)")->check(CLI::PositiveNumber);
    app.add_flag("--json", c.json_out, "JSON output");

    std::string word, file, sentence, nae, emit, construct, lemma, witness, witness_file;
    long long cap = 1LL << 40;
    std::uint64_t limit = 0, budget = 10'000'000;
    bool check = false, search = false, audit = false, witnesses = false;
    int m = 0, a = 0, b = 0, cc = 0, max_n = 0;

    auto* classify = app.add_subcommand("classify", "complexity verdict with witness");
    classify->add_option("--path", word, "path word");
    classify->add_option("--tree", file, "forest file");
    classify->add_option("--power-cap", cap, "power cap for tree equivalence witnesses");
    classify->add_flag("--json", c.json_out);

    auto* ev = app.add_subcommand("eval", "truth of a sentence on a template");
    ev->add_option("--template", word, "path word");
    ev->add_option("--template-file", file, "graph file");
    ev->add_option("--sentence", sentence, "sentence file")->required();
    ev->add_option("--limit", limit, "node limit");
    ev->add_flag("--json", c.json_out);

    auto* red = app.add_subcommand("reduce", "compile a QNAE instance for a hard path");
    red->add_option("--template", word, "path word")->required();
    red->add_option("--nae", nae, "QNAE file")->required();
    red->add_option("--emit", emit, "write the sentence here");
    red->add_flag("--check", check, "compare with the QNAE game tree");
    red->add_option("--limit", limit, "node limit");
    red->add_flag("--json", c.json_out);

    auto* poly = app.add_subcommand("poly", "majority polymorphisms");
    poly->add_option("--graph", word, "path word");
    poly->add_option("--graph-file", file, "graph file");
    poly->add_option("--construct", construct, "f0, f1 or median");
    poly->add_flag("--search", search, "search for a majority polymorphism");
    poly->add_option("--budget", budget, "search node budget");
    poly->add_flag("--json", c.json_out);

    auto* sur = app.add_subcommand("surject", "surjection lemmas and equivalence witnesses");
    sur->add_option("--lemma", lemma, "surhom or surhom2");
    sur->add_option("--m", m);
    sur->add_option("--a", a);
    sur->add_option("--b", b);
    sur->add_option("--c", cc, "surhom2 columns kept on the negative side (default a)");
    sur->add_option("--witness", witness, "0-eccentric path word");
    sur->add_option("--witness-file", witness_file, "quasi-loop-connected tree file");
    sur->add_option("--power-cap", cap);
    sur->add_flag("--json", c.json_out);

    auto* sv = app.add_subcommand("survey", "classify every path up to a length");
    sv->add_option("--paths-up-to", max_n, "maximum number of vertices")->required();
    sv->add_flag("--audit-cases", audit, "list words the literal case analysis misses");
    sv->add_flag("--witnesses", witnesses, "build and check NL witnesses");
    sv->add_flag("--json", c.json_out);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (classify->parsed())
            return do_classify(word, file, cap, c, out);
        if (ev->parsed())
            return do_eval(load_graph(word, file, "template"), sentence, limit, c, out);
        if (red->parsed())
            return do_reduce(word, nae, emit, check, limit, c, out);
        if (poly->parsed())
            return do_poly(load_graph(word, file, "graph"), construct, search, budget, c, out);
        if (sur->parsed())
            return do_surject(lemma, m, a, b, cc, witness, witness_file, cap, c, out);
        if (sv->parsed())
            return do_survey(max_n, audit, witnesses, c, out);
    }
    catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace qcsp::cli
