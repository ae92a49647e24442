#include "qcsp/classify.hpp"

#include <set>

#include "qcsp/metrics.hpp"

namespace qcsp {

std::string_view to_string(ComplexityClass c)
{
    switch (c) {
    case ComplexityClass::nl: return "NL";
    case ComplexityClass::np_hard: return "NP-hard";
    case ComplexityClass::pspace_complete: return "Pspace-complete";
    }
    return "?";
}

std::string_view to_string(Reason r)
{
    switch (r) {
    case Reason::disconnected: return "disconnected";
    case Reason::irreflexive: return "irreflexive";
    case Reason::loop_connected: return "loop-connected";
    case Reason::quasi_loop_connected: return "quasi-loop-connected";
    case Reason::zero_eccentric: return "0-eccentric";
    case Reason::weakly_balanced_0: return "weakly-balanced-0";
    case Reason::weakly_balanced_1: return "weakly-balanced-1";
    case Reason::remaining_case: return "remaining-case";
    case Reason::tree_hardness: return "tree-hardness";
    case Reason::unmatched_case: return "unmatched-case";
    }
    return "?";
}

namespace {

Reason reason_for(const ReductionRecipe& r)
{
    if (r.fallback)
        return Reason::unmatched_case;
    switch (r.tag) {
    case CaseTag::p101_family:
    case CaseTag::wb0_centred: return Reason::weakly_balanced_0;
    case CaseTag::p10101_family:
    case CaseTag::p101d01:
    case CaseTag::wb1_centred: return Reason::weakly_balanced_1;
    case CaseTag::remaining_case: return Reason::remaining_case;
    case CaseTag::tree_hardness: return Reason::tree_hardness;
    }
    return Reason::unmatched_case;
}

void hard(Verdict& v, ReductionRecipe r)
{
    v.reason = reason_for(r);
    v.cls = r.fallback || r.tag == CaseTag::tree_hardness ? ComplexityClass::np_hard : ComplexityClass::pspace_complete;
    for (const char* k : {"lambda", "mu", "nu", "delta"})
        if (r.params.count(k))
            v.params[k] = r.params.at(k);
    if (r.fallback)
        v.note = r.subcase;
    v.recipe = std::move(r);
    v.verified = true;
}

// f1 on the core, plus the chain when there is one.
void attach_nl_witness(Verdict& v, EquivalenceWitness w)
{
    bool ok = w.status == SearchStatus::found;
    if (!ok)
        v.note = "equivalence witness needs a power above the cap";
    else {
        TernaryTable f = f1_table(w.core());
        ok = is_majority(f) && is_polymorphism(f, w.core());
        if (!w.chain.empty())
            ok = ok && verify_witness(w);
        v.polymorphism = std::move(f);
    }
    if (!w.chain.empty() || w.status != SearchStatus::found)
        v.equivalence = std::move(w);
    v.verified = ok;
}

} // namespace

Verdict classify_path(const PathForm& p, const ClassifyOptions& opt)
{
    Verdict v;
    const auto dec = decompose(p);
    v.params["a"] = dec.a;
    v.params["b"] = dec.b;
    v.params["|alpha|"] = static_cast<int>(dec.alpha.size());
    const auto lambda = tree_metrics(path_graph(p)).lambda_max;
    if (lambda)
        v.params["lambda"] = *lambda;
    if (!is_zero_eccentric(p)) {
        hard(v, choose_recipe(p));
        return v;
    }
    v.cls = ComplexityClass::nl;
    v.reason = Reason::zero_eccentric;
    if (opt.witnesses)
        attach_nl_witness(v, equivalence_witness_path(p));
    return v;
}

std::optional<PathForm> as_path(const Graph& g)
{
    const int n = g.size();
    if (n == 0 || !is_tree(g))
        return std::nullopt;
    int end = -1;
    for (int v = 0; v < n; ++v) {
        const auto degree = g.neighbors(v).size() - (g.is_looped(v) ? 1 : 0);
        if (degree > 2)
            return std::nullopt;
        if (end < 0 && degree <= 1)
            end = v;
    }
    std::string word;
    int prev = -1, cur = end;
    while (cur >= 0) {
        word.push_back(g.is_looped(cur) ? '1' : '0');
        int next = -1;
        for (int u : g.neighbors(cur))
            if (u != prev && u != cur)
                next = u;
        prev = cur;
        cur = next;
    }
    return PathForm(word);
}

Verdict classify_forest(const Graph& f, const ClassifyOptions& opt)
{
    if (!is_forest(f))
        throw PreconditionError("not a forest");
    if (!is_connected(f)) {
        Verdict v;
        v.cls = ComplexityClass::nl;
        v.reason = Reason::disconnected;
        v.params["components"] = static_cast<int>(connected_components(f).size());
        v.verified = true;
        return v;
    }
    if (auto p = as_path(f))
        return classify_path(*p, opt);
    Verdict v;
    const TreeMetrics tm = tree_metrics(f);
    if (tm.lambda_max)
        v.params["lambda"] = *tm.lambda_max;
    if (!tm.quasi_loop_connected) {
        hard(v, tree_recipe(f));
        return v;
    }
    v.cls = ComplexityClass::nl;
    if (tm.reflexive_subtrees.empty())
        v.reason = Reason::irreflexive;
    else if (is_loop_connected(f))
        v.reason = Reason::loop_connected;
    else
        v.reason = Reason::quasi_loop_connected;
    if (!opt.witnesses)
        return v;
    if (v.reason == Reason::quasi_loop_connected)
        attach_nl_witness(v, equivalence_witness_tree(f, opt.power_cap));
    else {
        EquivalenceWitness w;
        w.source = std::make_shared<const Graph>(f);
        attach_nl_witness(v, std::move(w));
    }
    return v;
}

std::vector<SurveyRow> survey_paths(int max_n, const ClassifyOptions& opt)
{
    std::vector<SurveyRow> rows;
    for (int n = 1; n <= max_n; ++n) {
        std::set<PathForm> seen;
        for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
            std::string w;
            for (int i = 0; i < n; ++i)
                w.push_back(mask >> i & 1UL ? '1' : '0');
            seen.insert(PathForm(w).canonical());
        }
        for (const auto& p : seen)
            rows.push_back({p, classify_path(p, opt)});
    }
    return rows;
}

std::vector<SurveyRow> audit_cases(const std::vector<SurveyRow>& rows)
{
    std::vector<SurveyRow> out;
    for (const auto& r : rows)
        if (r.verdict.reason == Reason::unmatched_case)
            out.push_back(r);
    return out;
}

} // namespace qcsp
