#pragma once

// Dichotomy verdicts for partially reflexive paths and forests.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcsp/graphs.hpp"
#include "qcsp/polymorph.hpp"
#include "qcsp/reduce.hpp"
#include "qcsp/surject.hpp"

namespace qcsp {

enum class ComplexityClass { nl, np_hard, pspace_complete };
std::string_view to_string(ComplexityClass c);

enum class Reason {
    disconnected,
    irreflexive,
    loop_connected,
    quasi_loop_connected,
    zero_eccentric,
    weakly_balanced_0,
    weakly_balanced_1,
    remaining_case,
    tree_hardness,
    unmatched_case,
};
std::string_view to_string(Reason r);

struct Verdict {
    ComplexityClass cls = ComplexityClass::nl;
    Reason reason = Reason::loop_connected;
    /// Majority polymorphism of the template, or of the equivalence core.
    std::optional<TernaryTable> polymorphism;
    std::optional<EquivalenceWitness> equivalence;
    std::optional<ReductionRecipe> recipe;
    /// lambda, a, b, |alpha|, mu, nu, Delta and the recipe parameters where they apply.
    std::map<std::string, int> params;
    std::string note;
    /// Witness checks passed (always true for hard verdicts).
    bool verified = false;
};

struct ClassifyOptions {
    /// Build polymorphism / equivalence witnesses for NL verdicts.
    bool witnesses = true;
    /// Power cap for tree equivalence witnesses.
    long long power_cap = 1LL << 40;
};

Verdict classify_path(const PathForm& p, const ClassifyOptions& opt = {});
/// Paths are delegated to classify_path. Throws PreconditionError on a
/// non-forest.
Verdict classify_forest(const Graph& f, const ClassifyOptions& opt = {});

/// The word of a connected graph that is a path, read from its
/// smaller-id end.
std::optional<PathForm> as_path(const Graph& g);

struct SurveyRow {
    PathForm word;
    Verdict verdict;
};

/// Every word up to reversal with 1..max_n vertices, shortest first.
std::vector<SurveyRow> survey_paths(int max_n, const ClassifyOptions& opt = {});

/// Hard words the literal case analysis does not match.
std::vector<SurveyRow> audit_cases(const std::vector<SurveyRow>& rows);

} // namespace qcsp
