#pragma once

// Reductions from (quantified) not-all-equal 3-satisfiability to QCSP over
// hard path and tree templates.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcsp/graphs.hpp"
#include "qcsp/logic.hpp"

namespace qcsp {

/// All literals are positive. Clause entries index into `prefix`.
struct QnaeInstance {
    std::vector<std::pair<Quantifier, std::string>> prefix;
    std::vector<std::array<int, 3>> clauses;

    friend bool operator==(const QnaeInstance&, const QnaeInstance&) = default;
};

/// Lines `A name`, `E name`, `c x y z`; `#` comments.
QnaeInstance parse_qnae(std::string_view text);
std::string print_qnae(const QnaeInstance& phi);

/// Moves an existential literal into the middle of every clause. Throws
/// PreconditionError on an all-universal clause.
QnaeInstance normalize(const QnaeInstance& phi);
bool is_normalized(const QnaeInstance& phi);

/// Game-tree value of the instance.
bool qnae_truth(const QnaeInstance& phi);

enum class CaseTag { p101_family, wb0_centred, p10101_family, p101d01, wb1_centred, remaining_case, tree_hardness };
std::string_view to_string(CaseTag t);

struct ReductionRecipe {
    CaseTag tag = CaseTag::p101_family;
    std::string subcase;
    PathForm pattern{"101"};
    /// Attached at its first vertex; the last vertex is the universal one.
    PathForm selector{"10"};
    /// Second prologue selector when it differs from `selector`.
    std::optional<PathForm> bottom_selector;
    std::optional<int> vertical_brace;
    /// The literal case analysis did not match; this is the tree fallback.
    bool fallback = false;
    std::map<std::string, int> params;
    /// The template the recipe was chosen for.
    std::shared_ptr<const Graph> source;
};

/// Requires a path that is not 0-eccentric.
ReductionRecipe choose_recipe(const PathForm& p);

struct TreeHardness {
    int lambda = 0;
    int mu = 0;
    int nu = 0;
    int delta = 0;
    /// Paths with the mu-property, from T_x to T_y.
    std::vector<std::vector<int>> paths;
    bool reflection_closed = false;
};

/// Requires a tree that is not quasi-loop-connected.
TreeHardness tree_hardness_parameters(const Graph& tree);
ReductionRecipe tree_recipe(const Graph& tree);

/// Template loops the prologue selectors force from the two ends of a path
/// template; nullopt when either is not unique or they coincide.
std::optional<std::pair<int, int>> designated_loops(const ReductionRecipe& r, const Graph& tmpl);

struct CompileOptions {
    bool allow_unnormalized = false;
};

Sentence compile(const QnaeInstance& phi, const ReductionRecipe& r, const Graph& tmpl, CompileOptions opt = {});

/// Free variables: top, bottom, l1, l2, l3 (in that order).
Sentence clause_gadget(const ReductionRecipe& r, const Graph& tmpl);

/// Row i pins l_k to the bottom loop iff bit k of i is set.
std::array<bool, 8> gadget_extension_check(const ReductionRecipe& r, const Graph& tmpl);
inline constexpr std::array<bool, 8> nae_table{false, true, true, true, true, true, true, false};

} // namespace qcsp
