#pragma once

// Structural predicates on paths and trees: loop-connectivity, 0-eccentricity,
// weak balance, lambda distances and the pruned trees T' and T''.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/graphs.hpp"

namespace qcsp {

/// word = alpha 1^b 0^a with a maximal trailing zeros and b the loop block
/// before them.
struct PathDecomposition {
    std::string alpha;
    int b = 0;
    int a = 0;

    std::string reassemble() const { return alpha + std::string(static_cast<std::size_t>(b), '1') + std::string(static_cast<std::size_t>(a), '0'); }
};

PathDecomposition decompose(const PathForm& p);

enum class Centring { not_balanced, zero_centred, one_centred };
std::string_view to_string(Centring c);

/// Per-direction scan result plus the centring of a weakly balanced path.
struct BalanceInfo {
    bool left = false;
    bool right = false;
    Centring centring = Centring::not_balanced;
    /// (n+1)/2, possibly half-integral.
    double centre = 0;
};

BalanceInfo balance(const PathForm& p);
inline Centring weakly_balanced(const PathForm& p) { return balance(p).centring; }

/// Loops induce a connected (or empty) subgraph. Rejects disconnected input.
bool is_loop_connected(const Graph& g);
bool is_zero_eccentric(const PathForm& p);

struct TreeMetrics {
    std::vector<Distance> lambda;
    Distance lambda_max;
    /// Maximal connected reflexive subtrees, each sorted, ordered by smallest vertex.
    std::vector<std::vector<int>> reflexive_subtrees;
    bool quasi_loop_connected = false;
    /// Index into reflexive_subtrees of the chosen T0, when quasi-loop-connected with loops.
    std::optional<std::size_t> t0;
    /// Farthest-from-loops vertex (smallest id) and its nearest T0 vertex.
    int v_lambda = -1;
    int l = -1;
    /// Path from l (index 0) to v_lambda (index lambda).
    std::vector<int> arm;
};

TreeMetrics tree_metrics(const Graph& tree);
inline bool is_quasi_loop_connected(const Graph& tree) { return tree_metrics(tree).quasi_loop_connected; }

/// T -> T' -> T'' for a quasi-loop-connected tree. T' prunes the branch at l
/// holding v_lambda down to the arm; T'' loops every subtree hanging off T0
/// other than the arm. Ids in T' / T'' are positions in `keep`.
struct PrunedTree {
    std::shared_ptr<const Graph> t;
    std::shared_ptr<const Graph> t_prime;
    std::shared_ptr<const Graph> t_double_prime;
    std::vector<int> keep;
    /// T -> T' (surjective, verified on construction).
    std::vector<int> fold;
    int lambda = 0;
    int l = -1;
    std::vector<int> arm;
    std::vector<int> t0;
    /// Root first, then the rest; T' ids.
    std::vector<std::vector<int>> hanging;
    /// Paths (T ids) from l to every leaf of the branch at l holding v_lambda.
    std::vector<std::vector<int>> branch_leaf_paths;
    bool identity = false;
};

PrunedTree build_pruned_tree(const Graph& tree);

} // namespace qcsp
