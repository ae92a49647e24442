#pragma once

// Ternary operations on partially reflexive trees: the majority
// polymorphisms f0 (rooted irreflexive trees), median (reflexive trees) and
// f1 (loop-connected trees), plus checkers and an exhaustive search.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/graphs.hpp"

namespace qcsp {

class TernaryTable {
public:
    explicit TernaryTable(int n) : n_(n), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

    int size() const { return n_; }
    int operator()(int x, int y, int z) const { return cells_[index(x, y, z)]; }
    void set(int x, int y, int z, int w) { cells_[index(x, y, z)] = w; verified_majority_ = false; }
    const std::vector<int>& cells() const { return cells_; }

    bool verified_majority() const { return verified_majority_; }

    friend bool operator==(const TernaryTable& a, const TernaryTable& b) { return a.n_ == b.n_ && a.cells_ == b.cells_; }

private:
    friend bool is_majority(TernaryTable& f);

    std::size_t index(int x, int y, int z) const
    {
        return (static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(y)) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(z);
    }

    int n_;
    std::vector<int> cells_;
    bool verified_majority_ = false;
};

bool is_majority(const TernaryTable& f);
/// Same check; records the result in the table's flag.
bool is_majority(TernaryTable& f);
/// f preserves E: every triple of edges maps to an edge.
bool is_polymorphism(const TernaryTable& f, const Graph& g);

/// Decomposition of a loop-connected tree into its reflexive centre and
/// irreflexive tree-components, each rooted at the loop it hangs from.
struct ComponentStructure {
    struct Component {
        int root;
        /// Root first, then the irreflexive vertices.
        std::vector<int> vertices;
    };
    std::vector<int> centre;
    std::vector<Component> components;
    /// Component ids per vertex; a looped root may belong to several.
    std::vector<std::vector<int>> member_of;
    /// Parent and depth inside the (unique) component for non-root vertices;
    /// -1 / 0 for centre vertices.
    std::vector<int> parent;
    std::vector<int> depth;
};

ComponentStructure component_structure(const Graph& tree);

/// f0 on an irreflexive tree whose root has degree at most one.
TernaryTable f0_table(const RootedTree& t);
TernaryTable median_table(const Graph& reflexive_tree);
/// f1 on a loop-connected tree (f0 rooted at the smallest leaf when irreflexive).
TernaryTable f1_table(const Graph& tree);

struct TableSearchResult {
    SearchStatus status;
    std::optional<TernaryTable> table;
    std::uint64_t nodes = 0;
};

/// Backtracking over the cells of G^3 -> G with majority cells fixed and arc
/// consistency maintained.
TableSearchResult search_majority_polymorphism(const Graph& g, std::uint64_t node_budget);

/// n, then one `x y z -> w` line per cell (1-based).
std::string print_table(const TernaryTable& f);

} // namespace qcsp
