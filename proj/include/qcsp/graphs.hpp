#pragma once

// Partially reflexive graphs: undirected graphs in which any vertex may carry
// a self-loop. Vertices are dense integers 0..n-1. Path vertices are written
// 1..n in the text formats; the +-1 shift happens only at the parse/print
// boundary.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcsp {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : adj_(static_cast<std::size_t>(n)), loop_(static_cast<std::size_t>(n), 0) {}

    /// Builds from sorted, symmetric adjacency lists (a loop at v is v in adj[v]).
    static Graph from_adjacency(std::vector<std::vector<int>> adj);

    int size() const { return static_cast<int>(adj_.size()); }

    void add_edge(int u, int v);
    void add_loop(int v) { add_edge(v, v); }

    bool has_edge(int u, int v) const;
    bool is_looped(int v) const { return loop_[static_cast<std::size_t>(v)] != 0; }
    std::span<const int> neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree_without_loop(int v) const;

    std::vector<int> looped_vertices() const;
    bool is_reflexive() const;
    bool is_irreflexive() const;

    /// Number of unordered edges, loops included.
    std::size_t edge_count() const;
    /// Every ordered pair (u,v) with {u,v} an edge; loops appear once.
    std::vector<std::pair<int, int>> arcs() const;

    /// Copy with loops stripped.
    Graph loopless() const;
    /// Induced subgraph on `keep` (in the given order); vertex i of the result is keep[i].
    Graph induced(std::span<const int> keep) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::vector<int>> adj_;
    std::vector<std::uint8_t> loop_;
};

/// A word over {0,1}: position i (1-based) is looped iff word[i] == '1'.
class PathForm {
public:
    explicit PathForm(std::string word);

    const std::string& word() const { return word_; }
    int size() const { return static_cast<int>(word_.size()); }
    /// 1-based.
    bool looped(int position) const { return word_[static_cast<std::size_t>(position - 1)] == '1'; }
    PathForm reversed() const;
    /// Lexicographically smaller of the word and its reverse.
    PathForm canonical() const;

    friend bool operator==(const PathForm&, const PathForm&) = default;
    friend auto operator<=>(const PathForm&, const PathForm&) = default;

private:
    std::string word_;
};

/// Path on |word| vertices in natural order, loops at the 1-positions.
Graph path_graph(const PathForm& form);
inline Graph path_graph(std::string_view word) { return path_graph(PathForm(std::string(word))); }

/// Vertex (x,u) of G x H is numbered x * |H| + u (row-major).
Graph direct_product(const Graph& g, const Graph& h);
/// G^k with coordinates in row-major order: (v1..vk) -> sum v_i |G|^(k-i).
Graph power(const Graph& g, int k);

bool is_connected(const Graph& g);
std::vector<std::vector<int>> connected_components(const Graph& g);
/// Loop-stripped graph is acyclic.
bool is_forest(const Graph& g);
bool is_tree(const Graph& g);

/// Total vertex map between two graphs. The verified flags are set only by
/// is_homomorphism / is_surjective_homomorphism.
class VertexMap {
public:
    VertexMap(std::shared_ptr<const Graph> domain, std::shared_ptr<const Graph> codomain, std::vector<int> image);

    const Graph& domain() const { return *domain_; }
    const Graph& codomain() const { return *codomain_; }
    std::shared_ptr<const Graph> domain_ptr() const { return domain_; }
    std::shared_ptr<const Graph> codomain_ptr() const { return codomain_; }
    const std::vector<int>& image() const { return image_; }
    int operator()(int v) const { return image_[static_cast<std::size_t>(v)]; }

    bool verified_homomorphism() const { return verified_hom_; }
    bool verified_surjective() const { return verified_surj_; }

private:
    friend bool is_homomorphism(VertexMap& f);
    friend bool is_surjective_homomorphism(VertexMap& f);

    std::shared_ptr<const Graph> domain_;
    std::shared_ptr<const Graph> codomain_;
    std::vector<int> image_;
    bool verified_hom_ = false;
    bool verified_surj_ = false;
};

bool is_homomorphism(const Graph& g, const Graph& h, std::span<const int> image);
bool is_surjective_homomorphism(const Graph& g, const Graph& h, std::span<const int> image);
bool is_homomorphism(VertexMap& f);
bool is_surjective_homomorphism(VertexMap& f);

enum class SearchStatus { found, refuted, exhausted };
std::string_view to_string(SearchStatus s);

struct HomSearchResult {
    SearchStatus status;
    std::optional<std::vector<int>> image;
    std::uint64_t nodes = 0;
};

/// Backtracking search with neighbourhood filtering. `refuted` means the
/// whole space was exhausted without a solution; `exhausted` means the node
/// budget ran out first.
HomSearchResult find_homomorphism(const Graph& g, const Graph& h, std::uint64_t node_budget, bool surjective);
inline HomSearchResult find_surjective_homomorphism(const Graph& g, const Graph& h, std::uint64_t node_budget) {
    return find_homomorphism(g, h, node_budget, true);
}

/// Distance in the loop-stripped graph; nullopt stands for infinity.
using Distance = std::optional<int>;

std::vector<std::vector<Distance>> distances(const Graph& g);
std::vector<Distance> bfs_distances(const Graph& g, std::span<const int> sources);
/// Distance from v to the nearest looped vertex; infinite when irreflexive.
Distance loop_distance(const Graph& g, int v);

/// Vertices reachable from `from` by a walk of exactly `length` edges (loops
/// may be traversed). Literal enumeration; intended for small graphs.
std::vector<bool> exact_walk_targets(const Graph& g, int from, int length);

class RootedTree {
public:
    RootedTree(const Graph& tree, int root);

    const Graph& graph() const { return *tree_; }
    int root() const { return root_; }
    int size() const { return tree_->size(); }
    /// -1 for the root.
    int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
    int depth(int v) const { return depth_[static_cast<std::size_t>(v)]; }
    int parity(int v) const { return depth(v) % 2; }
    /// Deepest common ancestor; on one branch it is the vertex closer to the root.
    int meet(int x, int y) const;
    /// Ancestor of v at the given depth (depth <= depth(v)).
    int ancestor_at(int v, int depth) const;
    std::vector<int> children(int v) const;

private:
    std::shared_ptr<const Graph> tree_;
    int root_;
    std::vector<int> parent_;
    std::vector<int> depth_;
};

/// Median of three vertices of a tree: the vertex common to all three paths.
int tree_median(const RootedTree& t, int x, int y, int z);

// Text formats. Graph: first line n, then `u v` per edge (1-based, `v v` for a
// loop). Path: the bare 0/1 word. '#' starts a comment.
Graph parse_graph(std::string_view text);
std::string print_graph(const Graph& g);
PathForm parse_path(std::string_view text);
std::string print_path(const PathForm& p);

/// Non-isomorphic partially reflexive trees on n vertices.
std::vector<Graph> enumerate_trees(int n, bool with_loops);
/// Canonical string of a partially reflexive tree (equal iff isomorphic).
std::string tree_canonical_form(const Graph& tree);

} // namespace qcsp
