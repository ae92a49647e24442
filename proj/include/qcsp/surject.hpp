#pragma once

// Explicit surjective homomorphisms between powers of paths and trees, and
// the template-equivalence witnesses built from them.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/graphs.hpp"

namespace qcsp {

/// Entry of the P_{10^m}^2 -> P_{0^m 1 0^m} matrix, in [-m, m]. Row is the
/// first coordinate; vertex i of P_{10^m} is at distance i from the loop.
int surhom_entry(int m, int row, int col);
/// Dense codomain ids: label k is vertex k + m.
VertexMap surhom_matrix(int m);
std::vector<std::vector<int>> surhom_figure(int m);

/// P_{1^c 1^b 0^a}^2 -> P_{0^c 1^b 0^a} for 1 <= c <= a, b >= 1. Labels are
/// -c..-1, 0_1..0_b, 1..a; dense ids follow that order.
VertexMap surhom2_matrix(int a, int b, int c);
inline VertexMap surhom2_matrix(int a, int b) { return surhom2_matrix(a, b, a); }
/// Matrix of labels ("-3", "0_2", "5", ...) in paper layout.
std::vector<std::vector<std::string>> surhom2_figure(int a, int b, int c);
std::string surhom2_label(int a, int b, int c, int id);

/// A graph with equal-length irreflexive paths ("arms") hanging off a looped
/// vertex l. arms[i][d-1] is the vertex at depth d of arm i.
struct ArmedGraph {
    std::shared_ptr<const Graph> graph;
    int l = -1;
    std::vector<std::vector<int>> arms;
};

struct MultipliedPaths {
    ArmedGraph target;
    VertexMap map;
};

/// H^2 -> H' where H' carries `target_arms` arms (at most k + k^2 for k arms).
MultipliedPaths multiply_paths_map(const ArmedGraph& h, int target_arms);

/// One step of a backward chain: source^exponent -> target.
struct Stage {
    std::shared_ptr<const Graph> source;
    int exponent = 1;
    std::shared_ptr<const Graph> target;
    std::vector<int> image;
};

/// `from` and `to` have the same QCSP: forward from -> to, backward
/// to^p -> from as a composition of stages.
struct EquivalenceLink {
    std::shared_ptr<const Graph> from;
    std::shared_ptr<const Graph> to;
    std::vector<int> forward;
    std::vector<Stage> backward;
    std::string note;
    std::string paper_bound;

    long long power() const;
};

struct EquivalenceWitness {
    std::shared_ptr<const Graph> source;
    std::vector<EquivalenceLink> chain;
    std::optional<PathForm> core_word;
    /// exhausted when a needed power exceeds the cap; the chain then stops short.
    SearchStatus status = SearchStatus::found;

    const Graph& core() const { return chain.empty() ? *source : *chain.back().to; }
};

/// Checks every forward map and every stage with the surjective-homomorphism
/// checker, and that the stages chain up.
bool verify_witness(const EquivalenceWitness& w);
/// The composite backward map on to^p (built explicitly; small cases only).
VertexMap compose_stages(const std::vector<Stage>& stages);

EquivalenceWitness equivalence_witness_path(const PathForm& p);
EquivalenceWitness equivalence_witness_tree(const Graph& tree, long long power_cap);

} // namespace qcsp
