#pragma once

// Prenex positive Horn sentences over one symmetric binary relation E.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcsp/graphs.hpp"

namespace qcsp {

enum class Quantifier { forall, exists };

struct QuantifiedVar {
    Quantifier q;
    int var;
    friend bool operator==(const QuantifiedVar&, const QuantifiedVar&) = default;
};

/// Variables are dense ids into `names`. A variable is either free (listed in
/// `free_vars`) or bound exactly once in `prefix`.
class Sentence {
public:
    int add_variable(std::string name);
    int add_free(std::string name);
    int add_forall(std::string name);
    int add_exists(std::string name);
    void bind(Quantifier q, int var);
    void add_atom(int x, int y);

    int variable_count() const { return static_cast<int>(names_.size()); }
    const std::string& name(int var) const { return names_[static_cast<std::size_t>(var)]; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& free_vars() const { return free_; }
    const std::vector<QuantifiedVar>& prefix() const { return prefix_; }
    const std::vector<std::pair<int, int>>& atoms() const { return atoms_; }
    bool is_closed() const { return free_.empty(); }
    int universal_count() const;

    /// Throws FormatError if the invariants fail (unbound atom variable,
    /// variable bound twice, ...).
    void validate() const;

    friend bool operator==(const Sentence&, const Sentence&) = default;

private:
    std::vector<std::string> names_;
    std::vector<int> free_;
    std::vector<QuantifiedVar> prefix_;
    std::vector<std::pair<int, int>> atoms_;
};

/// Lines `A name`, `E name`, `edge name name`; `#` starts a comment and `/`
/// also separates lines.
Sentence parse_sentence(std::string_view text);
std::string print_sentence(const Sentence& s);

struct SentenceSampler {
    std::uint64_t seed = 0;
    int max_vars = 4;
    int max_universals = 2;
    int max_atoms = 4;
};

Sentence sample_sentence(const SentenceSampler& s, std::uint64_t index);

} // namespace qcsp
