#pragma once

// Brute-force model checking of positive Horn sentences on small templates.

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

#include "qcsp/graphs.hpp"
#include "qcsp/logic.hpp"

namespace qcsp {

enum class Propagation { none, arc_consistency };

struct EvalConfig {
    Propagation propagation = Propagation::arc_consistency;
    bool memoize = true;
    std::uint64_t node_limit = 50'000'000;
    /// Branches of the outermost universal run on separate threads.
    bool parallel = false;
};

enum class Outcome { holds, fails, exhausted };
std::string_view to_string(Outcome o);

struct EvalResult {
    Outcome outcome;
    std::uint64_t nodes = 0;
    bool holds() const { return outcome == Outcome::holds; }
};

/// (variable, template vertex)
using Pin = std::pair<int, int>;

/// Truth of `s` in `t`. Every free variable of `s` must be pinned.
EvalResult eval(const Sentence& s, const Graph& t, const EvalConfig& cfg = {});
EvalResult eval(const Sentence& s, const Graph& t, std::span<const Pin> pins, const EvalConfig& cfg = {});

/// Whether the pins extend to a homomorphism from the atom graph of `s` into
/// `t`. Quantifiers are ignored: every unpinned variable is existential.
EvalResult eval_csp(const Sentence& s, std::span<const Pin> pins, const Graph& t, const EvalConfig& cfg = {});

} // namespace qcsp
