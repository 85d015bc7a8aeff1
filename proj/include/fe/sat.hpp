#pragma once
// Monotone CNF on a variable line with nested clause levels, the
// occurrence-degree reduction, and a brute-force satisfiability oracle.

#include "fe/core.hpp"

#include <stdexcept>

namespace fe {

struct Literal {
    int var = -1;  // index into variables
    bool negated = false;
    bool operator==(const Literal&) const = default;
};

enum class ClauseSign : uint8_t { AllPositive, AllNegative };

// A clause drawn above (positive) or below (negative) the variable line,
// nested at `level` (0 = outermost).
struct EmbeddedClause {
    ClauseSign sign = ClauseSign::AllPositive;
    std::vector<Literal> literals;  // 1..3 entries
    int level = 0;
};

struct CnfInstance {
    std::vector<std::string> variables;  // order = left-to-right line position
    std::vector<EmbeddedClause> clauses;
};

// Degree-reduced instance: every variable occurs in at most three positive
// and at most three negative clauses.
struct BoundedInstance {
    CnfInstance cnf;
    // Original variable index -> its replacement variable indices in the new
    // instance, pairwise ordered x_1^T, x_1^F, ..., x_k^T, x_k^F.
    std::vector<std::vector<int>> mapping;
    std::vector<std::string> original_variables;
};

struct TooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistentChainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structural checks: monotone clause signs, 1..3 literals, known variables,
// and per-side geometric legality — same-level spans interior-disjoint,
// overlapping spans properly nested with the inner one at a higher level, and
// no clause occurrence strictly inside a deeper clause's span.
std::vector<Violation> validate_embedding(const CnfInstance& inst);

// Replace each variable's k occurrences with the alternating chain
// x_1^T, x_1^F, ..., x_k^T, x_k^F (adjacent pairs forced unequal by one
// all-positive and one all-negative 2-clause each); occurrence i keeps its
// clause, substituting x_i^T with the clause's own sign.
BoundedInstance reduce_degree(const CnfInstance& inst);

using Assignment = std::vector<bool>;  // indexed like variables

bool satisfies(const CnfInstance& inst, const Assignment& a);

// Lexicographically-first satisfying assignment (false < true, leftmost
// variable most significant), or nullopt when unsatisfiable.
// Throws TooLargeError when the variable count exceeds max_vars.
std::optional<Assignment> brute_force_sat(const CnfInstance& inst, int max_vars = 24);

// Read the original assignment back off a satisfying assignment of the
// reduced instance; all of a variable's x_i^T must agree.
Assignment lift_assignment(const BoundedInstance& reduced, const Assignment& a);

// Occurrence counts per (variable, side); .first = positive.
std::vector<std::pair<int, int>> occurrence_counts(const CnfInstance& inst);

struct OccurrenceRef {
    int clause = -1;   // clause index
    int literal = -1;  // literal index inside the clause
    bool operator==(const OccurrenceRef&) const = default;
};

// Left-to-right slot order of each variable's occurrences on one side:
// clauses ending here from the left (innermost first), then units and
// pass-throughs (deepest first), then clauses starting here (outermost
// first). reduce_degree assigns chain positions in this same order.
std::vector<std::vector<OccurrenceRef>> occurrence_slots(const CnfInstance& inst,
                                                         ClauseSign sign);

}  // namespace fe
