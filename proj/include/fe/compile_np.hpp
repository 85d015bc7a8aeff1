#pragma once
// Compiles bounded monotone formulas into seize-the-throne stages whose
// winnability mirrors satisfiability, and builds the matching win scripts.

#include "fe/engine.hpp"
#include "fe/sat.hpp"

#include <optional>
#include <stdexcept>

namespace fe {

struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A clause connector could not be placed without crossing another feature.
struct RoutingFailure : BuildError {
    int clause = -1;
    RoutingFailure(int clause_index, const std::string& msg)
        : BuildError(msg), clause(clause_index) {}
};

// The requested assignment does not satisfy the formula, so no win script
// exists for it.
struct AssignmentUnsatisfying : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unit archetypes used by compiled stages. The two variants trade hit points
// and attack so the same battle scripts work with and without counters.
struct StatTable {
    Attributes variable, clause, lord, literal, sniper;
    int durability = 4;
    static StatTable with_counters();
    static StatTable without_counters();
};

// One blockade beside a road: up to three prongs whose occupants guard the
// road and fight the clause units through the walls behind their posts.
struct TridentLayout {
    Position junction;                // road tile that attacks the chamber
    std::vector<Position> posts;      // used slots, left to right
    std::vector<Position> contacts;   // clause-path tile facing each post
    std::vector<int> literal_units;   // roster indices, slot order
};

struct VariableGadget {
    int center_col = 0;
    Position start, t, f;             // chamber landmarks (t up, f down)
    Position seal_upper, seal_lower;  // wall tiles closing the chamber
    std::vector<Position> sniper_tiles;
    std::vector<int> sniper_units;
    TridentLayout upper, lower;       // positive side up, negative side down
    // Road interval this gadget's blockades cover on both roads.
    Position upper_choke_left, upper_choke_right;
    Position lower_choke_left, lower_choke_right;
    int variable_unit = -1;
};

struct ClauseGadget {
    int rail_row = 0;
    Position start;                    // left end of the rail
    std::vector<Position> rail;        // left to right
    std::vector<Position> contacts;    // visit order, left to right
    std::vector<int> contact_vars;     // variable index behind each contact
    std::vector<int> contact_units;    // blockade occupant behind each contact
    int clause_unit = -1;
};

struct GadgetLayout {
    int d = 6;                         // unit movement = gadget scale
    int upper_road_row = 0, lower_road_row = 0;
    int connector_col = 0;             // column joining the two roads
    Position gate, throne;             // lord start and goal
    std::vector<VariableGadget> variables;
    std::vector<ClauseGadget> clauses;
    int lord_unit = -1;
};

struct CompileResult {
    StageSpec stage;
    GadgetLayout layout;
};

// Builds the stage for a degree-bounded instance (at most three occurrences
// per variable and side, legal line embedding). Throws RoutingFailure when a
// precondition or connector placement fails.
CompileResult compile(const BoundedInstance& inst, bool counter_attacks);

// Distance and structure checks over a compiled stage: chamber span, post and
// contact distances, sniper coverage, road choke width, component isolation.
std::vector<Violation> validate_layout(const CompileResult& compiled);

// Scripted win for a satisfying assignment: commit every variable unit on
// round one, fight the leftover blockade occupants with the clause units,
// then walk the lord around the roads to the throne.
MoveScript synthesize_witness(const BoundedInstance& inst,
                              const CompileResult& compiled,
                              const Assignment& assignment);

// Cycle of floor tiles if the map's floor graph has one (closed walk, first
// tile repeated at the end); nullopt when the floor graph is a forest.
std::optional<std::vector<Position>> find_cycle(const GridMap& grid);

inline bool check_cycle_free(const GridMap& grid) { return !find_cycle(grid); }

// Isolated test rigs for the three gadget-scale exhaustive proofs.
// Chamber + sniper file only: the variable unit must commit on round one.
CompileResult variable_harness(bool counter_attacks);
// One clause path facing three posts; bits 0..2 of `post_mask` choose which
// posts are occupied (left to right). No lord.
CompileResult clause_harness(bool counter_attacks, unsigned post_mask);
// One road with a full blockade between the lord and the throne; bits 0..2
// of `post_mask` choose the occupied posts (left, middle, right).
CompileResult choke_harness(bool counter_attacks, unsigned post_mask);

}  // namespace fe
