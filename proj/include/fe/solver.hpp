#pragma once
// Winnability search: bounded exhaustive (memoized) and unbounded reachability.

#include "fe/engine.hpp"

#include <functional>

namespace fe {

enum class Decision { Winnable, NotWinnable, ResourceExceeded };

struct SolveLimits {
    uint64_t node_cap = 0;   // 0 = unlimited
    double time_cap_s = 0;   // 0 = unlimited
};

struct SolveStats {
    uint64_t nodes = 0;
    uint64_t memo_hits = 0;
    double elapsed_s = 0;
};

struct SolverOptions {
    // Skip stand-still Wait actions (ending the turn already covers them).
    bool dominance = false;
    // Success test; defaults to outcome == Win.
    std::function<bool(const GameState&)> goal;
};

struct SolveResult {
    Decision decision = Decision::NotWinnable;
    std::optional<MoveScript> witness;  // present iff Winnable
    SolveStats stats;
};

// Behavioral identity encoding: live units (position, hp, behavior,
// durability), phase, acted set, and the round when bounded.
std::string state_key(const GameState& state, bool include_round);

// Exact decision over all player action sequences within k rounds.
SolveResult solve_bounded(const StageSpec& spec, int k, const SolveLimits& limits = {},
                          const SolverOptions& options = {});

// Reachability over the finite state graph, no round bound.
SolveResult solve_unbounded(const StageSpec& spec, const SolveLimits& limits = {},
                            const SolverOptions& options = {});

}  // namespace fe
