#pragma once
// Grid pathfinding: BFS distances, reachable move sets, canonical paths.

#include "fe/core.hpp"

#include <limits>

namespace fe {

constexpr int kUnreachable = std::numeric_limits<int>::max();

// Occupancy test the walker must respect while stepping (units block passage).
// Walls always block regardless.
struct PassContext {
    const GridMap* grid = nullptr;
    // Positions that block movement (other units). End tile rules are handled
    // by callers; this is purely per-step passability.
    std::vector<Position> blockers;

    bool passable(Position p) const;
};

// Distance field over floor tiles ignoring all units (walls only).
std::vector<int> bfs_walls_only(const GridMap& grid, Position from);

// Distance field respecting blockers.
std::vector<int> bfs_blocked(const PassContext& ctx, Position from);

// Tiles reachable within mov steps, respecting blockers while stepping.
// Includes `from` itself. The caller filters end-tile occupancy.
std::vector<Position> reachable_tiles(const PassContext& ctx, Position from, int mov);

// Same reach set with distances, in row-major order. Cost is bounded by the
// move limit, not the map size: a walk of length mov cannot leave the
// surrounding (2*mov+1)^2 box, so only that window is searched.
std::vector<std::pair<Position, int>> reachable_within(const PassContext& ctx,
                                                       Position from, int mov);

// The canonical shortest path from `from` to `goal` among walls-only paths:
// at every tile pick the neighbor that keeps the remaining distance shrinking,
// preferring horizontal steps toward the goal, then vertical toward, then
// horizontal away (+x first), then vertical away (+y first).
// Returns the tiles stepped onto, `from` excluded, `goal` included.
// Empty when goal is unreachable or equals from.
std::vector<Position> canonical_path(const GridMap& grid, Position from, Position goal);

// Same canonical step preference, but respecting blockers.
std::vector<Position> canonical_path_blocked(const PassContext& ctx, Position from,
                                             Position goal);

}  // namespace fe
