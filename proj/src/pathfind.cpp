#include "fe/pathfind.hpp"

#include <algorithm>
#include <queue>

namespace fe {

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

std::vector<int> bfs(const GridMap& grid, Position from,
                     const std::vector<Position>* blockers) {
    std::vector<int> dist(size_t(grid.width) * grid.height, kUnreachable);
    if (!grid.is_floor(from)) return dist;
    std::vector<char> blocked(dist.size(), 0);
    if (blockers)
        for (Position b : blockers[0])
            if (grid.in_bounds(b)) blocked[size_t(b.y) * grid.width + b.x] = 1;

    auto idx = [&](Position p) { return size_t(p.y) * grid.width + p.x; };
    if (blocked[idx(from)]) return dist;
    std::queue<Position> q;
    dist[idx(from)] = 0;
    q.push(from);
    while (!q.empty()) {
        Position cur = q.front();
        q.pop();
        for (int d = 0; d < 4; ++d) {
            Position nxt{cur.x + kDx[d], cur.y + kDy[d]};
            if (!grid.is_floor(nxt)) continue;
            size_t i = idx(nxt);
            if (blocked[i] || dist[i] != kUnreachable) continue;
            dist[i] = dist[idx(cur)] + 1;
            q.push(nxt);
        }
    }
    return dist;
}

// Preference rank of stepping from cur in direction (dx, dy) when heading to
// goal. Lower is better: horizontal toward, vertical toward, horizontal away
// (+x first), vertical away (+y first).
int step_rank(Position cur, Position goal, int dx, int dy) {
    if (dx != 0) {
        bool toward = std::abs(goal.x - (cur.x + dx)) < std::abs(goal.x - cur.x);
        if (toward) return 0;
        return dx > 0 ? 2 : 3;
    }
    bool toward = std::abs(goal.y - (cur.y + dy)) < std::abs(goal.y - cur.y);
    if (toward) return 1;
    return dy > 0 ? 4 : 5;
}

std::vector<Position> walk_canonical(const GridMap& grid, Position from, Position goal,
                                     const std::vector<int>& dist_to_goal) {
    std::vector<Position> path;
    auto idx = [&](Position p) { return size_t(p.y) * grid.width + p.x; };
    if (!grid.in_bounds(from) || dist_to_goal[idx(from)] == kUnreachable) return path;
    Position cur = from;
    while (!(cur == goal)) {
        int cur_d = dist_to_goal[idx(cur)];
        int best = -1, best_rank = 6;
        for (int d = 0; d < 4; ++d) {
            Position nxt{cur.x + kDx[d], cur.y + kDy[d]};
            if (!grid.in_bounds(nxt)) continue;
            if (dist_to_goal[idx(nxt)] != cur_d - 1) continue;
            int r = step_rank(cur, goal, kDx[d], kDy[d]);
            if (r < best_rank) {
                best_rank = r;
                best = d;
            }
        }
        cur = {cur.x + kDx[best], cur.y + kDy[best]};
        path.push_back(cur);
    }
    return path;
}

}  // namespace

bool PassContext::passable(Position p) const {
    if (!grid->is_floor(p)) return false;
    for (Position b : blockers)
        if (b == p) return false;
    return true;
}

std::vector<int> bfs_walls_only(const GridMap& grid, Position from) {
    return bfs(grid, from, nullptr);
}

std::vector<int> bfs_blocked(const PassContext& ctx, Position from) {
    return bfs(*ctx.grid, from, &ctx.blockers);
}

std::vector<Position> reachable_tiles(const PassContext& ctx, Position from, int mov) {
    std::vector<Position> out;
    for (const auto& [p, d] : reachable_within(ctx, from, mov)) out.push_back(p);
    return out;
}

std::vector<std::pair<Position, int>> reachable_within(const PassContext& ctx,
                                                       Position from, int mov) {
    std::vector<std::pair<Position, int>> out;
    const auto& g = *ctx.grid;
    if (!ctx.passable(from) || mov < 0) return out;

    int x0 = std::max(0, from.x - mov), y0 = std::max(0, from.y - mov);
    int x1 = std::min(g.width - 1, from.x + mov);
    int y1 = std::min(g.height - 1, from.y + mov);
    int w = x1 - x0 + 1, h = y1 - y0 + 1;
    std::vector<int> dist(size_t(w) * h, kUnreachable);
    auto idx = [&](Position p) { return size_t(p.y - y0) * w + (p.x - x0); };

    std::queue<Position> q;
    dist[idx(from)] = 0;
    q.push(from);
    while (!q.empty()) {
        Position cur = q.front();
        q.pop();
        int d = dist[idx(cur)];
        if (d == mov) continue;
        for (int k = 0; k < 4; ++k) {
            Position nxt{cur.x + kDx[k], cur.y + kDy[k]};
            if (nxt.x < x0 || nxt.x > x1 || nxt.y < y0 || nxt.y > y1) continue;
            if (dist[idx(nxt)] != kUnreachable || !ctx.passable(nxt)) continue;
            dist[idx(nxt)] = d + 1;
            q.push(nxt);
        }
    }
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            int d = dist[size_t(y - y0) * w + (x - x0)];
            if (d != kUnreachable) out.push_back({{x, y}, d});
        }
    return out;
}

std::vector<Position> canonical_path(const GridMap& grid, Position from, Position goal) {
    if (from == goal) return {};
    // Distances measured to the goal so the walk can descend them.
    auto dist = bfs_walls_only(grid, goal);
    return walk_canonical(grid, from, goal, dist);
}

std::vector<Position> canonical_path_blocked(const PassContext& ctx, Position from,
                                             Position goal) {
    if (from == goal) return {};
    auto dist = bfs_blocked(ctx, goal);
    return walk_canonical(*ctx.grid, from, goal, dist);
}

}  // namespace fe
