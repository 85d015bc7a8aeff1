#include "fe/gadgets.hpp"

#include <algorithm>
#include <utility>

namespace fe {

namespace {

int sign(int v) { return v < 0 ? -1 : v > 0 ? 1 : 0; }

void carve_row(GridMap& g, int y, int x0, int x1) {
    for (int x = std::min(x0, x1); x <= std::max(x0, x1); ++x)
        g.set({x, y}, Tile::Floor);
}

void carve_col(GridMap& g, int x, int y0, int y1) {
    for (int y = std::min(y0, y1); y <= std::max(y0, y1); ++y)
        g.set({x, y}, Tile::Floor);
}

// Axis-aligned steps from `from` (excluded) to `to` (included).
void extend_straight(std::vector<Position>& path, Position from, Position to) {
    int dx = sign(to.x - from.x), dy = sign(to.y - from.y);
    for (Position p = from; p != to;) {
        if (p.x != to.x)
            p.x += dx;
        else
            p.y += dy;
        path.push_back(p);
    }
}

std::vector<Position> leg(std::initializer_list<Position> waypoints) {
    std::vector<Position> path;
    auto it = waypoints.begin();
    Position prev = *it++;
    for (; it != waypoints.end(); ++it) {
        extend_straight(path, prev, *it);
        prev = *it;
    }
    return path;
}

Action move_action(int unit, std::vector<Position> path) {
    Action a;
    a.unit = unit;
    a.move_path = std::move(path);
    return a;
}

Action heal_action(int unit, int target) {
    Action a;
    a.unit = unit;
    a.kind = ActionKind::Heal;
    a.target = target;
    return a;
}

UnitTemplate make_unit(std::string id, Side side, Behavior behavior, Position start,
                       const Attributes& attrs, bool lord = false, int hp_start = 0) {
    UnitTemplate t;
    t.id = std::move(id);
    t.side = side;
    t.start = start;
    t.hp_start = hp_start > 0 ? hp_start : attrs.hp_max;
    t.attrs = attrs;
    t.behavior = behavior;
    t.is_lord = lord;
    return t;
}

bool contains(const std::vector<Position>& v, Position p) {
    return std::find(v.begin(), v.end(), p) != v.end();
}

// A sniper alcove sits two tiles off its corridor tile behind a wall, so its
// [1,2] reach touches exactly that tile. It must stay sealed (the occupant can
// never step out, the lord never in) and at least three tiles from anything
// the lord legitimately rests on. Side preference alternates with parity so
// neighbouring alcoves never merge. Returns the carved tile, if any fits.
std::optional<Position> place_alcove(GridMap& g, Position tile, bool horizontal_run,
                                     const std::vector<Position>& keep_clear) {
    auto sealed_wall = [&](Position a) {
        if (!g.in_bounds(a) || g.at(a) != Tile::Wall) return false;
        const Position near[4] = {{a.x + 1, a.y}, {a.x - 1, a.y}, {a.x, a.y + 1}, {a.x, a.y - 1}};
        for (Position n : near)
            if (g.is_floor(n)) return false;
        return true;
    };
    auto clear = [&](Position a) {
        for (Position p : keep_clear)
            if (manhattan(a, p) < 3) return false;
        return true;
    };
    std::vector<Position> cands;
    if (horizontal_run) {
        int side = tile.x % 2 == 0 ? -2 : 2;
        cands = {{tile.x, tile.y + side},
                 {tile.x, tile.y - side},
                 {tile.x - 2, tile.y},
                 {tile.x + 2, tile.y}};
    } else {
        int side = tile.y % 2 == 0 ? -2 : 2;
        cands = {{tile.x + side, tile.y},
                 {tile.x - side, tile.y},
                 {tile.x, tile.y - 2},
                 {tile.x, tile.y + 2}};
    }
    for (Position a : cands) {
        if (!sealed_wall(a) || !clear(a)) continue;
        g.set(a, Tile::Floor);
        return a;
    }
    return std::nullopt;
}

void append_snipers(StageSpec& spec, const std::vector<Position>& alcoves,
                    const Attributes& sniper) {
    for (size_t i = 0; i < alcoves.size(); ++i)
        spec.roster.push_back(make_unit("s" + std::to_string(i + 1), Side::Enemy,
                                        Behavior::Patient, alcoves[i], sniper));
}

std::string pos_text(Position p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

struct GadgetRun {
    StageSpec stage;
    MoveScript script;
};

// Straight corridor past the door room: the lord rests on both contact tiles
// under the posts, heals two tiles past the room, and seizes at the far end.
// `y` picks which corridor (7 runs under the room, 3 above) and `eastbound`
// the travel direction; the door starts on `door_start`.
GadgetRun door_line_run(int d, int y, bool eastbound, Position door_start,
                        const GadgetStats& st) {
    int rx = d + 2;
    GadgetRun run;
    GridMap g = make_grid(3 * d + 7, d + 12);
    carve_row(g, y, 1, 3 * d + 5);
    carve_row(g, 5, rx, rx + d + 1);
    int dir = eastbound ? 1 : -1;
    int x0 = eastbound ? 3 : 3 * d + 3;
    Position cleric_tile{x0 + 3 * d * dir, y == 7 ? 9 : 1};
    g.set(cleric_tile, Tile::Floor);
    g.throne = Position{x0 + (3 * d + 2) * dir, y};

    run.stage.grid = std::move(g);
    run.stage.roster = {
        make_unit("lord", Side::Player, Behavior::PlayerControlled, {x0, y}, st.lord, true),
        make_unit("dragon", Side::Enemy, Behavior::Impatient, {x0 - 2 * dir, y}, st.dragon),
        make_unit("door", Side::Enemy, Behavior::Impatient, door_start, st.door),
        make_unit("cleric", Side::Player, Behavior::PlayerControlled, cleric_tile, st.cleric),
    };

    Position cur{x0, y};
    for (int k = 1; k <= 3; ++k) {
        Position next{x0 + k * d * dir, y};
        std::vector<Action> round{move_action(0, leg({cur, next}))};
        if (k == 3) round.push_back(heal_action(3, 0));
        run.script.rounds.push_back(std::move(round));
        cur = next;
    }
    run.script.rounds.push_back({move_action(0, leg({cur, *run.stage.grid.throne}))});
    return run;
}

// Vertical corridor up the keeper's home column, then west along the lower
// corridor to the throne. Passable only while the door rests away from the
// near post; the lord runs at one hit point to prove the pass is untouched.
GadgetRun door_traverse_run(int d, Position door_start, const GadgetStats& st) {
    int rx = d + 2;
    GadgetRun run;
    GridMap g = make_grid(3 * d + 7, d + 12);
    carve_row(g, 5, rx, rx + d + 1);
    carve_row(g, 7, 1, rx);
    carve_col(g, rx, 7, d + 9);
    g.set({2, 9}, Tile::Floor);
    g.throne = Position{1, 7};

    run.stage.grid = std::move(g);
    run.stage.roster = {
        make_unit("lord", Side::Player, Behavior::PlayerControlled, {rx, d + 7}, st.lord,
                  true, 1),
        make_unit("dragon", Side::Enemy, Behavior::Impatient, {rx, d + 9}, st.dragon),
        make_unit("door", Side::Enemy, Behavior::Impatient, door_start, st.door),
        make_unit("cleric", Side::Player, Behavior::PlayerControlled, {2, 9}, st.cleric),
    };
    run.script.rounds = {
        {move_action(0, leg({{rx, d + 7}, {rx, 7}}))},
        {move_action(0, leg({{rx, 7}, {2, 7}})), heal_action(3, 0)},
        {move_action(0, leg({{2, 7}, {1, 7}}))},
    };
    return run;
}

// Conditioning corridor: a sealed bruiser trades the lord down to one hit
// point on the way in, and a healing stop restores him to full.
GadgetRun door_condition_run(int d, const GadgetStats& st) {
    GadgetRun run;
    GridMap g = make_grid(2 * d + 9, 6);
    carve_row(g, 2, 1, 2 * d + 5);
    g.set({d + 3, 4}, Tile::Floor);
    g.set({2 * d + 3, 4}, Tile::Floor);
    g.throne = Position{2 * d + 5, 2};

    run.stage.grid = std::move(g);
    run.stage.roster = {
        make_unit("lord", Side::Player, Behavior::PlayerControlled, {3, 2}, st.lord, true),
        make_unit("dragon", Side::Enemy, Behavior::Impatient, {1, 2}, st.dragon),
        make_unit("bruiser", Side::Enemy, Behavior::Patient, {d + 3, 4}, st.damager),
        make_unit("cleric", Side::Player, Behavior::PlayerControlled, {2 * d + 3, 4},
                  st.cleric),
    };
    run.script.rounds = {
        {move_action(0, leg({{3, 2}, {d + 3, 2}}))},
        {move_action(0, leg({{d + 3, 2}, {2 * d + 3, 2}})), heal_action(3, 0)},
        {move_action(0, leg({{2 * d + 3, 2}, {2 * d + 5, 2}}))},
    };
    return run;
}

GadgetContract scripted(std::string name, GadgetRun run, ContractKind kind,
                        std::optional<Position> door_final, int door_unit) {
    GadgetContract c;
    c.name = std::move(name);
    c.stage = std::move(run.stage);
    c.script = std::move(run.script);
    c.kind = kind;
    c.door_unit = door_unit;
    c.door_final = door_final;
    return c;
}

void require_even(int d, int min, const char* what) {
    if (d < min || d % 2 != 0)
        throw GeometryFailure(std::string(what) + " needs an even move stat of at least " +
                              std::to_string(min) + ", got " + std::to_string(d));
}

}  // namespace

GadgetStats GadgetStats::standard(int d) {
    GadgetStats s;
    s.lord = {3, 1, 1, d, {1, 2}, {}, {}};
    s.dragon = {5, 5, 5, d, {1, 1}, {}, {}};
    s.door = {2, 2, 2, d, {1, 2}, {}, {}};
    s.sniper = {5, 5, 5, d, {1, 2}, {}, {}};
    s.cleric = {2, 0, 2, d, {}, HealSpec{{2, 10}, 2}, {}};
    s.damager = {2, 3, 2, d, {1, 2}, {}, {}};
    return s;
}

ContractResult verify_contract(const GadgetContract& contract, const SolveLimits& limits) {
    ContractResult res;
    switch (contract.kind) {
        case ContractKind::ScriptedWin:
        case ContractKind::ScriptedLose: {
            Outcome want =
                contract.kind == ContractKind::ScriptedWin ? Outcome::Win : Outcome::Lose;
            ReplayResult rep;
            try {
                rep = replay(std::make_shared<StageSpec>(contract.stage), contract.script);
            } catch (const RuleError& e) {
                res.status = ContractResult::Fail;
                res.detail = "script rejected: " + std::string(e.what());
                return res;
            }
            if (rep.final_state.outcome != want) {
                res.status = ContractResult::Fail;
                res.detail = "script ended with outcome " +
                             std::to_string(int(rep.final_state.outcome)) + ", wanted " +
                             std::to_string(int(want));
                return res;
            }
            if (contract.door_unit >= 0 && contract.door_final) {
                const UnitState* door = rep.final_state.find(contract.door_unit);
                if (!door) {
                    res.status = ContractResult::Fail;
                    res.detail = "door unit did not survive the script";
                } else if (door->pos != *contract.door_final) {
                    res.status = ContractResult::Fail;
                    res.detail = "door rests at " + pos_text(door->pos) + ", wanted " +
                                 pos_text(*contract.door_final);
                }
            }
            return res;
        }
        case ContractKind::ExhaustiveWinnable:
        case ContractKind::ExhaustiveNotWinnable: {
            SolverOptions options;
            if (!contract.goal_tiles.empty()) {
                auto tiles = contract.goal_tiles;
                int lord = contract.lord_unit;
                options.goal = [tiles, lord](const GameState& st) {
                    const UnitState* u = st.find(lord);
                    return u && contains(tiles, u->pos);
                };
            }
            SolveResult sr = solve_unbounded(contract.stage, limits, options);
            if (sr.decision == Decision::ResourceExceeded) {
                res.status = ContractResult::Exceeded;
                res.detail = "search hit its resource cap after " +
                             std::to_string(sr.stats.nodes) + " nodes";
                return res;
            }
            bool winnable = sr.decision == Decision::Winnable;
            bool want = contract.kind == ContractKind::ExhaustiveWinnable;
            if (winnable != want) {
                res.status = ContractResult::Fail;
                res.detail = winnable ? "a line reaches the goal that should be sealed"
                                      : "no line reaches the goal";
                if (winnable) res.counterexample = sr.witness;
            }
            return res;
        }
    }
    return res;
}

std::vector<Violation> check_tempo_enforcement(const StageSpec& spec,
                                               const MoveScript& script, int lord_unit) {
    std::vector<Violation> out;
    auto stage = std::make_shared<StageSpec>(spec);
    GameState st = initial_state(stage);
    const UnitState* lord = st.find(lord_unit);
    if (!lord) {
        out.push_back({"lord unit is not on the stage"});
        return out;
    }

    // Safe rests: the start plus every scripted round-end tile of the lord.
    std::vector<Position> safe{lord->pos};
    Position cur = lord->pos;
    for (const auto& round : script.rounds) {
        for (const auto& a : round)
            if (a.unit == lord_unit && !a.move_path.empty()) cur = a.move_path.back();
        safe.push_back(cur);
    }

    for (size_t r = 0; r < script.rounds.size() && st.outcome == Outcome::Ongoing; ++r) {
        Position from = st.find(lord_unit)->pos;
        PassContext ctx = pass_context(st, lord_unit);
        for (Position e : legal_endpoints(st, lord_unit)) {
            if (contains(safe, e)) continue;
            Action stray = move_action(
                lord_unit, e == from ? std::vector<Position>{}
                                     : canonical_path_blocked(ctx, from, e));
            GameState dev = apply_player_action(st, stray);
            if (dev.outcome == Outcome::Ongoing)
                dev = run_enemy_turn(end_player_turn(dev));
            if (dev.outcome != Outcome::Lose)
                out.push_back({"round " + std::to_string(r + 1) + ": resting at " +
                               pos_text(e) + " is not punished within one enemy turn"});
        }
        for (const auto& a : script.rounds[r]) {
            st = apply_player_action(st, a);
            if (st.outcome != Outcome::Ongoing) break;
        }
        if (st.outcome == Outcome::Ongoing) st = run_enemy_turn(end_player_turn(st));
    }
    return out;
}

DoorHarness build_door_harness(int d) {
    require_even(d, 4, "the door room");
    GadgetStats st = GadgetStats::standard(d);
    int rx = d + 2;

    DoorHarness h;
    h.d = d;
    h.marks.post_b = {rx, 5};
    h.marks.post_e = {rx + 1, 5};
    h.marks.post_a = {rx + d + 1, 5};
    h.marks.open_b = {rx + 1, 7};
    h.marks.open_a = {rx + d + 1, 7};
    h.marks.close_b = {rx + 1, 3};
    h.marks.close_a = {rx + d + 1, 3};
    h.marks.traverse_c = {rx, 7};

    Position A = h.marks.post_a, E = h.marks.post_e;
    auto win = ContractKind::ScriptedWin;
    h.contracts.push_back(
        scripted("open-forward-from-closed", door_line_run(d, 7, true, E, st), win, A, 2));
    h.contracts.push_back(
        scripted("open-forward-from-open", door_line_run(d, 7, true, A, st), win, A, 2));
    h.contracts.push_back(
        scripted("open-reverse-from-open", door_line_run(d, 7, false, A, st), win, E, 2));
    h.contracts.push_back(
        scripted("open-reverse-from-closed", door_line_run(d, 7, false, E, st), win, E, 2));
    h.contracts.push_back(
        scripted("close-forward-from-closed", door_line_run(d, 3, false, E, st), win, E, 2));
    h.contracts.push_back(
        scripted("close-forward-from-open", door_line_run(d, 3, false, A, st), win, E, 2));
    h.contracts.push_back(
        scripted("close-reverse-from-closed", door_line_run(d, 3, true, E, st), win, A, 2));
    h.contracts.push_back(
        scripted("close-reverse-from-open", door_line_run(d, 3, true, A, st), win, A, 2));
    h.contracts.push_back(
        scripted("traverse-open", door_traverse_run(d, A, st), win, A, 2));
    h.contracts.push_back(scripted("traverse-closed", door_traverse_run(d, E, st),
                                   ContractKind::ScriptedLose, std::nullopt, 2));
    h.contracts.push_back(scripted("condition-and-heal", door_condition_run(d, st), win,
                                   std::nullopt, -1));
    h.stage = h.contracts.front().stage;
    return h;
}

bool check_crossover_offsets(int d, int s1, int s2) {
    if (s1 <= 0 || s1 >= d || s2 <= 0 || s2 >= d) return false;
    return s1 != s2 && s1 != d - s2 && d - s1 != s2 && d - s1 != d - s2;
}

CrossoverHarness build_crossover_harness(int d, int s1, int s2) {
    require_even(d, 4, "the crossing");
    if (!check_crossover_offsets(d, s1, s2))
        throw BadOffsets("safe-tile offsets " + std::to_string(s1) + "/" +
                         std::to_string(s2) + " collide modulo " + std::to_string(d));
    GadgetStats st = GadgetStats::standard(d);

    // Center on a multiple of d far enough in for the entry and its chaser.
    auto center = [d](int s) { return d * ((2 * d + s + 3 + d - 1) / d); };
    int cx = center(s1), cy = center(s2);
    int xs = cx - 2 * d - s1, xe = cx + 3 * d - s1;
    int ys = cy - 2 * d - s2, ye = cy + 3 * d - s2;

    GridMap g = make_grid(xe + 2, ye + 2);
    carve_row(g, cy, xs - 2, xe);
    carve_col(g, cx, ys - 2, ye);

    auto safe_h = [&](int x) {
        int off = std::abs(x - cx) % d;
        return off == s1 || off == d - s1;
    };
    auto safe_v = [&](int y) {
        int off = std::abs(y - cy) % d;
        return off == s2 || off == d - s2;
    };
    std::vector<Position> keep_clear;
    for (int x = xs - 2; x <= xe; ++x)
        if (safe_h(x)) keep_clear.push_back({x, cy});
    for (int y = ys - 2; y <= ye; ++y)
        if (safe_v(y)) keep_clear.push_back({cx, y});

    Position o{cx, cy};
    std::vector<Position> alcoves;
    auto covered = [&](Position tile) {
        for (Position a : alcoves)
            if (manhattan(a, tile) <= 2) return true;
        return false;
    };
    auto cover = [&](Position tile, bool horizontal) {
        if (covered(tile)) return;
        if (auto a = place_alcove(g, tile, horizontal, keep_clear)) {
            alcoves.push_back(*a);
        } else if (manhattan(tile, o) > 2) {
            throw GeometryFailure("no sealed alcove can cover " + pos_text(tile));
        }
        // Tiles within two steps of the crossing stay bare: any rest there is
        // a short step off a stop, so the chaser reaches it, which the tempo
        // check and the exhaustive contracts confirm.
    };
    for (int x = xs - 2; x <= xe; ++x)
        if (!safe_h(x)) cover({x, cy}, true);
    for (int y = ys - 2; y <= ye; ++y)
        if (!safe_v(y) && Position{cx, y} != o) cover({cx, y}, false);

    CrossoverHarness h;
    h.d = d;
    h.s1 = s1;
    h.s2 = s2;
    h.crossing = o;

    StageSpec horiz;
    horiz.grid = g;
    horiz.grid.throne = Position{xe, cy};
    horiz.roster = {
        make_unit("lord", Side::Player, Behavior::PlayerControlled, {xs, cy}, st.lord, true),
        make_unit("dragon", Side::Enemy, Behavior::Impatient, {xs - 2, cy}, st.dragon),
    };
    append_snipers(horiz, alcoves, st.sniper);

    StageSpec vert = horiz;
    vert.grid.throne = Position{cx, ye};
    vert.roster[0].start = {cx, ys};
    vert.roster[1].start = {cx, ys - 2};

    auto straight_script = [&](Position from, Position axis_step) {
        MoveScript s;
        Position cur = from;
        for (int k = 0; k < 5; ++k) {
            Position next{cur.x + axis_step.x * d, cur.y + axis_step.y * d};
            s.rounds.push_back({move_action(0, leg({cur, next}))});
            cur = next;
        }
        return s;
    };

    GadgetContract ch;
    ch.name = "crossover-horizontal";
    ch.stage = horiz;
    ch.script = straight_script({xs, cy}, {1, 0});
    h.contracts.push_back(ch);

    GadgetContract cv;
    cv.name = "crossover-vertical";
    cv.stage = vert;
    cv.script = straight_script({cx, ys}, {0, 1});
    h.contracts.push_back(cv);

    GadgetContract nh;
    nh.name = "crossover-no-leak-horizontal";
    nh.stage = horiz;
    nh.kind = ContractKind::ExhaustiveNotWinnable;
    nh.goal_tiles = {{cx, ys - 2}, {cx, ye}};
    h.contracts.push_back(nh);

    GadgetContract nv;
    nv.name = "crossover-no-leak-vertical";
    nv.stage = vert;
    nv.kind = ContractKind::ExhaustiveNotWinnable;
    nv.goal_tiles = {{xs - 2, cy}, {xe, cy}};
    h.contracts.push_back(nv);

    h.stage = std::move(horiz);
    return h;
}

namespace {

// Grid isometry: optional transpose, then optional flips, onto w-by-h.
struct PointMap {
    bool swap = false, fx = false, fy = false;
    int w = 0, h = 0;
    Position operator()(Position p) const {
        if (swap) std::swap(p.x, p.y);
        if (fx) p.x = w - 1 - p.x;
        if (fy) p.y = h - 1 - p.y;
        return p;
    }
};

PointMap turn_map(TurnKind kind, int w0, int h0) {
    PointMap m;
    switch (kind) {
        case TurnKind::RightDown: break;
        case TurnKind::RightUp: m.fy = true; break;
        case TurnKind::LeftDown: m.fx = true; break;
        case TurnKind::LeftUp: m.fx = m.fy = true; break;
        case TurnKind::DownRight: m.swap = true; break;
        case TurnKind::DownLeft: m.swap = m.fx = true; break;
        case TurnKind::UpRight: m.swap = m.fy = true; break;
        case TurnKind::UpLeft: m.swap = m.fx = m.fy = true; break;
    }
    m.w = m.swap ? h0 : w0;
    m.h = m.swap ? w0 : h0;
    return m;
}

const char* turn_name(TurnKind kind) {
    switch (kind) {
        case TurnKind::RightDown: return "right-down";
        case TurnKind::RightUp: return "right-up";
        case TurnKind::LeftDown: return "left-down";
        case TurnKind::LeftUp: return "left-up";
        case TurnKind::DownRight: return "down-right";
        case TurnKind::DownLeft: return "down-left";
        case TurnKind::UpRight: return "up-right";
        case TurnKind::UpLeft: return "up-left";
    }
    return "?";
}

}  // namespace

TurnHarness build_turn_harness(TurnKind kind, int d) {
    // A rectilinear hook shifts path length by an even amount, so both arm
    // offsets share parity; with a move stat of 4 no compatible pair is left.
    require_even(d, 6, "the turning curve");
    GadgetStats st = GadgetStats::standard(d);
    int C = d + 2;
    int w0 = d + 8, h0 = 2 * d + 4;

    GridMap g = make_grid(w0, h0);
    carve_row(g, 4, 1, C);
    carve_row(g, 3, C, C + 2);
    carve_col(g, C + 2, 3, 2 * d + 1);
    std::vector<Position> stops{{3, 4}, {C, 3}, {C + 2, d + 1}, {C + 2, 2 * d + 1}};
    std::vector<Position> keep_clear(stops.begin() + 1, stops.end());

    // Cover every coverable route tile, the entry included; junction tiles
    // with no sealed alcove stay bare and are policed by the chaser alone.
    std::vector<Position> alcoves;
    auto cover = [&](Position tile, bool horizontal) {
        if (contains(stops, tile)) return;
        if (auto a = place_alcove(g, tile, horizontal, keep_clear)) alcoves.push_back(*a);
    };
    for (int x = 1; x <= C; ++x) cover({x, 4}, true);
    for (int x = C + 1; x <= C + 2; ++x) cover({x, 3}, true);
    for (int y = 4; y <= 2 * d + 1; ++y) cover({C + 2, y}, false);

    PointMap m = turn_map(kind, w0, h0);
    GridMap tg = make_grid(m.w, m.h);
    for (int y = 0; y < h0; ++y)
        for (int x = 0; x < w0; ++x)
            if (g.is_floor({x, y})) tg.set(m({x, y}), Tile::Floor);
    tg.throne = m(stops.back());

    StageSpec spec;
    spec.grid = std::move(tg);
    spec.roster = {
        make_unit("lord", Side::Player, Behavior::PlayerControlled, m({3, 4}), st.lord, true),
        make_unit("dragon", Side::Enemy, Behavior::Impatient, m({1, 4}), st.dragon),
    };
    for (size_t i = 0; i < alcoves.size(); ++i)
        spec.roster.push_back(make_unit("s" + std::to_string(i + 1), Side::Enemy,
                                        Behavior::Patient, m(alcoves[i]), st.sniper));

    auto mapped_leg = [&](std::initializer_list<Position> waypoints) {
        std::vector<Position> path = leg(waypoints);
        for (Position& p : path) p = m(p);
        return path;
    };
    MoveScript script;
    script.rounds = {
        {move_action(0, mapped_leg({{3, 4}, {C, 4}, {C, 3}}))},
        {move_action(0, mapped_leg({{C, 3}, {C + 2, 3}, {C + 2, d + 1}}))},
        {move_action(0, mapped_leg({{C + 2, d + 1}, {C + 2, 2 * d + 1}}))},
    };

    TurnHarness h;
    h.d = d;
    h.kind = kind;
    h.enter_offset = 1;
    h.exit_offset = d - 3;
    h.stage = spec;

    GadgetContract cs;
    cs.name = std::string("turn-") + turn_name(kind) + "-scripted";
    cs.stage = spec;
    cs.script = script;
    h.contracts.push_back(cs);

    GadgetContract cw;
    cw.name = std::string("turn-") + turn_name(kind) + "-winnable";
    cw.stage = std::move(spec);
    cw.kind = ContractKind::ExhaustiveWinnable;
    h.contracts.push_back(cw);
    return h;
}

OnewayHarness build_oneway_harness(int d) {
    require_even(d, 4, "the one-way corridor");
    GadgetStats st = GadgetStats::standard(d);
    int x1 = d + 2, x2 = 4 * d + 2;

    GridMap g = make_grid(7 * d + 6, 18);
    carve_row(g, 6, 1, 7 * d + 4);
    carve_row(g, 4, x1, x1 + d + 1);
    carve_row(g, 4, x2, x2 + d + 1);
    // Healing reaches exactly ten tiles, so a cleric this deep serves one
    // corridor column only; the reverse walker's rests all miss it.
    Position heal1{3 * d + 3, 16}, heal2{6 * d + 3, 16};
    g.set(heal1, Tile::Floor);
    g.set(heal2, Tile::Floor);

    Position a1{x1 + d + 1, 4}, a2{x2 + d + 1, 4};
    auto roster = [&](Position lord, Position dragon, Position door1, Position door2) {
        return std::vector<UnitTemplate>{
            make_unit("lord", Side::Player, Behavior::PlayerControlled, lord, st.lord, true),
            make_unit("dragon", Side::Enemy, Behavior::Impatient, dragon, st.dragon),
            make_unit("door1", Side::Enemy, Behavior::Impatient, door1, st.door),
            make_unit("door2", Side::Enemy, Behavior::Impatient, door2, st.door),
            make_unit("cleric1", Side::Player, Behavior::PlayerControlled, heal1, st.cleric),
            make_unit("cleric2", Side::Player, Behavior::PlayerControlled, heal2, st.cleric),
        };
    };

    OnewayHarness h;
    h.d = d;
    h.forward_stage.grid = g;
    h.forward_stage.grid.throne = Position{7 * d + 3, 6};
    h.forward_stage.roster = roster({3, 6}, {1, 6}, a1, a2);

    h.reverse_stage.grid = std::move(g);
    h.reverse_stage.grid.throne = Position{2, 6};
    h.reverse_stage.roster = roster({7 * d + 2, 6}, {7 * d + 4, 6}, a1, a2);

    MoveScript forward;
    Position cur{3, 6};
    for (int k = 1; k <= 7; ++k) {
        Position next{3 + k * d, 6};
        std::vector<Action> round{move_action(0, leg({cur, next}))};
        if (k == 3) round.push_back(heal_action(4, 0));
        if (k == 6) round.push_back(heal_action(5, 0));
        forward.rounds.push_back(std::move(round));
        cur = next;
    }

    GadgetContract fwd;
    fwd.name = "oneway-forward";
    fwd.stage = h.forward_stage;
    fwd.script = forward;
    fwd.door_unit = 2;
    fwd.door_final = a1;
    h.contracts.push_back(fwd);

    // Seed a second pass from wherever the first actually left the doors; a
    // true one-way gadget is forward-invariant, so the pass must work again.
    StageSpec again = h.forward_stage;
    ReplayResult first = replay(std::make_shared<StageSpec>(h.forward_stage), forward);
    if (const UnitState* u = first.final_state.find(2)) again.roster[2].start = u->pos;
    if (const UnitState* u = first.final_state.find(3)) again.roster[3].start = u->pos;
    GadgetContract fwd2;
    fwd2.name = "oneway-forward-again";
    fwd2.stage = std::move(again);
    fwd2.script = forward;
    fwd2.door_unit = 2;
    fwd2.door_final = a1;
    h.contracts.push_back(fwd2);

    GadgetContract rev;
    rev.name = "oneway-reverse-blocked";
    rev.stage = h.reverse_stage;
    rev.kind = ContractKind::ExhaustiveNotWinnable;
    rev.goal_tiles = {{2, 6}};
    h.contracts.push_back(rev);
    return h;
}

}  // namespace fe
