#include "fe/compile_np.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace fe {

namespace {

constexpr int kD = 6;       // movement reach shared by every compiled unit
constexpr int kPitch = 12;  // column distance between variable centers

Attributes make_attrs(int hp, int atk, int def, Interval range) {
    Attributes a;
    a.hp_max = hp;
    a.atk = atk;
    a.def = def;
    a.mov = kD;
    a.attack_range = range;
    return a;
}

std::string pos_str(Position p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

// Grid under construction. Every carved tile remembers which feature owns it
// so a connector routed through foreign ground fails loudly instead of
// silently merging walkways.
struct Builder {
    GridMap grid;
    std::vector<int> owner;

    Builder(int w, int h) : grid(make_grid(w, h)), owner(size_t(w) * h, -1) {}

    void carve(Position p, int who, int clause = -1) {
        if (!grid.in_bounds(p)) throw BuildError("carve out of bounds at " + pos_str(p));
        size_t i = size_t(p.y) * grid.width + p.x;
        if (grid.at(p) == Tile::Floor) {
            if (owner[i] == who) return;
            std::string msg = "tile collision at " + pos_str(p);
            if (clause >= 0)
                throw RoutingFailure(clause,
                                     "clause " + std::to_string(clause + 1) + ": " + msg);
            throw BuildError(msg);
        }
        grid.set(p, Tile::Floor);
        owner[i] = who;
    }
    void carve_col(int x, int y0, int y1, int who, int clause = -1) {
        for (int y = y0; y <= y1; ++y) carve({x, y}, who, clause);
    }
    void carve_row(int y, int x0, int x1, int who, int clause = -1) {
        for (int x = x0; x <= x1; ++x) carve({x, y}, who, clause);
    }

    // No two features may produce adjacent floor tiles: that would merge
    // walkways meant to stay separate (and can create floor cycles).
    void check_feature_separation() const {
        for (int y = 0; y < grid.height; ++y)
            for (int x = 0; x < grid.width; ++x) {
                Position p{x, y};
                if (!grid.is_floor(p)) continue;
                for (Position q : {Position{x + 1, y}, Position{x, y + 1}}) {
                    if (!grid.is_floor(q)) continue;
                    int a = owner[size_t(p.y) * grid.width + p.x];
                    int b = owner[size_t(q.y) * grid.width + q.x];
                    if (a == b) continue;
                    int clause = std::max(a, b) >= 3000 ? std::max(a, b) - 3000 : -1;
                    std::string msg = "features touch at " + pos_str(p);
                    if (clause >= 0)
                        throw RoutingFailure(
                            clause, "clause " + std::to_string(clause + 1) + ": " + msg);
                    throw BuildError(msg);
                }
            }
    }
};

struct RosterBuilder {
    std::vector<UnitTemplate>& roster;
    int durability;

    int add(std::string id, Side side, Position pos, Attributes attrs,
            Behavior behavior, bool lord = false) {
        UnitTemplate t;
        t.id = std::move(id);
        t.side = side;
        t.start = pos;
        attrs.durability = durability;
        t.hp_start = attrs.hp_max;
        t.attrs = attrs;
        t.behavior = behavior;
        t.is_lord = lord;
        roster.push_back(std::move(t));
        return int(roster.size()) - 1;
    }
};

int slot_offset(int slot) { return slot == 0 ? -3 : slot == 1 ? 0 : 3; }

}  // namespace

StatTable StatTable::with_counters() {
    StatTable t;
    t.variable = make_attrs(4, 3, 1, {1, 2});
    t.clause = make_attrs(3, 2, 1, {1, 2});
    t.lord = make_attrs(1, 2, 1, {1, 1});
    t.literal = make_attrs(2, 2, 1, {1, 2});
    t.sniper = make_attrs(2, 5, 2, {1, 2});
    return t;
}

StatTable StatTable::without_counters() {
    // Without counters the chamber defender trades blows over three rounds
    // instead of striking back, so it carries three more hit points; the
    // snipers need the extra attack to keep their one-shot threat.
    StatTable t = with_counters();
    t.variable.hp_max = 7;
    t.sniper.atk = 8;
    return t;
}

CompileResult compile(const BoundedInstance& inst, bool counter_attacks) {
    const CnfInstance& cnf = inst.cnf;
    if (auto v = validate_embedding(cnf); !v.empty())
        throw RoutingFailure(-1, "not a legal line embedding: " + v.front().what);

    auto pos_slots = occurrence_slots(cnf, ClauseSign::AllPositive);
    auto neg_slots = occurrence_slots(cnf, ClauseSign::AllNegative);
    int n = int(cnf.variables.size());
    for (int v = 0; v < n; ++v)
        if (pos_slots[v].size() > 3 || neg_slots[v].size() > 3)
            throw RoutingFailure(-1, "variable '" + cnf.variables[v] +
                                         "' occurs more than three times on one side");

    int lp = -1, ln = -1;
    for (const auto& c : cnf.clauses)
        (c.sign == ClauseSign::AllPositive ? lp : ln) =
            std::max(c.sign == ClauseSign::AllPositive ? lp : ln, c.level);

    const int ur = 10 + 2 * std::max(lp, 0);
    const int lr = ur + 16;
    auto xc = [](int i) { return 11 + kPitch * i; };
    const int left = 1;
    const int right = xc(std::max(n, 1) - 1) + 10;
    const int bottom = ln >= 0 ? lr + 8 + 2 * ln : lr + 5;

    Builder b(right + 2, bottom + 2);

    // Roads and the connector joining their right ends (feature 0, shared
    // with the blockades so their occupants can step onto the roads).
    b.carve_row(ur, left, right, 0);
    b.carve_row(lr, left, right, 0);
    b.carve_col(right, ur + 1, lr - 1, 0);

    for (int v = 0; v < n; ++v) {
        int x = xc(v);
        // Blockade prongs above the upper road and below the lower one.
        b.carve_col(x - 3, ur - 2, ur - 1, 0);
        b.carve_col(x + 3, ur - 2, ur - 1, 0);
        b.carve_col(x, ur - 5, ur - 1, 0);
        b.carve_col(x - 3, lr + 1, lr + 2, 0);
        b.carve_col(x + 3, lr + 1, lr + 2, 0);
        b.carve_col(x, lr + 1, lr + 5, 0);
        // Sealed chamber between the roads, and the sniper file beside it.
        b.carve_col(x, ur + 2, ur + 14, 1000 + v);
        b.carve_col(x + 2, ur + 3, ur + 13, 2000 + v);
    }

    // Clause connectors: one rail per clause, nested by level, with a spur
    // down to a contact tile behind each occurrence's post.
    struct ContactSpot {
        int col = 0;
        Position contact;
        int var = 0;
        int slot = 0;
    };
    std::vector<std::vector<ContactSpot>> clause_spots(cnf.clauses.size());
    std::vector<int> rail_rows(cnf.clauses.size(), 0);

    for (size_t j = 0; j < cnf.clauses.size(); ++j) {
        const auto& c = cnf.clauses[j];
        bool positive = c.sign == ClauseSign::AllPositive;
        int rail = positive ? ur - 8 - 2 * (lp - c.level) : lr + 8 + 2 * (ln - c.level);
        rail_rows[j] = rail;

        auto& spots = clause_spots[j];
        const auto& slots = positive ? pos_slots : neg_slots;
        for (size_t li = 0; li < c.literals.size(); ++li) {
            int v = c.literals[li].var;
            int slot = -1;
            for (size_t s = 0; s < slots[v].size(); ++s)
                if (slots[v][s] == OccurrenceRef{int(j), int(li)}) slot = int(s);
            if (slot < 0) throw BuildError("occurrence not found in slot order");
            int col = xc(v) + slot_offset(slot);
            int deep = slot_offset(slot) == 0 ? 3 : 0;  // middle spurs reach deeper
            int contact_row = positive ? ur - 4 - deep : lr + 4 + deep;
            spots.push_back({col, {col, contact_row}, v, slot});
        }
        std::sort(spots.begin(), spots.end(),
                  [](const auto& a, const auto& b) { return a.col < b.col; });

        int who = 3000 + int(j);
        b.carve_row(rail, spots.front().col, spots.back().col, who, int(j));
        for (const auto& s : spots) {
            if (positive)
                b.carve_col(s.col, rail + 1, s.contact.y, who, int(j));
            else
                b.carve_col(s.col, s.contact.y, rail - 1, who, int(j));
        }
    }

    b.check_feature_separation();

    CompileResult out;
    out.stage.grid = std::move(b.grid);
    out.stage.grid.throne = Position{left, ur};
    out.stage.counter_attacks = counter_attacks;

    GadgetLayout& lay = out.layout;
    lay.d = kD;
    lay.upper_road_row = ur;
    lay.lower_road_row = lr;
    lay.connector_col = right;
    lay.gate = {left, lr};
    lay.throne = {left, ur};

    StatTable tab = counter_attacks ? StatTable::with_counters()
                                    : StatTable::without_counters();
    RosterBuilder rb{out.stage.roster, tab.durability};

    lay.variables.resize(n);
    for (int v = 0; v < n; ++v) {
        int x = xc(v);
        VariableGadget& g = lay.variables[v];
        g.center_col = x;
        g.start = {x, ur + 8};
        g.t = {x, ur + 2};
        g.f = {x, ur + 14};
        g.seal_upper = {x, ur + 1};
        g.seal_lower = {x, ur + 15};
        for (int y = ur + 3; y <= ur + 13; ++y) g.sniper_tiles.push_back({x + 2, y});
        g.upper.junction = {x, ur};
        g.lower.junction = {x, lr};
        g.upper_choke_left = {x - 3, ur};
        g.upper_choke_right = {x + 3, ur};
        g.lower_choke_left = {x - 3, lr};
        g.lower_choke_right = {x + 3, lr};
        g.variable_unit =
            rb.add("V" + std::to_string(v + 1), Side::Player, g.start, tab.variable,
                   Behavior::PlayerControlled);
    }

    lay.clauses.resize(cnf.clauses.size());
    for (size_t j = 0; j < cnf.clauses.size(); ++j) {
        ClauseGadget& cg = lay.clauses[j];
        cg.rail_row = rail_rows[j];
        const auto& spots = clause_spots[j];
        for (int x = spots.front().col; x <= spots.back().col; ++x)
            cg.rail.push_back({x, cg.rail_row});
        cg.start = cg.rail.front();
        for (const auto& s : spots) {
            cg.contacts.push_back(s.contact);
            cg.contact_vars.push_back(s.var);
        }
        Attributes attrs = tab.clause;
        attrs.hp_max = int(cnf.clauses[j].literals.size());
        cg.clause_unit = rb.add("C" + std::to_string(j + 1), Side::Player, cg.start,
                                attrs, Behavior::PlayerControlled);
    }

    lay.lord_unit = rb.add("LORD", Side::Player, lay.gate, tab.lord,
                           Behavior::PlayerControlled, true);

    // Blockade occupants: upper side of every variable first, then the lower
    // side, left to right within each blockade. Arrival order at a junction
    // follows this creation order.
    auto add_side = [&](int v, bool upper, const std::vector<OccurrenceRef>& occ) {
        VariableGadget& g = lay.variables[v];
        TridentLayout& t = upper ? g.upper : g.lower;
        int x = xc(v);
        for (size_t s = 0; s < occ.size(); ++s) {
            int off = slot_offset(int(s));
            Position post = off == 0 ? Position{x, upper ? ur - 5 : lr + 5}
                                     : Position{x + off, upper ? ur - 2 : lr + 2};
            int deep = off == 0 ? 3 : 0;
            Position contact{x + off, upper ? ur - 4 - deep : lr + 4 + deep};
            std::string id = std::string(upper ? "A" : "B") + std::to_string(v + 1) +
                             "." + std::to_string(s + 1);
            int unit = rb.add(id, Side::Enemy, post, tab.literal, Behavior::Patient);
            t.posts.push_back(post);
            t.contacts.push_back(contact);
            t.literal_units.push_back(unit);
            // Mirror into the owning clause's contact list.
            ClauseGadget& cg = lay.clauses[occ[s].clause];
            for (size_t k = 0; k < cg.contacts.size(); ++k)
                if (cg.contacts[k] == contact) {
                    cg.contact_units.resize(cg.contacts.size(), -1);
                    cg.contact_units[k] = unit;
                }
        }
    };
    for (int v = 0; v < n; ++v) add_side(v, true, pos_slots[v]);
    for (int v = 0; v < n; ++v) add_side(v, false, neg_slots[v]);

    for (int v = 0; v < n; ++v) {
        VariableGadget& g = lay.variables[v];
        for (size_t k = 0; k < g.sniper_tiles.size(); ++k)
            g.sniper_units.push_back(rb.add(
                "S" + std::to_string(v + 1) + "." + std::to_string(k + 1), Side::Enemy,
                g.sniper_tiles[k], tab.sniper, Behavior::Patient));
    }

    out.stage.round_budget = count_floor_tiles(out.stage.grid);

    if (auto viol = validate_stage(out.stage); !viol.empty())
        throw BuildError("compiled stage is invalid: " + viol.front().what);
    return out;
}

MoveScript synthesize_witness(const BoundedInstance& inst,
                              const CompileResult& compiled,
                              const Assignment& assignment) {
    const CnfInstance& cnf = inst.cnf;
    if (assignment.size() != cnf.variables.size())
        throw AssignmentUnsatisfying("assignment size mismatch");
    if (!satisfies(cnf, assignment))
        throw AssignmentUnsatisfying("assignment does not satisfy the formula");

    const GadgetLayout& lay = compiled.layout;
    const GridMap& grid = compiled.stage.grid;
    const bool counters = compiled.stage.counter_attacks;

    MoveScript script;
    auto add = [&](int round, Action act) {
        if (int(script.rounds.size()) < round) script.rounds.resize(round);
        script.rounds[round - 1].push_back(std::move(act));
    };
    auto move_action = [](int unit, std::vector<Position> path) {
        Action a;
        a.unit = unit;
        a.move_path = std::move(path);
        return a;
    };
    auto attack_action = [](int unit, int target, std::vector<Position> path = {}) {
        Action a;
        a.unit = unit;
        a.move_path = std::move(path);
        a.kind = ActionKind::Attack;
        a.target = target;
        return a;
    };

    // Round one: every chamber unit commits to its side. With counters on the
    // committed side's occupants die on their own attacks that same round;
    // without counters they queue at the junction and are struck down one per
    // round from the chamber.
    for (size_t v = 0; v < lay.variables.size(); ++v) {
        const auto& g = lay.variables[v];
        Position goal = assignment[v] ? g.t : g.f;
        add(1, move_action(g.variable_unit, canonical_path(grid, g.start, goal)));
        if (!counters) {
            const auto& units = (assignment[v] ? g.upper : g.lower).literal_units;
            for (size_t r = 0; r < units.size(); ++r)
                add(int(2 + r), attack_action(g.variable_unit, units[r]));
        }
    }

    // Clause units start once the chambers have settled (round 5), walk their
    // rails, and fight every occupant the chambers left alive: step onto the
    // contact, take the hit, strike back next round.
    for (size_t j = 0; j < lay.clauses.size(); ++j) {
        const auto& cg = lay.clauses[j];
        bool positive = cnf.clauses[j].sign == ClauseSign::AllPositive;
        Position cur = cg.start;
        int round = 5;
        for (size_t k = 0; k < cg.contacts.size(); ++k) {
            bool live = positive ? !assignment[cg.contact_vars[k]]
                                 : assignment[cg.contact_vars[k]];
            if (!live) continue;
            auto route = canonical_path(grid, cur, cg.contacts[k]);
            size_t off = 0;
            while (route.size() - off > size_t(kD)) {
                add(round++, move_action(cg.clause_unit,
                                         {route.begin() + off, route.begin() + off + kD}));
                off += kD;
            }
            std::vector<Position> tail(route.begin() + off, route.end());
            if (counters)
                add(round++, move_action(cg.clause_unit, std::move(tail)));
            else
                add(round++, attack_action(cg.clause_unit, cg.contact_units[k],
                                           std::move(tail)));
            add(round++, attack_action(cg.clause_unit, cg.contact_units[k]));
            cur = cg.contacts[k];
        }
    }

    // The lord walks once every blockade occupant is dead: along the lower
    // road, up the connector, back along the upper road to the throne.
    std::vector<Position> route;
    for (int x = lay.gate.x + 1; x <= lay.connector_col; ++x)
        route.push_back({x, lay.lower_road_row});
    for (int y = lay.lower_road_row - 1; y >= lay.upper_road_row; --y)
        route.push_back({lay.connector_col, y});
    for (int x = lay.connector_col - 1; x >= lay.throne.x; --x)
        route.push_back({x, lay.upper_road_row});
    int round = int(script.rounds.size()) + 1;
    for (size_t off = 0; off < route.size(); off += kD) {
        size_t end = std::min(route.size(), off + size_t(kD));
        add(round++, move_action(lay.lord_unit,
                                 {route.begin() + off, route.begin() + end}));
    }
    return script;
}

std::optional<std::vector<Position>> find_cycle(const GridMap& grid) {
    const int w = grid.width, h = grid.height;
    std::vector<int> parent(size_t(w) * h);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            Position p{x, y};
            if (!grid.is_floor(p)) continue;
            for (Position q : {Position{x + 1, y}, Position{x, y + 1}}) {
                if (!grid.is_floor(q)) continue;
                int a = find(y * w + x), bq = find(q.y * w + q.x);
                if (a != bq) {
                    parent[a] = bq;
                    continue;
                }
                // p and q were already connected: the shortest walk between
                // them that skips this edge closes a cycle.
                std::vector<int> dist(size_t(w) * h, -1), prev(size_t(w) * h, -1);
                std::queue<Position> bfs;
                dist[size_t(p.y) * w + p.x] = 0;
                bfs.push(p);
                while (!bfs.empty()) {
                    Position cur = bfs.front();
                    bfs.pop();
                    if (cur == q) break;
                    for (Position nxt : {Position{cur.x + 1, cur.y},
                                         Position{cur.x - 1, cur.y},
                                         Position{cur.x, cur.y + 1},
                                         Position{cur.x, cur.y - 1}}) {
                        if (!grid.is_floor(nxt)) continue;
                        if ((cur == p && nxt == q) || (cur == q && nxt == p))
                            continue;  // the skipped edge
                        size_t i = size_t(nxt.y) * w + nxt.x;
                        if (dist[i] != -1) continue;
                        dist[i] = dist[size_t(cur.y) * w + cur.x] + 1;
                        prev[i] = cur.y * w + cur.x;
                        bfs.push(nxt);
                    }
                }
                std::vector<Position> cycle;
                for (int i = q.y * w + q.x; i != -1; i = prev[i])
                    cycle.push_back({i % w, i / w});
                std::reverse(cycle.begin(), cycle.end());  // p ... q
                cycle.push_back(p);                        // close the walk
                return cycle;
            }
        }
    return std::nullopt;
}

namespace {

// Component labels over floor tiles; kUnreachable-style -1 for walls.
std::vector<int> floor_components(const GridMap& grid) {
    std::vector<int> label(size_t(grid.width) * grid.height, -1);
    int next = 0;
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x) {
            Position p{x, y};
            if (!grid.is_floor(p) || label[size_t(y) * grid.width + x] != -1) continue;
            std::queue<Position> q;
            label[size_t(y) * grid.width + x] = next;
            q.push(p);
            while (!q.empty()) {
                Position cur = q.front();
                q.pop();
                for (Position nxt : {Position{cur.x + 1, cur.y},
                                     Position{cur.x - 1, cur.y},
                                     Position{cur.x, cur.y + 1},
                                     Position{cur.x, cur.y - 1}}) {
                    if (!grid.is_floor(nxt)) continue;
                    size_t i = size_t(nxt.y) * grid.width + nxt.x;
                    if (label[i] != -1) continue;
                    label[i] = next;
                    q.push(nxt);
                }
            }
            ++next;
        }
    return label;
}

}  // namespace

std::vector<Violation> validate_layout(const CompileResult& compiled) {
    std::vector<Violation> out;
    auto bad = [&](std::string s) { out.push_back({std::move(s)}); };
    const GridMap& grid = compiled.stage.grid;
    const GadgetLayout& lay = compiled.layout;
    const int d = lay.d;

    auto labels = floor_components(grid);
    auto label_of = [&](Position p) -> int {
        if (!grid.in_bounds(p)) return -2;
        return labels[size_t(p.y) * grid.width + p.x];
    };
    int road = label_of(lay.gate);
    if (road < 0) bad("gate is not on the floor");
    if (label_of(lay.throne) != road) bad("throne not reachable from the gate");

    // Road-side tiles an enemy in the road component could attack from.
    std::vector<Position> road_tiles;
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x)
            if (label_of({x, y}) == road) road_tiles.push_back({x, y});

    auto sole_road_neighbor = [&](Position target, Position expect, const char* what) {
        for (Position p : road_tiles) {
            int m = manhattan(p, target);
            bool covering = m >= 1 && m <= 2;
            if (covering != (p == expect))
                bad(std::string(what) + " near " + pos_str(target) +
                    ": unexpected covering tile " + pos_str(p));
        }
    };

    for (size_t v = 0; v < lay.variables.size(); ++v) {
        const auto& g = lay.variables[v];
        std::string who = "variable " + std::to_string(v + 1);

        // Chamber: a sealed column of 2d+1 tiles with the start in its middle.
        if (g.t.x != g.f.x || g.f.y - g.t.y != 2 * d)
            bad(who + ": chamber span is not 2d+1");
        if (manhattan(g.start, g.t) != d || manhattan(g.start, g.f) != d)
            bad(who + ": start tile is not centered");
        int chamber = label_of(g.t);
        for (int y = g.t.y; y <= g.f.y; ++y)
            if (label_of({g.t.x, y}) != chamber) bad(who + ": chamber not connected");
        if (chamber == road) bad(who + ": chamber joined to the road");
        if (grid.is_floor(g.seal_upper) || grid.is_floor(g.seal_lower))
            bad(who + ": chamber seals are not walls");

        // Sniper file: 2d-1 occupied tiles covering every chamber tile except
        // the two commitment ends.
        if (g.sniper_tiles.size() != size_t(2 * d - 1) ||
            g.sniper_units.size() != g.sniper_tiles.size())
            bad(who + ": sniper file is not 2d-1 occupied tiles");
        int file = label_of(g.sniper_tiles.front());
        if (file == road || file == chamber) bad(who + ": sniper file not sealed");
        PassContext free_ctx{&grid, {}};
        std::vector<char> covered(size_t(2 * d + 1), 0);
        for (Position s : g.sniper_tiles)
            for (const auto& [e, steps] : reachable_within(free_ctx, s, d))
                for (int y = g.t.y; y <= g.f.y; ++y) {
                    int m = manhattan(e, {g.t.x, y});
                    if (m >= 1 && m <= 2) covered[size_t(y) - g.t.y] = 1;
                }
        for (int y = g.t.y; y <= g.f.y; ++y) {
            bool is_end = y == g.t.y || y == g.f.y;
            if (bool(covered[size_t(y) - g.t.y]) == is_end)
                bad(who + ": coverage wrong at " + pos_str({g.t.x, y}));
        }

        // The junctions are the only road tiles that can strike the ends.
        sole_road_neighbor(g.t, g.upper.junction, "upper junction");
        sole_road_neighbor(g.f, g.lower.junction, "lower junction");

        // Blockades: posts on the road component, contacts behind walls.
        for (const TridentLayout* t : {&g.upper, &g.lower}) {
            bool upper = t == &g.upper;
            Position seal = upper ? g.seal_upper : g.seal_lower;
            for (size_t s = 0; s < t->posts.size(); ++s) {
                Position post = t->posts[s], contact = t->contacts[s];
                if (label_of(post) != road) bad(who + ": post off the road component");
                if (manhattan(post, seal) != d)
                    bad(who + ": post not at distance d from the seal");
                if (manhattan(post, contact) != 2 || post.x != contact.x)
                    bad(who + ": contact not two tiles behind its post");
                if (grid.is_floor({post.x, (post.y + contact.y) / 2}))
                    bad(who + ": no wall between post and contact");
                sole_road_neighbor(contact, post, "contact");
                const auto& tmpl = compiled.stage.roster[t->literal_units[s]];
                if (!(tmpl.start == post) || tmpl.side != Side::Enemy ||
                    tmpl.behavior != Behavior::Patient)
                    bad(who + ": blockade occupant misplaced");
            }
        }
        if (manhattan(g.upper_choke_left, g.upper_choke_right) != d ||
            manhattan(g.lower_choke_left, g.lower_choke_right) != d)
            bad(who + ": choke interval is not d wide");
    }

    for (size_t j = 0; j < lay.clauses.size(); ++j) {
        const auto& cg = lay.clauses[j];
        std::string who = "clause " + std::to_string(j + 1);
        if (cg.rail.empty() || !(cg.start == cg.rail.front()))
            bad(who + ": start is not the left rail end");
        int comp = label_of(cg.start);
        if (comp == road) bad(who + ": rail joined to the road");
        for (Position p : cg.rail)
            if (label_of(p) != comp) bad(who + ": rail not connected");
        if (cg.contacts.size() != cg.contact_units.size())
            bad(who + ": contact bookkeeping out of step");
        for (int u : cg.contact_units)
            if (u < 0) bad(who + ": contact without a blockade occupant");
        for (Position p : cg.contacts)
            if (label_of(p) != comp) bad(who + ": contact not on the rail component");
        const auto& tmpl = compiled.stage.roster[cg.clause_unit];
        if (!(tmpl.start == cg.start) || tmpl.attrs.hp_max != int(cg.contacts.size()))
            bad(who + ": clause unit misplaced or wrongly sized");
    }

    if (find_cycle(grid)) bad("floor graph has a cycle");
    if (!compiled.stage.round_budget ||
        *compiled.stage.round_budget != count_floor_tiles(grid))
        bad("round budget is not the floor tile count");
    return out;
}

CompileResult variable_harness(bool counter_attacks) {
    StatTable tab = counter_attacks ? StatTable::with_counters()
                                    : StatTable::without_counters();
    CompileResult out;
    Builder b(5, 17);
    b.carve_col(1, 1, 13, 1000);  // chamber
    b.carve_col(3, 2, 12, 2000);  // sniper file
    out.stage.grid = std::move(b.grid);
    out.stage.counter_attacks = counter_attacks;

    RosterBuilder rb{out.stage.roster, tab.durability};
    VariableGadget g;
    g.center_col = 1;
    g.start = {1, 7};
    g.t = {1, 1};
    g.f = {1, 13};
    g.seal_upper = {1, 0};
    g.seal_lower = {1, 14};
    g.variable_unit = rb.add("V1", Side::Player, g.start, tab.variable,
                             Behavior::PlayerControlled);
    for (int y = 2; y <= 12; ++y) {
        g.sniper_tiles.push_back({3, y});
        g.sniper_units.push_back(rb.add("S1." + std::to_string(y - 1), Side::Enemy,
                                        {3, y}, tab.sniper, Behavior::Patient));
    }
    out.layout.d = kD;
    out.layout.variables.push_back(std::move(g));
    out.stage.round_budget = count_floor_tiles(out.stage.grid);
    if (auto viol = validate_stage(out.stage); !viol.empty())
        throw BuildError("harness stage is invalid: " + viol.front().what);
    return out;
}

CompileResult clause_harness(bool counter_attacks, unsigned post_mask) {
    StatTable tab = counter_attacks ? StatTable::with_counters()
                                    : StatTable::without_counters();
    CompileResult out;
    Builder b(17, 8);
    int who = 3000;
    b.carve_row(2, 1, 15, who);  // rail
    ClauseGadget cg;
    cg.rail_row = 2;
    cg.start = {1, 2};
    for (int x = 1; x <= 15; ++x) cg.rail.push_back({x, 2});

    RosterBuilder rb{out.stage.roster, tab.durability};
    Attributes attrs = tab.clause;  // three-slot clause: hp 3 from the table
    cg.clause_unit = rb.add("C1", Side::Player, cg.start, attrs,
                            Behavior::PlayerControlled);

    for (int s = 0; s < 3; ++s) {
        int col = 3 + 6 * s;
        b.carve_col(col, 3, 4, who);        // spur down to the contact
        b.carve({col, 6}, 100 + s);         // isolated post
        cg.contacts.push_back({col, 4});
        cg.contact_vars.push_back(s);
        int unit = -1;
        if (post_mask & (1u << s))
            unit = rb.add("A1." + std::to_string(s + 1), Side::Enemy, {col, 6},
                          tab.literal, Behavior::Patient);
        cg.contact_units.push_back(unit);
    }
    out.stage.grid = std::move(b.grid);
    out.stage.counter_attacks = counter_attacks;
    out.layout.d = kD;
    out.layout.clauses.push_back(std::move(cg));
    out.stage.round_budget = count_floor_tiles(out.stage.grid);
    if (auto viol = validate_stage(out.stage); !viol.empty())
        throw BuildError("harness stage is invalid: " + viol.front().what);
    return out;
}

CompileResult choke_harness(bool counter_attacks, unsigned post_mask) {
    StatTable tab = counter_attacks ? StatTable::with_counters()
                                    : StatTable::without_counters();
    CompileResult out;
    const int road = 7, x = 13;
    Builder b(27, 10);
    b.carve_row(road, 1, 25, 0);
    b.carve_col(x - 3, road - 2, road - 1, 0);
    b.carve_col(x + 3, road - 2, road - 1, 0);
    b.carve_col(x, road - 5, road - 1, 0);
    out.stage.grid = std::move(b.grid);
    out.stage.grid.throne = Position{25, road};
    out.stage.counter_attacks = counter_attacks;

    RosterBuilder rb{out.stage.roster, tab.durability};
    GadgetLayout& lay = out.layout;
    lay.d = kD;
    lay.upper_road_row = road;
    lay.gate = {1, road};
    lay.throne = {25, road};
    lay.lord_unit = rb.add("LORD", Side::Player, lay.gate, tab.lord,
                           Behavior::PlayerControlled, true);

    VariableGadget g;
    g.center_col = x;
    g.upper.junction = {x, road};
    g.upper_choke_left = {x - 3, road};
    g.upper_choke_right = {x + 3, road};
    Position posts[3] = {{x - 3, road - 2}, {x, road - 5}, {x + 3, road - 2}};
    for (int s = 0; s < 3; ++s)
        if (post_mask & (1u << s)) {
            g.upper.posts.push_back(posts[s]);
            g.upper.literal_units.push_back(rb.add("A1." + std::to_string(s + 1),
                                                   Side::Enemy, posts[s], tab.literal,
                                                   Behavior::Patient));
        }
    lay.variables.push_back(std::move(g));
    out.stage.round_budget = count_floor_tiles(out.stage.grid);
    if (auto viol = validate_stage(out.stage); !viol.empty())
        throw BuildError("harness stage is invalid: " + viol.front().what);
    return out;
}

}  // namespace fe
