#include "fe/engine.hpp"

#include <algorithm>

namespace fe {

namespace {

void erase_unit(GameState& st, int unit) {
    std::erase_if(st.units, [&](const UnitState& u) { return u.unit == unit; });
}

bool any_live_player(const GameState& st) {
    for (const auto& u : st.units)
        if (st.tmpl(u.unit).side == Side::Player) return true;
    return false;
}

// Loss checks shared by both phases: dead lord or an empty player side.
void check_defeat(GameState& st) {
    if (st.outcome != Outcome::Ongoing) return;
    bool lord_present = false, lord_alive = false;
    for (const auto& t : st.stage->roster)
        if (t.is_lord) lord_present = true;
    for (const auto& u : st.units)
        if (st.tmpl(u.unit).is_lord) lord_alive = true;
    if ((lord_present && !lord_alive) || !any_live_player(st))
        st.outcome = Outcome::Lose;
}

bool can_strike(const GameState& st, const UnitState& u) {
    const auto& a = st.tmpl(u.unit).attrs;
    if (a.attack_range.empty()) return false;
    if (u.durability && *u.durability <= 0) return false;
    return true;
}

int unit_def(const GameState& st, int unit) { return st.tmpl(unit).attrs.def; }

void validate_move_path(const GameState& st, const UnitState& mover,
                        const std::vector<Position>& path) {
    const auto& attrs = st.tmpl(mover.unit).attrs;
    if (int(path.size()) > attrs.mov)
        throw RuleError(RuleErrorKind::IllegalMove, "path longer than mov");
    Side side = st.tmpl(mover.unit).side;
    Position cur = mover.pos;
    for (Position p : path) {
        if (manhattan(cur, p) != 1)
            throw RuleError(RuleErrorKind::IllegalMove, "path steps must be adjacent");
        if (!st.stage->grid.is_floor(p))
            throw RuleError(RuleErrorKind::IllegalMove, "path leaves the floor");
        if (const UnitState* occ = st.unit_at(p);
            occ && st.tmpl(occ->unit).side != side)
            throw RuleError(RuleErrorKind::IllegalMove, "path crosses a hostile unit");
        cur = p;
    }
    if (const UnitState* occ = st.unit_at(cur); occ && occ->unit != mover.unit)
        throw RuleError(RuleErrorKind::IllegalMove, "endpoint occupied");
}

}  // namespace

PassContext pass_context(const GameState& state, int unit) {
    PassContext ctx;
    ctx.grid = &state.stage->grid;
    Side side = state.tmpl(unit).side;
    for (const auto& u : state.units)
        if (state.tmpl(u.unit).side != side) ctx.blockers.push_back(u.pos);
    return ctx;
}

std::vector<Position> legal_endpoints(const GameState& state, int unit) {
    const UnitState* u = state.find(unit);
    std::vector<Position> out;
    if (!u) return out;
    PassContext ctx = pass_context(state, unit);
    for (Position p : reachable_tiles(ctx, u->pos, state.tmpl(unit).attrs.mov)) {
        const UnitState* occ = state.unit_at(p);
        if (!occ || occ->unit == unit) out.push_back(p);
    }
    return out;
}

std::vector<AttackOption> move_and_attack_targets(const GameState& state, int unit) {
    std::vector<AttackOption> out;
    const UnitState* u = state.find(unit);
    if (!u || !can_strike(state, *u)) return out;
    const auto& attrs = state.tmpl(unit).attrs;
    Side side = state.tmpl(unit).side;

    // One pass over the units collects the hostiles that could possibly be
    // attacked (within a full move plus the longest reach) and the tiles a
    // move could end on but another unit occupies.
    int reach = attrs.mov + attrs.attack_range.hi;
    std::vector<const UnitState*> near_hostiles;
    std::vector<Position> occupied;
    for (const auto& t : state.units) {
        int dist = manhattan(u->pos, t.pos);
        if (state.tmpl(t.unit).side != side && dist <= reach)
            near_hostiles.push_back(&t);
        if (t.unit != unit && dist <= attrs.mov) occupied.push_back(t.pos);
    }
    if (near_hostiles.empty()) return out;

    PassContext ctx = pass_context(state, unit);
    auto within = reachable_within(ctx, u->pos, attrs.mov);

    for (const UnitState* target : near_hostiles) {
        AttackOption best;
        for (const auto& [p, d] : within) {
            if (!attrs.attack_range.contains(manhattan(p, target->pos))) continue;
            if (std::find(occupied.begin(), occupied.end(), p) != occupied.end())
                continue;
            // Cheapest endpoint wins; cost ties resolve by row then column
            // (the row-major tile order makes that the first one seen).
            if (best.target == -1 || d < best.cost) {
                best.target = target->unit;
                best.position = p;
                best.cost = d;
            }
        }
        if (best.target != -1) {
            best.path = canonical_path_blocked(ctx, u->pos, best.position);
            out.push_back(std::move(best));
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        int da = unit_def(state, a.target), db = unit_def(state, b.target);
        if (da != db) return da < db;
        return a.target < b.target;
    });
    return out;
}

GameState resolve_combat(const GameState& state, int attacker, int defender,
                         CombatReport* report) {
    GameState st = state;
    UnitState* atk = st.find(attacker);
    UnitState* def = st.find(defender);
    if (!atk || !def)
        throw RuleError(RuleErrorKind::TargetInvalid, "combatant not alive");
    if (!can_strike(st, *atk))
        throw RuleError(RuleErrorKind::NoWeapon, "attacker cannot strike");
    const auto& aa = st.tmpl(attacker).attrs;
    const auto& da = st.tmpl(defender).attrs;
    int d = manhattan(atk->pos, def->pos);
    if (!aa.attack_range.contains(d))
        throw RuleError(RuleErrorKind::OutOfRange, "target out of attack range");

    CombatReport rep;
    rep.attacker = attacker;
    rep.defender = defender;

    auto flip = [&](UnitState& u) {
        if (u.behavior == Behavior::Patient) {
            u.behavior = Behavior::Impatient;
            rep.behavior_flips.push_back(u.unit);
        }
    };
    flip(*atk);
    flip(*def);

    rep.damage_dealt = std::max(0, aa.atk - da.def);
    if (atk->durability) --*atk->durability;
    def->hp -= rep.damage_dealt;
    bool def_alive = def->hp > 0;
    if (!def_alive) rep.deaths.push_back(defender);

    if (def_alive && st.stage->counter_attacks && can_strike(st, *def) &&
        da.attack_range.contains(d)) {
        rep.countered = true;
        rep.counter_damage = std::max(0, da.atk - aa.def);
        if (def->durability) --*def->durability;
        atk->hp -= rep.counter_damage;
        if (atk->hp <= 0) rep.deaths.push_back(attacker);
    }

    if (!def_alive) erase_unit(st, defender);
    if (UnitState* a2 = st.find(attacker); a2 && a2->hp <= 0) erase_unit(st, attacker);
    check_defeat(st);
    if (report) *report = rep;
    return st;
}

GameState apply_player_action(const GameState& state, const Action& action,
                              CombatReport* report) {
    if (state.outcome != Outcome::Ongoing || state.phase != Phase::PlayerTurn)
        throw RuleError(RuleErrorKind::WrongPhase, "not an open player turn");
    const UnitState* u = state.find(action.unit);
    if (!u || state.tmpl(action.unit).side != Side::Player)
        throw RuleError(RuleErrorKind::TargetInvalid, "actor is not a live player unit");
    if (state.has_acted(action.unit))
        throw RuleError(RuleErrorKind::AlreadyActed, "unit already acted this round");
    validate_move_path(state, *u, action.move_path);

    GameState st = state;
    UnitState* mover = st.find(action.unit);
    if (!action.move_path.empty()) mover->pos = action.move_path.back();
    st.mark_acted(action.unit);

    // Seizing ends the game at once; a queued attack or heal does not resolve.
    if (st.tmpl(action.unit).is_lord && st.stage->grid.is_throne(mover->pos)) {
        st.outcome = Outcome::Win;
        return st;
    }

    switch (action.kind) {
        case ActionKind::Wait:
            break;
        case ActionKind::Attack: {
            const UnitState* t = st.find(action.target);
            if (!t || st.tmpl(action.target).side == Side::Player)
                throw RuleError(RuleErrorKind::TargetInvalid, "attack needs a live enemy");
            st = resolve_combat(st, action.unit, action.target, report);
            break;
        }
        case ActionKind::Heal: {
            const auto& attrs = st.tmpl(action.unit).attrs;
            if (!attrs.heal)
                throw RuleError(RuleErrorKind::NoWeapon, "unit has no staff");
            UnitState* t = st.find(action.target);
            if (!t || st.tmpl(action.target).side != Side::Player ||
                action.target == action.unit)
                throw RuleError(RuleErrorKind::TargetInvalid, "heal needs a live ally");
            if (!attrs.heal->range.contains(manhattan(mover->pos, t->pos)))
                throw RuleError(RuleErrorKind::OutOfRange, "target out of heal range");
            t->hp = std::min(t->hp + attrs.heal->amount,
                             st.tmpl(action.target).attrs.hp_max);
            break;
        }
    }
    return st;
}

GameState end_player_turn(const GameState& state) {
    if (state.outcome != Outcome::Ongoing || state.phase != Phase::PlayerTurn)
        throw RuleError(RuleErrorKind::WrongPhase, "not an open player turn");
    GameState st = state;
    st.phase = Phase::EnemyTurn;
    return st;
}

GameState run_enemy_turn(const GameState& state, EnemyTurnLog* log) {
    if (state.outcome != Outcome::Ongoing || state.phase != Phase::EnemyTurn)
        throw RuleError(RuleErrorKind::WrongPhase, "not an open enemy turn");
    GameState st = state;
    EnemyTurnLog turn;

    int roster_size = int(st.stage->roster.size());
    for (int idx = 0; idx < roster_size && st.outcome == Outcome::Ongoing; ++idx) {
        if (st.stage->roster[idx].side != Side::Enemy) continue;
        const UnitState* self = st.find(idx);
        if (!self) continue;

        EnemyActionLog entry;
        entry.unit = idx;
        entry.action.unit = idx;

        auto options = move_and_attack_targets(st, idx);
        if (!options.empty()) {
            const auto& opt = options.front();
            UnitState* mover = st.find(idx);
            mover->pos = opt.position;
            entry.action.move_path = opt.path;
            entry.action.kind = ActionKind::Attack;
            entry.action.target = opt.target;
            CombatReport rep;
            st = resolve_combat(st, idx, opt.target, &rep);
            entry.combat = rep;
        } else if (self->behavior == Behavior::Impatient) {
            // Chase the lowest-def player sharing this map component.
            auto dist = bfs_walls_only(st.stage->grid, self->pos);
            const auto& g = st.stage->grid;
            int target = -1;
            for (const auto& u : st.units) {
                if (st.tmpl(u.unit).side != Side::Player) continue;
                if (dist[size_t(u.pos.y) * g.width + u.pos.x] == kUnreachable)
                    continue;
                if (target == -1 ||
                    unit_def(st, u.unit) < unit_def(st, target) ||
                    (unit_def(st, u.unit) == unit_def(st, target) && u.unit < target))
                    target = u.unit;
            }
            if (target != -1) {
                auto path =
                    canonical_path(g, self->pos, st.find(target)->pos);
                int limit = std::min<int>(st.tmpl(idx).attrs.mov, int(path.size()));
                for (int i = 0; i < limit; ++i) {
                    const UnitState* occ = st.unit_at(path[i]);
                    if (occ && st.tmpl(occ->unit).side == Side::Player) {
                        limit = i;  // hostile tiles cannot be stepped past
                        break;
                    }
                }
                while (limit > 0 && st.unit_at(path[limit - 1])) --limit;
                if (limit > 0) {
                    st.find(idx)->pos = path[limit - 1];
                    entry.action.move_path.assign(path.begin(), path.begin() + limit);
                }
            }
        }
        turn.actions.push_back(std::move(entry));
    }

    if (st.outcome == Outcome::Ongoing) {
        st.phase = Phase::PlayerTurn;
        st.round += 1;
        std::fill(st.acted.begin(), st.acted.end(), 0);
        if (st.stage->round_budget && st.round > *st.stage->round_budget)
            st.outcome = Outcome::Lose;
    }
    if (log) *log = std::move(turn);
    return st;
}

ReplayResult replay(std::shared_ptr<const StageSpec> stage, const MoveScript& script) {
    ReplayResult res;
    GameState st = initial_state(std::move(stage));
    for (size_t r = 0; r < script.rounds.size() && st.outcome == Outcome::Ongoing; ++r) {
        ReplayStep step;
        step.round = st.round;
        for (size_t i = 0; i < script.rounds[r].size(); ++i) {
            try {
                st = apply_player_action(st, script.rounds[r][i]);
            } catch (const RuleError& e) {
                throw RuleError(e.kind, "round " + std::to_string(r + 1) + " action " +
                                            std::to_string(i + 1) + ": " + e.what());
            }
            step.player_actions.push_back(script.rounds[r][i]);
            if (st.outcome != Outcome::Ongoing) break;
        }
        if (st.outcome == Outcome::Ongoing) {
            st = end_player_turn(st);
            st = run_enemy_turn(st, &step.enemy_log);
        }
        step.after = st;
        res.steps.push_back(std::move(step));
    }
    res.final_state = std::move(st);
    return res;
}

}  // namespace fe
