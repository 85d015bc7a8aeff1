#include "fe/solver.hpp"

#include <chrono>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace fe {

namespace {

using Clock = std::chrono::steady_clock;

struct CapHit {};

// Sentinel action: close the player phase and run the enemy turn.
constexpr int kEndTurn = -2;

bool is_end_turn(const Action& a) { return a.unit == kEndTurn; }

Action end_turn_action() {
    Action a;
    a.unit = kEndTurn;
    return a;
}

void append_int(std::string& s, int v) {
    s.append(reinterpret_cast<const char*>(&v), sizeof v);
}

GameState advance_enemy(const GameState& st) {
    return run_enemy_turn(end_player_turn(st));
}

// All candidate player actions in a deterministic order: per unit ascending,
// per endpoint row-major, then Wait / Attacks / Heals.
std::vector<Action> player_actions(const GameState& st, bool dominance) {
    std::vector<Action> out;
    if (st.phase != Phase::PlayerTurn || st.outcome != Outcome::Ongoing) return out;
    for (const auto& u : st.units) {
        if (st.tmpl(u.unit).side != Side::Player || st.has_acted(u.unit)) continue;
        const auto& attrs = st.tmpl(u.unit).attrs;
        PassContext ctx = pass_context(st, u.unit);
        bool may_strike = !attrs.attack_range.empty() &&
                          (!u.durability || *u.durability > 0);
        for (Position e : legal_endpoints(st, u.unit)) {
            std::vector<Position> path =
                e == u.pos ? std::vector<Position>{}
                           : canonical_path_blocked(ctx, u.pos, e);
            Action base;
            base.unit = u.unit;
            base.move_path = path;
            if (!(dominance && e == u.pos)) {
                base.kind = ActionKind::Wait;
                out.push_back(base);
            }
            if (may_strike)
                for (const auto& t : st.units) {
                    if (st.tmpl(t.unit).side == Side::Player) continue;
                    if (!attrs.attack_range.contains(manhattan(e, t.pos))) continue;
                    base.kind = ActionKind::Attack;
                    base.target = t.unit;
                    out.push_back(base);
                }
            if (attrs.heal)
                for (const auto& t : st.units) {
                    if (st.tmpl(t.unit).side != Side::Player || t.unit == u.unit)
                        continue;
                    if (!attrs.heal->range.contains(manhattan(e, t.pos))) continue;
                    base.kind = ActionKind::Heal;
                    base.target = t.unit;
                    out.push_back(base);
                }
        }
    }
    return out;
}

struct Search {
    SolveLimits limits;
    SolverOptions options;
    bool bounded = false;
    Clock::time_point start = Clock::now();
    SolveStats stats;
    std::unordered_map<std::string, bool> memo;
    std::unordered_map<std::string, Action> choice;

    bool reached_goal(const GameState& st) const {
        return options.goal ? options.goal(st) : st.outcome == Outcome::Win;
    }

    void count_node() {
        ++stats.nodes;
        if (limits.node_cap && stats.nodes > limits.node_cap) throw CapHit{};
        if (limits.time_cap_s && (stats.nodes & 1023) == 0 &&
            elapsed() > limits.time_cap_s)
            throw CapHit{};
    }

    double elapsed() const {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    bool dfs(const GameState& st) {
        if (reached_goal(st)) return true;
        if (st.outcome != Outcome::Ongoing) return false;
        std::string key = state_key(st, bounded);
        if (auto it = memo.find(key); it != memo.end()) {
            ++stats.memo_hits;
            return it->second;
        }
        count_node();
        for (const Action& a : player_actions(st, options.dominance)) {
            if (dfs(apply_player_action(st, a))) {
                memo[key] = true;
                choice[key] = a;
                return true;
            }
        }
        if (dfs(advance_enemy(st))) {
            memo[key] = true;
            choice[key] = end_turn_action();
            return true;
        }
        memo[key] = false;
        return false;
    }

    MoveScript rebuild_script(GameState st) {
        MoveScript script;
        std::vector<Action> round;
        while (!reached_goal(st)) {
            const Action& a = choice.at(state_key(st, bounded));
            if (is_end_turn(a)) {
                script.rounds.push_back(std::move(round));
                round.clear();
                st = advance_enemy(st);
            } else {
                round.push_back(a);
                st = apply_player_action(st, a);
            }
        }
        if (!round.empty()) script.rounds.push_back(std::move(round));
        return script;
    }
};

}  // namespace

std::string state_key(const GameState& state, bool include_round) {
    std::string s;
    s.reserve(state.units.size() * 16 + 16);
    append_int(s, state.phase == Phase::PlayerTurn ? 0 : 1);
    append_int(s, int(state.outcome));
    if (include_round) append_int(s, state.round);
    for (const auto& u : state.units) {
        append_int(s, u.unit);
        append_int(s, u.pos.x);
        append_int(s, u.pos.y);
        append_int(s, u.hp);
        append_int(s, int(u.behavior));
        append_int(s, u.durability ? *u.durability : -1);
        append_int(s, state.has_acted(u.unit) ? 1 : 0);
    }
    return s;
}

SolveResult solve_bounded(const StageSpec& spec, int k, const SolveLimits& limits,
                          const SolverOptions& options) {
    auto stage = std::make_shared<StageSpec>(spec);
    if (!stage->round_budget || *stage->round_budget > k) stage->round_budget = k;

    Search search;
    search.limits = limits;
    search.options = options;
    search.bounded = true;

    SolveResult res;
    GameState init = initial_state(stage);
    try {
        if (search.dfs(init)) {
            res.decision = Decision::Winnable;
            res.witness = search.rebuild_script(init);
        } else {
            res.decision = Decision::NotWinnable;
        }
    } catch (const CapHit&) {
        res.decision = Decision::ResourceExceeded;
    }
    res.stats = search.stats;
    res.stats.elapsed_s = search.elapsed();
    return res;
}

SolveResult solve_unbounded(const StageSpec& spec, const SolveLimits& limits,
                            const SolverOptions& options) {
    auto stage = std::make_shared<StageSpec>(spec);
    stage->round_budget.reset();

    Search search;
    search.limits = limits;
    search.options = options;
    search.bounded = false;

    struct Edge {
        std::string parent;
        Action action;
    };
    std::unordered_map<std::string, Edge> parents;
    std::unordered_set<std::string> seen;
    std::deque<GameState> frontier;

    GameState init = initial_state(stage);
    std::string init_key = state_key(init, false);
    seen.insert(init_key);
    frontier.push_back(init);

    SolveResult res;
    try {
        while (!frontier.empty()) {
            GameState st = std::move(frontier.front());
            frontier.pop_front();
            std::string key = state_key(st, false);
            if (search.reached_goal(st)) {
                // Walk the parent chain back to the start, then split the
                // action sequence into rounds at the end-turn markers.
                std::vector<Action> actions;
                for (std::string cur = key; cur != init_key;) {
                    const Edge& e = parents.at(cur);
                    actions.push_back(e.action);
                    cur = e.parent;
                }
                MoveScript script;
                std::vector<Action> round;
                for (auto it = actions.rbegin(); it != actions.rend(); ++it) {
                    if (is_end_turn(*it)) {
                        script.rounds.push_back(std::move(round));
                        round.clear();
                    } else {
                        round.push_back(*it);
                    }
                }
                if (!round.empty()) script.rounds.push_back(std::move(round));
                res.decision = Decision::Winnable;
                res.witness = std::move(script);
                res.stats = search.stats;
                res.stats.elapsed_s = search.elapsed();
                return res;
            }
            if (st.outcome != Outcome::Ongoing) continue;
            search.count_node();

            auto visit = [&](GameState child, const Action& via) {
                std::string child_key = state_key(child, false);
                if (!seen.insert(child_key).second) return;
                parents.emplace(child_key, Edge{key, via});
                frontier.push_back(std::move(child));
            };
            for (const Action& a : player_actions(st, options.dominance))
                visit(apply_player_action(st, a), a);
            visit(advance_enemy(st), end_turn_action());
        }
        res.decision = Decision::NotWinnable;
    } catch (const CapHit&) {
        res.decision = Decision::ResourceExceeded;
    }
    res.stats = search.stats;
    res.stats.elapsed_s = search.elapsed();
    return res;
}

}  // namespace fe
