#pragma once
// Turn resolution: player actions, combat, deterministic enemy turns.

#include "fe/core.hpp"
#include "fe/pathfind.hpp"

#include <stdexcept>

namespace fe {

enum class RuleErrorKind {
    WrongPhase,
    AlreadyActed,
    IllegalMove,
    OutOfRange,
    TargetInvalid,
    NoWeapon,
};

struct RuleError : std::runtime_error {
    RuleErrorKind kind;
    RuleError(RuleErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

struct CombatReport {
    int attacker = -1;
    int defender = -1;
    int damage_dealt = 0;
    bool countered = false;
    int counter_damage = 0;
    std::vector<int> deaths;
    std::vector<int> behavior_flips;  // Patient -> Impatient
};

struct AttackOption {
    int target = -1;
    Position position;               // endpoint to attack from
    std::vector<Position> path;      // steps to that endpoint
    int cost = 0;
};

struct EnemyActionLog {
    int unit = -1;
    Action action;
    std::optional<CombatReport> combat;
};

struct EnemyTurnLog {
    std::vector<EnemyActionLog> actions;
};

// Step-passage context for `unit`: hostile units block movement, allies do not.
PassContext pass_context(const GameState& state, int unit);

// Legal action endpoints for `unit`: tiles within mov steps that are not
// occupied by another unit (own tile allowed).
std::vector<Position> legal_endpoints(const GameState& state, int unit);

// Hostiles attackable after moving, ordered by (target def, target creation
// index). Each carries the cheapest attack endpoint, ties by (row, column).
std::vector<AttackOption> move_and_attack_targets(const GameState& state, int unit);

GameState resolve_combat(const GameState& state, int attacker, int defender,
                         CombatReport* report = nullptr);

GameState apply_player_action(const GameState& state, const Action& action,
                              CombatReport* report = nullptr);

GameState end_player_turn(const GameState& state);

GameState run_enemy_turn(const GameState& state, EnemyTurnLog* log = nullptr);

struct ReplayStep {
    int round = 0;
    std::vector<Action> player_actions;
    EnemyTurnLog enemy_log;
    GameState after;  // state once the round fully resolved (or play stopped)
};

struct ReplayResult {
    GameState final_state;
    std::vector<ReplayStep> steps;
};

// Applies each scripted round (player actions, then the enemy turn) until the
// script ends or the outcome is decided. Errors carry round/action indices.
ReplayResult replay(std::shared_ptr<const StageSpec> stage, const MoveScript& script);

}  // namespace fe
