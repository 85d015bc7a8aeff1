#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fe/engine.hpp"

using namespace fe;

namespace {

struct Build {
    StageSpec spec;

    explicit Build(int w, int h) { spec.grid = make_grid(w, h, Tile::Floor); }

    int unit(const std::string& id, Side side, Position at, int hp, int atk, int def,
             int mov, Interval range, Behavior behavior, bool lord = false) {
        UnitTemplate u;
        u.id = id;
        u.side = side;
        u.start = at;
        u.hp_start = hp;
        u.attrs = {hp, atk, def, mov, range, std::nullopt, std::nullopt};
        u.behavior = behavior;
        u.is_lord = lord;
        spec.roster.push_back(u);
        return int(spec.roster.size()) - 1;
    }
    int player(const std::string& id, Position at, int hp, int atk, int def, int mov,
               Interval range, bool lord = false) {
        return unit(id, Side::Player, at, hp, atk, def, mov, range,
                    Behavior::PlayerControlled, lord);
    }
    int enemy(const std::string& id, Position at, int hp, int atk, int def, int mov,
              Interval range, Behavior behavior = Behavior::Patient) {
        return unit(id, Side::Enemy, at, hp, atk, def, mov, range, behavior);
    }
    GameState start() const {
        REQUIRE(validate_stage(spec).empty());
        return initial_state(std::make_shared<StageSpec>(spec));
    }
};

Action move_to(int unit, std::vector<Position> path) {
    Action a;
    a.unit = unit;
    a.move_path = std::move(path);
    return a;
}

Action attack(int unit, std::vector<Position> path, int target) {
    Action a = move_to(unit, std::move(path));
    a.kind = ActionKind::Attack;
    a.target = target;
    return a;
}

RuleErrorKind error_kind(const GameState& s, const Action& a) {
    try {
        apply_player_action(s, a);
    } catch (const RuleError& e) {
        return e.kind;
    }
    FAIL("expected a rule error");
    return RuleErrorKind::WrongPhase;
}

}  // namespace

TEST_CASE("damage is attack minus defense, floored at zero") {
    Build b(5, 1);
    int p = b.player("p", {0, 0}, 4, 3, 1, 2, {1, 2});
    int weak = b.player("weak", {1, 0}, 4, 1, 0, 2, {1, 2});
    int e = b.enemy("e", {2, 0}, 9, 2, 5, 0, {});
    auto s = b.start();

    CombatReport r;
    auto s2 = resolve_combat(s, p, e, &r);
    CHECK(r.damage_dealt == 0);  // 3 atk vs 5 def
    CHECK(s2.find(e)->hp == 9);

    auto s3 = resolve_combat(s, weak, e, &r);
    CHECK(r.damage_dealt == 0);
    CHECK(s3.find(e)->hp == 9);
}

TEST_CASE("lethal strike kills before any counter") {
    Build b(5, 1);
    int p = b.player("p", {0, 0}, 4, 3, 1, 2, {1, 2});
    int e = b.enemy("e", {1, 0}, 2, 2, 1, 0, {1, 2});
    auto s = b.start();

    CombatReport r;
    auto s2 = resolve_combat(s, p, e, &r);
    CHECK(r.damage_dealt == 2);
    CHECK(!r.countered);
    CHECK(r.deaths == std::vector<int>{e});
    CHECK(s2.find(e) == nullptr);
    CHECK(s2.find(p)->hp == 4);
}

TEST_CASE("survivor counters when the attacker stands in its range") {
    Build b(5, 1);
    int p = b.player("p", {0, 0}, 4, 2, 1, 2, {1, 2});
    int e = b.enemy("e", {1, 0}, 9, 2, 1, 0, {1, 1});
    auto s = b.start();

    CombatReport r;
    auto s2 = resolve_combat(s, p, e, &r);  // adjacent: countered
    CHECK(r.damage_dealt == 1);
    CHECK(r.countered);
    CHECK(r.counter_damage == 1);
    CHECK(s2.find(p)->hp == 3);
    CHECK(s2.find(e)->hp == 8);

    // From distance 2 the defender's 1-1 weapon cannot answer.
    s.find(p)->pos = {3, 0};
    auto s3 = resolve_combat(s, p, e, &r);
    CHECK(r.damage_dealt == 1);
    CHECK(!r.countered);
    CHECK(s3.find(p)->hp == 4);
}

TEST_CASE("counters are disabled stage-wide by the flag") {
    Build b(5, 1);
    int p = b.player("p", {0, 0}, 4, 2, 1, 2, {1, 2});
    int e = b.enemy("e", {1, 0}, 9, 2, 1, 0, {1, 1});
    b.spec.counter_attacks = false;
    auto s = b.start();

    CombatReport r;
    auto s2 = resolve_combat(s, p, e, &r);
    CHECK(!r.countered);
    CHECK(s2.find(p)->hp == 4);
    CHECK(s2.find(e)->hp == 8);
}

TEST_CASE("a counter can kill the attacker") {
    Build b(5, 1);
    int lord = b.player("lord", {0, 0}, 1, 2, 0, 2, {1, 1}, true);
    int e = b.enemy("e", {1, 0}, 9, 3, 1, 0, {1, 1});
    auto s = b.start();

    CombatReport r;
    auto s2 = resolve_combat(s, lord, e, &r);
    CHECK(r.countered);
    CHECK(r.deaths == std::vector<int>{lord});
    CHECK(s2.find(lord) == nullptr);
    CHECK(s2.outcome == Outcome::Lose);  // the lord died
}

TEST_CASE("durability is spent by strikes and counters") {
    Build b(6, 1);
    int p = b.player("p", {0, 0}, 9, 2, 0, 3, {1, 1});
    int e = b.enemy("e", {1, 0}, 9, 2, 0, 0, {1, 1});
    int p2 = b.player("p2", {2, 0}, 9, 2, 0, 3, {1, 1});
    b.spec.roster[p].attrs.durability = 1;
    b.spec.roster[e].attrs.durability = 1;
    auto s = b.start();

    CombatReport r;
    auto s2 = resolve_combat(s, p, e, &r);
    CHECK(r.countered);
    CHECK(s2.find(p)->durability == 0);
    CHECK(s2.find(e)->durability == 0);

    // Spent weapons: no counter against a fresh attacker, no initiating.
    CombatReport r2;
    auto s3 = resolve_combat(s2, p2, e, &r2);
    CHECK(!r2.countered);
    CHECK(s3.find(p2)->hp == 9);
    CHECK(error_kind(s3, attack(p, {}, e)) == RuleErrorKind::NoWeapon);
}

TEST_CASE("combat flips patient participants to impatient") {
    Build b(6, 1);
    int p = b.player("p", {0, 0}, 9, 1, 0, 2, {1, 2});
    int e = b.enemy("e", {2, 0}, 9, 2, 5, 0, {1, 1});  // takes 0 damage
    auto s = b.start();

    CombatReport r;
    // Strike from distance 2: no counter, no damage; the defender still flips.
    auto s2 = resolve_combat(s, p, e, &r);
    CHECK(r.damage_dealt == 0);
    CHECK(!r.countered);
    CHECK(r.behavior_flips == std::vector<int>{e});
    CHECK(s2.find(e)->behavior == Behavior::Impatient);
}

TEST_CASE("player move legality") {
    Build b(6, 3);
    b.spec.grid.set({0, 1}, Tile::Wall);
    int lord = b.player("lord", {0, 0}, 9, 2, 0, 3, {1, 1}, true);
    int ally = b.player("ally", {1, 0}, 9, 2, 0, 2, {1, 1});
    b.enemy("e", {4, 0}, 9, 0, 9, 0, {});
    auto s = b.start();

    // Four steps exceed mov 3.
    CHECK(error_kind(s, move_to(lord, {{1, 0}, {1, 1}, {2, 1}, {3, 1}})) ==
          RuleErrorKind::IllegalMove);
    // Not step-adjacent.
    CHECK(error_kind(s, move_to(lord, {{2, 1}})) == RuleErrorKind::IllegalMove);
    // Onto a wall.
    CHECK(error_kind(s, move_to(lord, {{0, 1}})) == RuleErrorKind::IllegalMove);
    // Ending on an ally.
    CHECK(error_kind(s, move_to(lord, {{1, 0}})) == RuleErrorKind::IllegalMove);
    // Through an ally is fine.
    auto s2 = apply_player_action(s, move_to(lord, {{1, 0}, {2, 0}}));
    CHECK(s2.find(lord)->pos == Position{2, 0});
}

TEST_CASE("hostile tiles block movement") {
    Build b(4, 1);
    int p = b.player("p", {0, 0}, 9, 2, 0, 3, {1, 1});
    b.enemy("e", {1, 0}, 9, 0, 9, 0, {});
    auto s = b.start();

    // Stepping onto or crossing the enemy tile is illegal.
    CHECK(error_kind(s, move_to(p, {{1, 0}})) == RuleErrorKind::IllegalMove);
    CHECK(error_kind(s, move_to(p, {{1, 0}, {2, 0}})) == RuleErrorKind::IllegalMove);
}

TEST_CASE("acting twice and wrong phase are rejected") {
    Build b(4, 1);
    int p = b.player("p", {0, 0}, 9, 2, 0, 2, {1, 1});
    b.enemy("e", {3, 0}, 9, 0, 9, 0, {});
    auto s = b.start();

    auto s2 = apply_player_action(s, move_to(p, {{1, 0}}));
    CHECK(s2.has_acted(p));
    CHECK(error_kind(s2, move_to(p, {})) == RuleErrorKind::AlreadyActed);

    auto s3 = end_player_turn(s2);
    CHECK(s3.phase == Phase::EnemyTurn);
    CHECK(error_kind(s3, move_to(p, {})) == RuleErrorKind::WrongPhase);
}

TEST_CASE("attack validation") {
    Build b(8, 1);
    int p = b.player("p", {0, 0}, 9, 2, 0, 2, {1, 2});
    int ally = b.player("ally", {1, 0}, 9, 2, 0, 2, {1, 1});
    int disarmed = b.player("bare", {2, 0}, 9, 2, 0, 2, {});
    int e = b.enemy("e", {6, 0}, 9, 0, 9, 0, {});
    auto s = b.start();

    CHECK(error_kind(s, attack(p, {}, e)) == RuleErrorKind::OutOfRange);
    CHECK(error_kind(s, attack(p, {}, ally)) == RuleErrorKind::TargetInvalid);
    CHECK(error_kind(s, attack(p, {}, p)) == RuleErrorKind::TargetInvalid);
    CHECK(error_kind(s, attack(p, {}, 99)) == RuleErrorKind::TargetInvalid);
    CHECK(error_kind(s, attack(disarmed, {{3, 0}, {4, 0}}, e)) ==
          RuleErrorKind::NoWeapon);
}

TEST_CASE("heal restores hp, is clamped, and respects staff range") {
    Build b(8, 1);
    int cleric = b.player("cleric", {0, 0}, 9, 0, 0, 2, {});
    int ally = b.player("ally", {2, 0}, 9, 2, 0, 2, {1, 1});
    int e = b.enemy("e", {7, 0}, 9, 0, 9, 0, {});
    b.spec.roster[cleric].attrs.heal = HealSpec{{2, 10}, 2};
    auto s = b.start();
    s.find(ally)->hp = 1;

    Action h;
    h.unit = cleric;
    h.kind = ActionKind::Heal;
    h.target = ally;
    auto s2 = apply_player_action(s, h);
    CHECK(s2.find(ally)->hp == 3);

    s.find(ally)->hp = 8;
    auto s3 = apply_player_action(s, h);
    CHECK(s3.find(ally)->hp == 9);  // clamped at hp_max

    // Staff minimum range 2: an adjacent ally cannot be treated.
    s.find(ally)->pos = {1, 0};
    CHECK(error_kind(s, h) == RuleErrorKind::OutOfRange);
    s.find(ally)->pos = {2, 0};

    Action bad = h;
    bad.target = e;
    CHECK(error_kind(s, bad) == RuleErrorKind::TargetInvalid);
    bad.target = cleric;
    CHECK(error_kind(s, bad) == RuleErrorKind::TargetInvalid);
    CHECK(error_kind(s, attack(cleric, {}, e)) == RuleErrorKind::NoWeapon);

    // No staff, no healing.
    Action nostaff;
    nostaff.unit = ally;
    nostaff.kind = ActionKind::Heal;
    nostaff.target = cleric;
    CHECK(error_kind(s, nostaff) == RuleErrorKind::NoWeapon);
}

TEST_CASE("reaching the throne wins at once; a queued strike never lands") {
    Build b(5, 1);
    b.spec.grid.throne = Position{2, 0};
    int lord = b.player("lord", {0, 0}, 9, 5, 0, 2, {1, 1}, true);
    int e = b.enemy("e", {3, 0}, 9, 9, 0, 0, {1, 1});
    auto s = b.start();

    auto s2 = apply_player_action(s, attack(lord, {{1, 0}, {2, 0}}, e));
    CHECK(s2.outcome == Outcome::Win);
    CHECK(s2.find(e)->hp == 9);  // no strike, hence no lethal counter either
    CHECK(s2.find(lord)->hp == 9);
}

TEST_CASE("only the lord triggers the throne") {
    Build b(5, 1);
    b.spec.grid.throne = Position{2, 0};
    b.player("lord", {0, 0}, 9, 5, 0, 2, {1, 1}, true);
    int ally = b.player("ally", {3, 0}, 9, 5, 0, 2, {1, 1});
    auto s = b.start();

    auto s2 = apply_player_action(s, move_to(ally, {{2, 0}}));
    CHECK(s2.find(ally)->pos == Position{2, 0});
    CHECK(s2.outcome == Outcome::Ongoing);
}

TEST_CASE("losing the lord or the whole side loses") {
    Build b(4, 1);
    int lord = b.player("lord", {0, 0}, 1, 0, 0, 2, {1, 1}, true);
    b.player("ally", {3, 0}, 9, 0, 0, 2, {1, 1});
    b.enemy("e", {1, 0}, 9, 5, 9, 2, {1, 1}, Behavior::Impatient);
    auto s = b.start();
    auto s2 = run_enemy_turn(end_player_turn(s));
    CHECK(s2.find(lord) == nullptr);
    CHECK(s2.outcome == Outcome::Lose);

    // A lordless stage loses when its last player falls.
    Build b2(4, 1);
    b2.player("solo", {0, 0}, 1, 0, 0, 2, {1, 1});
    b2.enemy("e", {1, 0}, 9, 5, 9, 2, {1, 1}, Behavior::Impatient);
    auto t2 = run_enemy_turn(end_player_turn(b2.start()));
    CHECK(t2.units.size() == 1);
    CHECK(t2.outcome == Outcome::Lose);
}

TEST_CASE("attack options are ordered by defense then creation") {
    Build b(9, 3);
    int tough = b.player("tough", {0, 0}, 9, 0, 3, 0, {1, 1});
    int soft = b.player("soft", {8, 0}, 9, 0, 1, 0, {1, 1});
    int soft2 = b.player("soft2", {8, 2}, 9, 0, 1, 0, {1, 1});
    int e = b.enemy("e", {4, 1}, 9, 2, 0, 9, {1, 1});
    auto s = b.start();

    auto opts = move_and_attack_targets(s, e);
    REQUIRE(opts.size() == 3);
    CHECK(opts[0].target == soft);  // def 1, created before soft2
    CHECK(opts[1].target == soft2);
    CHECK(opts[2].target == tough);
}

TEST_CASE("attack endpoint is the cheapest, ties broken row-major") {
    Build b(5, 5);
    b.player("p", {0, 0}, 9, 0, 0, 0, {1, 1});
    int e = b.enemy("e", {2, 2}, 9, 2, 0, 9, {1, 1});
    auto s = b.start();

    auto opts = move_and_attack_targets(s, e);
    REQUIRE(opts.size() == 1);
    // (1,0) and (0,1) both cost 3 from (2,2); the smaller row wins.
    CHECK(opts[0].position == Position{1, 0});
    CHECK(opts[0].cost == 3);
    CHECK(opts[0].path.size() == 3);
}

TEST_CASE("attacks reach over walls") {
    Build b(3, 1);
    b.spec.grid.set({1, 0}, Tile::Wall);
    int p = b.player("p", {0, 0}, 9, 2, 0, 2, {1, 2});
    int e = b.enemy("e", {2, 0}, 9, 2, 0, 0, {1, 2});
    auto s = b.start();

    auto s2 = apply_player_action(s, attack(p, {}, e));
    CHECK(s2.find(e)->hp == 7);
    CHECK(s2.find(p)->hp == 7);  // the counter crosses the wall too
}

TEST_CASE("enemy with an attack option takes the first one") {
    Build b(7, 1);
    int soft = b.player("soft", {0, 0}, 9, 0, 0, 0, {1, 1});
    int e = b.enemy("e", {3, 0}, 9, 2, 0, 2, {1, 1});
    auto s = b.start();

    EnemyTurnLog log;
    auto s2 = run_enemy_turn(end_player_turn(s), &log);
    CHECK(s2.find(e)->pos == Position{1, 0});
    CHECK(s2.find(soft)->hp == 7);
    REQUIRE(log.actions.size() == 1);
    CHECK(log.actions[0].action.kind == ActionKind::Attack);
    CHECK(log.actions[0].combat.has_value());
    CHECK(s2.phase == Phase::PlayerTurn);
    CHECK(s2.round == 2);
}

TEST_CASE("a patient enemy without targets stays put") {
    Build b(7, 1);
    b.player("p", {0, 0}, 9, 0, 0, 0, {1, 1});
    int e = b.enemy("e", {6, 0}, 9, 2, 0, 2, {1, 1}, Behavior::Patient);
    auto s = b.start();

    auto s2 = run_enemy_turn(end_player_turn(s));
    CHECK(s2.find(e)->pos == Position{6, 0});
}

TEST_CASE("an impatient enemy chases the lowest-defense player") {
    Build b(8, 3);
    b.player("tough", {0, 0}, 9, 0, 5, 0, {1, 1});
    int soft = b.player("soft", {0, 2}, 9, 0, 1, 0, {1, 1});
    int e = b.enemy("e", {7, 2}, 9, 2, 0, 3, {1, 1}, Behavior::Impatient);
    auto s = b.start();

    auto s2 = run_enemy_turn(end_player_turn(s));
    CHECK(s2.find(e)->pos == Position{4, 2});  // 3 canonical steps toward soft
    CHECK(s2.find(soft)->hp == 9);             // out of reach this round
}

TEST_CASE("the chase stops before hostile tiles and occupied endpoints") {
    Build b(7, 1);
    b.player("p", {0, 0}, 9, 0, 0, 0, {1, 1});
    int a = b.enemy("a", {2, 0}, 9, 0, 0, 2, {}, Behavior::Impatient);
    int c = b.enemy("c", {4, 0}, 9, 0, 0, 3, {}, Behavior::Impatient);
    auto s = b.start();

    auto s2 = run_enemy_turn(end_player_turn(s));
    CHECK(s2.find(a)->pos == Position{1, 0});  // stops short of the player
    CHECK(s2.find(c)->pos == Position{2, 0});  // backs off the ally on (1,0)
}

TEST_CASE("enemies in another component stand still") {
    Build b(5, 1);
    b.spec.grid.set({2, 0}, Tile::Wall);
    b.player("p", {0, 0}, 9, 0, 0, 0, {1, 1});
    int e = b.enemy("e", {4, 0}, 9, 2, 0, 3, {1, 2}, Behavior::Impatient);
    auto s = b.start();

    auto s2 = run_enemy_turn(end_player_turn(s));
    CHECK(s2.find(e)->pos == Position{4, 0});
}

TEST_CASE("enemies act in creation order and stop once the game is decided") {
    Build b(7, 1);
    b.player("p", {3, 0}, 2, 0, 0, 0, {1, 1});
    int first = b.enemy("first", {1, 0}, 9, 9, 0, 1, {1, 1}, Behavior::Impatient);
    int second = b.enemy("second", {6, 0}, 9, 9, 0, 1, {1, 1}, Behavior::Impatient);
    auto s = b.start();

    EnemyTurnLog log;
    auto s2 = run_enemy_turn(end_player_turn(s), &log);
    CHECK(s2.outcome == Outcome::Lose);  // the sole player died
    REQUIRE(log.actions.size() >= 1);
    CHECK(log.actions[0].unit == first);
    CHECK(s2.find(first)->pos == Position{2, 0});
    CHECK(s2.find(second)->pos == Position{6, 0});
}

TEST_CASE("patient units flip after combat and then hunt") {
    Build b(8, 1);
    int p = b.player("p", {0, 0}, 9, 1, 0, 2, {1, 2});
    int e = b.enemy("e", {2, 0}, 9, 2, 5, 2, {1, 1}, Behavior::Patient);
    auto s = b.start();

    auto s2 = apply_player_action(s, attack(p, {}, e));  // 0 damage, distance 2
    CHECK(s2.find(e)->behavior == Behavior::Impatient);
    auto s3 = run_enemy_turn(end_player_turn(s2));
    CHECK(s3.find(e)->pos == Position{1, 0});
    CHECK(s3.find(p)->hp == 7);
}

TEST_CASE("exceeding the round budget loses") {
    Build b(6, 1);
    b.spec.grid.throne = Position{5, 0};
    b.spec.round_budget = 1;
    b.player("lord", {0, 0}, 9, 0, 0, 1, {1, 1}, true);
    b.enemy("e", {4, 0}, 9, 0, 9, 0, {});
    auto s = b.start();

    auto s2 = run_enemy_turn(end_player_turn(s));
    CHECK(s2.round == 2);
    CHECK(s2.outcome == Outcome::Lose);
}

TEST_CASE("replay runs scripted rounds") {
    Build b(6, 1);
    b.spec.grid.throne = Position{5, 0};
    int lord = b.player("lord", {0, 0}, 9, 2, 0, 3, {1, 2}, true);
    int e = b.enemy("e", {4, 0}, 3, 1, 0, 0, {1, 1});
    auto stage = std::make_shared<StageSpec>(b.spec);

    MoveScript script;
    script.rounds = {{attack(lord, {{1, 0}, {2, 0}}, e)},
                     {attack(lord, {}, e)},
                     {move_to(lord, {{3, 0}, {4, 0}, {5, 0}})}};
    auto result = replay(stage, script);
    CHECK(result.final_state.outcome == Outcome::Win);
    REQUIRE(result.steps.size() == 3);
    CHECK(result.steps[0].round == 1);
    CHECK(result.steps[0].after.find(e)->hp == 1);     // 3 - 2, out of counter reach
    CHECK(result.steps[0].after.find(lord)->hp == 9);
    CHECK(result.steps[1].after.find(e) == nullptr);   // finished off
    CHECK(result.steps[2].after.outcome == Outcome::Win);
}

TEST_CASE("replay reports round and action coordinates on errors") {
    Build b(6, 1);
    b.spec.grid.throne = Position{5, 0};
    int lord = b.player("lord", {0, 0}, 9, 2, 0, 3, {1, 2}, true);
    b.enemy("e", {4, 0}, 3, 1, 0, 0, {1, 1});
    auto stage = std::make_shared<StageSpec>(b.spec);

    MoveScript bad;
    bad.rounds = {{move_to(lord, {{1, 0}})}, {move_to(lord, {{5, 0}})}};
    try {
        replay(stage, bad);
        FAIL("expected a rule error");
    } catch (const RuleError& err) {
        CHECK(err.kind == RuleErrorKind::IllegalMove);
        CHECK(std::string(err.what()).find("round 2") != std::string::npos);
        CHECK(std::string(err.what()).find("action 1") != std::string::npos);
    }
}

TEST_CASE("unspent players simply stand when the turn ends") {
    Build b(5, 1);
    int p = b.player("p", {0, 0}, 9, 0, 0, 2, {1, 1});
    b.enemy("e", {4, 0}, 9, 0, 9, 0, {});
    auto s = b.start();
    auto s2 = run_enemy_turn(end_player_turn(s));  // no player action at all
    CHECK(s2.find(p)->pos == Position{0, 0});
    CHECK(s2.round == 2);
    CHECK(!s2.has_acted(p));  // cleared for the new round
}
