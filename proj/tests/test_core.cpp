#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fe/core.hpp"

using namespace fe;

namespace {

StageSpec tiny_stage() {
    StageSpec spec;
    spec.grid = make_grid(4, 3, Tile::Floor);
    spec.grid.throne = Position{3, 2};

    UnitTemplate lord;
    lord.id = "lord";
    lord.side = Side::Player;
    lord.start = {0, 0};
    lord.hp_start = 3;
    lord.attrs = {3, 2, 1, 2, {1, 1}, std::nullopt, std::nullopt};
    lord.is_lord = true;

    UnitTemplate guard;
    guard.id = "guard";
    guard.side = Side::Enemy;
    guard.start = {3, 0};
    guard.hp_start = 2;
    guard.attrs = {2, 2, 0, 1, {1, 2}, std::nullopt, std::nullopt};
    guard.behavior = Behavior::Patient;

    spec.roster = {lord, guard};
    spec.round_budget = 5;
    return spec;
}

}  // namespace

TEST_CASE("manhattan distance") {
    CHECK(manhattan({0, 0}, {0, 0}) == 0);
    CHECK(manhattan({1, 2}, {4, 0}) == 5);
    CHECK(manhattan({4, 0}, {1, 2}) == 5);
    CHECK(manhattan({-2, 3}, {2, 3}) == 4);
}

TEST_CASE("intervals") {
    Interval none;
    CHECK(none.empty());
    CHECK(!none.contains(0));
    Interval r{1, 2};
    CHECK(!r.empty());
    CHECK(!r.contains(0));
    CHECK(r.contains(1));
    CHECK(r.contains(2));
    CHECK(!r.contains(3));
    Interval point{4, 4};
    CHECK(point.contains(4));
    CHECK(!point.contains(3));
}

TEST_CASE("grid construction and access") {
    GridMap g = make_grid(3, 2);
    CHECK(g.width == 3);
    CHECK(g.height == 2);
    CHECK(count_floor_tiles(g) == 0);
    g.set({1, 1}, Tile::Floor);
    g.set({2, 0}, Tile::Floor);
    CHECK(count_floor_tiles(g) == 2);
    CHECK(g.is_floor({1, 1}));
    CHECK(!g.is_floor({0, 0}));
    CHECK(!g.is_floor({-1, 0}));
    CHECK(!g.is_floor({3, 0}));
    CHECK(g.in_bounds({2, 1}));
    CHECK(!g.in_bounds({2, 2}));
    g.throne = Position{1, 1};
    CHECK(g.is_throne({1, 1}));
    CHECK(!g.is_throne({2, 0}));
}

TEST_CASE("initial state copies the roster") {
    auto spec = std::make_shared<StageSpec>(tiny_stage());
    GameState s = initial_state(spec);
    CHECK(s.round == 1);
    CHECK(s.phase == Phase::PlayerTurn);
    CHECK(s.outcome == Outcome::Ongoing);
    REQUIRE(s.units.size() == 2);
    CHECK(s.units[0].unit == 0);
    CHECK(s.units[0].pos == Position{0, 0});
    CHECK(s.units[0].hp == 3);
    CHECK(s.units[0].behavior == Behavior::PlayerControlled);
    CHECK(s.units[1].behavior == Behavior::Patient);
    CHECK(!s.has_acted(0));
    CHECK(!s.has_acted(1));
    s.mark_acted(1);
    CHECK(s.has_acted(1));
    CHECK(!s.has_acted(0));
    CHECK(s.find(0) != nullptr);
    CHECK(s.find(7) == nullptr);
    CHECK(s.unit_at({3, 0}) != nullptr);
    CHECK(s.unit_at({3, 0})->unit == 1);
    CHECK(s.unit_at({1, 1}) == nullptr);
}

TEST_CASE("pre-damaged start hp is kept") {
    StageSpec spec = tiny_stage();
    spec.roster[0].hp_start = 1;  // hp_max stays 3
    CHECK(validate_stage(spec).empty());
    GameState s = initial_state(std::make_shared<StageSpec>(spec));
    CHECK(s.units[0].hp == 1);
}

TEST_CASE("valid stage has no violations") {
    CHECK(validate_stage(tiny_stage()).empty());
}

TEST_CASE("stage validation catches bad geometry") {
    auto violations = [](StageSpec s) { return validate_stage(s).size(); };

    StageSpec off = tiny_stage();
    off.roster[1].start = {4, 0};
    CHECK(violations(off) > 0);

    StageSpec on_wall = tiny_stage();
    on_wall.grid.set({0, 0}, Tile::Wall);
    CHECK(violations(on_wall) > 0);

    StageSpec overlap = tiny_stage();
    overlap.roster[1].start = {0, 0};
    CHECK(violations(overlap) > 0);

    StageSpec throne_wall = tiny_stage();
    throne_wall.grid.set({3, 2}, Tile::Wall);
    CHECK(violations(throne_wall) > 0);

    StageSpec bad_grid = tiny_stage();
    bad_grid.grid.tiles.pop_back();
    CHECK(violations(bad_grid) > 0);
}

TEST_CASE("stage validation catches bad stats") {
    auto violations = [](StageSpec s) { return validate_stage(s).size(); };

    StageSpec zero_hp = tiny_stage();
    zero_hp.roster[0].hp_start = 0;
    CHECK(violations(zero_hp) > 0);

    StageSpec over_hp = tiny_stage();
    over_hp.roster[0].hp_start = 9;
    CHECK(violations(over_hp) > 0);

    StageSpec neg = tiny_stage();
    neg.roster[1].attrs.atk = -1;
    CHECK(violations(neg) > 0);

    StageSpec zero_lo = tiny_stage();
    zero_lo.roster[0].attrs.attack_range = {0, 1};
    CHECK(violations(zero_lo) > 0);

    StageSpec bad_dur = tiny_stage();
    bad_dur.roster[0].attrs.durability = -2;
    CHECK(violations(bad_dur) > 0);

    StageSpec budget = tiny_stage();
    budget.round_budget = 0;
    CHECK(violations(budget) > 0);
}

TEST_CASE("stage validation catches roster inconsistencies") {
    auto violations = [](StageSpec s) { return validate_stage(s).size(); };

    StageSpec dup = tiny_stage();
    dup.roster[1].id = "lord";
    CHECK(violations(dup) > 0);

    StageSpec blank = tiny_stage();
    blank.roster[0].id = "";
    CHECK(violations(blank) > 0);

    StageSpec enemy_lord = tiny_stage();
    enemy_lord.roster[1].is_lord = true;
    CHECK(violations(enemy_lord) > 0);

    StageSpec two_lords = tiny_stage();
    two_lords.roster.push_back(two_lords.roster[0]);
    two_lords.roster[2].id = "lord2";
    two_lords.roster[2].start = {1, 1};
    CHECK(violations(two_lords) > 0);

    StageSpec no_lord = tiny_stage();
    no_lord.roster[0].is_lord = false;  // throne demands exactly one lord
    CHECK(violations(no_lord) > 0);

    StageSpec lordless = tiny_stage();
    lordless.roster[0].is_lord = false;
    lordless.grid.throne.reset();  // without a throne that's fine
    CHECK(violations(lordless) == 0);

    StageSpec enemy_staff = tiny_stage();
    enemy_staff.roster[1].attrs.heal = HealSpec{{1, 1}, 2};
    CHECK(violations(enemy_staff) > 0);

    StageSpec player_ai = tiny_stage();
    player_ai.roster[0].behavior = Behavior::Impatient;
    CHECK(violations(player_ai) > 0);

    StageSpec enemy_manual = tiny_stage();
    enemy_manual.roster[1].behavior = Behavior::PlayerControlled;
    CHECK(violations(enemy_manual) > 0);
}
