#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fe/compile_np.hpp"
#include "fe/solver.hpp"

#include <algorithm>
#include <set>

using namespace fe;

namespace {

CnfInstance instance(int vars) {
    CnfInstance inst;
    for (int i = 0; i < vars; ++i) inst.variables.push_back("v" + std::to_string(i + 1));
    return inst;
}

void pos(CnfInstance& inst, std::vector<int> vars, int level) {
    EmbeddedClause c;
    c.sign = ClauseSign::AllPositive;
    c.level = level;
    for (int v : vars) c.literals.push_back({v, false});
    inst.clauses.push_back(std::move(c));
}

void neg(CnfInstance& inst, std::vector<int> vars, int level) {
    EmbeddedClause c;
    c.sign = ClauseSign::AllNegative;
    c.level = level;
    for (int v : vars) c.literals.push_back({v, true});
    inst.clauses.push_back(std::move(c));
}

// Wraps a formula that already satisfies the occurrence bounds.
BoundedInstance direct(const CnfInstance& inst) {
    BoundedInstance b;
    b.cnf = inst;
    b.original_variables = inst.variables;
    b.mapping.resize(inst.variables.size());
    return b;
}

CnfInstance sample_formula() {
    CnfInstance inst = instance(7);
    pos(inst, {0, 3, 6}, 0);
    pos(inst, {0, 1, 3}, 1);
    pos(inst, {3, 5, 6}, 1);
    neg(inst, {0, 5, 6}, 0);
    neg(inst, {0, 1, 5}, 1);
    neg(inst, {1, 2, 4}, 2);
    neg(inst, {2, 3, 4}, 3);
    return inst;
}

ReplayResult run_witness(const BoundedInstance& inst, bool counters,
                         const Assignment& a) {
    CompileResult cr = compile(inst, counters);
    REQUIRE(validate_stage(cr.stage).empty());
    MoveScript script = synthesize_witness(inst, cr, a);
    REQUIRE(int(script.rounds.size()) <= *cr.stage.round_budget);
    auto stage = std::make_shared<StageSpec>(cr.stage);
    return replay(stage, script);
}

}  // namespace

TEST_CASE("stat tables carry the fixed archetype values") {
    StatTable on = StatTable::with_counters();
    CHECK(on.variable.hp_max == 4);
    CHECK(on.variable.atk == 3);
    CHECK(on.clause.hp_max == 3);
    CHECK(on.clause.atk == 2);
    CHECK(on.lord.hp_max == 1);
    CHECK(on.lord.attack_range == Interval{1, 1});
    CHECK(on.literal.hp_max == 2);
    CHECK(on.literal.def == 1);
    CHECK(on.sniper.atk == 5);
    CHECK(on.sniper.def == 2);
    for (const Attributes* a :
         {&on.variable, &on.clause, &on.lord, &on.literal, &on.sniper})
        CHECK(a->mov == 6);

    StatTable off = StatTable::without_counters();
    CHECK(off.variable.hp_max == 7);
    CHECK(off.sniper.atk == 8);
    CHECK(off.clause.hp_max == 3);
    CHECK(off.lord.hp_max == 1);
    CHECK(on.durability == 4);
    CHECK(off.durability == 4);
}

TEST_CASE("single positive unit clause compiles to the expected landmarks") {
    CnfInstance inst = instance(1);
    pos(inst, {0}, 0);
    CompileResult cr = compile(direct(inst), true);

    CHECK(validate_stage(cr.stage).empty());
    CHECK(validate_layout(cr).empty());
    CHECK(check_cycle_free(cr.stage.grid));

    const GadgetLayout& lay = cr.layout;
    CHECK(lay.upper_road_row == 10);
    CHECK(lay.lower_road_row == 26);
    CHECK(lay.gate == Position{1, 26});
    CHECK(lay.throne == Position{1, 10});
    CHECK(cr.stage.grid.throne == Position{1, 10});

    REQUIRE(lay.variables.size() == 1);
    const VariableGadget& g = lay.variables[0];
    CHECK(g.start == Position{11, 18});
    CHECK(g.t == Position{11, 12});
    CHECK(g.f == Position{11, 24});
    CHECK(g.upper.junction == Position{11, 10});
    REQUIRE(g.upper.posts.size() == 1);
    CHECK(g.upper.posts[0] == Position{8, 8});
    CHECK(g.upper.contacts[0] == Position{8, 6});
    CHECK(g.lower.posts.empty());
    CHECK(g.sniper_tiles.size() == 11);

    REQUIRE(lay.clauses.size() == 1);
    const ClauseGadget& cg = lay.clauses[0];
    CHECK(cg.rail_row == 2);
    CHECK(cg.rail == std::vector<Position>{{8, 2}});
    CHECK(cg.contacts == std::vector<Position>{{8, 6}});
    CHECK(cg.contact_units == std::vector<int>{g.upper.literal_units[0]});

    // Creation order: chamber units, clause units, lord, occupants, snipers.
    REQUIRE(cr.stage.roster.size() == 15);
    CHECK(cr.stage.roster[0].id == "V1");
    CHECK(cr.stage.roster[1].id == "C1");
    CHECK(cr.stage.roster[2].id == "LORD");
    CHECK(cr.stage.roster[2].is_lord);
    CHECK(cr.stage.roster[3].id == "A1.1");
    CHECK(cr.stage.roster[4].id == "S1.1");
    CHECK(cr.stage.roster[14].id == "S1.11");
    CHECK(*cr.stage.round_budget == count_floor_tiles(cr.stage.grid));

    // The clause unit inherits one hit point per literal.
    CHECK(cr.stage.roster[1].attrs.hp_max == 1);
    for (const auto& t : cr.stage.roster) CHECK(t.attrs.durability == 4);
}

TEST_CASE("negative clauses hang below the lower road") {
    CnfInstance inst = instance(1);
    neg(inst, {0}, 0);
    CompileResult cr = compile(direct(inst), true);
    CHECK(validate_layout(cr).empty());

    const VariableGadget& g = cr.layout.variables[0];
    CHECK(g.upper.posts.empty());
    REQUIRE(g.lower.posts.size() == 1);
    CHECK(g.lower.posts[0] == Position{8, 28});    // below the road at 26
    CHECK(g.lower.contacts[0] == Position{8, 30});
    CHECK(cr.layout.clauses[0].rail_row == 34);
}

TEST_CASE("middle slots sit deeper behind the blockade") {
    CnfInstance inst = instance(1);
    pos(inst, {0}, 2);  // three stacked unit clauses use all three slots
    pos(inst, {0}, 1);
    pos(inst, {0}, 0);
    CompileResult cr = compile(direct(inst), true);
    CHECK(validate_layout(cr).empty());

    const VariableGadget& g = cr.layout.variables[0];
    int ur = cr.layout.upper_road_row;
    REQUIRE(g.upper.posts.size() == 3);
    CHECK(g.upper.posts[0] == Position{8, ur - 2});
    CHECK(g.upper.posts[1] == Position{11, ur - 5});
    CHECK(g.upper.posts[2] == Position{14, ur - 2});
    CHECK(g.upper.contacts[0] == Position{8, ur - 4});
    CHECK(g.upper.contacts[1] == Position{11, ur - 7});
    CHECK(g.upper.contacts[2] == Position{14, ur - 4});

    // Slot order follows the connector ordering: deepest rail ends first.
    CHECK(cr.layout.clauses[0].contacts[0] == g.upper.contacts[0]);
    CHECK(cr.layout.clauses[1].contacts[0] == g.upper.contacts[1]);
    CHECK(cr.layout.clauses[2].contacts[0] == g.upper.contacts[2]);
}

TEST_CASE("compile rejects bad inputs") {
    CnfInstance crossing = instance(4);
    pos(crossing, {0, 2}, 0);
    pos(crossing, {1, 3}, 1);
    CHECK_THROWS_AS(compile(direct(crossing), true), RoutingFailure);

    CnfInstance heavy = instance(2);
    for (int i = 0; i < 4; ++i) pos(heavy, {0, 1}, i);
    CHECK_THROWS_AS(compile(direct(heavy), true), RoutingFailure);
}

TEST_CASE("floor cycles are found and forests pass") {
    GridMap corridor = make_grid(6, 3);
    for (int x = 1; x <= 4; ++x) corridor.set({x, 1}, Tile::Floor);
    CHECK(!find_cycle(corridor));
    CHECK(check_cycle_free(corridor));

    GridMap block = make_grid(5, 5);
    for (int y = 1; y <= 2; ++y)
        for (int x = 1; x <= 2; ++x) block.set({x, y}, Tile::Floor);
    auto cycle = find_cycle(block);
    REQUIRE(cycle.has_value());
    CHECK(!check_cycle_free(block));
    REQUIRE(cycle->size() >= 5);
    CHECK(cycle->front() == cycle->back());
    std::set<std::pair<int, int>> seen;
    for (size_t i = 0; i + 1 < cycle->size(); ++i) {
        CHECK(block.is_floor((*cycle)[i]));
        CHECK(manhattan((*cycle)[i], (*cycle)[i + 1]) == 1);
        CHECK(seen.insert({(*cycle)[i].x, (*cycle)[i].y}).second);
    }
}

TEST_CASE("witness wins the single-clause stages") {
    for (bool counters : {true, false}) {
        CAPTURE(counters);

        CnfInstance p = instance(1);
        pos(p, {0}, 0);
        ReplayResult r = run_witness(direct(p), counters, {true});
        CHECK(r.final_state.outcome == Outcome::Win);

        CnfInstance n = instance(1);
        neg(n, {0}, 0);
        r = run_witness(direct(n), counters, {false});
        CHECK(r.final_state.outcome == Outcome::Win);
    }
}

TEST_CASE("witness rejects non-satisfying assignments") {
    CnfInstance p = instance(1);
    pos(p, {0}, 0);
    CompileResult cr = compile(direct(p), true);
    CHECK_THROWS_AS(synthesize_witness(direct(p), cr, {false}), AssignmentUnsatisfying);
    CHECK_THROWS_AS(synthesize_witness(direct(p), cr, {}), AssignmentUnsatisfying);
}

TEST_CASE("clause units fight exactly the occupants the chambers leave alive") {
    CnfInstance inst = instance(2);
    pos(inst, {0, 1}, 0);
    for (bool counters : {true, false}) {
        CAPTURE(counters);
        for (auto a : {Assignment{true, false}, Assignment{false, true},
                       Assignment{true, true}}) {
            CAPTURE(a[0]);
            CompileResult cr = compile(direct(inst), counters);
            MoveScript script = synthesize_witness(direct(inst), cr, a);
            auto stage = std::make_shared<StageSpec>(cr.stage);
            ReplayResult r = replay(stage, script);
            CHECK(r.final_state.outcome == Outcome::Win);
            // Every blockade occupant is dead by the end.
            for (const auto& vg : cr.layout.variables)
                for (const auto* tri : {&vg.upper, &vg.lower})
                    for (int u : tri->literal_units)
                        CHECK(r.final_state.find(u) == nullptr);
        }
    }
}

TEST_CASE("mixed-sign formulas win under both rule settings") {
    CnfInstance inst = instance(3);
    pos(inst, {0, 1, 2}, 0);
    neg(inst, {0, 1}, 0);
    neg(inst, {1, 2}, 1);

    auto model = brute_force_sat(inst);
    REQUIRE(model.has_value());
    for (bool counters : {true, false}) {
        CAPTURE(counters);
        ReplayResult r = run_witness(direct(inst), counters, *model);
        CHECK(r.final_state.outcome == Outcome::Win);
    }
}

TEST_CASE("reduced sample formula compiles, validates, and wins") {
    BoundedInstance red = reduce_degree(sample_formula());
    auto model = brute_force_sat(red.cnf, 80);
    REQUIRE(model.has_value());

    for (bool counters : {true, false}) {
        CAPTURE(counters);
        CompileResult cr = compile(red, counters);
        CHECK(validate_stage(cr.stage).empty());
        CHECK(validate_layout(cr).empty());
        CHECK(check_cycle_free(cr.stage.grid));

        MoveScript script = synthesize_witness(red, cr, *model);
        REQUIRE(int(script.rounds.size()) <= *cr.stage.round_budget);
        auto stage = std::make_shared<StageSpec>(cr.stage);
        ReplayResult r = replay(stage, script);
        CHECK(r.final_state.outcome == Outcome::Win);
    }
}

TEST_CASE("chamber harness: only the two commitment tiles survive round one") {
    for (bool counters : {true, false}) {
        CAPTURE(counters);
        CompileResult cr = variable_harness(counters);
        CHECK(validate_stage(cr.stage).empty());
        const VariableGadget& g = cr.layout.variables[0];
        auto stage = std::make_shared<StageSpec>(cr.stage);
        GameState init = initial_state(stage);

        int lines = 0, survivors = 0;
        for (Position end : legal_endpoints(init, g.variable_unit)) {
            // Enumerate every way to spend the turn at this endpoint.
            std::vector<Action> acts;
            Action walk;
            walk.unit = g.variable_unit;
            walk.move_path = canonical_path_blocked(pass_context(init, g.variable_unit),
                                                    g.start, end);
            acts.push_back(walk);
            for (int s : g.sniper_units) {
                const UnitState* u = init.find(s);
                const auto& range = init.tmpl(g.variable_unit).attrs.attack_range;
                if (u && range.contains(manhattan(end, u->pos))) {
                    Action strike = walk;
                    strike.kind = ActionKind::Attack;
                    strike.target = s;
                    acts.push_back(strike);
                }
            }
            for (const Action& act : acts) {
                ++lines;
                GameState st = apply_player_action(init, act);
                if (st.outcome == Outcome::Ongoing)
                    st = run_enemy_turn(end_player_turn(st));
                bool alive = st.find(g.variable_unit) != nullptr;
                bool committed = end == g.t || end == g.f;
                CHECK(alive == committed);
                survivors += alive;
            }
        }
        CHECK(lines > 13);       // the full chamber plus attack variants
        CHECK(survivors == 2);   // exactly the two commitment tiles
    }
}

TEST_CASE("clause harness: three live occupants are one too many") {
    SolverOptions opts;
    opts.goal = [](const GameState& st) {
        for (const auto& u : st.units)
            if (st.tmpl(u.unit).side == Side::Enemy) return false;
        return st.find(0) != nullptr;  // the clause unit must survive
    };
    for (bool counters : {true, false}) {
        CAPTURE(counters);
        CompileResult full = clause_harness(counters, 0b111);
        CHECK(validate_stage(full.stage).empty());
        CHECK(solve_unbounded(full.stage, {}, opts).decision ==
              Decision::NotWinnable);

        for (unsigned mask : {0b011u, 0b101u, 0b110u}) {
            CAPTURE(mask);
            CompileResult two = clause_harness(counters, mask);
            CHECK(solve_unbounded(two.stage, {}, opts).decision ==
                  Decision::Winnable);
        }
    }
}

TEST_CASE("choke harness: any single occupant still seals the road") {
    for (bool counters : {true, false}) {
        CAPTURE(counters);
        for (unsigned mask : {0b111u, 0b001u, 0b010u, 0b100u}) {
            CAPTURE(mask);
            CompileResult cr = choke_harness(counters, mask);
            CHECK(validate_stage(cr.stage).empty());
            CHECK(solve_unbounded(cr.stage).decision == Decision::NotWinnable);
        }

        // With the blockade cleared a straight march wins.
        CompileResult open = choke_harness(counters, 0);
        MoveScript script;
        std::vector<Position> route;
        for (int x = 2; x <= 25; ++x) route.push_back({x, 7});
        for (size_t off = 0; off < route.size(); off += 6) {
            Action a;
            a.unit = open.layout.lord_unit;
            a.move_path = {route.begin() + off,
                           route.begin() + std::min(route.size(), off + 6)};
            script.rounds.push_back({a});
        }
        auto stage = std::make_shared<StageSpec>(open.stage);
        CHECK(replay(stage, script).final_state.outcome == Outcome::Win);
    }
}
