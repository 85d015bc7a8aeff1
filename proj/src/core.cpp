#include "fe/core.hpp"

#include <set>

namespace fe {

GameState initial_state(std::shared_ptr<const StageSpec> stage) {
    GameState st;
    st.stage = stage;
    st.units.reserve(stage->roster.size());
    for (int i = 0; i < int(stage->roster.size()); ++i) {
        const auto& t = stage->roster[i];
        UnitState u;
        u.unit = i;
        u.pos = t.start;
        u.hp = t.hp_start;
        u.behavior = t.behavior;
        u.durability = t.attrs.durability;
        st.units.push_back(u);
    }
    st.acted.assign((stage->roster.size() + 63) / 64, 0);
    return st;
}

int count_floor_tiles(const GridMap& grid) {
    int n = 0;
    for (Tile t : grid.tiles)
        if (t == Tile::Floor) ++n;
    return n;
}

std::vector<Violation> validate_stage(const StageSpec& spec) {
    std::vector<Violation> out;
    auto bad = [&](std::string s) { out.push_back({std::move(s)}); };

    const auto& g = spec.grid;
    if (g.width <= 0 || g.height <= 0 || g.tiles.size() != size_t(g.width) * g.height)
        bad("grid dimensions inconsistent with tile array");
    if (g.throne) {
        if (!g.is_floor(*g.throne)) bad("throne not on a floor tile");
    }
    if (spec.round_budget && *spec.round_budget < 1) bad("round budget below 1");

    std::set<std::pair<int, int>> occupied;
    std::set<std::string> ids;
    int lords = 0;
    for (size_t i = 0; i < spec.roster.size(); ++i) {
        const auto& t = spec.roster[i];
        std::string who = "unit '" + t.id + "'";
        if (t.id.empty()) bad("unit with empty id");
        if (!ids.insert(t.id).second) bad("duplicate unit id '" + t.id + "'");
        if (!g.is_floor(t.start)) bad(who + " starts off the floor");
        if (!occupied.insert({t.start.x, t.start.y}).second)
            bad(who + " overlaps another unit");
        if (t.attrs.hp_max < 1) bad(who + " has hp_max below 1");
        if (t.hp_start < 1 || t.hp_start > t.attrs.hp_max)
            bad(who + " has starting hp outside [1, hp_max]");
        if (t.attrs.atk < 0 || t.attrs.def < 0 || t.attrs.mov < 0)
            bad(who + " has a negative stat");
        if (!t.attrs.attack_range.empty() && t.attrs.attack_range.lo < 1)
            bad(who + " has attack range reaching below 1");
        if (t.attrs.heal) {
            if (t.side != Side::Player) bad(who + " is an enemy with a staff");
            if (t.attrs.heal->range.empty() || t.attrs.heal->range.lo < 1)
                bad(who + " has an invalid heal range");
            if (t.attrs.heal->amount < 1) bad(who + " heals a non-positive amount");
        }
        if (t.attrs.durability && *t.attrs.durability < 0)
            bad(who + " has negative durability");
        if (t.is_lord && t.side != Side::Player) bad(who + " is an enemy lord");
        if (t.is_lord) ++lords;
        if (t.side == Side::Player && t.behavior != Behavior::PlayerControlled)
            bad(who + " is a player unit with enemy behavior");
        if (t.side == Side::Enemy && t.behavior == Behavior::PlayerControlled)
            bad(who + " is an enemy unit under player control");
    }
    if (g.throne && lords != 1)
        bad("stage with a throne must field exactly one lord");
    if (lords > 1) bad("more than one lord");
    return out;
}

}  // namespace fe
