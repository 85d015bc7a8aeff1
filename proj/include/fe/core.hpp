#pragma once
// Core model: grid, units, stages, actions, game state.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fe {

struct Position {
    int x = 0;  // column, grows rightward
    int y = 0;  // row, grows downward
    bool operator==(const Position&) const = default;
};

inline int manhattan(Position a, Position b) {
    int dx = a.x - b.x, dy = a.y - b.y;
    return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
}

// Closed integer interval; hi < lo means empty (no weapon / no staff).
struct Interval {
    int lo = 0;
    int hi = -1;
    bool empty() const { return hi < lo; }
    bool contains(int v) const { return v >= lo && v <= hi; }
    bool operator==(const Interval&) const = default;
};

enum class Tile : uint8_t { Wall, Floor };

struct GridMap {
    int width = 0;
    int height = 0;
    std::vector<Tile> tiles;  // row-major, tiles[y * width + x]
    std::optional<Position> throne;

    bool in_bounds(Position p) const {
        return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
    }
    Tile at(Position p) const { return tiles[size_t(p.y) * width + p.x]; }
    void set(Position p, Tile t) { tiles[size_t(p.y) * width + p.x] = t; }
    bool is_floor(Position p) const { return in_bounds(p) && at(p) == Tile::Floor; }
    bool is_throne(Position p) const { return throne && *throne == p; }
};

inline GridMap make_grid(int w, int h, Tile fill = Tile::Wall) {
    GridMap g;
    g.width = w;
    g.height = h;
    g.tiles.assign(size_t(w) * h, fill);
    return g;
}

enum class Side : uint8_t { Player, Enemy };
enum class Behavior : uint8_t { PlayerControlled, Patient, Impatient };

struct HealSpec {
    Interval range;
    int amount = 0;
    bool operator==(const HealSpec&) const = default;
};

struct Attributes {
    int hp_max = 1;
    int atk = 0;
    int def = 0;
    int mov = 0;
    Interval attack_range;            // empty => cannot attack or counter
    std::optional<HealSpec> heal;     // staff, players only
    std::optional<int> durability;    // strikes left; absent => infinite
    bool operator==(const Attributes&) const = default;
};

struct UnitTemplate {
    std::string id;
    Side side = Side::Player;
    Position start;
    int hp_start = 1;  // may be below hp_max (pre-damaged harness setups)
    Attributes attrs;
    Behavior behavior = Behavior::PlayerControlled;
    bool is_lord = false;
};

struct StageSpec {
    GridMap grid;
    std::vector<UnitTemplate> roster;  // creation order == index
    std::optional<int> round_budget;   // absent => unbounded play
    bool counter_attacks = true;
};

enum class ActionKind : uint8_t { Wait, Attack, Heal };

// One unit's turn: walk move_path (may be empty), then act from the endpoint.
struct Action {
    int unit = -1;                   // roster index
    std::vector<Position> move_path;  // successive tiles stepped onto, start excluded
    ActionKind kind = ActionKind::Wait;
    int target = -1;                 // roster index for Attack/Heal
};

// Per-round batches of player actions.
struct MoveScript {
    std::vector<std::vector<Action>> rounds;
};

enum class Phase : uint8_t { PlayerTurn, EnemyTurn };
enum class Outcome : uint8_t { Ongoing, Win, Lose };

struct UnitState {
    int unit = -1;  // roster index
    Position pos;
    int hp = 0;
    Behavior behavior = Behavior::PlayerControlled;
    std::optional<int> durability;
};

struct GameState {
    std::shared_ptr<const StageSpec> stage;
    std::vector<UnitState> units;  // live units only, ascending roster index
    int round = 1;
    Phase phase = Phase::PlayerTurn;
    std::vector<uint64_t> acted;   // bitset over roster indices, player phase only
    Outcome outcome = Outcome::Ongoing;

    const UnitState* find(int unit) const {
        for (const auto& u : units)
            if (u.unit == unit) return &u;
        return nullptr;
    }
    UnitState* find(int unit) {
        for (auto& u : units)
            if (u.unit == unit) return &u;
        return nullptr;
    }
    const UnitState* unit_at(Position p) const {
        for (const auto& u : units)
            if (u.pos == p) return &u;
        return nullptr;
    }
    const UnitTemplate& tmpl(int unit) const { return stage->roster[unit]; }
    bool has_acted(int unit) const {
        return (acted[unit / 64] >> (unit % 64)) & 1;
    }
    void mark_acted(int unit) { acted[unit / 64] |= uint64_t(1) << (unit % 64); }
};

GameState initial_state(std::shared_ptr<const StageSpec> stage);

struct Violation {
    std::string what;
};

// Static stage legality: bounds, floor placement, no overlaps, stat ranges,
// lord uniqueness when a throne exists, behavior/side consistency.
std::vector<Violation> validate_stage(const StageSpec& spec);

int count_floor_tiles(const GridMap& grid);

}  // namespace fe
