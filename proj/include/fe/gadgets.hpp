#pragma once
// Corridor-gadget harnesses: door rooms, crossovers, turning curves, one-way
// composites, with behavioral contracts checked by replay or exhaustive search.

#include "fe/engine.hpp"
#include "fe/solver.hpp"

#include <stdexcept>
#include <string>

namespace fe {

struct GeometryFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadOffsets : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared unit attribute set for the corridor harnesses; every unit moves d.
struct GadgetStats {
    Attributes lord;     // 3/1/1, range [1,2]
    Attributes dragon;   // 5/5/5, range [1,1], chases at distance 2
    Attributes door;     // 2/2/2, range [1,2]; the Lord cannot hurt it
    Attributes sniper;   // 5/5/5, range [1,2]; one-shots the Lord
    Attributes cleric;   // staff [2,10] healing 2, no weapon
    Attributes damager;  // deals exactly 2 to the Lord, takes 0 back
    static GadgetStats standard(int d);
};

enum class ContractKind {
    ScriptedWin,            // replay the script, expect Win
    ScriptedLose,           // replay the script, expect Lose
    ExhaustiveWinnable,     // some line reaches a goal tile
    ExhaustiveNotWinnable,  // no line reaches any goal tile
};

struct GadgetContract {
    std::string name;
    StageSpec stage;
    MoveScript script;                  // scripted kinds only
    std::vector<Position> goal_tiles;   // exhaustive kinds: lord standing here
    int lord_unit = 0;
    int door_unit = -1;                 // when set with door_final: assert rest post
    std::optional<Position> door_final;
    ContractKind kind = ContractKind::ScriptedWin;
};

struct ContractResult {
    enum Status { Pass, Fail, Exceeded };
    Status status = Pass;
    std::string detail;
    std::optional<MoveScript> counterexample;
};

ContractResult verify_contract(const GadgetContract& contract,
                               const SolveLimits& limits = {});

// Tempo enforcement: for each scripted round, every legal endpoint of the lord
// that is not one of the scripted round-end tiles loses within one enemy turn.
std::vector<Violation> check_tempo_enforcement(const StageSpec& spec,
                                               const MoveScript& script,
                                               int lord_unit = 0);

// Door room posts and the corridor tiles its occupant can strike.
struct DoorLandmarks {
    Position post_b, post_e, post_a;          // room: B, E, A (E adjacent to B)
    Position open_b, open_a;                  // contacts below the room
    Position close_b, close_a;                // contacts above the room
    Position traverse_c;                      // strike-guarded traverse stop
};

struct DoorHarness {
    int d = 6;
    StageSpec stage;                          // open-path forward variant
    DoorLandmarks marks;
    std::vector<GadgetContract> contracts;
};

// Door gadget with its open, close, traverse, and conditioning harnesses.
// Requires even d >= 4.
DoorHarness build_door_harness(int d);

// True iff s1 and s2 are compatible safe-tile offsets for a crossing:
// s1 != s2, s1 != d-s2, d-s1 != s2, d-s1 != d-s2. Requires 0 < s1, s2 < d.
bool check_crossover_offsets(int d, int s1, int s2);

struct CrossoverHarness {
    int d = 6, s1 = 1, s2 = 3;
    StageSpec stage;                          // horizontal traversal variant
    Position crossing;                        // both coordinates = 0 (mod d)
    std::vector<GadgetContract> contracts;
};

// Four-arm crossing with sniper alcoves pinning the safe-tile offsets.
// Requires even d >= 4 and compatible offsets (else BadOffsets).
CrossoverHarness build_crossover_harness(int d, int s1, int s2);

enum class TurnKind {
    RightDown,
    RightUp,
    LeftDown,
    LeftUp,
    DownRight,
    DownLeft,
    UpRight,
    UpLeft,
};

struct TurnHarness {
    int d = 6;
    TurnKind kind = TurnKind::RightDown;
    StageSpec stage;
    int enter_offset = 0;  // safe-tile offset before the curve
    int exit_offset = 0;   // safe-tile offset after it
    std::vector<GadgetContract> contracts;
};

// Question-mark curve shifting the safe-tile offset between a horizontal and
// a vertical arm so the crossing precondition holds. Requires even d >= 6.
TurnHarness build_turn_harness(TurnKind kind, int d = 6);

struct OnewayHarness {
    int d = 6;
    StageSpec forward_stage;
    StageSpec reverse_stage;
    std::vector<GadgetContract> contracts;
};

// Two door rooms over one corridor: forward stops land on the contact
// columns (harmless, door states restored), reverse stops land on the strike
// columns and accumulate lethal damage. Requires even d >= 4.
OnewayHarness build_oneway_harness(int d);

}  // namespace fe
