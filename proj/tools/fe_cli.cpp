#include <CLI11.hpp>

#include "fe/compile_np.hpp"
#include "fe/formats.hpp"
#include "fe/gadgets.hpp"
#include "fe/solver.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace fe;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Parses and validates; semantic violations are input errors for every
// subcommand except `check`, which reports them instead.
StageSpec load_stage(const std::string& path) {
    StageSpec spec = parse_stage(read_file(path));
    auto violations = validate_stage(spec);
    if (!violations.empty())
        throw std::runtime_error(path + ": " + violations.front().what);
    return spec;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Win: return "win";
        case Outcome::Lose: return "lose";
        case Outcome::Ongoing: return "ongoing";
    }
    return "?";
}

int cmd_simulate(const std::string& stage_path, const std::string& trace_path) {
    StageSpec spec = load_stage(stage_path);
    MoveScript script = parse_trace(read_file(trace_path), spec);
    ReplayResult rep = replay(std::make_shared<StageSpec>(spec), script);
    std::cout << emit_trace(rep, spec);
    std::cout << render_ascii(rep.final_state);
    std::cout << "outcome: " << outcome_name(rep.final_state.outcome) << " (round "
              << rep.final_state.round << ")\n";
    return rep.final_state.outcome == Outcome::Win ? 0 : 1;
}

int cmd_solve(const std::string& stage_path, int max_rounds, bool unbounded,
              uint64_t node_cap, double time_cap) {
    StageSpec spec = load_stage(stage_path);
    SolveLimits limits;
    limits.node_cap = node_cap;
    limits.time_cap_s = time_cap;

    SolveResult res;
    if (unbounded) {
        res = solve_unbounded(spec, limits);
    } else if (max_rounds >= 0) {
        res = solve_bounded(spec, max_rounds, limits);
    } else if (spec.round_budget) {
        res = solve_bounded(spec, *spec.round_budget, limits);
    } else {
        res = solve_unbounded(spec, limits);
    }

    const char* decision = res.decision == Decision::Winnable      ? "winnable"
                           : res.decision == Decision::NotWinnable ? "not-winnable"
                                                                   : "resource-exceeded";
    std::cout << "decision: " << decision << "\n";
    std::cout << "nodes: " << res.stats.nodes << "\nmemo-hits: " << res.stats.memo_hits
              << "\nelapsed: " << res.stats.elapsed_s << "s\n";
    if (res.witness) std::cout << emit_trace(*res.witness, spec);
    if (res.decision == Decision::Winnable) return 0;
    if (res.decision == Decision::NotWinnable) return 1;
    std::cerr << "error: search hit its resource cap before deciding\n";
    return 2;
}

int cmd_reduce(const std::string& cnf_path, bool no_counter, const std::string& out_path,
               const std::string& witness_path, int max_vars) {
    CnfInstance inst = parse_cnf(read_file(cnf_path));
    auto violations = validate_embedding(inst);
    if (!violations.empty())
        throw std::runtime_error(cnf_path + ": " + violations.front().what);

    BoundedInstance reduced = reduce_degree(inst);
    CompileResult compiled = compile(reduced, !no_counter);
    std::string stage_text = emit_stage(compiled.stage);
    if (out_path.empty())
        std::cout << stage_text;
    else
        write_file(out_path, stage_text);

    std::cerr << "variables: " << inst.variables.size() << " -> "
              << reduced.cnf.variables.size() << ", clauses: " << inst.clauses.size()
              << " -> " << reduced.cnf.clauses.size() << "\n";
    std::cerr << "stage: " << compiled.stage.grid.width << "x"
              << compiled.stage.grid.height << ", units: " << compiled.stage.roster.size()
              << ", round budget: " << *compiled.stage.round_budget << "\n";

    if (!witness_path.empty()) {
        auto model = brute_force_sat(reduced.cnf, max_vars);
        if (!model) {
            std::cerr << "unsatisfiable: no winning script exists\n";
            return 1;
        }
        MoveScript script = synthesize_witness(reduced, compiled, *model);
        write_file(witness_path, emit_trace(script, compiled.stage));
        std::cerr << "witness: " << script.rounds.size() << " rounds -> " << witness_path
                  << "\n";
    }
    return 0;
}

int cmd_sat(const std::string& cnf_path, int max_vars) {
    CnfInstance inst = parse_cnf(read_file(cnf_path));
    auto model = brute_force_sat(inst, max_vars);
    if (!model) {
        std::cout << "UNSAT\n";
        return 1;
    }
    std::cout << "SAT\n";
    for (size_t i = 0; i < inst.variables.size(); ++i)
        std::cout << inst.variables[i] << " = " << ((*model)[i] ? "true" : "false") << "\n";
    return 0;
}

// Runs a contract set plus the rest-tile tempo check on each winning script.
// Returns 0 when everything holds, 1 on any failure, 2 when undecided.
int run_contracts(const std::vector<GadgetContract>& contracts, const SolveLimits& limits) {
    int fails = 0, exceeded = 0;
    for (const auto& c : contracts) {
        ContractResult r = verify_contract(c, limits);
        if (r.status == ContractResult::Pass) {
            std::cout << "PASS " << c.name << "\n";
        } else if (r.status == ContractResult::Exceeded) {
            ++exceeded;
            std::cout << "EXCEEDED " << c.name << ": " << r.detail << "\n";
        } else {
            ++fails;
            std::cout << "FAIL " << c.name << ": " << r.detail << "\n";
            if (r.counterexample)
                std::cout << emit_trace(*r.counterexample, c.stage);
        }
        if (c.kind == ContractKind::ScriptedWin) {
            auto v = check_tempo_enforcement(c.stage, c.script, c.lord_unit);
            if (v.empty()) {
                std::cout << "PASS " << c.name << " [tempo]\n";
            } else {
                ++fails;
                std::cout << "FAIL " << c.name << " [tempo]: " << v.front().what << "\n";
            }
        }
    }
    if (fails) return 1;
    return exceeded ? 2 : 0;
}

int cmd_verify_gadget(const std::string& kind, int d, int s1, int s2, uint64_t node_cap,
                      double time_cap) {
    SolveLimits limits;
    limits.node_cap = node_cap;
    limits.time_cap_s = time_cap;

    if (kind == "door") {
        DoorHarness h = build_door_harness(d);
        std::cout << "door harness, stride " << d << ", " << h.contracts.size()
                  << " contracts\n";
        return run_contracts(h.contracts, limits);
    }
    if (kind == "crossover") {
        CrossoverHarness h = build_crossover_harness(d, s1, s2);
        std::cout << "crossing at (" << h.crossing.x << "," << h.crossing.y
                  << "), stride " << d << ", offsets " << s1 << "/" << s2 << "\n";
        return run_contracts(h.contracts, limits);
    }
    if (kind == "turning") {
        int worst = 0;
        for (TurnKind k : {TurnKind::RightDown, TurnKind::RightUp, TurnKind::LeftDown,
                           TurnKind::LeftUp, TurnKind::DownRight, TurnKind::DownLeft,
                           TurnKind::UpRight, TurnKind::UpLeft}) {
            TurnHarness h = build_turn_harness(k, d);
            worst = std::max(worst, run_contracts(h.contracts, limits));
        }
        return worst;
    }
    if (kind == "oneway") {
        OnewayHarness h = build_oneway_harness(d);
        std::cout << "one-way corridor, stride " << d << ", " << h.contracts.size()
                  << " contracts\n";
        return run_contracts(h.contracts, limits);
    }
    throw CLI::ValidationError("verify-gadget",
                               "unknown gadget '" + kind +
                                   "' (expected door|crossover|turning|oneway)");
}

int cmd_check(const std::string& stage_path) {
    StageSpec spec = parse_stage(read_file(stage_path));
    auto violations = validate_stage(spec);
    for (const auto& v : violations) std::cout << "violation: " << v.what << "\n";
    if (violations.empty()) std::cout << "valid: yes\n";
    std::cout << "cycle-free: " << (check_cycle_free(spec.grid) ? "yes" : "no") << "\n";
    return violations.empty() ? 0 : 1;
}

int cmd_render(const std::string& stage_path, const std::string& format,
               const std::vector<std::string>& highlight_args) {
    StageSpec spec = load_stage(stage_path);
    if (format == "ascii") {
        std::cout << render_ascii(spec);
        return 0;
    }
    std::vector<Position> highlights;
    for (const auto& h : highlight_args) {
        Position p;
        char comma = 0;
        std::istringstream in(h);
        if (!(in >> p.x >> comma >> p.y) || comma != ',')
            throw std::runtime_error("bad highlight '" + h + "' (expected x,y)");
        highlights.push_back(p);
    }
    std::cout << render_svg(spec, highlights);
    return 0;
}

void print_play_help() {
    std::cout << "commands:\n"
                 "  move <id> <x> <y> [attack <id> | heal <id>]   act with one unit\n"
                 "  attack <id> <target>                          strike from here\n"
                 "  heal <id> <target>                            heal from here\n"
                 "  wait <id>                                     spend the action\n"
                 "  end                                           enemy turn runs\n"
                 "  render | help | quit\n";
}

int cmd_play(const std::string& stage_path) {
    auto spec = std::make_shared<StageSpec>(load_stage(stage_path));
    GameState state = initial_state(spec);

    auto unit_index = [&](const std::string& id) {
        for (size_t i = 0; i < spec->roster.size(); ++i)
            if (spec->roster[i].id == id) return int(i);
        throw std::runtime_error("no unit named " + id);
    };

    std::cout << render_ascii(state);
    print_play_help();
    std::string line;
    while (state.outcome == Outcome::Ongoing) {
        std::cout << "round " << state.round << "> " << std::flush;
        if (!std::getline(std::cin, line)) return 0;
        std::istringstream in(line);
        std::string verb;
        if (!(in >> verb)) continue;

        try {
            if (verb == "quit") return 0;
            if (verb == "help") {
                print_play_help();
                continue;
            }
            if (verb == "render") {
                std::cout << render_ascii(state);
                continue;
            }
            if (verb == "end") {
                state = end_player_turn(state);
                if (state.outcome == Outcome::Ongoing) {
                    EnemyTurnLog log;
                    state = run_enemy_turn(state, &log);
                    for (const auto& e : log.actions) {
                        std::cout << "# " << spec->roster[e.unit].id;
                        if (!e.action.move_path.empty())
                            std::cout << " moves to (" << e.action.move_path.back().x
                                      << "," << e.action.move_path.back().y << ")";
                        if (e.combat)
                            std::cout << " and hits " << spec->roster[e.combat->defender].id
                                      << " for " << e.combat->damage_dealt
                                      << (e.combat->countered ? ", countered" : "");
                        std::cout << "\n";
                    }
                }
                std::cout << render_ascii(state);
                continue;
            }

            Action a;
            std::string id;
            if (!(in >> id)) throw std::runtime_error("missing unit id");
            a.unit = unit_index(id);
            if (verb == "move") {
                Position to;
                if (!(in >> to.x >> to.y)) throw std::runtime_error("missing x y");
                const UnitState* u = state.find(a.unit);
                if (!u) throw std::runtime_error(id + " is not on the board");
                if (to != u->pos) {
                    a.move_path = canonical_path_blocked(pass_context(state, a.unit),
                                                         u->pos, to);
                    if (a.move_path.empty())
                        throw std::runtime_error("no route to that tile");
                }
                std::string extra, target;
                if (in >> extra >> target) {
                    a.kind = extra == "heal" ? ActionKind::Heal : ActionKind::Attack;
                    a.target = unit_index(target);
                }
            } else if (verb == "attack" || verb == "heal") {
                std::string target;
                if (!(in >> target)) throw std::runtime_error("missing target id");
                a.kind = verb == "heal" ? ActionKind::Heal : ActionKind::Attack;
                a.target = unit_index(target);
            } else if (verb == "wait") {
                a.kind = ActionKind::Wait;
            } else {
                throw std::runtime_error("unknown command '" + verb + "' (try help)");
            }
            state = apply_player_action(state, a);
            std::cout << render_ascii(state);
        } catch (const std::exception& e) {
            std::cout << "rejected: " << e.what() << "\n";
        }
    }
    std::cout << "outcome: " << outcome_name(state.outcome) << " (round " << state.round
              << ")\n";
    return state.outcome == Outcome::Win ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-battle stage simulator, solver, and formula compiler"};
    app.require_subcommand(1);

    std::string stage_path, trace_path, cnf_path, out_path, witness_path;
    std::string gadget_kind, format = "ascii";
    std::vector<std::string> highlights;
    int max_rounds = -1, max_vars = 30, d = 6, s1 = 1, s2 = 3;
    bool unbounded = false, no_counter = false;
    uint64_t node_cap = 0;
    double time_cap = 0;

    auto* sim = app.add_subcommand("simulate", "replay a move script against a stage");
    sim->add_option("stage", stage_path)->required();
    sim->add_option("trace", trace_path)->required();

    auto* solve = app.add_subcommand("solve", "search for a winning script");
    solve->add_option("stage", stage_path)->required();
    solve->add_option("--max-rounds", max_rounds, "bound the round count");
    solve->add_flag("--unbounded", unbounded, "ignore round budgets entirely");
    solve->add_option("--node-cap", node_cap, "abort after this many nodes");
    solve->add_option("--time-cap", time_cap, "abort after this many seconds");

    auto* reduce = app.add_subcommand("reduce", "compile a formula into a stage");
    reduce->add_option("cnf", cnf_path)->required();
    reduce->add_flag("--no-counter", no_counter, "build the counterless variant");
    reduce->add_option("--out", out_path, "stage file to write (default stdout)");
    reduce->add_option("--witness", witness_path, "also write a winning script here");
    reduce->add_option("--max-vars", max_vars, "witness search variable limit");

    auto* sat = app.add_subcommand("sat", "brute-force satisfiability oracle");
    sat->add_option("cnf", cnf_path)->required();
    sat->add_option("--max-vars", max_vars, "variable limit");

    auto* verify = app.add_subcommand("verify-gadget", "check a gadget contract set");
    verify->add_option("kind", gadget_kind, "door|crossover|turning|oneway")->required();
    verify->add_option("--d", d, "movement stat / corridor stride");
    verify->add_option("--s1", s1, "first safe-tile offset (crossover)");
    verify->add_option("--s2", s2, "second safe-tile offset (crossover)");
    verify->add_option("--node-cap", node_cap, "per-contract search node cap")
        ->default_val(uint64_t(10000000));
    verify->add_option("--time-cap", time_cap, "per-contract search seconds");

    auto* check = app.add_subcommand("check", "validate a stage and test cycle-freeness");
    check->add_option("stage", stage_path)->required();

    auto* render = app.add_subcommand("render", "draw a stage");
    render->add_option("stage", stage_path)->required();
    render->add_option("--format", format)->check(CLI::IsMember({"ascii", "svg"}));
    render->add_option("--highlight", highlights, "tiles to mark, as x,y");

    auto* play = app.add_subcommand("play", "interactive step-through");
    play->add_option("stage", stage_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(stage_path, trace_path);
        if (solve->parsed())
            return cmd_solve(stage_path, max_rounds, unbounded, node_cap, time_cap);
        if (reduce->parsed())
            return cmd_reduce(cnf_path, no_counter, out_path, witness_path, max_vars);
        if (sat->parsed()) return cmd_sat(cnf_path, max_vars);
        if (verify->parsed())
            return cmd_verify_gadget(gadget_kind, d, s1, s2, node_cap, time_cap);
        if (check->parsed()) return cmd_check(stage_path);
        if (render->parsed()) return cmd_render(stage_path, format, highlights);
        if (play->parsed()) return cmd_play(stage_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
