#include "fe/formats.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

namespace fe {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

int to_int(const std::string& tok, int line, const std::string& what) {
    size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size())
        throw FormatError(line, 0, what + ": expected a number, got '" + tok + "'");
    return v;
}

// "<lo>-<hi>"; hi may be negative ("0--1" marks the empty interval).
Interval parse_interval(const std::string& tok, int line, const std::string& what) {
    Interval r;
    int consumed = 0;
    if (std::sscanf(tok.c_str(), "%d-%d%n", &r.lo, &r.hi, &consumed) != 2 ||
        consumed != int(tok.size()))
        throw FormatError(line, 0, what + ": expected <lo>-<hi>, got '" + tok + "'");
    return r;
}

std::string interval_str(Interval r) {
    return std::to_string(r.lo) + "-" + std::to_string(r.hi);
}

std::string pos_str(Position p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

std::vector<Position> parse_positions(const std::string& tok, int line) {
    std::vector<Position> out;
    size_t at = 0;
    while (at < tok.size()) {
        size_t end = tok.find("..", at);
        std::string part = tok.substr(at, end == std::string::npos ? end : end - at);
        Position p;
        int consumed = 0;
        if (std::sscanf(part.c_str(), "(%d,%d)%n", &p.x, &p.y, &consumed) != 2 ||
            consumed != int(part.size()))
            throw FormatError(line, 0, "expected (<x>,<y>), got '" + part + "'");
        out.push_back(p);
        at = end == std::string::npos ? tok.size() : end + 2;
    }
    if (out.empty()) throw FormatError(line, 0, "empty position list");
    return out;
}

int unit_index(const StageSpec& spec, const std::string& id, int line) {
    for (size_t i = 0; i < spec.roster.size(); ++i)
        if (spec.roster[i].id == id) return int(i);
    throw FormatError(line, 0, "unknown unit '" + id + "'");
}

char unit_glyph(const UnitTemplate& t) {
    if (t.is_lord) return '@';
    char c = t.id.empty() ? '?' : t.id[0];
    return t.side == Side::Player ? char(std::toupper(uint8_t(c)))
                                  : char(std::tolower(uint8_t(c)));
}

std::string legend_line(const UnitTemplate& t, Position pos, int hp) {
    std::string s(1, unit_glyph(t));
    s += " " + t.id + (t.side == Side::Player ? " P " : " E ") + pos_str(pos) + " " +
         std::to_string(hp) + "/" + std::to_string(t.attrs.hp_max);
    return s;
}

std::string ascii_picture(const StageSpec& spec,
                          const std::vector<std::pair<Position, char>>& glyphs,
                          const std::vector<std::string>& legend) {
    std::string out;
    for (int y = 0; y < spec.grid.height; ++y) {
        for (int x = 0; x < spec.grid.width; ++x) {
            Position p{x, y};
            char c = spec.grid.at(p) == Tile::Wall ? '#'
                     : spec.grid.is_throne(p)      ? 'T'
                                                   : '.';
            for (const auto& [gp, gc] : glyphs)
                if (gp == p) c = gc;
            out += c;
        }
        out += '\n';
    }
    for (const auto& l : legend) out += l + '\n';
    return out;
}

}  // namespace

std::string emit_stage(const StageSpec& spec) {
    std::ostringstream out;
    out << "FESTAGE 1 " << spec.grid.width << " " << spec.grid.height << " "
        << (spec.counter_attacks ? "on" : "off") << " "
        << (spec.round_budget ? std::to_string(*spec.round_budget) : "inf") << "\n";
    for (int y = 0; y < spec.grid.height; ++y) {
        for (int x = 0; x < spec.grid.width; ++x) {
            Position p{x, y};
            out << (spec.grid.at(p) == Tile::Wall ? '#'
                    : spec.grid.is_throne(p)      ? 'T'
                                                  : '.');
        }
        out << "\n";
    }
    for (const auto& t : spec.roster) {
        out << t.id << " " << (t.side == Side::Player ? "P" : "E") << " "
            << t.start.x << " " << t.start.y << " " << t.hp_start << "/"
            << t.attrs.hp_max << " " << t.attrs.atk << " " << t.attrs.def << " "
            << t.attrs.mov << " " << interval_str(t.attrs.attack_range) << " "
            << (t.behavior == Behavior::PlayerControlled ? "player"
                : t.behavior == Behavior::Patient        ? "patient"
                                                         : "impatient");
        if (t.is_lord) out << " lord";
        if (t.attrs.heal)
            out << " heal=" << interval_str(t.attrs.heal->range) << ":"
                << t.attrs.heal->amount;
        if (t.attrs.durability) out << " dur=" << *t.attrs.durability;
        out << "\n";
    }
    return out.str();
}

StageSpec parse_stage(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw FormatError(1, 0, "empty stage file");

    auto header = split_ws(lines[0]);
    if (header.size() != 6 || header[0] != "FESTAGE")
        throw FormatError(1, 0, "expected 'FESTAGE 1 <w> <h> <on|off> <budget|inf>'");
    if (header[1] != "1") throw FormatError(1, 0, "unsupported version " + header[1]);

    StageSpec spec;
    int w = to_int(header[2], 1, "width");
    int h = to_int(header[3], 1, "height");
    if (w <= 0 || h <= 0) throw FormatError(1, 0, "grid dimensions must be positive");
    if (header[4] == "on")
        spec.counter_attacks = true;
    else if (header[4] == "off")
        spec.counter_attacks = false;
    else
        throw FormatError(1, 0, "counter setting must be 'on' or 'off'");
    if (header[5] != "inf") spec.round_budget = to_int(header[5], 1, "round budget");

    spec.grid = make_grid(w, h);
    if (int(lines.size()) < 1 + h) throw FormatError(int(lines.size()), 0, "missing grid rows");
    for (int y = 0; y < h; ++y) {
        const std::string& row = lines[1 + y];
        if (int(row.size()) != w)
            throw FormatError(2 + y, int(row.size()) + 1,
                              "grid row has " + std::to_string(row.size()) +
                                  " tiles, expected " + std::to_string(w));
        for (int x = 0; x < w; ++x) {
            Position p{x, y};
            switch (row[x]) {
                case '#':
                    break;
                case 'T':
                    if (spec.grid.throne)
                        throw FormatError(2 + y, x + 1, "second throne tile");
                    spec.grid.throne = p;
                    [[fallthrough]];
                case '.':
                    spec.grid.set(p, Tile::Floor);
                    break;
                default:
                    throw FormatError(2 + y, x + 1,
                                      std::string("unknown tile character '") +
                                          row[x] + "'");
            }
        }
    }

    for (size_t i = 1 + h; i < lines.size(); ++i) {
        int ln = int(i) + 1;
        auto tok = split_ws(lines[i]);
        if (tok.empty()) continue;
        if (tok.size() < 10) throw FormatError(ln, 0, "unit line needs 10 fields");
        UnitTemplate t;
        t.id = tok[0];
        if (tok[1] == "P")
            t.side = Side::Player;
        else if (tok[1] == "E")
            t.side = Side::Enemy;
        else
            throw FormatError(ln, 0, "side must be 'P' or 'E'");
        t.start = {to_int(tok[2], ln, "x"), to_int(tok[3], ln, "y")};
        int consumed = 0;
        if (std::sscanf(tok[4].c_str(), "%d/%d%n", &t.hp_start, &t.attrs.hp_max,
                        &consumed) != 2 ||
            consumed != int(tok[4].size()))
            throw FormatError(ln, 0, "expected <hp>/<hp_max>, got '" + tok[4] + "'");
        t.attrs.atk = to_int(tok[5], ln, "atk");
        t.attrs.def = to_int(tok[6], ln, "def");
        t.attrs.mov = to_int(tok[7], ln, "mov");
        t.attrs.attack_range = parse_interval(tok[8], ln, "attack range");
        if (tok[9] == "player")
            t.behavior = Behavior::PlayerControlled;
        else if (tok[9] == "patient")
            t.behavior = Behavior::Patient;
        else if (tok[9] == "impatient")
            t.behavior = Behavior::Impatient;
        else
            throw FormatError(ln, 0, "behavior must be player|patient|impatient");
        for (size_t k = 10; k < tok.size(); ++k) {
            if (tok[k] == "lord") {
                t.is_lord = true;
            } else if (tok[k].rfind("heal=", 0) == 0) {
                HealSpec heal;
                if (std::sscanf(tok[k].c_str(), "heal=%d-%d:%d%n", &heal.range.lo,
                                &heal.range.hi, &heal.amount, &consumed) != 3 ||
                    consumed != int(tok[k].size()))
                    throw FormatError(ln, 0, "expected heal=<lo>-<hi>:<amount>");
                t.attrs.heal = heal;
            } else if (tok[k].rfind("dur=", 0) == 0) {
                t.attrs.durability = to_int(tok[k].substr(4), ln, "durability");
            } else {
                throw FormatError(ln, 0, "unknown unit attribute '" + tok[k] + "'");
            }
        }
        spec.roster.push_back(std::move(t));
    }
    return spec;
}

namespace {

void emit_action_lines(std::ostringstream& out, const Action& a,
                       const StageSpec& spec, const char* prefix) {
    const std::string& id = spec.roster[a.unit].id;
    if (!a.move_path.empty()) {
        out << prefix << "MOVE " << id << " ";
        for (size_t i = 0; i < a.move_path.size(); ++i)
            out << (i ? ".." : "") << pos_str(a.move_path[i]);
        out << "\n";
    }
    switch (a.kind) {
        case ActionKind::Wait:
            if (a.move_path.empty()) out << prefix << "WAIT " << id << "\n";
            break;
        case ActionKind::Attack:
            out << prefix << "ATTACK " << id << " " << spec.roster[a.target].id << "\n";
            break;
        case ActionKind::Heal:
            out << prefix << "HEAL " << id << " " << spec.roster[a.target].id << "\n";
            break;
    }
}

}  // namespace

std::string emit_trace(const MoveScript& script, const StageSpec& spec) {
    std::ostringstream out;
    for (size_t r = 0; r < script.rounds.size(); ++r) {
        out << "ROUND " << r + 1 << "\n";
        for (const Action& a : script.rounds[r]) emit_action_lines(out, a, spec, "");
        out << "END\n";
    }
    return out.str();
}

std::string emit_trace(const ReplayResult& result, const StageSpec& spec) {
    std::ostringstream out;
    for (const ReplayStep& step : result.steps) {
        out << "ROUND " << step.round << "\n";
        for (const Action& a : step.player_actions) emit_action_lines(out, a, spec, "");
        for (const EnemyActionLog& e : step.enemy_log.actions) {
            emit_action_lines(out, e.action, spec, "# ENEMY ");
            if (e.combat)
                out << "# ENEMY   dealt " << e.combat->damage_dealt << ", took "
                    << (e.combat->countered ? e.combat->counter_damage : 0) << "\n";
        }
        out << "END\n";
    }
    return out.str();
}

MoveScript parse_trace(const std::string& text, const StageSpec& spec) {
    MoveScript script;
    std::vector<Action>* round = nullptr;
    auto lines = split_lines(text);
    for (size_t i = 0; i < lines.size(); ++i) {
        int ln = int(i) + 1;
        auto tok = split_ws(lines[i]);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok[0] == "ROUND") {
            if (round) throw FormatError(ln, 0, "ROUND before previous END");
            if (tok.size() != 2 || to_int(tok[1], ln, "round") !=
                                       int(script.rounds.size()) + 1)
                throw FormatError(ln, 0, "expected ROUND " +
                                             std::to_string(script.rounds.size() + 1));
            script.rounds.emplace_back();
            round = &script.rounds.back();
            continue;
        }
        if (tok[0] == "END") {
            if (!round) throw FormatError(ln, 0, "END outside a round");
            round = nullptr;
            continue;
        }
        if (!round) throw FormatError(ln, 0, "action outside ROUND..END");
        if (tok[0] == "MOVE") {
            if (tok.size() != 3) throw FormatError(ln, 0, "expected MOVE <id> <path>");
            Action a;
            a.unit = unit_index(spec, tok[1], ln);
            a.move_path = parse_positions(tok[2], ln);
            round->push_back(std::move(a));
        } else if (tok[0] == "ATTACK" || tok[0] == "HEAL") {
            if (tok.size() != 3)
                throw FormatError(ln, 0, "expected " + tok[0] + " <id> <target>");
            int unit = unit_index(spec, tok[1], ln);
            ActionKind kind = tok[0] == "ATTACK" ? ActionKind::Attack : ActionKind::Heal;
            // Completes the unit's MOVE from this round, if any.
            if (!round->empty() && round->back().unit == unit &&
                round->back().kind == ActionKind::Wait &&
                !round->back().move_path.empty()) {
                round->back().kind = kind;
                round->back().target = unit_index(spec, tok[2], ln);
            } else {
                Action a;
                a.unit = unit;
                a.kind = kind;
                a.target = unit_index(spec, tok[2], ln);
                round->push_back(std::move(a));
            }
        } else if (tok[0] == "WAIT") {
            if (tok.size() != 2) throw FormatError(ln, 0, "expected WAIT <id>");
            Action a;
            a.unit = unit_index(spec, tok[1], ln);
            round->push_back(std::move(a));
        } else {
            throw FormatError(ln, 0, "unknown directive '" + tok[0] + "'");
        }
    }
    if (round) throw FormatError(int(lines.size()), 0, "missing END");
    return script;
}

std::string emit_cnf(const CnfInstance& inst) {
    std::ostringstream out;
    out << "CNFP 1 " << inst.variables.size() << "\n";
    for (size_t i = 0; i < inst.variables.size(); ++i)
        out << (i ? " " : "") << inst.variables[i];
    out << "\n";
    for (const auto& c : inst.clauses) {
        out << (c.sign == ClauseSign::AllPositive ? "POS" : "NEG")
            << " level=" << c.level;
        for (const auto& l : c.literals) out << " " << inst.variables[l.var];
        out << "\n";
    }
    return out.str();
}

CnfInstance parse_cnf(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.size() < 2) throw FormatError(1, 0, "expected header and variable line");
    auto header = split_ws(lines[0]);
    if (header.size() != 3 || header[0] != "CNFP")
        throw FormatError(1, 0, "expected 'CNFP 1 <num_vars>'");
    if (header[1] != "1") throw FormatError(1, 0, "unsupported version " + header[1]);
    int n = to_int(header[2], 1, "variable count");
    if (n < 0) throw FormatError(1, 0, "negative variable count");

    CnfInstance inst;
    inst.variables = split_ws(lines[1]);
    if (int(inst.variables.size()) != n)
        throw FormatError(2, 0, "variable line lists " +
                                    std::to_string(inst.variables.size()) +
                                    " names, header says " + std::to_string(n));
    for (size_t i = 0; i < inst.variables.size(); ++i)
        for (size_t j = i + 1; j < inst.variables.size(); ++j)
            if (inst.variables[i] == inst.variables[j])
                throw FormatError(2, 0, "duplicate variable '" + inst.variables[i] + "'");

    for (size_t i = 2; i < lines.size(); ++i) {
        int ln = int(i) + 1;
        auto tok = split_ws(lines[i]);
        if (tok.empty() || tok[0][0] == '#') continue;
        EmbeddedClause c;
        if (tok[0] == "POS")
            c.sign = ClauseSign::AllPositive;
        else if (tok[0] == "NEG")
            c.sign = ClauseSign::AllNegative;
        else
            throw FormatError(ln, 0, "clause must start with POS or NEG");
        if (tok.size() < 3 || tok.size() > 5)
            throw FormatError(ln, 0, "clause needs a level and 1..3 variables");
        int consumed = 0;
        if (std::sscanf(tok[1].c_str(), "level=%d%n", &c.level, &consumed) != 1 ||
            consumed != int(tok[1].size()))
            throw FormatError(ln, 0, "expected level=<n>, got '" + tok[1] + "'");
        for (size_t k = 2; k < tok.size(); ++k) {
            auto at = std::find(inst.variables.begin(), inst.variables.end(), tok[k]);
            if (at == inst.variables.end())
                throw FormatError(ln, 0, "unknown variable '" + tok[k] + "'");
            c.literals.push_back({int(at - inst.variables.begin()),
                                  c.sign == ClauseSign::AllNegative});
        }
        inst.clauses.push_back(std::move(c));
    }
    return inst;
}

std::string render_ascii(const StageSpec& spec) {
    std::vector<std::pair<Position, char>> glyphs;
    std::vector<std::string> legend;
    for (const auto& t : spec.roster) {
        glyphs.push_back({t.start, unit_glyph(t)});
        legend.push_back(legend_line(t, t.start, t.hp_start));
    }
    return ascii_picture(spec, glyphs, legend);
}

std::string render_ascii(const GameState& state) {
    std::vector<std::pair<Position, char>> glyphs;
    std::vector<std::string> legend;
    for (const auto& u : state.units) {
        const UnitTemplate& t = state.tmpl(u.unit);
        glyphs.push_back({u.pos, unit_glyph(t)});
        legend.push_back(legend_line(t, u.pos, u.hp));
    }
    std::string head = "round " + std::to_string(state.round) + " " +
                       (state.phase == Phase::PlayerTurn ? "player" : "enemy") +
                       (state.outcome == Outcome::Win    ? " WIN"
                        : state.outcome == Outcome::Lose ? " LOSE"
                                                         : "") +
                       "\n";
    return head + ascii_picture(*state.stage, glyphs, legend);
}

std::string render_svg(const StageSpec& spec, const std::vector<Position>& highlights) {
    const int cell = 16;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << spec.grid.width * cell << "\" height=\"" << spec.grid.height * cell
        << "\">\n";
    for (int y = 0; y < spec.grid.height; ++y)
        for (int x = 0; x < spec.grid.width; ++x) {
            Position p{x, y};
            const char* fill = spec.grid.at(p) == Tile::Wall ? "#444444"
                               : spec.grid.is_throne(p)      ? "#e8c84a"
                                                             : "#f2f2f2";
            out << "<rect x=\"" << x * cell << "\" y=\"" << y * cell << "\" width=\""
                << cell << "\" height=\"" << cell << "\" fill=\"" << fill
                << "\" stroke=\"#cccccc\"/>\n";
        }
    for (Position p : highlights)
        out << "<rect x=\"" << p.x * cell + 1 << "\" y=\"" << p.y * cell + 1
            << "\" width=\"" << cell - 2 << "\" height=\"" << cell - 2
            << "\" fill=\"none\" stroke=\"#22aa22\" stroke-width=\"2\"/>\n";
    for (const auto& t : spec.roster) {
        out << "<circle cx=\"" << t.start.x * cell + cell / 2 << "\" cy=\""
            << t.start.y * cell + cell / 2 << "\" r=\"" << cell / 2 - 2
            << "\" fill=\"" << (t.side == Side::Player ? "#3366cc" : "#cc3333")
            << "\"><title>" << t.id << "</title></circle>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace fe
