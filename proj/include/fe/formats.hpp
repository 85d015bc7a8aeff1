#pragma once
// Text formats (.festage stages, .fetrace move scripts, .cnfp formulas) and
// deterministic ASCII/SVG rendering.

#include "fe/core.hpp"
#include "fe/engine.hpp"
#include "fe/sat.hpp"

#include <stdexcept>
#include <string>

namespace fe {

struct FormatError : std::runtime_error {
    int line = 0;    // 1-based; 0 = whole file
    int column = 0;  // 1-based; 0 = whole line
    FormatError(int line_, int column_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) +
                             (column_ ? ", column " + std::to_string(column_) : "") +
                             ": " + msg),
          line(line_),
          column(column_) {}
};

// Stage files. emit_stage(parse_stage(text)) == text for canonical files;
// parse is syntax-only, semantic legality stays with validate_stage.
std::string emit_stage(const StageSpec& spec);
StageSpec parse_stage(const std::string& text);

// Move-script files. MOVE lines carry the stepped-on tiles (start excluded);
// a MOVE directly followed by ATTACK/HEAL of the same unit forms one action.
// Lines starting with '#' are comments and ignored by the parser.
std::string emit_trace(const MoveScript& script, const StageSpec& spec);
// Same, with the deterministic enemy turns appended as '# ENEMY' comments.
std::string emit_trace(const ReplayResult& result, const StageSpec& spec);
MoveScript parse_trace(const std::string& text, const StageSpec& spec);

// Formula files.
std::string emit_cnf(const CnfInstance& inst);
CnfInstance parse_cnf(const std::string& text);

// Grid pictures using the stage alphabet plus one glyph per unit, followed by
// a unit legend. Identical input yields identical bytes.
std::string render_ascii(const StageSpec& spec);
std::string render_ascii(const GameState& state);
std::string render_svg(const StageSpec& spec,
                       const std::vector<Position>& highlights = {});

}  // namespace fe
