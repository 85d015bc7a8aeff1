#include "fe/sat.hpp"

#include <algorithm>

namespace fe {

namespace {

struct Span {
    int lo = 0, hi = 0;  // variable positions, inclusive
};

Span clause_span(const EmbeddedClause& c) {
    Span s{c.literals.front().var, c.literals.front().var};
    for (const auto& l : c.literals) {
        s.lo = std::min(s.lo, l.var);
        s.hi = std::max(s.hi, l.var);
    }
    return s;
}

bool interiors_overlap(Span a, Span b) {
    return std::max(a.lo, b.lo) < std::min(a.hi, b.hi);
}

bool contains(Span outer, Span inner) {
    return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

struct Occurrence {
    int clause = -1;
    int literal = -1;
    int group = 1;  // 0 = left-ender, 1 = unit/interior, 2 = right-ender
    Span span;
    int level = 0;
};

// Occurrences of each variable, ordered left to right as their connectors
// stand on the line: clauses ending here from the left (innermost first),
// then units and pass-throughs (deepest first), then clauses starting here
// to the right (outermost first).
std::vector<std::vector<Occurrence>> ordered_occurrences(const CnfInstance& inst) {
    std::vector<std::vector<Occurrence>> per_var(inst.variables.size());
    for (size_t ci = 0; ci < inst.clauses.size(); ++ci) {
        const auto& c = inst.clauses[ci];
        Span s = clause_span(c);
        for (size_t li = 0; li < c.literals.size(); ++li) {
            int v = c.literals[li].var;
            Occurrence o;
            o.clause = int(ci);
            o.literal = int(li);
            o.span = s;
            o.level = c.level;
            if (s.lo < s.hi && v == s.hi)
                o.group = 0;
            else if (s.lo < s.hi && v == s.lo)
                o.group = 2;
            per_var[v].push_back(o);
        }
    }
    for (auto& occs : per_var)
        std::stable_sort(occs.begin(), occs.end(), [](const auto& x, const auto& y) {
            if (x.group != y.group) return x.group < y.group;
            if (x.group == 0) {  // inner first: larger left end, deeper level
                if (x.span.lo != y.span.lo) return x.span.lo > y.span.lo;
                return x.level > y.level;
            }
            if (x.group == 2) {  // outer first: larger right end, shallower
                if (x.span.hi != y.span.hi) return x.span.hi > y.span.hi;
                return x.level < y.level;
            }
            return x.level > y.level;
        });
    return per_var;
}

}  // namespace

std::vector<Violation> validate_embedding(const CnfInstance& inst) {
    std::vector<Violation> out;
    auto bad = [&](std::string s) { out.push_back({std::move(s)}); };
    int n = int(inst.variables.size());

    for (size_t i = 0; i < inst.clauses.size(); ++i) {
        const auto& c = inst.clauses[i];
        std::string who = "clause " + std::to_string(i + 1);
        if (c.literals.empty() || c.literals.size() > 3)
            bad(who + ": literal count outside 1..3");
        if (c.level < 0) bad(who + ": negative level");
        std::vector<int> seen;
        for (const auto& l : c.literals) {
            if (l.var < 0 || l.var >= n) {
                bad(who + ": unknown variable");
                continue;
            }
            if (l.negated != (c.sign == ClauseSign::AllNegative))
                bad(who + ": not monotone");
            if (std::count(seen.begin(), seen.end(), l.var))
                bad(who + ": repeated variable");
            seen.push_back(l.var);
        }
    }
    if (!out.empty()) return out;  // geometry needs well-formed clauses

    for (size_t i = 0; i < inst.clauses.size(); ++i)
        for (size_t j = i + 1; j < inst.clauses.size(); ++j) {
            const auto& a = inst.clauses[i];
            const auto& b = inst.clauses[j];
            if (a.sign != b.sign) continue;
            std::string pair = "clauses " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1);
            Span sa = clause_span(a), sb = clause_span(b);
            if (interiors_overlap(sa, sb)) {
                bool a_in_b = contains(sb, sa) && a.level > b.level;
                bool b_in_a = contains(sa, sb) && b.level > a.level;
                if (!a_in_b && !b_in_a) {
                    if (!contains(sa, sb) && !contains(sb, sa))
                        bad(pair + ": crossing spans");
                    else
                        bad(pair + ": nested spans without increasing level");
                }
            }
            // A deeper clause's span may not cover another clause's
            // occurrence strictly: the shallower clause's connector would
            // have to cross the deeper one.
            auto check_legs = [&](const EmbeddedClause& outer, Span inner_span,
                                  int inner_level) {
                if (outer.level >= inner_level) return;
                for (const auto& l : outer.literals)
                    if (inner_span.lo < l.var && l.var < inner_span.hi)
                        bad(pair + ": occurrence inside a deeper clause's span");
            };
            check_legs(a, sb, b.level);
            check_legs(b, sa, a.level);
        }
    return out;
}

std::vector<std::pair<int, int>> occurrence_counts(const CnfInstance& inst) {
    std::vector<std::pair<int, int>> counts(inst.variables.size(), {0, 0});
    for (const auto& c : inst.clauses)
        for (const auto& l : c.literals) {
            if (c.sign == ClauseSign::AllPositive)
                ++counts[l.var].first;
            else
                ++counts[l.var].second;
        }
    return counts;
}

std::vector<std::vector<OccurrenceRef>> occurrence_slots(const CnfInstance& inst,
                                                         ClauseSign sign) {
    auto per_var = ordered_occurrences(inst);
    std::vector<std::vector<OccurrenceRef>> out(per_var.size());
    for (size_t v = 0; v < per_var.size(); ++v)
        for (const auto& o : per_var[v])
            if (inst.clauses[o.clause].sign == sign)
                out[v].push_back({o.clause, o.literal});
    return out;
}

BoundedInstance reduce_degree(const CnfInstance& inst) {
    auto per_var = ordered_occurrences(inst);

    BoundedInstance red;
    red.original_variables = inst.variables;
    red.mapping.resize(inst.variables.size());
    red.cnf.clauses = inst.clauses;

    int max_pos_level = -1, max_neg_level = -1;
    for (const auto& c : inst.clauses)
        (c.sign == ClauseSign::AllPositive ? max_pos_level : max_neg_level) =
            std::max(c.sign == ClauseSign::AllPositive ? max_pos_level
                                                       : max_neg_level,
                     c.level);

    std::vector<EmbeddedClause> bindings;
    auto bind_unequal = [&](int u, int v) {
        EmbeddedClause pos;
        pos.sign = ClauseSign::AllPositive;
        pos.level = max_pos_level + 1;
        pos.literals = {{u, false}, {v, false}};
        EmbeddedClause neg;
        neg.sign = ClauseSign::AllNegative;
        neg.level = max_neg_level + 1;
        neg.literals = {{u, true}, {v, true}};
        bindings.push_back(std::move(pos));
        bindings.push_back(std::move(neg));
    };

    for (size_t v = 0; v < per_var.size(); ++v) {
        const auto& occs = per_var[v];
        const std::string& name = inst.variables[v];
        int prev_f = -1;
        for (size_t i = 0; i < occs.size(); ++i) {
            int t = int(red.cnf.variables.size());
            red.cnf.variables.push_back(name + "_" + std::to_string(i + 1) + "T");
            int f = int(red.cnf.variables.size());
            red.cnf.variables.push_back(name + "_" + std::to_string(i + 1) + "F");
            red.mapping[v].push_back(t);
            red.mapping[v].push_back(f);
            red.cnf.clauses[occs[i].clause].literals[occs[i].literal].var = t;
            bind_unequal(t, f);
            if (prev_f != -1) bind_unequal(prev_f, t);
            prev_f = f;
        }
    }
    red.cnf.clauses.insert(red.cnf.clauses.end(), bindings.begin(), bindings.end());
    return red;
}

bool satisfies(const CnfInstance& inst, const Assignment& a) {
    for (const auto& c : inst.clauses) {
        bool sat = false;
        for (const auto& l : c.literals)
            if (a[l.var] != l.negated) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

std::optional<Assignment> brute_force_sat(const CnfInstance& inst, int max_vars) {
    int n = int(inst.variables.size());
    if (n > max_vars)
        throw TooLargeError("instance has " + std::to_string(n) +
                            " variables, cap is " + std::to_string(max_vars));

    // Clauses become checkable once their rightmost variable is assigned.
    std::vector<std::vector<const EmbeddedClause*>> by_last(n);
    for (const auto& c : inst.clauses) {
        if (c.literals.empty()) return std::nullopt;
        by_last[clause_span(c).hi].push_back(&c);
    }

    Assignment a(n, false);
    // Backtracking with false tried first yields the lexicographically
    // smallest model.
    auto rec = [&](auto&& self, int i) -> bool {
        if (i == n) return true;
        for (bool value : {false, true}) {
            a[i] = value;
            bool ok = true;
            for (const EmbeddedClause* c : by_last[i]) {
                bool sat = false;
                for (const auto& l : c->literals)
                    if (a[l.var] != l.negated) {
                        sat = true;
                        break;
                    }
                if (!sat) {
                    ok = false;
                    break;
                }
            }
            if (ok && self(self, i + 1)) return true;
        }
        return false;
    };
    if (n == 0) return inst.clauses.empty() ? std::optional<Assignment>(a) : std::nullopt;
    if (rec(rec, 0)) return a;
    return std::nullopt;
}

Assignment lift_assignment(const BoundedInstance& reduced, const Assignment& a) {
    Assignment out(reduced.original_variables.size(), false);
    for (size_t v = 0; v < reduced.mapping.size(); ++v) {
        const auto& m = reduced.mapping[v];
        if (m.empty()) continue;  // variable had no occurrences
        bool value = a[m[0]];
        for (size_t i = 0; i < m.size(); i += 2)
            if (a[m[i]] != value)
                throw InconsistentChainError(
                    "replacement variables of '" + reduced.original_variables[v] +
                    "' disagree");
        out[v] = value;
    }
    return out;
}

}  // namespace fe
