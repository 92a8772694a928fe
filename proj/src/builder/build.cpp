#include "taskfsa/builder/build.hpp"

#include <algorithm>

namespace taskfsa {

namespace {

bool silent(const step_branch& b) {
    return std::all_of(b.outputs.begin(), b.outputs.end(), [](const auto& o) { return o.empty(); });
}

// "Wait for X." followed by "Do Y.": Y fires on the wait's exit edge.
bool wait_then_act(const parsed_step& wait, const parsed_step& act) {
    if (wait.rule != rule_kind::self_wait || wait.branches.size() != 1) return false;
    const auto& w = wait.branches.front();
    if (!w.hold || w.hold_is_until || !w.guard.is_true() || w.target || !silent(w)) return false;
    if (act.rule != rule_kind::default_rule || act.branches.size() != 1 || act.pairs_with_next) return false;
    const auto& a = act.branches.front();
    return a.guard.is_true() && !a.hold && !a.target && !silent(a);
}

struct group {
    std::vector<std::size_t> members;
    parsed_step combined;
    std::string note;
};

} // namespace

std::string state_for_step(std::string_view step_number) { return "q" + std::string(step_number); }

std::vector<transition> apply_rule(const parsed_step& p, std::string_view self, std::string_view next,
                                   const state_resolver& resolve) {
    if (p.branches.empty()) throw precondition_error("step " + p.step_number + " has no branches");
    std::vector<transition> out;
    std::vector<formula> guards;
    bool guarded = false;
    const std::string me(self);
    for (const auto& b : p.branches) {
        const std::string to = b.target ? resolve(*b.target) : std::string(next);
        const std::vector<action_set> outs = b.outputs.empty() ? std::vector<action_set>{{}} : b.outputs;
        const auto& g = b.guard;
        if (b.hold) {
            const auto& h = *b.hold;
            if (!b.hold_is_until) {
                for (const auto& o : outs) out.push_back({me, simplify(f_and(g, h)), o, to});
                out.push_back({me, simplify(f_and(g, f_not(h))), {}, me});
            } else {
                out.push_back({me, simplify(f_and(g, h)), {}, to});
                for (const auto& o : outs) out.push_back({me, simplify(f_and(g, f_not(h))), o, me});
            }
        } else {
            for (const auto& o : outs) out.push_back({me, simplify(g), o, to});
        }
        guards.push_back(g);
        guarded = guarded || !g.is_true();
    }
    if (guarded) {
        const auto rest = simplify(f_not(formula::disjunction(guards)));
        if (satisfiable(rest)) out.push_back({me, rest, {}, me});
    }
    std::vector<transition> unique;
    for (auto& t : out) {
        if (t.cond.is_false()) continue;
        if (std::find(unique.begin(), unique.end(), t) == unique.end()) unique.push_back(std::move(t));
    }
    return unique;
}

build_result build_fsa(const std::vector<parsed_step>& parsed, std::string absorbing_id) {
    if (parsed.empty()) throw precondition_error("build_fsa needs at least one step");
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (!valid_step_number(parsed[i].step_number))
            throw precondition_error("invalid step number '" + parsed[i].step_number + "'");
        for (std::size_t j = 0; j < i; ++j)
            if (parsed[j].step_number == parsed[i].step_number)
                throw precondition_error("duplicate step " + parsed[i].step_number);
    }

    std::vector<group> groups;
    for (std::size_t i = 0; i < parsed.size();) {
        group g;
        g.combined = parsed[i];
        if (parsed[i].pairs_with_next && i + 1 < parsed.size()) {
            g.members = {i, i + 1};
            g.combined.rule = rule_kind::conditional_else;
            g.combined.branches.insert(g.combined.branches.end(), parsed[i + 1].branches.begin(),
                                       parsed[i + 1].branches.end());
            g.note = "if/else pair";
        } else if (i + 1 < parsed.size() && wait_then_act(parsed[i], parsed[i + 1])) {
            g.members = {i, i + 1};
            g.combined.branches.front().outputs = parsed[i + 1].branches.front().outputs;
            g.note = "wait then act";
        } else {
            g.members = {i};
        }
        i += g.members.size();
        groups.push_back(std::move(g));
    }

    std::map<std::string, std::string> state_of;
    std::vector<std::size_t> group_of(parsed.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
        for (const auto m : groups[gi].members) {
            state_of[parsed[m].step_number] = state_for_step(parsed[groups[gi].members.front()].step_number);
            group_of[m] = gi;
        }
    for (const auto& [_, s] : state_of)
        if (s == absorbing_id) throw precondition_error("absorbing id clashes with a step state");

    auto state_after = [&](std::size_t pos) {
        const auto gi = group_of[pos];
        return gi + 1 < groups.size() ? state_of.at(parsed[groups[gi + 1].members.front()].step_number) : absorbing_id;
    };

    const state_resolver resolve = [&](std::string_view target) -> std::string {
        if (const auto it = state_of.find(std::string(target)); it != state_of.end()) return it->second;
        for (const auto& p : parsed)
            if (is_descendant(p.step_number, target)) return state_of.at(p.step_number);
        // One past the end of a sibling run continues after that run.
        const std::string t(target);
        const auto dot = t.rfind('.');
        const auto index = std::stoul(dot == std::string::npos ? t : t.substr(dot + 1));
        if (index > 1) {
            const auto prev = child_number(parent_number(t), index - 1);
            std::optional<std::size_t> last;
            for (std::size_t i = 0; i < parsed.size(); ++i)
                if (parsed[i].step_number == prev || is_descendant(parsed[i].step_number, prev)) last = i;
            if (last) return state_after(*last);
        }
        throw dangling_step_ref("step reference [" + t + "] points to no step");
    };

    build_result r;
    auto& c = r.ctrl;
    c.absorbing = absorbing_id;
    for (const auto& g : groups) {
        const auto& first = parsed[g.members.front()];
        c.states.push_back({state_for_step(first.step_number), first.step_number});
    }
    c.states.push_back({absorbing_id, std::nullopt});
    c.initial = c.states.front().id;

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        const auto self = c.states[gi].id;
        const auto next = c.states[gi + 1].id;
        const auto emitted = apply_rule(g.combined, self, next, resolve);
        build_record rec{parsed[g.members.front()].step_number, g.combined.rule, self, emitted, {}, {}, {}};
        for (const auto& t : emitted) {
            for (const auto& a : t.cond.atoms())
                if (!c.props.contains(a)) rec.props_added.insert(a);
            for (const auto& a : t.out)
                if (!c.actions.contains(a)) rec.actions_added.insert(a);
            c.props.insert(rec.props_added.begin(), rec.props_added.end());
            c.actions.insert(rec.actions_added.begin(), rec.actions_added.end());
            c.transitions.push_back(t);
        }
        if (!g.note.empty()) rec.notes.push_back(g.note);
        rec.notes.insert(rec.notes.end(), parsed[g.members.front()].notes.begin(), parsed[g.members.front()].notes.end());
        r.trace.push_back(std::move(rec));
        for (std::size_t k = 1; k < g.members.size(); ++k) {
            const auto& p = parsed[g.members[k]];
            build_record shared{p.step_number, p.rule, self, {}, {}, {}, {g.note + ": shares state " + self}};
            shared.notes.insert(shared.notes.end(), p.notes.begin(), p.notes.end());
            r.trace.push_back(std::move(shared));
        }
    }
    c.transitions.push_back({absorbing_id, formula::top(), {}, absorbing_id});
    c.normalize();
    return r;
}

std::vector<parsed_step> parse_frontier(const step_tree& tree, const std::vector<std::string>& numbers,
                                        const step_parser& parser) {
    std::vector<parsed_step> out;
    out.reserve(numbers.size());
    for (const auto& n : numbers) out.push_back(parser.parse_step(n, tree.at(n).text));
    // Pair if/else steps only within runs of adjacent siblings.
    std::size_t start = 0;
    for (std::size_t i = 1; i <= out.size(); ++i) {
        const bool breaks = i == out.size() || parent_number(numbers[i]) != parent_number(numbers[i - 1]);
        if (!breaks) continue;
        std::vector<parsed_step> run(out.begin() + static_cast<std::ptrdiff_t>(start),
                                     out.begin() + static_cast<std::ptrdiff_t>(i));
        pair_complementary_steps(run);
        std::copy(run.begin(), run.end(), out.begin() + static_cast<std::ptrdiff_t>(start));
        start = i;
    }
    return out;
}

build_result build_steps(const step_tree& tree, const std::vector<std::string>& numbers, const step_parser& parser) {
    return build_fsa(parse_frontier(tree, numbers, parser));
}

build_result build_top_level(const step_tree& tree, const step_parser& parser) {
    return build_steps(tree, tree.children(""), parser);
}

} // namespace taskfsa
