#include "taskfsa/builder/build.hpp"

#include <algorithm>

namespace taskfsa {

controller splice_substeps(const controller& parent, std::string_view parent_state, const controller& child,
                           std::optional<std::string> return_state) {
    if (!parent.has_state(parent_state)) throw precondition_error("no state " + std::string(parent_state));
    if (const auto problems = validate_controller(child); !problems.empty())
        throw precondition_error("child controller is invalid: " + problems.front().message);

    std::vector<std::size_t> exits;
    for (std::size_t i = 0; i < parent.transitions.size(); ++i) {
        const auto& t = parent.transitions[i];
        if (t.from == parent_state && t.to != parent_state) exits.push_back(i);
    }
    if (exits.size() != 1)
        throw ambiguous_splice("state " + std::string(parent_state) + " has " + std::to_string(exits.size()) +
                               " outgoing transitions; splicing needs exactly one");
    const auto back = return_state.value_or(parent.transitions[exits.front()].to);
    if (!parent.has_state(back)) throw precondition_error("no return state " + back);
    for (const auto& s : child.states)
        if (s.id != child.absorbing && parent.has_state(s.id))
            throw precondition_error("child state " + s.id + " clashes with a parent state");

    controller out = parent;
    out.transitions.erase(out.transitions.begin() + static_cast<std::ptrdiff_t>(exits.front()));
    out.transitions.push_back({std::string(parent_state), formula::top(), {}, child.initial});
    // Child states go right after the parent state so the order follows the document.
    auto at = std::find_if(out.states.begin(), out.states.end(), [&](const auto& s) { return s.id == parent_state; });
    std::vector<controller_state> inserted;
    for (const auto& s : child.states)
        if (s.id != child.absorbing) inserted.push_back(s);
    out.states.insert(std::next(at), inserted.begin(), inserted.end());
    for (const auto& t : child.transitions) {
        if (t.from == child.absorbing) continue;
        auto copy = t;
        if (copy.to == child.absorbing) copy.to = back;
        out.transitions.push_back(std::move(copy));
    }
    out.props.insert(child.props.begin(), child.props.end());
    out.actions.insert(child.actions.begin(), child.actions.end());
    out.normalize();
    return out;
}

controller build_layered(const step_tree& tree, const step_parser& parser) {
    auto out = build_top_level(tree, parser).ctrl;
    auto nodes = tree.nodes();
    std::stable_sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.depth < b.depth; });
    for (const auto& n : nodes) {
        if (!tree.has_children(n.number)) continue;
        const auto child = build_steps(tree, tree.children(n.number), parser).ctrl;
        out = splice_substeps(out, state_for_step(n.number), child);
    }
    return out;
}

controller merge_branches(const controller& when_false, const controller& when_true, std::string_view prop) {
    if (prop.empty()) throw precondition_error("branch proposition is empty");
    controller out;
    out.initial = "q0";
    out.absorbing = "abs";
    out.states.push_back({"q0", std::nullopt});
    out.props.insert(std::string(prop));
    auto add = [&](const controller& c, const std::string& prefix, const formula& guard) {
        auto rename = [&](const std::string& id) { return id == c.absorbing ? out.absorbing : prefix + id; };
        for (const auto& s : c.states)
            if (s.id != c.absorbing) out.states.push_back({rename(s.id), s.step});
        for (const auto& t : c.transitions)
            if (t.from != c.absorbing) out.transitions.push_back({rename(t.from), t.cond, t.out, rename(t.to)});
        out.transitions.push_back({"q0", guard, {}, rename(c.initial)});
        out.props.insert(c.props.begin(), c.props.end());
        out.actions.insert(c.actions.begin(), c.actions.end());
    };
    add(when_false, "b1_", formula::negation(formula::atom(std::string(prop))));
    add(when_true, "b2_", formula::atom(std::string(prop)));
    out.states.push_back({out.absorbing, std::nullopt});
    out.transitions.push_back({out.absorbing, formula::top(), {}, out.absorbing});
    out.normalize();
    return out;
}

} // namespace taskfsa
