#include "taskfsa/core/model.hpp"

#include <algorithm>

namespace taskfsa {

bool model::has_state(std::string_view id) const {
    return std::find(states.begin(), states.end(), id) != states.end();
}

const std::set<std::string>& model::label_of(const std::string& state) const {
    static const std::set<std::string> empty;
    auto it = labels.find(state);
    return it == labels.end() ? empty : it->second;
}

valuation guard_input(const action_set& a) {
    valuation v(a.begin(), a.end());
    if (a.empty()) v.insert(std::string(eps_prop));
    return v;
}

bool guard_enabled(const formula& guard, const action_set& a) { return guard.eval(guard_input(a)); }

validation_report validate_model(const model& m) {
    validation_report report;
    auto add = [&](std::string code, std::string msg) {
        report.push_back({std::move(code), std::move(msg)});
    };

    std::set<std::string> ids;
    for (const auto& s : m.states) {
        if (!ids.insert(s).second) add("duplicate state", "state " + s + " listed twice");
    }
    if (!ids.contains(m.initial)) add("initial not a state", "initial state " + m.initial + " is not declared");
    if (!m.label_props.contains(std::string(goal_prop))) add("missing goal", "label_props must contain goal");

    for (const auto& [s, ls] : m.labels) {
        if (!ids.contains(s)) add("unknown state", "labels given for undeclared state " + s);
        for (const auto& l : ls) {
            if (!m.label_props.contains(l)) add("unhoused label", "state " + s + " carries '" + l + "' which is not in label_props");
        }
    }
    for (const auto& t : m.transitions) {
        const std::string where = "transition " + t.from + " -> " + t.to;
        if (!ids.contains(t.from) || !ids.contains(t.to)) add("unknown state", where + " uses an undeclared state");
        for (const auto& a : t.guard.atoms()) {
            if (a != eps_prop && !m.action_props.contains(a)) {
                add("unhoused action", where + " guards on '" + a + "' which is not in action_props");
            }
        }
    }
    for (const auto& s : m.states) {
        const bool live = std::any_of(m.transitions.begin(), m.transitions.end(), [&](const model_transition& t) {
            return t.from == s && satisfiable(t.guard);
        });
        if (!live) add("dead end", "state " + s + " has no enabled outgoing transition");
    }
    return report;
}

} // namespace taskfsa
