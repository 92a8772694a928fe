#include "taskfsa/core/controller.hpp"

#include "taskfsa/core/errors.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace taskfsa {

std::string action_text(const action_set& a) {
    if (a.empty()) return "eps";
    std::string out;
    for (const auto& s : a) {
        if (!out.empty()) out += " + ";
        out += s;
    }
    return out;
}

bool controller::has_state(std::string_view id) const {
    return std::any_of(states.begin(), states.end(), [&](const auto& s) { return s.id == id; });
}

std::size_t controller::state_index(std::string_view id) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].id == id) return i;
    }
    throw precondition_error("unknown controller state " + std::string(id));
}

std::vector<const transition*> controller::outgoing(std::string_view id) const {
    std::vector<const transition*> out;
    for (const auto& t : transitions) {
        if (t.from == id) out.push_back(&t);
    }
    return out;
}

void controller::normalize() {
    std::map<std::tuple<std::string, action_set, std::string>, formula> merged;
    std::vector<std::tuple<std::string, action_set, std::string>> order;
    for (const auto& t : transitions) {
        auto key = std::make_tuple(t.from, t.out, t.to);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, t.cond);
            order.push_back(key);
        } else {
            it->second = f_or(it->second, t.cond);
        }
    }
    std::vector<transition> out;
    for (const auto& key : order) {
        formula cond = simplify(merged.at(key));
        if (cond.is_false()) continue;
        out.push_back({std::get<0>(key), cond, std::get<1>(key), std::get<2>(key)});
    }
    auto rank = [&](const std::string& id) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (states[i].id == id) return i;
        }
        return states.size();
    };
    std::stable_sort(out.begin(), out.end(), [&](const transition& a, const transition& b) {
        return std::make_tuple(rank(a.from), rank(a.to), a.out, to_text(a.cond)) <
               std::make_tuple(rank(b.from), rank(b.to), b.out, to_text(b.cond));
    });
    transitions = std::move(out);
}

validation_report validate_controller(const controller& c) {
    validation_report report;
    auto add = [&](std::string code, std::string msg) {
        report.push_back({std::move(code), std::move(msg)});
    };

    std::set<std::string> ids;
    for (const auto& s : c.states) {
        if (!ids.insert(s.id).second) add("duplicate state", "state " + s.id + " listed twice");
    }
    if (!ids.contains(c.initial)) add("initial not a state", "initial state " + c.initial + " is not declared");
    if (!ids.contains(c.absorbing)) add("absorbing not a state", "absorbing state " + c.absorbing + " is not declared");

    const auto absorbing_out = c.outgoing(c.absorbing);
    if (absorbing_out.size() != 1) {
        add("absorbing self-loop not unique",
            "absorbing state " + c.absorbing + " has " + std::to_string(absorbing_out.size()) +
                " outgoing transitions");
    } else {
        const transition& t = *absorbing_out.front();
        if (t.to != c.absorbing || !t.out.empty() || !valid(t.cond)) {
            add("absorbing self-loop malformed",
                "absorbing state " + c.absorbing + " must loop on (True, eps)");
        }
    }

    for (std::size_t i = 0; i < c.transitions.size(); ++i) {
        const transition& t = c.transitions[i];
        const std::string where = "transition " + t.from + " -> " + t.to;
        if (!ids.contains(t.from) || !ids.contains(t.to)) add("unknown state", where + " uses an undeclared state");
        for (const auto& a : t.cond.atoms()) {
            if (!c.props.contains(a)) add("unhoused proposition", where + " tests '" + a + "' which is not in props");
        }
        for (const auto& a : t.out) {
            if (!c.actions.contains(a)) add("unhoused action", where + " emits '" + a + "' which is not in actions");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (c.transitions[j] == t) add("duplicate transition", where + " appears twice");
        }
    }
    return report;
}

controller absorbing_only(std::string id) {
    controller c;
    c.states.push_back({id, std::nullopt});
    c.initial = id;
    c.absorbing = id;
    c.transitions.push_back({id, formula::top(), {}, id});
    return c;
}

} // namespace taskfsa
