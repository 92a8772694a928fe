#pragma once

#include "taskfsa/core/formula.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace taskfsa {

// Empty set is the no-op output.
using action_set = std::set<std::string>;

inline constexpr std::string_view goal_prop = "goal";

[[nodiscard]] std::string action_text(const action_set& a);   // "cross road" or "eps"

struct controller_state {
    std::string id;
    std::optional<std::string> step;

    friend bool operator==(const controller_state&, const controller_state&) = default;
};

struct transition {
    std::string from;
    formula cond;
    action_set out;
    std::string to;

    friend bool operator==(const transition&, const transition&) = default;
};

struct controller {
    std::set<std::string> props;
    std::set<std::string> actions;
    std::vector<controller_state> states;
    std::string initial;
    std::string absorbing;
    std::vector<transition> transitions;

    [[nodiscard]] bool has_state(std::string_view id) const;
    [[nodiscard]] std::size_t state_index(std::string_view id) const;   // throws if absent
    [[nodiscard]] std::vector<const transition*> outgoing(std::string_view id) const;

    // Merges parallel edges (same from, out, to) by disjunction, simplifies
    // conditions, drops unsatisfiable edges and sorts by state order.
    void normalize();

    friend bool operator==(const controller&, const controller&) = default;
};

struct violation {
    std::string code;      // stable short name, e.g. "unhoused proposition"
    std::string message;
};
using validation_report = std::vector<violation>;

[[nodiscard]] validation_report validate_controller(const controller& c);

// Makes a controller with only the absorbing state and its self-loop.
[[nodiscard]] controller absorbing_only(std::string id = "abs");

} // namespace taskfsa
