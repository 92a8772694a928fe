#pragma once

#include "taskfsa/core/controller.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace taskfsa {

// Guard atom that holds exactly when the controller emits no action.
inline constexpr std::string_view eps_prop = "eps";

struct model_transition {
    std::string from;
    formula guard;
    std::string to;

    friend bool operator==(const model_transition&, const model_transition&) = default;
};

struct model {
    std::set<std::string> action_props;
    std::set<std::string> label_props;
    std::vector<std::string> states;
    std::string initial;
    std::vector<model_transition> transitions;
    std::map<std::string, std::set<std::string>> labels;

    [[nodiscard]] bool has_state(std::string_view id) const;
    [[nodiscard]] const std::set<std::string>& label_of(const std::string& state) const;

    friend bool operator==(const model&, const model&) = default;
};

// Valuation a model guard sees for a given controller output.
[[nodiscard]] valuation guard_input(const action_set& a);
[[nodiscard]] bool guard_enabled(const formula& guard, const action_set& a);

[[nodiscard]] validation_report validate_model(const model& m);

} // namespace taskfsa
