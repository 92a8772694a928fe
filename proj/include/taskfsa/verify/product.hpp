#pragma once

#include "taskfsa/core/errors.hpp"
#include "taskfsa/core/model.hpp"

#include <set>
#include <string>
#include <vector>

namespace taskfsa {

inline constexpr std::string_view stuck_prop = "stuck";

class alphabet_mismatch : public error {
public:
    alphabet_mismatch(std::set<std::string> actions, std::set<std::string> conditions);

    [[nodiscard]] const std::set<std::string>& unmatched_actions() const noexcept { return _actions; }
    [[nodiscard]] const std::set<std::string>& unmatched_conditions() const noexcept { return _conditions; }

private:
    std::set<std::string> _actions;
    std::set<std::string> _conditions;
};

struct product_state {
    std::string model_state;
    std::string controller_state;
    friend bool operator==(const product_state&, const product_state&) = default;
};

struct product_edge {
    std::size_t from;
    std::size_t to;
    action_set action;
    std::set<std::string> label;   // labels(p) ∪ action, plus "stuck" on implicit deadlock loops
    bool stuck = false;
};

struct product {
    std::vector<product_state> states;   // index 0 is initial
    std::vector<product_edge> edges;
    std::vector<std::vector<std::size_t>> out;   // edge indices per state

    [[nodiscard]] std::size_t index_of(const product_state& s) const;   // npos if absent
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct product_options {
    bool deadlock_as_failure = false;
};

// Reachable part only. Throws alphabet_mismatch when the controller uses phrases
// the model does not declare.
[[nodiscard]] product build_product(const model& m, const controller& c);

} // namespace taskfsa
