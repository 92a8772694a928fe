#pragma once

#include "taskfsa/core/model.hpp"

#include <string>

namespace taskfsa {

// Graphviz digraph: initial state marked by an arrow from a point node,
// absorbing state double-circled, edges labelled "(cond, action)".
[[nodiscard]] std::string export_dot(const controller& c);
// Model states show their labels; edges show the guard.
[[nodiscard]] std::string export_dot(const model& m);

} // namespace taskfsa
