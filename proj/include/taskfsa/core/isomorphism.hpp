#pragma once

#include "taskfsa/core/controller.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace taskfsa {

// Rewrites a proposition or action name before comparison.
using label_rewrite = std::function<std::string(const std::string&)>;

// State bijection preserving initial and absorbing states, with equal action
// sets and logically equivalent conditions on every edge. Both inputs are
// compared after normalize().
[[nodiscard]] std::optional<std::map<std::string, std::string>>
find_isomorphism(const controller& a, const controller& b);

[[nodiscard]] controller rewrite_labels(const controller& c, const label_rewrite& f);

} // namespace taskfsa
