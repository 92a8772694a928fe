#pragma once

#include "taskfsa/verify/check.hpp"

#include <string>

namespace taskfsa {

// Model projection line, then one row per transition: model state, controller
// state, controller inputs (literals over the controller's propositions), the
// emitted action and the transition label. Loop rows are marked with "*".
[[nodiscard]] std::string render_counterexample(const counterexample& cex, const controller& c);

} // namespace taskfsa
