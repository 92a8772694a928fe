#pragma once

#include "taskfsa/verify/ltl.hpp"
#include "taskfsa/verify/product.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taskfsa {

// Single MODULE main over the reachable product: model and controller state
// variables, one boolean per controller action, label DEFINEs, INIT, TRANS and
// an optional LTLSPEC.
[[nodiscard]] std::string export_smv(const model& m, const controller& c,
                                     const std::optional<ltl_formula>& spec);
// One LTLSPEC section per specification.
[[nodiscard]] std::string export_smv(const model& m, const controller& c, const std::vector<ltl_formula>& specs);

[[nodiscard]] std::string smv_identifier(std::string_view name);

struct smv_report {
    bool ok = true;
    std::vector<std::string> errors;
    std::size_t variables = 0;
    std::size_t defines = 0;
    std::size_t specs = 0;
};

// Grammar and scoping check for the SMV subset export_smv emits.
[[nodiscard]] smv_report validate_smv(std::string_view text);

} // namespace taskfsa
