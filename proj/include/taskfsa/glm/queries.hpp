#pragma once

#include "taskfsa/glm/backend.hpp"
#include "taskfsa/glm/step_tree.hpp"

#include <string>
#include <vector>

namespace taskfsa {

class malformed_completion : public error {
public:
    explicit malformed_completion(std::string raw)
        : error("no step markers in completion: " + raw.substr(0, 120)), _raw(std::move(raw)) {}
    [[nodiscard]] const std::string& raw() const noexcept { return _raw; }

private:
    std::string _raw;
};

class unparseable_verdict : public error {
public:
    using error::error;
};

[[nodiscard]] std::string steps_prompt(std::string_view task);
[[nodiscard]] std::string substeps_prompt(const step_tree& tree, std::string_view number);
[[nodiscard]] std::string synonym_prompt(std::string_view a, std::string_view b);
[[nodiscard]] prompt build_refinement_prompt(const std::vector<std::pair<std::string, std::string>>& steps,
                                             std::string_view instruction);

// Splits a completion on "[k]" or "k." markers at line starts. The first
// marker may be implicit because the prompt ends with it.
[[nodiscard]] std::vector<std::string> split_completion(std::string_view completion, std::string_view first_number);

[[nodiscard]] step_tree query_steps(glm_client& glm, std::string_view task, std::size_t depth,
                                    const glm_params& params = glm_params::defaults());
void query_substeps(glm_client& glm, step_tree& tree, std::string_view number,
                    const glm_params& params = glm_params::defaults());

struct synonym_verdict {
    bool equivalent;
    std::string rationale;
    bool queried;   // false when answered without the backend
};

[[nodiscard]] synonym_verdict query_synonym(glm_client& glm, std::string_view a, std::string_view b,
                                            const glm_params& params = glm_params::defaults());

// Asks for a revised top-level step list; returns the new step texts.
[[nodiscard]] std::vector<std::string> query_refinement(glm_client& glm,
                                                        const std::vector<std::pair<std::string, std::string>>& steps,
                                                        std::string_view instruction,
                                                        const glm_params& params = glm_params::defaults());

} // namespace taskfsa
