#pragma once

#include "taskfsa/glm/step_tree.hpp"
#include "taskfsa/refine/synonyms.hpp"
#include "taskfsa/verify/check.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taskfsa {

enum class session_status { fail, pass, unrepresentable };

[[nodiscard]] std::string_view status_name(session_status s);
[[nodiscard]] session_status status_from_name(std::string_view name);   // throws precondition_error

enum class iteration_kind { initial, manual, automatic, prune };

[[nodiscard]] std::string_view iteration_kind_name(iteration_kind k);
[[nodiscard]] iteration_kind iteration_kind_from_name(std::string_view name);

// One entry of the refinement history. The controller is the consolidated one
// that was verified; tree, frontier and bypassed states rebuild it exactly.
struct iteration {
    iteration_kind kind = iteration_kind::initial;
    std::string instruction;               // manual refinements only
    std::vector<std::string> prompts;      // prompts sent during this iteration
    step_tree tree;
    std::vector<std::string> frontier;     // compiled steps, document order
    std::vector<std::string> bypassed;     // no-op states removed by pruning
    controller ctrl;
    std::vector<verdict> verdicts;         // aligned with the session's specs

    [[nodiscard]] bool passes() const;

    friend bool operator==(const iteration&, const iteration&) = default;
};

struct session_options {
    std::size_t depth = 1;
    std::size_t max_depth = 3;
    glm_params params = glm_params::defaults();
};

struct refinement_session {
    std::string task;
    model mdl;
    std::vector<std::string> specs;        // LTL text
    std::size_t max_depth = 3;
    glm_params params = glm_params::defaults();
    synonym_map synonyms;
    std::vector<iteration> history;
    session_status status = session_status::fail;

    [[nodiscard]] const iteration& current() const;   // throws precondition_error when empty
    [[nodiscard]] const controller& ctrl() const { return current().ctrl; }
    // Deepest layer among the compiled steps.
    [[nodiscard]] std::size_t depth() const;

    friend bool operator==(const refinement_session&, const refinement_session&) = default;
};

[[nodiscard]] std::vector<verdict> verify_all(const model& m, const controller& c,
                                              const std::vector<std::string>& specs);

// Queries the top-level steps (and lower layers up to options.depth), builds,
// consolidates and verifies.
[[nodiscard]] refinement_session start_session(const std::string& task, const model& m,
                                               const std::vector<std::string>& specs, glm_client& glm,
                                               const session_options& options = {});
[[nodiscard]] refinement_session start_session_from_tree(const step_tree& tree, const model& m,
                                                         const std::vector<std::string>& specs, glm_client& glm,
                                                         const session_options& options = {});

// Requires a failing latest verdict. The session argument is never modified.
[[nodiscard]] refinement_session manual_refine(const refinement_session& s, std::string_view instruction,
                                               glm_client& glm);

// Expands every deepest compiled step into substeps, rebuilds and re-verifies
// until all specs pass or max_depth is reached (then unrepresentable). A
// passing session is returned unchanged.
[[nodiscard]] refinement_session auto_refine(const refinement_session& s, glm_client& glm);

// Requires a passing latest verdict. Collapses child groups deepest first,
// then removes no-op states, keeping each change only if every spec still passes.
[[nodiscard]] refinement_session prune(const refinement_session& s, glm_client& glm);

// Removes a state whose only edge is (True, ε) to another state and redirects
// its incoming edges there. Empty when the state is not such a no-op.
[[nodiscard]] std::optional<controller> bypass_noop(const controller& c, std::string_view state);

// Rebuilds an iteration's controller from its tree, frontier and bypassed
// states, applying the synonym map.
[[nodiscard]] controller rebuild(const iteration& it, const synonym_map& synonyms);

} // namespace taskfsa
