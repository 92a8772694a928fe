#pragma once

#include "taskfsa/core/controller.hpp"
#include "taskfsa/glm/step_tree.hpp"
#include "taskfsa/stepparse/parse.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace taskfsa {

class dangling_step_ref : public error {
public:
    using error::error;
};

class ambiguous_splice : public error {
public:
    using error::error;
};

struct build_record {
    std::string step_number;
    rule_kind rule;
    std::string state;
    std::vector<transition> emitted;
    std::set<std::string> props_added;
    std::set<std::string> actions_added;
    std::vector<std::string> notes;
};
using build_trace = std::vector<build_record>;

struct build_result {
    controller ctrl;
    build_trace trace;
};

[[nodiscard]] std::string state_for_step(std::string_view step_number);   // "q" + number

// Resolves a step reference: the step's own state, else the state of its first
// descendant, else (for one past the end of a sibling run) the state after that run.
using state_resolver = std::function<std::string(std::string_view target)>;

// Transitions for one step. next is the state that follows the step.
[[nodiscard]] std::vector<transition> apply_rule(const parsed_step& p, std::string_view self, std::string_view next,
                                                 const state_resolver& resolve);

// Parsed steps in document order; mixed depths are allowed for flat rebuilds
// of an expanded frontier. If/else pairs and wait-then-act pairs share a state.
[[nodiscard]] build_result build_fsa(const std::vector<parsed_step>& parsed, std::string absorbing_id = "abs");

// Parses the given steps of a tree (document order) and builds them.
[[nodiscard]] std::vector<parsed_step> parse_frontier(const step_tree& tree, const std::vector<std::string>& numbers,
                                                      const step_parser& parser = step_parser());
[[nodiscard]] build_result build_steps(const step_tree& tree, const std::vector<std::string>& numbers,
                                       const step_parser& parser = step_parser());
[[nodiscard]] build_result build_top_level(const step_tree& tree, const step_parser& parser = step_parser());

// Replaces parent_state's single outgoing edge by a no-op edge into child and
// routes the child's exits to return_state (default: the replaced edge's target).
[[nodiscard]] controller splice_substeps(const controller& parent, std::string_view parent_state,
                                         const controller& child, std::optional<std::string> return_state = {});

// Builds the top level, then splices each expanded step's children into that
// step's state, outermost layer first.
[[nodiscard]] controller build_layered(const step_tree& tree, const step_parser& parser = step_parser());

// Joins two scenario controllers under a branch proposition with a fresh
// initial state "q0": (¬prop, ε) into when_false, (prop, ε) into when_true.
// States are renamed "b1_..." and "b2_..."; the absorbing states become one.
[[nodiscard]] controller merge_branches(const controller& when_false, const controller& when_true,
                                       std::string_view prop);

} // namespace taskfsa
