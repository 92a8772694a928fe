#pragma once

#include "taskfsa/glm/backend.hpp"
#include "taskfsa/io/documents.hpp"
#include "taskfsa/refine/session.hpp"
#include "taskfsa/verify/buchi.hpp"
#include "taskfsa/verify/check.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace taskfsa::testing {

[[nodiscard]] std::string fixture_path(const std::string& relative);
[[nodiscard]] model load_model(const std::string& name);
[[nodiscard]] std::string load_spec(const std::string& name);
[[nodiscard]] transcript load_transcript(const std::string& name);
[[nodiscard]] glm_client replay_client(const std::string& name);

// Hand-transcribed controller with its alias table already applied.
struct expected_controller {
    std::string name;
    std::map<std::string, std::string> aliases;
    controller ctrl;
};
[[nodiscard]] expected_controller load_expected(const std::string& name);

// Empty when built is isomorphic to the expected controller, else the reason.
[[nodiscard]] std::optional<std::string> mismatch(const controller& built, const std::string& expected_name);

// Replayed refinement sessions: initial, then each refinement in order.
// crossroad: initial, auto-refined, pruned. crossroad_light and wifi: initial, two manual steps.
[[nodiscard]] std::vector<refinement_session> crossroad_history();
[[nodiscard]] std::vector<refinement_session> crossroad_light_history();
[[nodiscard]] std::vector<refinement_session> wifi_history();

// Builds the controllers that the expected fixtures describe, from replayed transcripts.
[[nodiscard]] controller built_for(const std::string& expected_name);
[[nodiscard]] const std::vector<std::string>& expected_names();

// Grammar check for the DOT subset: strict/graph/digraph header, node, edge,
// attribute and assignment statements, quoted or bare IDs. Returns problems found.
[[nodiscard]] std::vector<std::string> dot_problems(std::string_view text);

// Reference evaluator: truth of f on stem·loop^ω by direct fixpoint over positions.
[[nodiscard]] bool oracle_holds(const ltl_formula& f, const std::vector<valuation>& stem,
                                const std::vector<valuation>& loop);

// Reference acceptance check of stem·loop^ω by a Büchi automaton.
[[nodiscard]] bool oracle_accepts(const buchi_automaton& a, const std::vector<valuation>& stem,
                                  const std::vector<valuation>& loop);

// Random instances for differential tests.
using rng = std::mt19937_64;
[[nodiscard]] ltl_formula random_ltl(rng& r, const std::vector<std::string>& atoms, std::size_t max_nodes);
[[nodiscard]] formula random_formula(rng& r, const std::vector<std::string>& atoms, std::size_t depth);
[[nodiscard]] valuation random_valuation(rng& r, const std::vector<std::string>& atoms);
[[nodiscard]] model random_model(rng& r, std::size_t max_states, const std::vector<std::string>& actions,
                                 const std::vector<std::string>& labels);
[[nodiscard]] controller random_controller(rng& r, std::size_t max_states, const std::vector<std::string>& props,
                                           const std::vector<std::string>& actions);

// Model, controller and specification for the check/oracle agreement tests:
// model up to 6 states, controller up to 6 states, specification up to 6 nodes.
struct check_instance {
    model mdl;
    controller ctrl;
    ltl_formula spec;
};
[[nodiscard]] check_instance random_check_instance(rng& r);

// Lasso bounds for the brute-force oracle on an instance: the product size
// capped at cap, raised to cover a counterexample when one is given.
[[nodiscard]] std::pair<std::size_t, std::size_t> oracle_bounds(const product& p, const verdict& v, std::size_t cap);

} // namespace taskfsa::testing
