#pragma once

#include "taskfsa/verify/ltl.hpp"
#include "taskfsa/verify/product.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taskfsa {

struct trace_step {
    std::string model_state;
    std::string controller_state;
    action_set action;                 // emitted on the transition leaving this step
    std::set<std::string> label;       // label of that transition
    friend bool operator==(const trace_step&, const trace_step&) = default;
};

struct counterexample {
    std::vector<trace_step> stem;
    std::vector<trace_step> loop;      // last step returns to loop.front()

    // Raw first coordinates of stem then loop.
    [[nodiscard]] std::vector<std::string> projection() const;
    // Consecutive repeats collapsed and the lasso rotated to its shortest stem.
    [[nodiscard]] std::pair<std::vector<std::string>, std::vector<std::string>> compressed_projection() const;
    // "p0 → p1 → p3 → loop(p5)"
    [[nodiscard]] std::string projection_text() const;
    [[nodiscard]] std::vector<valuation> stem_word() const;
    [[nodiscard]] std::vector<valuation> loop_word() const;

    friend bool operator==(const counterexample&, const counterexample&) = default;
};

struct verdict {
    bool pass = true;
    std::optional<counterexample> cex;
    friend bool operator==(const verdict&, const verdict&) = default;
};

[[nodiscard]] verdict check(const model& m, const controller& c, const ltl_formula& spec,
                            const product_options& opts = {});
[[nodiscard]] verdict check_product(const product& p, const ltl_formula& spec,
                                    const product_options& opts = {});

// True iff stem+loop is a run of p (each step follows an edge with the recorded
// action and label, the loop closes) and the label word violates spec.
[[nodiscard]] bool counterexample_valid(const product& p, const counterexample& cex);
[[nodiscard]] bool counterexample_violates(const counterexample& cex, const ltl_formula& spec);

class bounds_too_small : public error {
public:
    using error::error;
};

// Independent oracle: enumerates every lasso of the product within the bounds
// and evaluates spec on its label word directly.
[[nodiscard]] verdict brute_force_check(const model& m, const controller& c, const ltl_formula& spec,
                                        std::size_t stem_bound, std::size_t loop_bound);
[[nodiscard]] verdict brute_force_product(const product& p, const ltl_formula& spec,
                                          std::size_t stem_bound, std::size_t loop_bound);

} // namespace taskfsa
