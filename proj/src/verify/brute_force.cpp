#include "taskfsa/verify/check.hpp"

namespace taskfsa {

namespace {

constexpr std::size_t max_oracle_states = 64;

struct enumerator {
    enumerator(const product& prod, const ltl_formula& f, std::size_t sb, std::size_t lb)
        : p(prod), spec(f), stem_bound(sb), loop_bound(lb) {}

    const product& p;
    const ltl_formula& spec;
    std::size_t stem_bound;
    std::size_t loop_bound;
    std::vector<std::size_t> states{0};
    std::vector<std::size_t> edges;
    bool any_lasso = false;
    std::optional<counterexample> found;

    void visit() {
        const std::size_t n = edges.size();
        // Close a lasso wherever the current state repeats an earlier one.
        for (std::size_t s = 0; s < n && !found; ++s) {
            if (states[s] != states[n] || s > stem_bound || n - s > loop_bound) continue;
            any_lasso = true;
            std::vector<valuation> stem, loop;
            for (std::size_t i = 0; i < s; ++i) stem.push_back(p.edges[edges[i]].label);
            for (std::size_t i = s; i < n; ++i) loop.push_back(p.edges[edges[i]].label);
            if (!eval_lasso(spec, stem, loop)) {
                counterexample cex;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& e = p.edges[edges[i]];
                    const auto& st = p.states[e.from];
                    (i < s ? cex.stem : cex.loop).push_back({st.model_state, st.controller_state, e.action, e.label});
                }
                found = std::move(cex);
            }
        }
        if (found || n >= stem_bound + loop_bound) return;
        for (auto e : p.out[states.back()]) {
            edges.push_back(e);
            states.push_back(p.edges[e].to);
            visit();
            states.pop_back();
            edges.pop_back();
            if (found) return;
        }
    }
};

} // namespace

verdict brute_force_product(const product& p, const ltl_formula& spec, std::size_t stem_bound,
                            std::size_t loop_bound) {
    if (p.states.size() > max_oracle_states) {
        throw precondition_error("brute-force oracle limited to " + std::to_string(max_oracle_states) +
                                 " product states");
    }
    if (loop_bound == 0) throw bounds_too_small("loop bound must be positive");
    enumerator en(p, spec, stem_bound, loop_bound);
    en.visit();
    if (en.found) return {false, std::move(en.found)};
    if (!en.any_lasso) throw bounds_too_small("no lasso fits within the given bounds");
    return {true, std::nullopt};
}

verdict brute_force_check(const model& m, const controller& c, const ltl_formula& spec, std::size_t stem_bound,
                          std::size_t loop_bound) {
    return brute_force_product(build_product(m, c), spec, stem_bound, loop_bound);
}

} // namespace taskfsa
