#pragma once

#include "taskfsa/verify/ltl.hpp"

#include <string>
#include <vector>

namespace taskfsa {

// Conjunction of literals.
struct literal_guard {
    std::vector<std::string> pos;
    std::vector<std::string> neg;

    [[nodiscard]] bool eval(const valuation& v) const;
    [[nodiscard]] formula as_formula() const;
    [[nodiscard]] std::string key() const;
    friend bool operator==(const literal_guard&, const literal_guard&) = default;
};

struct buchi_edge {
    std::size_t from;
    literal_guard guard;
    std::size_t to;
};

// State-based acceptance; the edge into a state reads the current letter.
struct buchi_automaton {
    std::size_t state_count = 0;
    std::vector<std::size_t> initial;
    std::vector<bool> accepting;
    std::vector<buchi_edge> edges;
    std::set<std::string> atoms;

    [[nodiscard]] std::vector<std::vector<std::size_t>> successors_by_edge() const;
};

// Tableau expansion, counter degeneralization, then bisimulation quotient and trimming.
[[nodiscard]] buchi_automaton to_buchi(const ltl_formula& f);

} // namespace taskfsa
